#include "hforge/search/method_config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "hforge/core/errors.hpp"

namespace hforge::search {

namespace {

struct MethodName {
  Method method;
  std::string_view config;
  std::string_view alias;
};

constexpr std::array<MethodName, 10> kNames{{
    {Method::RandomSampling, "random_sampling", "randomsampling"},
    {Method::OnePlusOneEPS, "one_plus_one_eps", "oneplusoneeps"},
    {Method::SA, "simulated_annealing", "sa"},
    {Method::Tabu, "tabu_search", "tabu"},
    {Method::ILS, "iterated_local_search", "ils"},
    {Method::VNS, "vns", "vns"},
    {Method::EoH, "eoh", "eoh"},
    {Method::FunSearch, "funsearch", "funsearch"},
    {Method::MoEoH_NSGA2, "moeoh_nsga2", "moeohnsga2"},
    {Method::MOEAD, "moead", "moead"},
}};

std::string fold(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '_' || ch == '-' || ch == '(' || ch == ')' || ch == '+' || ch == '/') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& n : kNames) {
    if (n.method == method) return n.config;
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  const auto folded = fold(name);
  for (const auto& n : kNames) {
    if (name == n.config || folded == n.alias || folded == fold(n.config)) return n.method;
  }
  if (folded == "11eps") return Method::OnePlusOneEPS;
  std::string msg = "unknown method '" + std::string(name) + "' (valid:";
  for (const auto& n : kNames) msg += " " + std::string(n.config);
  throw ConfigError(msg + ")", "method.name");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> m;
    for (const auto& n : kNames) m.push_back(n.method);
    return m;
  }();
  return methods;
}

bool is_multi_objective(Method method) { return method == Method::MoEoH_NSGA2 || method == Method::MOEAD; }

void MethodConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(std::string(field) + " " + what, std::string("method.") + field);
  };
  require(pop_size >= 1, "pop_size", "must be >= 1");
  require(num_islands >= 1, "num_islands", "must be >= 1");
  require(samples_per_prompt >= 1, "samples_per_prompt", "must be >= 1");
  require(std::isfinite(sa_t0) && sa_t0 >= 0, "sa_t0", "must be >= 0");
  require(sa_alpha > 0 && sa_alpha < 1, "sa_alpha", "must be in (0, 1)");
  require(sa_cool_every >= 1, "sa_cool_every", "must be >= 1");
  require(tabu_len >= 1, "tabu_len", "must be >= 1");
  require(ils_stall >= 1, "ils_stall", "must be >= 1");
  require(vns_levels >= 1, "vns_levels", "must be >= 1");
  require(moead_neighbors >= 1, "moead_neighbors", "must be >= 1");
  require(funsearch_archive >= 2, "funsearch_archive", "must be >= 2");
  require(num_samplers >= 1, "num_samplers", "must be >= 1");
  require(num_evaluators >= 1, "num_evaluators", "must be >= 1");
}

nlohmann::json to_json(const MethodConfig& c) {
  return {{"name", std::string(to_string(c.method))},
          {"pop_size", c.pop_size},
          {"num_islands", c.num_islands},
          {"samples_per_prompt", c.samples_per_prompt},
          {"sa_t0", c.sa_t0},
          {"sa_alpha", c.sa_alpha},
          {"sa_cool_every", c.sa_cool_every},
          {"tabu_len", c.tabu_len},
          {"ils_stall", c.ils_stall},
          {"vns_levels", c.vns_levels},
          {"moead_neighbors", c.moead_neighbors},
          {"funsearch_archive", c.funsearch_archive},
          {"num_samplers", c.num_samplers},
          {"num_evaluators", c.num_evaluators},
          {"rng_seed", c.rng_seed}};
}

MethodConfig method_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("method section must be a table", "method");
  MethodConfig c;
  for (const auto& [key, value] : j.items()) {
    const std::string field = "method." + key;
    try {
      if (key == "name") c.method = method_from_string(value.get<std::string>());
      else if (key == "pop_size") c.pop_size = value.get<int>();
      else if (key == "num_islands") c.num_islands = value.get<int>();
      else if (key == "samples_per_prompt") c.samples_per_prompt = value.get<int>();
      else if (key == "sa_t0") c.sa_t0 = value.get<double>();
      else if (key == "sa_alpha") c.sa_alpha = value.get<double>();
      else if (key == "sa_cool_every") c.sa_cool_every = value.get<int>();
      else if (key == "tabu_len") c.tabu_len = value.get<int>();
      else if (key == "ils_stall") c.ils_stall = value.get<int>();
      else if (key == "vns_levels") c.vns_levels = value.get<int>();
      else if (key == "moead_neighbors") c.moead_neighbors = value.get<int>();
      else if (key == "funsearch_archive") c.funsearch_archive = value.get<int>();
      else if (key == "num_samplers") c.num_samplers = value.get<int>();
      else if (key == "num_evaluators") c.num_evaluators = value.get<int>();
      else if (key == "rng_seed") c.rng_seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown key '" + key + "'", field);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("wrong type for '" + key + "'", field);
    }
  }
  c.validate();
  return c;
}

}  // namespace hforge::search
