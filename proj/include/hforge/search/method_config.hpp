#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace hforge::search {

enum class Method { RandomSampling, OnePlusOneEPS, SA, Tabu, ILS, VNS, EoH, FunSearch, MoEoH_NSGA2, MOEAD };

/// Config names: random_sampling, one_plus_one_eps, simulated_annealing,
/// tabu_search, iterated_local_search, vns, eoh, funsearch, moeoh_nsga2, moead.
std::string_view to_string(Method method);
/// Accepts config names and enum spellings, case-insensitively. Throws
/// ConfigError listing the valid names.
Method method_from_string(std::string_view name);
const std::vector<Method>& all_methods();
bool is_multi_objective(Method method);

struct MethodConfig {
  Method method = Method::EoH;
  int pop_size = 10;
  int num_islands = 10;
  int samples_per_prompt = 4;
  double sa_t0 = 1.0;
  double sa_alpha = 0.95;
  int sa_cool_every = 10;
  int tabu_len = 10;
  int ils_stall = 5;
  int vns_levels = 3;
  int moead_neighbors = 4;
  int funsearch_archive = 10;
  int num_samplers = 1;
  int num_evaluators = 1;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError naming the offending field (prefixed "method.").
  void validate() const;
};

nlohmann::json to_json(const MethodConfig& config);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
MethodConfig method_config_from_json(const nlohmann::json& j);

}  // namespace hforge::search
