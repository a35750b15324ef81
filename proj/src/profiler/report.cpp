#include "hforge/profiler/report.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <map>

#include "hforge/core/errors.hpp"
#include "hforge/core/fitness.hpp"

namespace hforge::profiler {

std::vector<RunEvent> read_events(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  std::vector<RunEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": corrupt event: " + e.what());
    }
  }
  return events;
}

namespace {

std::optional<FitnessVector> fitness_of(const nlohmann::json& payload) {
  const auto it = payload.find("fitness");
  if (it == payload.end() || it->is_null()) return std::nullopt;
  return FitnessVector(it->get<std::vector<double>>());
}

// Non-dominated set of fitness vectors seen so far.
void offer(std::vector<FitnessVector>& archive, const FitnessVector& f) {
  for (const auto& a : archive) {
    if (a == f || dominates(a, f)) return;
  }
  std::erase_if(archive, [&](const FitnessVector& a) { return dominates(f, a); });
  archive.push_back(f);
}

std::string number(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

}  // namespace

std::vector<ConvergencePoint> convergence(std::span<const RunEvent> events) {
  std::vector<ConvergencePoint> out;
  std::vector<std::optional<double>> best;
  std::vector<FitnessVector> archive;
  auto absorb = [&](const FitnessVector& f) {
    if (best.size() < f.size()) best.resize(f.size());
    if (f.size() == 1) {
      if (!best[0] || f[0] < *best[0]) best[0] = f[0];
    } else {
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (!best[k] || f[k] < *best[k]) best[k] = f[k];
      }
    }
    offer(archive, f);
  };
  for (const auto& e : events) {
    if (e.kind != EventKind::EvalFinished) continue;
    const auto f = fitness_of(e.payload);
    if (f) absorb(*f);
    const auto idx = e.payload.at("sample_index").get<std::int64_t>();
    if (idx < 0) continue;  // template seed: baseline only
    ConvergencePoint p;
    p.sample_index = idx;
    p.best = best.empty() ? std::vector<std::optional<double>>{std::nullopt} : best;
    p.archive_size = archive.size();
    out.push_back(std::move(p));
  }
  return out;
}

std::string convergence_csv(std::span<const ConvergencePoint> series) {
  std::size_t m = 1;
  for (const auto& p : series) m = std::max(m, p.best.size());
  std::string out = "sample_index";
  if (m == 1) {
    out += ",best_fitness\n";
  } else {
    for (std::size_t k = 0; k < m; ++k) out += ",objective_" + std::to_string(k + 1);
    out += ",archive_size\n";
  }
  for (const auto& p : series) {
    out += std::to_string(p.sample_index);
    for (std::size_t k = 0; k < m; ++k) {
      out += ",";
      if (k < p.best.size() && p.best[k]) out += number(*p.best[k]);
    }
    if (m > 1) out += "," + std::to_string(p.archive_size);
    out += "\n";
  }
  return out;
}

std::string aggregate_csv(std::span<const std::vector<ConvergencePoint>> runs) {
  std::map<std::int64_t, std::vector<double>> by_index;
  for (const auto& run : runs) {
    for (const auto& p : run) {
      auto& slot = by_index[p.sample_index];
      if (!p.best.empty() && p.best[0]) slot.push_back(*p.best[0]);
    }
  }
  std::string out = "sample_index,mean,std,n\n";
  for (const auto& [idx, values] : by_index) {
    out += std::to_string(idx) + ",";
    if (values.empty()) {
      out += ",,0\n";
      continue;
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    out += number(mean) + "," + number(sd) + "," + std::to_string(values.size()) + "\n";
  }
  return out;
}

nlohmann::json summarize(std::span<const RunEvent> events) {
  const RunEvent* end = nullptr;
  std::map<std::int64_t, const RunEvent*> evaluated;
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& s : {"valid", "timeout", "runtime_error", "parse_error", "sample_error"}) histogram[s] = 0;
  for (const auto& e : events) {
    if (e.kind == EventKind::RunEnd) end = &e;
    if (e.kind != EventKind::EvalFinished) continue;
    evaluated[e.payload.at("candidate_id").get<std::int64_t>()] = &e;
    if (e.payload.at("sample_index").get<std::int64_t>() >= 0) {
      auto& slot = histogram[e.payload.at("status").get<std::string>()];
      slot = slot.get<int>() + 1;
    }
  }
  if (!end) throw ContractViolation("run incomplete: no RunEnd event");
  const auto& p = end->payload;
  auto brief = [&](const nlohmann::json& id) -> nlohmann::json {
    if (id.is_null()) return nullptr;
    const auto it = evaluated.find(id.get<std::int64_t>());
    if (it == evaluated.end()) return nullptr;
    const auto& c = it->second->payload;
    return {{"candidate_id", c["candidate_id"]}, {"sample_index", c["sample_index"]}, {"fitness", c["fitness"]},
            {"code", c["code"]}, {"idea", c["idea"]}};
  };
  nlohmann::json archive = nlohmann::json::array();
  for (const auto& id : p.value("archive_ids", nlohmann::json::array())) archive.push_back(brief(id));
  return {{"reason", p.at("reason")},
          {"samples_used", p.at("samples_used")},
          {"generations", p.value("generations", 0)},
          {"wall_time_s", p.value("wall_time_s", 0.0)},
          {"best", brief(p.value("best_id", nlohmann::json(nullptr)))},
          {"archive", archive},
          {"status_histogram", histogram},
          {"method_state", p.value("method_state", nlohmann::json::object())}};
}

}  // namespace hforge::profiler
