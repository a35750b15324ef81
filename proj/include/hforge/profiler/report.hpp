#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hforge/core/events.hpp"

namespace hforge::profiler {

/// Parses events.jsonl. Throws ParseError naming the 1-based line number of
/// the first corrupt line.
std::vector<RunEvent> read_events(const std::filesystem::path& file);

/// One point per drawn sample. `best` holds the best-so-far value of each
/// objective (absent until a valid candidate appears); for one objective it
/// is the running minimum. The template seed, when logged, counts as the
/// starting best. `archive_size` is the size of the non-dominated set so far.
struct ConvergencePoint {
  std::int64_t sample_index = 0;
  std::vector<std::optional<double>> best;
  std::size_t archive_size = 0;
};

std::vector<ConvergencePoint> convergence(std::span<const RunEvent> events);

/// Columns: sample_index,best_fitness for one objective; with more,
/// sample_index,objective_1..objective_m,archive_size. Absent values are empty cells.
std::string convergence_csv(std::span<const ConvergencePoint> series);

/// Per sample index: mean and sample standard deviation of the first
/// objective's best-so-far over the runs where it is defined, and the count.
/// Columns: sample_index,mean,std,n.
std::string aggregate_csv(std::span<const std::vector<ConvergencePoint>> runs);

/// Summary of a finished log: reason, samples_used, generations, wall_time_s,
/// best (id, sample_index, fitness, code, idea), archive, and a histogram of
/// sampled outcome statuses. Throws ContractViolation("run incomplete")
/// without a RunEnd event.
nlohmann::json summarize(std::span<const RunEvent> events);

}  // namespace hforge::profiler
