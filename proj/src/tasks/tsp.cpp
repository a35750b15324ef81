#include "hforge/tasks/tsp.hpp"

#include <cmath>

#include "hforge/codekit/dsl_function.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/core/random.hpp"

namespace hforge::tasks {

namespace {

constexpr std::string_view kTemplate = R"(def select_next(dist, dist_start, mean_dist, remaining):
    """Scores one unvisited city as the next stop of a tour under construction.
    The tour starts at city 0, repeatedly moves to the highest-scoring unvisited
    city, and finally returns to city 0. Shorter closed tours are better.

    Args:
        dist: distance from the current city to the candidate city.
        dist_start: distance from the candidate city back to the start city.
        mean_dist: mean distance from the candidate city to the other unvisited cities (0 if none).
        remaining: number of unvisited cities, including the candidate.

    Return:
        A real-valued priority; higher means visited sooner.
    """
    return -dist
)";

}  // namespace

TspInstance::TspInstance(std::vector<std::array<double, 2>> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) throw ContractViolation("TSP instance needs at least 3 cities");
  const auto n = coords_.size();
  dist_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(coords_[i][0] - coords_[j][0], coords_[i][1] - coords_[j][1]);
      dist_[i * n + j] = d;
      dist_[j * n + i] = d;
    }
  }
}

std::vector<std::size_t> construct_tour(const TspInstance& instance, const NextNodeFn& select_next,
                                        codekit::EvalControl* control) {
  const auto n = instance.size();
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> tour{0};
  visited[0] = true;
  std::size_t current = 0;
  for (std::size_t step = 1; step < n; ++step) {
    const double remaining = static_cast<double>(n - step);
    std::ptrdiff_t best = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (visited[j]) continue;
      NextNodeFeatures f;
      f.dist = instance.distance(current, j);
      f.dist_start = instance.distance(j, 0);
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (!visited[k] && k != j) sum += instance.distance(j, k);
      }
      f.mean_dist = remaining > 1 ? sum / (remaining - 1) : 0.0;
      f.remaining = remaining;
      const double score = select_next(f);
      if (best < 0 || score > best_score) {
        best = static_cast<std::ptrdiff_t>(j);
        best_score = score;
      }
    }
    current = static_cast<std::size_t>(best);
    visited[current] = true;
    tour.push_back(current);
    if (control) control->check_deadline();
  }
  return tour;
}

double tour_length(const TspInstance& instance, std::span<const std::size_t> tour) {
  const auto n = instance.size();
  if (tour.size() != n) throw ContractViolation("tour must visit every city exactly once");
  std::vector<bool> seen(n, false);
  for (auto c : tour) {
    if (c >= n || seen[c]) throw ContractViolation("tour must visit every city exactly once");
    seen[c] = true;
  }
  double length = 0.0;
  for (std::size_t i = 0; i < n; ++i) length += instance.distance(tour[i], tour[(i + 1) % n]);
  return length;
}

FitnessVector tsp_evaluate(const NextNodeFn& select_next, std::span<const TspInstance> instances,
                           codekit::EvalControl* control) {
  if (instances.empty()) throw ContractViolation("TSP evaluation needs at least one instance");
  double sum = 0.0;
  for (const auto& inst : instances) {
    if (control) control->begin_instance();
    const auto tour = construct_tour(inst, select_next, control);
    sum += tour_length(inst, tour);
  }
  return FitnessVector{sum / static_cast<double>(instances.size())};
}

std::vector<TspInstance> generate_tsp_instances(std::uint64_t seed, std::int64_t count, int cities) {
  if (count < 1) throw ContractViolation("instance count must be >= 1");
  SplitMix64 rng(seed);
  std::vector<TspInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    std::vector<std::array<double, 2>> coords(static_cast<std::size_t>(cities));
    for (auto& c : coords) {
      c[0] = rng.uniform();
      c[1] = rng.uniform();
    }
    out.emplace_back(std::move(coords));
  }
  return out;
}

TspTask::TspTask(const TaskOptions& options)
    : Task(std::string(kId), kTemplate, TaskDefaults{2024, 8, 50.0}, options),
      instances_(generate_tsp_instances(instance_seed(), instance_count())) {}

std::string TspTask::problem_statement() const {
  return "Traveling salesman, constructive heuristic: 50 cities lie in the unit square. A tour is "
         "built greedily from city 0 by repeatedly visiting the unvisited city with the highest "
         "score. Design the scoring function so that the closed tour is as short as possible.";
}

FitnessVector TspTask::evaluate(std::string_view code, codekit::EvalControl& control) const {
  const auto& tp = template_program();
  const auto fn = codekit::compile_function(code, tp.function_name, tp.params.size());
  auto select = [&](const NextNodeFeatures& f) {
    const double args[] = {f.dist, f.dist_start, f.mean_dist, f.remaining};
    return fn.body.evaluate(args, &control);
  };
  return tsp_evaluate(select, instances_, &control);
}

}  // namespace hforge::tasks
