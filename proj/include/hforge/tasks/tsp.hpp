#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hforge/tasks/task.hpp"

namespace hforge::tasks {

class TspInstance {
 public:
  /// Throws ContractViolation for fewer than 3 points.
  explicit TspInstance(std::vector<std::array<double, 2>> coords);

  std::size_t size() const noexcept { return coords_.size(); }
  const std::vector<std::array<double, 2>>& coords() const noexcept { return coords_; }
  double distance(std::size_t i, std::size_t j) const noexcept { return dist_[i * coords_.size() + j]; }

 private:
  std::vector<std::array<double, 2>> coords_;
  std::vector<double> dist_;
};

/// What the candidate sees about one unvisited city.
struct NextNodeFeatures {
  double dist = 0;            // current -> candidate
  double dist_start = 0;      // candidate -> start city
  double mean_dist = 0;       // mean candidate -> other unvisited cities (0 if none)
  double remaining = 0;       // unvisited count including the candidate
};

using NextNodeFn = std::function<double(const NextNodeFeatures&)>;

/// Greedy construction from city 0: always visit the highest-scoring unvisited
/// city (ties to the lowest index). Returns the visit order.
std::vector<std::size_t> construct_tour(const TspInstance& instance, const NextNodeFn& select_next,
                                        codekit::EvalControl* control = nullptr);

/// Closed tour length. Throws ContractViolation unless `tour` is a permutation.
double tour_length(const TspInstance& instance, std::span<const std::size_t> tour);

/// Mean closed-tour length over instances.
FitnessVector tsp_evaluate(const NextNodeFn& select_next, std::span<const TspInstance> instances,
                           codekit::EvalControl* control = nullptr);

std::vector<TspInstance> generate_tsp_instances(std::uint64_t seed, std::int64_t count, int cities = 50);

class TspTask final : public Task {
 public:
  static constexpr std::string_view kId = "tsp_construct";
  explicit TspTask(const TaskOptions& options = {});

  FitnessVector evaluate(std::string_view code, codekit::EvalControl& control) const override;
  std::span<const TspInstance> instances() const noexcept { return instances_; }

 protected:
  std::string problem_statement() const override;

 private:
  std::vector<TspInstance> instances_;
};

}  // namespace hforge::tasks
