#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hforge/core/fitness.hpp"

namespace hforge::search {

/// Fronts of index lists; front 0 is the non-dominated set. Indices within a
/// front are ascending.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const FitnessVector> points);

/// Crowding distance of each point within one front (boundary points get +inf).
std::vector<double> crowding_distance(std::span<const FitnessVector> front);

/// NSGA-II environmental selection: whole fronts in order, the last partial
/// front by descending crowding distance (ties to the lower index). Returns
/// the kept indices ordered by (front, -crowding, index).
std::vector<std::size_t> nsga2_select(std::span<const FitnessVector> points, std::size_t capacity);

/// Ranks all points by (front, -crowding, index); position 0 is preferred.
std::vector<std::size_t> nsga2_order(std::span<const FitnessVector> points);

/// Two-objective simplex lattice {(i/H, 1 - i/H)}, i = 0..H. Throws
/// ContractViolation unless m == 2 and H >= 1.
std::vector<std::vector<double>> moead_weights(int m, int h);

inline constexpr double kZeroWeight = 1e-6;

/// max_i w_i |f_i - z_i| with zero weights replaced by kZeroWeight.
double tchebycheff(const FitnessVector& f, std::span<const double> w, std::span<const double> z_star);

/// For each weight vector, the indices of the `t` nearest weight vectors by
/// Euclidean distance (itself first; ties to the lower index).
std::vector<std::vector<std::size_t>> weight_neighbors(const std::vector<std::vector<double>>& weights, std::size_t t);

/// Lowers z* componentwise to f. An empty z* is initialized from f.
void update_ideal(std::vector<double>& z_star, const FitnessVector& f);

struct Subproblem {
  std::vector<double> weight;
  std::vector<std::size_t> neighbors;
  /// Index into the caller's candidate store, or -1 when empty.
  std::ptrdiff_t incumbent = -1;
  std::optional<FitnessVector> incumbent_fitness;
};

/// Offers `offspring` (stored at `offspring_index`) to the neighbors of
/// subproblem `i`, in neighbor order. A neighbor is replaced iff the
/// offspring's Tchebycheff value is strictly smaller than its incumbent's (an
/// empty subproblem always accepts). Stops after `max_replacements`. Returns
/// the replaced subproblem indices.
std::vector<std::size_t> moead_update(std::vector<Subproblem>& subproblems, std::size_t i,
                                      const FitnessVector& offspring, std::ptrdiff_t offspring_index,
                                      std::span<const double> z_star, std::size_t max_replacements = 2);

}  // namespace hforge::search
