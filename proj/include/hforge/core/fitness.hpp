#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace hforge {

/// One value per objective, all minimized. Values are always finite.
class FitnessVector {
 public:
  explicit FitnessVector(std::vector<double> values);
  FitnessVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& to_vector() const noexcept { return values_; }

  /// Returns a copy with `value` appended as an extra objective.
  FitnessVector with_objective(double value) const;

  friend bool operator==(const FitnessVector&, const FitnessVector&) = default;

 private:
  std::vector<double> values_;
};

using MaybeFitness = std::optional<FitnessVector>;

/// Scalar (m = 1) comparison. `less` means `a` is better. Absent ranks worst.
/// Throws ContractViolation for vectors of length != 1.
std::weak_ordering compare_scalar(const MaybeFitness& a, const MaybeFitness& b);

/// Lexicographic comparison for vectors of equal length; absent ranks worst.
std::weak_ordering compare_lexicographic(const MaybeFitness& a, const MaybeFitness& b);

/// Pareto dominance under minimization.
bool dominates(const FitnessVector& a, const FitnessVector& b);

}  // namespace hforge
