#include "hforge/core/fitness.hpp"

#include <algorithm>
#include <cmath>

#include "hforge/core/errors.hpp"

namespace hforge {

namespace {

void check_finite(const std::vector<double>& values) {
  if (values.empty()) throw ContractViolation("fitness vector must have at least one objective");
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractViolation("fitness values must be finite");
  }
}

}  // namespace

FitnessVector::FitnessVector(std::vector<double> values) : values_(std::move(values)) {
  check_finite(values_);
}

FitnessVector::FitnessVector(std::initializer_list<double> values) : values_(values) {
  check_finite(values_);
}

FitnessVector FitnessVector::with_objective(double value) const {
  std::vector<double> out = values_;
  out.push_back(value);
  return FitnessVector(std::move(out));
}

std::weak_ordering compare_scalar(const MaybeFitness& a, const MaybeFitness& b) {
  if ((a && a->size() != 1) || (b && b->size() != 1)) {
    throw ContractViolation("compare_scalar expects length-1 fitness vectors");
  }
  return compare_lexicographic(a, b);
}

std::weak_ordering compare_lexicographic(const MaybeFitness& a, const MaybeFitness& b) {
  if (!a && !b) return std::weak_ordering::equivalent;
  if (!a) return std::weak_ordering::greater;
  if (!b) return std::weak_ordering::less;
  if (a->size() != b->size()) throw ContractViolation("fitness length mismatch");
  for (std::size_t i = 0; i < a->size(); ++i) {
    if ((*a)[i] < (*b)[i]) return std::weak_ordering::less;
    if ((*a)[i] > (*b)[i]) return std::weak_ordering::greater;
  }
  return std::weak_ordering::equivalent;
}

bool dominates(const FitnessVector& a, const FitnessVector& b) {
  if (a.size() != b.size()) throw ContractViolation("dominates: fitness length mismatch");
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

}  // namespace hforge
