#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hforge/codekit/expr.hpp"
#include "hforge/tasks/task.hpp"

namespace hforge::tasks {

struct SrRow {
  std::vector<double> inputs;  // aligned with SrDataset::variable_names
  double target = 0.0;
};

struct SrDataset {
  std::vector<std::string> variable_names;
  std::vector<SrRow> rows;

  /// Task datasets need at least 10 finite rows.
  void validate() const;
};

/// Ground-truth law of the growth task: logistic growth in density `x`
/// (rate 0.8, carrying capacity 10) limited by a Monod term in substrate `s`
/// (half-saturation 2). Kept out of prompts.
inline constexpr std::string_view kGrowthLaw = "0.8 * x * (1 - x / 10) * s / (s + 2)";

/// Rows with x uniform in [0.5, 10) and s uniform in [0.1, 5), targets from
/// kGrowthLaw without noise.
SrDataset generate_growth_dataset(std::uint64_t seed, std::int64_t rows = 64);

/// Root-mean-square error of `expr` over the dataset. Expression variables are
/// matched to dataset columns by name; an unknown name is a ParseError.
FitnessVector sr_evaluate(const codekit::Expr& expr, const SrDataset& dataset,
                          codekit::EvalControl* control = nullptr);

class SrGrowthTask final : public Task {
 public:
  static constexpr std::string_view kId = "sr_growth";
  explicit SrGrowthTask(const TaskOptions& options = {});

  FitnessVector evaluate(std::string_view code, codekit::EvalControl& control) const override;
  const SrDataset& dataset() const noexcept { return dataset_; }

 protected:
  std::string problem_statement() const override;

 private:
  SrDataset dataset_;
};

}  // namespace hforge::tasks
