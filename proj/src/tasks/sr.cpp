#include "hforge/tasks/sr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "hforge/codekit/dsl_function.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/core/random.hpp"

namespace hforge::tasks {

namespace {

constexpr std::string_view kTemplate = R"(def growth(x, s):
    """Predicts the specific growth rate of a bacterial culture.

    Args:
        x: population density.
        s: substrate concentration.

    Return:
        The predicted growth rate.
    """
    return 0.5 * x
)";

}  // namespace

void SrDataset::validate() const {
  if (rows.size() < 10) throw ContractViolation("symbolic-regression datasets need at least 10 rows");
  for (const auto& r : rows) {
    if (r.inputs.size() != variable_names.size()) throw ContractViolation("row width mismatch");
    if (!std::isfinite(r.target)) throw ContractViolation("non-finite target");
    for (double v : r.inputs) {
      if (!std::isfinite(v)) throw ContractViolation("non-finite input");
    }
  }
}

SrDataset generate_growth_dataset(std::uint64_t seed, std::int64_t rows) {
  if (rows < 1) throw ContractViolation("row count must be >= 1");
  SrDataset ds;
  ds.variable_names = {"x", "s"};
  const auto law = codekit::parse_expression(kGrowthLaw, ds.variable_names);
  SplitMix64 rng(seed);
  for (std::int64_t i = 0; i < rows; ++i) {
    SrRow row;
    const double x = 0.5 + 9.5 * rng.uniform();
    const double s = 0.1 + 4.9 * rng.uniform();
    row.inputs = {x, s};
    row.target = law.evaluate(row.inputs);
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

namespace {

FitnessVector rmse(const codekit::Expr& expr, std::span<const std::size_t> column, const SrDataset& dataset,
                   codekit::EvalControl* control) {
  if (dataset.rows.empty()) throw ContractViolation("dataset has no rows");
  if (control) control->begin_instance();
  std::vector<double> slots(column.size());
  double sq = 0.0;
  for (const auto& row : dataset.rows) {
    for (std::size_t v = 0; v < column.size(); ++v) slots[v] = row.inputs[column[v]];
    const double r = expr.evaluate(slots, control) - row.target;
    sq += r * r;
  }
  const double value = std::sqrt(sq / static_cast<double>(dataset.rows.size()));
  return FitnessVector{std::isfinite(value) ? value : std::numeric_limits<double>::max()};
}

}  // namespace

FitnessVector sr_evaluate(const codekit::Expr& expr, const SrDataset& dataset, codekit::EvalControl* control) {
  std::vector<std::size_t> column;
  for (const auto& name : expr.variables()) {
    auto it = std::find(dataset.variable_names.begin(), dataset.variable_names.end(), name);
    if (it == dataset.variable_names.end()) throw ParseError("unknown variable '" + name + "'");
    column.push_back(static_cast<std::size_t>(it - dataset.variable_names.begin()));
  }
  return rmse(expr, column, dataset, control);
}

SrGrowthTask::SrGrowthTask(const TaskOptions& options)
    : Task(std::string(kId), kTemplate, TaskDefaults{2024, 64, 50.0}, options),
      dataset_(generate_growth_dataset(instance_seed(), instance_count())) {
  dataset_.validate();
}

std::string SrGrowthTask::problem_statement() const {
  return "Scientific discovery, bacterial growth: find the equation that predicts the specific "
         "growth rate of a bacterial culture from its population density x and the substrate "
         "concentration s. Candidates are scored by root-mean-square error on measured data.";
}

FitnessVector SrGrowthTask::evaluate(std::string_view code, codekit::EvalControl& control) const {
  const auto& tp = template_program();
  const auto fn = codekit::compile_function(code, tp.function_name, tp.params.size());
  // Parameters bind to dataset columns by position, whatever the candidate named them.
  std::vector<std::size_t> column(fn.params.size());
  for (std::size_t i = 0; i < column.size(); ++i) column[i] = i;
  return rmse(fn.body, column, dataset_, &control);
}

}  // namespace hforge::tasks
