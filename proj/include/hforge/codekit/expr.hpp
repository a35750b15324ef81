#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hforge/codekit/eval_control.hpp"

namespace hforge::codekit {

enum class ExprOp : std::uint8_t {
  Const, Var,
  Neg, Abs, Sqrt, Log, Exp, Sin, Cos,
  Add, Sub, Mul, Div, Pow, Min, Max, Lt, Le, Gt, Ge,
  If,
};

struct ExprNode {
  ExprOp op = ExprOp::Const;
  double value = 0.0;
  std::int32_t slot = -1;
  std::array<std::int32_t, 3> kids{-1, -1, -1};
};

inline constexpr std::size_t kMaxExprDepth = 64;
inline constexpr std::size_t kMaxExprNodes = 10'000;
inline constexpr std::size_t kMaxExprTextBytes = 64 * 1024;

/// Arithmetic expression over a fixed, ordered set of variables. Nodes live in
/// one arena; children always precede their parent.
class Expr {
 public:
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t depth() const;
  std::span<const ExprNode> nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return root_; }

  /// Protected evaluation; `slot_values[i]` binds variables()[i]. The result is
  /// always finite for finite inputs.
  double evaluate(std::span<const double> slot_values, EvalControl* control = nullptr) const;

  /// Fully parenthesized text that reparses to the same tree.
  std::string to_string() const;

  bool structurally_equal(const Expr& other) const;

 private:
  friend class ExprBuilder;

  std::vector<ExprNode> nodes_;
  std::int32_t root_ = -1;
  std::vector<std::string> variables_;
};

/// Named sub-expressions that identifiers may refer to (inlined on use).
using ExprLocals = std::map<std::string, Expr, std::less<>>;

/// Precedence, low to high: comparisons < + - < * / < ^ (right-assoc) < unary.
/// Accepts `**` for `^`, `math.`/`np.` prefixes on function names, and
/// variadic min/max. Throws ParseError for unknown identifiers, unbalanced
/// parentheses, or size/depth limits.
Expr parse_expression(std::string_view text, std::vector<std::string> variables,
                      const ExprLocals* locals = nullptr);

/// Evaluates with named bindings. Throws EvalError on an unbound variable.
double eval_expression(const Expr& expr, const std::map<std::string, double>& bindings);

/// Applies one protected operator. Exposed for tests and alternate evaluators.
double protected_unary(ExprOp op, double a);
double protected_binary(ExprOp op, double a, double b);

}  // namespace hforge::codekit
