#include "hforge/codekit/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

#include "hforge/core/errors.hpp"

namespace hforge::codekit {

// ---------------------------------------------------------------------------
// Protected operators

namespace {

constexpr double kDivEpsilon = 1e-12;
constexpr double kLogEpsilon = 1e-12;
constexpr double kExpCap = 700.0;

double finite_or_clamped(double v) {
  if (std::isnan(v)) return 0.0;
  if (std::isinf(v)) return v > 0 ? DBL_MAX : -DBL_MAX;
  return v;
}

}  // namespace

double protected_unary(ExprOp op, double a) {
  double r = 0.0;
  switch (op) {
    case ExprOp::Neg: r = -a; break;
    case ExprOp::Abs: r = std::fabs(a); break;
    case ExprOp::Sqrt: r = std::sqrt(std::fabs(a)); break;
    case ExprOp::Log: r = std::log(std::fabs(a) + kLogEpsilon); break;
    case ExprOp::Exp: r = std::exp(std::min(a, kExpCap)); break;
    case ExprOp::Sin: r = std::sin(a); break;
    case ExprOp::Cos: r = std::cos(a); break;
    default: throw ContractViolation("not a unary operator");
  }
  return finite_or_clamped(r);
}

double protected_binary(ExprOp op, double a, double b) {
  double r = 0.0;
  switch (op) {
    case ExprOp::Add: r = a + b; break;
    case ExprOp::Sub: r = a - b; break;
    case ExprOp::Mul: r = a * b; break;
    case ExprOp::Div: r = std::fabs(b) < kDivEpsilon ? 1.0 : a / b; break;
    case ExprOp::Pow:
      r = (a < 0 && std::trunc(b) != b) ? std::pow(-a, b) : std::pow(a, b);
      break;
    case ExprOp::Min: r = std::min(a, b); break;
    case ExprOp::Max: r = std::max(a, b); break;
    case ExprOp::Lt: r = a < b ? 1.0 : 0.0; break;
    case ExprOp::Le: r = a <= b ? 1.0 : 0.0; break;
    case ExprOp::Gt: r = a > b ? 1.0 : 0.0; break;
    case ExprOp::Ge: r = a >= b ? 1.0 : 0.0; break;
    default: throw ContractViolation("not a binary operator");
  }
  return finite_or_clamped(r);
}

// ---------------------------------------------------------------------------
// Tree building

class ExprBuilder {
 public:
  explicit ExprBuilder(std::vector<std::string> variables) {
    expr_.variables_ = std::move(variables);
  }

  std::int32_t add(ExprNode node) {
    if (expr_.nodes_.size() >= kMaxExprNodes) {
      throw ParseError("expression exceeds " + std::to_string(kMaxExprNodes) + " nodes");
    }
    expr_.nodes_.push_back(node);
    return static_cast<std::int32_t>(expr_.nodes_.size() - 1);
  }

  std::int32_t constant(double v) { return add(ExprNode{ExprOp::Const, v, -1, {-1, -1, -1}}); }
  std::int32_t variable(std::int32_t slot) {
    return add(ExprNode{ExprOp::Var, 0.0, slot, {-1, -1, -1}});
  }
  std::int32_t op(ExprOp o, std::int32_t a, std::int32_t b = -1, std::int32_t c = -1) {
    return add(ExprNode{o, 0.0, -1, {a, b, c}});
  }

  // Copies another expression over the same variable list; returns its root.
  std::int32_t splice(const Expr& other) {
    const auto base = static_cast<std::int32_t>(expr_.nodes_.size());
    if (expr_.nodes_.size() + other.node_count() > kMaxExprNodes) {
      throw ParseError("expression exceeds " + std::to_string(kMaxExprNodes) + " nodes");
    }
    for (auto node : other.nodes()) {
      for (auto& k : node.kids) {
        if (k >= 0) k += base;
      }
      expr_.nodes_.push_back(node);
    }
    return base + other.root();
  }

  Expr finish(std::int32_t root) {
    expr_.root_ = root;
    if (expr_.depth() > kMaxExprDepth) {
      throw ParseError("expression nesting exceeds depth " + std::to_string(kMaxExprDepth));
    }
    return std::move(expr_);
  }

  const std::vector<std::string>& variables() const { return expr_.variables_; }

 private:
  Expr expr_;
};

// ---------------------------------------------------------------------------
// Lexer + Pratt parser

namespace {

enum class Tok { Number, Ident, Op, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    ++pos_;
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '+': case '-': case '/': case '^':
        t.kind = Tok::Op;
        t.text = std::string(1, c);
        return t;
      case '*':
        t.kind = Tok::Op;
        if (pos_ < text_.size() && text_[pos_] == '*') {
          ++pos_;
          t.text = "^";
        } else {
          t.text = "*";
        }
        return t;
      case '<': case '>':
        t.kind = Tok::Op;
        t.text = std::string(1, c);
        if (pos_ < text_.size() && text_[pos_] == '=') {
          ++pos_;
          t.text += '=';
        }
        return t;
      default: break;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                     std::to_string(t.pos));
  }

 private:
  Token number() {
    Token t;
    t.kind = Tok::Number;
    t.pos = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
      if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
        end = e;
        digits();
      }
    }
    t.text = std::string(text_.substr(pos_, end - pos_));
    t.number = std::strtod(t.text.c_str(), nullptr);
    if (!std::isfinite(t.number)) throw ParseError("numeric literal out of range: " + t.text);
    pos_ = end;
    return t;
  }

  Token identifier() {
    Token t;
    t.kind = Tok::Ident;
    t.pos = pos_;
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_' || text_[end] == '.')) {
      ++end;
    }
    std::string_view name = text_.substr(pos_, end - pos_);
    for (std::string_view prefix : {"math.", "numpy.", "np."}) {
      if (name.substr(0, prefix.size()) == prefix) {
        name.remove_prefix(prefix.size());
        break;
      }
    }
    t.text = std::string(name);
    pos_ = end;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct BinaryInfo {
  ExprOp op;
  int left_bp;
  int right_bp;
};

std::optional<BinaryInfo> binary_info(const Token& t) {
  if (t.kind != Tok::Op) return std::nullopt;
  const auto& s = t.text;
  if (s == "<") return BinaryInfo{ExprOp::Lt, 1, 2};
  if (s == "<=") return BinaryInfo{ExprOp::Le, 1, 2};
  if (s == ">") return BinaryInfo{ExprOp::Gt, 1, 2};
  if (s == ">=") return BinaryInfo{ExprOp::Ge, 1, 2};
  if (s == "+") return BinaryInfo{ExprOp::Add, 3, 4};
  if (s == "-") return BinaryInfo{ExprOp::Sub, 3, 4};
  if (s == "*") return BinaryInfo{ExprOp::Mul, 5, 6};
  if (s == "/") return BinaryInfo{ExprOp::Div, 5, 6};
  if (s == "^") return BinaryInfo{ExprOp::Pow, 7, 7};
  return std::nullopt;
}

constexpr int kUnaryBp = 9;
constexpr int kMaxRecursion = 256;

std::optional<ExprOp> unary_function(std::string_view name) {
  if (name == "neg") return ExprOp::Neg;
  if (name == "abs" || name == "fabs") return ExprOp::Abs;
  if (name == "sqrt") return ExprOp::Sqrt;
  if (name == "log") return ExprOp::Log;
  if (name == "exp") return ExprOp::Exp;
  if (name == "sin") return ExprOp::Sin;
  if (name == "cos") return ExprOp::Cos;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, std::vector<std::string> variables, const ExprLocals* locals)
      : lexer_(text), builder_(std::move(variables)), locals_(locals) {
    advance();
  }

  Expr parse() {
    auto root = expression(0);
    if (current_.kind != Tok::End) fail("unexpected trailing input");
    return builder_.finish(root);
  }

 private:
  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(current_.pos));
  }

  void expect(Tok kind, const char* what) {
    if (current_.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  std::int32_t expression(int min_bp) {
    if (++recursion_ > kMaxRecursion) fail("expression nested too deeply");
    auto lhs = prefix();
    while (auto info = binary_info(current_)) {
      if (info->left_bp < min_bp) break;
      advance();
      auto rhs = expression(info->right_bp);
      lhs = builder_.op(info->op, lhs, rhs);
    }
    --recursion_;
    return lhs;
  }

  std::int32_t prefix() {
    Token t = current_;
    switch (t.kind) {
      case Tok::Number:
        advance();
        return builder_.constant(t.number);
      case Tok::Op:
        if (t.text == "-" || t.text == "+") {
          advance();
          auto operand = expression(kUnaryBp);
          return t.text == "-" ? builder_.op(ExprOp::Neg, operand) : operand;
        }
        fail("unexpected operator '" + t.text + "'");
      case Tok::LParen: {
        advance();
        auto inner = expression(0);
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        advance();
        if (current_.kind == Tok::LParen) return call(t);
        return identifier(t);
      case Tok::RParen: fail("unbalanced ')'");
      case Tok::Comma: fail("unexpected ','");
      case Tok::End: fail("unexpected end of expression");
    }
    fail("unexpected token");
  }

  std::int32_t identifier(const Token& t) {
    const auto& vars = builder_.variables();
    if (auto it = std::find(vars.begin(), vars.end(), t.text); it != vars.end()) {
      return builder_.variable(static_cast<std::int32_t>(it - vars.begin()));
    }
    if (locals_) {
      if (auto it = locals_->find(t.text); it != locals_->end()) return builder_.splice(it->second);
    }
    if (t.text == "pi") return builder_.constant(3.141592653589793);
    if (t.text == "e") return builder_.constant(2.718281828459045);
    throw ParseError("unknown identifier '" + t.text + "' at offset " + std::to_string(t.pos));
  }

  std::int32_t call(const Token& name) {
    advance();  // '('
    std::vector<std::int32_t> args;
    if (current_.kind != Tok::RParen) {
      args.push_back(expression(0));
      while (current_.kind == Tok::Comma) {
        advance();
        args.push_back(expression(0));
      }
    }
    expect(Tok::RParen, "')' closing call");
    auto arity = [&](std::size_t n) {
      if (args.size() != n) {
        throw ParseError(name.text + "() takes " + std::to_string(n) + " argument(s), got " +
                         std::to_string(args.size()));
      }
    };
    if (auto op = unary_function(name.text)) {
      arity(1);
      return builder_.op(*op, args[0]);
    }
    if (name.text == "min" || name.text == "max") {
      if (args.size() < 2) throw ParseError(name.text + "() takes at least 2 arguments");
      const auto op = name.text == "min" ? ExprOp::Min : ExprOp::Max;
      auto acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = builder_.op(op, acc, args[i]);
      return acc;
    }
    if (name.text == "pow") {
      arity(2);
      return builder_.op(ExprOp::Pow, args[0], args[1]);
    }
    if (name.text == "if") {
      arity(3);
      return builder_.op(ExprOp::If, args[0], args[1], args[2]);
    }
    throw ParseError("unknown function '" + name.text + "' at offset " + std::to_string(name.pos));
  }

  Lexer lexer_;
  ExprBuilder builder_;
  const ExprLocals* locals_;
  Token current_;
  int recursion_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation / printing helpers

struct Evaluator {
  std::span<const ExprNode> nodes;
  std::span<const double> slots;
  EvalControl* control;

  double eval(std::int32_t i) const {
    if (control) control->visit();
    const auto& n = nodes[static_cast<std::size_t>(i)];
    switch (n.op) {
      case ExprOp::Const: return n.value;
      case ExprOp::Var: return slots[static_cast<std::size_t>(n.slot)];
      case ExprOp::Neg: case ExprOp::Abs: case ExprOp::Sqrt: case ExprOp::Log:
      case ExprOp::Exp: case ExprOp::Sin: case ExprOp::Cos:
        return protected_unary(n.op, eval(n.kids[0]));
      case ExprOp::If:
        return eval(n.kids[0]) != 0.0 ? eval(n.kids[1]) : eval(n.kids[2]);
      default:
        return protected_binary(n.op, eval(n.kids[0]), eval(n.kids[1]));
    }
  }
};

const char* op_symbol(ExprOp op) {
  switch (op) {
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    case ExprOp::Pow: return "^";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    default: return nullptr;
  }
}

const char* function_name(ExprOp op) {
  switch (op) {
    case ExprOp::Abs: return "abs";
    case ExprOp::Sqrt: return "sqrt";
    case ExprOp::Log: return "log";
    case ExprOp::Exp: return "exp";
    case ExprOp::Sin: return "sin";
    case ExprOp::Cos: return "cos";
    case ExprOp::Min: return "min";
    case ExprOp::Max: return "max";
    case ExprOp::If: return "if";
    default: return nullptr;
  }
}

void print(const Expr& e, std::int32_t i, std::string& out) {
  const auto& n = e.nodes()[static_cast<std::size_t>(i)];
  switch (n.op) {
    case ExprOp::Const: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case ExprOp::Var:
      out += e.variables()[static_cast<std::size_t>(n.slot)];
      return;
    case ExprOp::Neg:
      out += "(-";
      print(e, n.kids[0], out);
      out += ")";
      return;
    default: break;
  }
  if (const char* sym = op_symbol(n.op)) {
    out += "(";
    print(e, n.kids[0], out);
    out += " ";
    out += sym;
    out += " ";
    print(e, n.kids[1], out);
    out += ")";
    return;
  }
  out += function_name(n.op);
  out += "(";
  for (std::size_t k = 0; k < 3 && n.kids[k] >= 0; ++k) {
    if (k) out += ", ";
    print(e, n.kids[k], out);
  }
  out += ")";
}

bool same_tree(const Expr& a, std::int32_t i, const Expr& b, std::int32_t j) {
  const auto& x = a.nodes()[static_cast<std::size_t>(i)];
  const auto& y = b.nodes()[static_cast<std::size_t>(j)];
  if (x.op != y.op) return false;
  if (x.op == ExprOp::Const) return x.value == y.value;
  if (x.op == ExprOp::Var) {
    return a.variables()[static_cast<std::size_t>(x.slot)] == b.variables()[static_cast<std::size_t>(y.slot)];
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if ((x.kids[k] < 0) != (y.kids[k] < 0)) return false;
    if (x.kids[k] >= 0 && !same_tree(a, x.kids[k], b, y.kids[k])) return false;
  }
  return true;
}

}  // namespace

std::size_t Expr::depth() const {
  if (root_ < 0) return 0;
  // Children precede parents in the arena, so one forward pass suffices.
  std::vector<std::size_t> d(nodes_.size(), 1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (auto k : nodes_[i].kids) {
      if (k >= 0) d[i] = std::max(d[i], d[static_cast<std::size_t>(k)] + 1);
    }
  }
  return d[static_cast<std::size_t>(root_)];
}

double Expr::evaluate(std::span<const double> slot_values, EvalControl* control) const {
  if (root_ < 0) throw EvalError("empty expression");
  if (slot_values.size() < variables_.size()) throw EvalError("not all variables are bound");
  return Evaluator{nodes_, slot_values, control}.eval(root_);
}

std::string Expr::to_string() const {
  std::string out;
  if (root_ >= 0) print(*this, root_, out);
  return out;
}

bool Expr::structurally_equal(const Expr& other) const {
  if (root_ < 0 || other.root_ < 0) return root_ == other.root_;
  return same_tree(*this, root_, other, other.root_);
}

Expr parse_expression(std::string_view text, std::vector<std::string> variables, const ExprLocals* locals) {
  if (text.size() > kMaxExprTextBytes) throw ParseError("expression text exceeds 64 KiB");
  return Parser(text, std::move(variables), locals).parse();
}

double eval_expression(const Expr& expr, const std::map<std::string, double>& bindings) {
  std::vector<double> slots;
  slots.reserve(expr.variables().size());
  for (const auto& name : expr.variables()) {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw EvalError("unbound variable '" + name + "'");
    slots.push_back(it->second);
  }
  return expr.evaluate(slots);
}

}  // namespace hforge::codekit
