#include <doctest.h>

#include <cmath>
#include <string>

#include "hforge/codekit/expr.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/core/random.hpp"
#include "oracles.hpp"

using namespace hforge;
using namespace hforge::codekit;
using hforge::testing::random_expr;

namespace {

double ev(const std::string& text, std::map<std::string, double> b = {}) {
  std::vector<std::string> vars;
  for (const auto& [k, v] : b) vars.push_back(k);
  return eval_expression(parse_expression(text, vars), b);
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(ev("1 + 2 * 3") == 7.0);
  CHECK(ev("2 ^ 3 ^ 2") == 512.0);
  CHECK(ev("2 ** 3 ** 2") == 512.0);
  CHECK(ev("min(3, 4 * 2)") == 3.0);
  CHECK(ev("10 - 4 - 3") == 3.0);
  CHECK(ev("12 / 3 / 2") == 2.0);
  // Unary binds tighter than pow.
  CHECK(ev("-2 ^ 2") == 4.0);
  CHECK(ev("2 ^ -1") == 0.5);
  CHECK(ev("1 + 2 < 4") == 1.0);
  CHECK(ev("max(1, 5, 3)") == 5.0);
  CHECK(ev("math.sqrt(16) + np.abs(-1)") == 5.0);
}

TEST_CASE("protected semantics") {
  CHECK(ev("1 / 0") == 1.0);
  CHECK(ev("5 / 1e-13") == 1.0);
  CHECK(ev("sqrt(-4)") == 2.0);
  CHECK(ev("log(0)") == doctest::Approx(std::log(1e-12)));
  CHECK(ev("exp(1000)") == doctest::Approx(std::exp(700.0)));
  CHECK(ev("if(a > 0, a, -a)", {{"a", -2.0}}) == 2.0);
  CHECK(ev("if(a > 0, a, -a)", {{"a", 3.0}}) == 3.0);
  CHECK(ev("(-8) ^ 0.5") == doctest::Approx(std::sqrt(8.0)));
  CHECK(std::isfinite(ev("1e300 * 1e300")));
  CHECK(std::isfinite(ev("0 ^ -1")));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_expression("x + 1", {}), ParseError);
  CHECK_THROWS_AS(parse_expression("(1 + 2", {}), ParseError);
  CHECK_THROWS_AS(parse_expression("1 + 2)", {}), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(1)", {}), ParseError);
  CHECK_THROWS_AS(parse_expression("sqrt(1, 2)", {}), ParseError);
  CHECK_THROWS_AS(parse_expression("1 +", {}), ParseError);
  CHECK_THROWS_AS(parse_expression("1 $ 2", {}), ParseError);
  CHECK_THROWS_AS(parse_expression("1e999", {}), ParseError);
  CHECK_THROWS_AS(parse_expression(std::string(70 * 1024, ' ') + "1", {}), ParseError);
  CHECK(eval_expression(parse_expression(std::string(100, '(') + "1" + std::string(100, ')'), {}), {}) == 1.0);
  CHECK_THROWS_AS(parse_expression(std::string(300, '(') + "1" + std::string(300, ')'), {}), ParseError);
  std::string deep = "1";
  for (int i = 0; i < 70; ++i) deep = "abs(" + deep + ")";
  CHECK_THROWS_AS(parse_expression(deep, {}), ParseError);
  std::string wide = "1";
  for (int i = 0; i < 6000; ++i) wide = "min(" + wide + ", 1)";
  CHECK_THROWS_AS(parse_expression(wide, {}), ParseError);
}

TEST_CASE("node and depth accounting") {
  auto e = parse_expression("a + b", {"a", "b"});
  CHECK(e.node_count() == 3);
  CHECK(e.depth() == 2);
  CHECK(parse_expression("a", {"a"}).node_count() == 1);
}

TEST_CASE("unbound variable is an EvalError") {
  auto e = parse_expression("a + b", {"a", "b"});
  CHECK_THROWS_AS(eval_expression(e, {{"a", 1.0}}), EvalError);
}

TEST_CASE("eval control charges node visits") {
  auto e = parse_expression("a + b", {"a", "b"});
  EvalControl control(EvalControl::Clock::now() + std::chrono::hours(1), 5);
  const double args[] = {1.0, 2.0};
  control.begin_instance();
  CHECK(e.evaluate(args, &control) == 3.0);
  CHECK(control.visits() == 3);
  CHECK_THROWS_AS(e.evaluate(args, &control), TimeoutError);
  control.begin_instance();
  CHECK_NOTHROW(e.evaluate(args, &control));

  EvalControl expired(EvalControl::Clock::now() - std::chrono::seconds(1));
  CHECK_THROWS_AS(expired.begin_instance(), TimeoutError);
}

TEST_CASE("fuzz: random expressions evaluate to finite values and round-trip") {
  SplitMix64 rng(2024);
  const std::vector<std::string> vars{"a", "b", "c"};
  int parsed = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto text = random_expr(rng, 6);
    Expr e;
    try {
      e = parse_expression(text, vars);
    } catch (const ParseError& err) {
      FAIL("generator produced unparsable text: " << text << " : " << err.what());
      continue;
    }
    ++parsed;
    const auto printed = e.to_string();
    auto again = parse_expression(printed, vars);
    CHECK_MESSAGE(e.structurally_equal(again), text << " -> " << printed);
    const double scale[] = {1e-12, 1.0, 1e6, 1e300};
    const double slots[] = {(rng.uniform() * 2 - 1) * scale[rng.uniform_int(0, 3)],
                            (rng.uniform() * 2 - 1) * scale[rng.uniform_int(0, 3)],
                            (rng.uniform() * 2 - 1) * scale[rng.uniform_int(0, 3)]};
    const double v = e.evaluate(slots);
    CHECK_MESSAGE(std::isfinite(v), text);
  }
  CHECK(parsed == 10000);
}
