#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hforge/codekit/normalize.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/search/method_config.hpp"
#include "hforge/search/population.hpp"
#include "hforge/search/prompts.hpp"
#include "hforge/tasks/registry.hpp"

using namespace hforge;
using namespace hforge::search;

namespace {

Candidate cand(CandidateId id, std::optional<double> f, std::string code = "") {
  Candidate c;
  c.id = id;
  c.sample_index = id;
  c.code = code.empty() ? "def priority(item, bins):\n    return " + std::to_string(id) + "\n" : code;
  c.normalized_hash = codekit::code_hash(c.code);
  c.outcome = f ? EvalOutcome::ok(FitnessVector{*f}, 0.0) : EvalOutcome::failure(EvalStatus::RuntimeError, "x", 0.0);
  return c;
}

}  // namespace

TEST_CASE("sa_accept") {
  CHECK(sa_accept(-0.5, 1.0, 0.999));
  CHECK(sa_accept(-0.5, 0.0, 0.999));
  CHECK(sa_accept(0.1, 1.0, 0.5));
  CHECK_FALSE(sa_accept(0.1, 1.0, 0.95));
  CHECK_FALSE(sa_accept(0.1, 0.0, 0.0));
  CHECK(sa_accept(0.0, 0.0, 0.9));
}

TEST_CASE("tabu_admissible") {
  std::deque<std::string> tabu{"a", "b"};
  CHECK_FALSE(tabu_admissible("a", tabu, 5.0, 3.0));
  CHECK(tabu_admissible("a", tabu, 2.0, 3.0));
  CHECK_FALSE(tabu_admissible("a", tabu, 3.0, 3.0));
  CHECK(tabu_admissible("c", tabu, 9.0, 3.0));
  CHECK_FALSE(tabu_admissible("a", tabu, 1.0, std::nullopt));
}

TEST_CASE("rank-proportional selection") {
  const auto w = rank_weights(2);
  CHECK(w[0] == doctest::Approx(2.0 / 3.0));
  CHECK(w[1] == doctest::Approx(1.0 / 3.0));

  SplitMix64 rng(3);
  CHECK(rank_proportional_pick(1, 2, rng) == std::vector<std::size_t>{0});
  std::vector<int> counts(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++counts[rank_proportional_pick(3, 1, rng)[0]];
  const auto w3 = rank_weights(3);
  for (int r = 0; r < 3; ++r) CHECK(std::fabs(counts[r] / double(n) - w3[r]) < 0.015);
  for (int i = 0; i < 100; ++i) {
    auto two = rank_proportional_pick(5, 2, rng);
    REQUIRE(two.size() == 2);
    CHECK(two[0] != two[1]);
  }
}

TEST_CASE("eoh survivor selection") {
  std::vector<Candidate> pop{cand(0, 3.0), cand(1, 1.0)};
  std::vector<Candidate> off{cand(2, 2.0)};
  auto s = eoh_survivor_selection(pop, off, 10);
  REQUIRE(s.size() == 3);
  CHECK(s[0].id == 1);
  CHECK(s[2].id == 0);

  // Same code as a parent: the parent stays even though the child scores better.
  auto dup = cand(5, 0.5, pop[0].code);
  s = eoh_survivor_selection(pop, std::vector<Candidate>{dup}, 10);
  CHECK(s.size() == 2);
  CHECK(std::none_of(s.begin(), s.end(), [](const Candidate& c) { return c.id == 5; }));

  SplitMix64 rng(11);
  std::vector<Candidate> members, offspring;
  std::vector<double> all;
  for (int i = 0; i < 14; ++i) {
    const double f = rng.uniform();
    all.push_back(f);
    (i < 6 ? members : offspring).push_back(cand(i, f));
  }
  offspring.push_back(cand(20, std::nullopt));
  s = eoh_survivor_selection(members, offspring, 10);
  std::sort(all.begin(), all.end());
  REQUIRE(s.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK((*s[i].fitness())[0] == all[i]);
}

TEST_CASE("population keeps unique valid members best-first") {
  Population p(3);
  CHECK(p.add(cand(0, 5.0)));
  CHECK_FALSE(p.add(cand(1, std::nullopt)));
  CHECK(p.add(cand(2, 1.0)));
  CHECK_FALSE(p.add(cand(3, 0.1, p.members()[0].code)));
  CHECK(p.add(cand(4, 3.0)));
  CHECK_FALSE(p.add(cand(5, 9.0)));
  CHECK(p.add(cand(6, 2.0)));
  REQUIRE(p.size() == 3);
  CHECK(p.best()->id == 2);
  CHECK(p.members()[2].id == 4);
}

TEST_CASE("island reset") {
  SplitMix64 rng(5);
  std::vector<Island> islands;
  for (int i = 0; i < 10; ++i) {
    islands.push_back(Island{i, Population(10), 0});
    islands.back().population.add(cand(i, 10.0 - i));
  }
  const auto reset = island_reset(islands, rng);
  CHECK(reset == std::vector<std::size_t>{0, 1, 2, 3, 4});
  for (auto i : reset) {
    REQUIRE(islands[i].population.size() == 1);
    const auto donor = islands[i].population.best()->id;
    CHECK(donor >= 5);
    CHECK((*islands[i].population.best()->fitness())[0] == 10.0 - donor);
  }

  std::vector<Island> two{Island{0, Population(10), 0}, Island{1, Population(10), 0}};
  two[0].population.add(cand(0, 4.0));
  two[0].population.add(cand(2, 6.0));
  two[1].population.add(cand(1, 2.0));
  CHECK(island_reset(two, rng) == std::vector<std::size_t>{0});
  CHECK(two[0].population.size() == 1);
  CHECK(two[0].population.best()->id == 1);

  std::vector<Island> lone(1);
  CHECK_THROWS_AS(island_reset(lone, rng), ContractViolation);
}

TEST_CASE("pareto archive stays mutually non-dominated") {
  ParetoArchive a;
  auto mo = [](CandidateId id, double x, double y) {
    Candidate c;
    c.id = id;
    c.outcome = EvalOutcome::ok(FitnessVector{x, y}, 0.0);
    return c;
  };
  CHECK(a.offer(mo(0, 2, 2)));
  CHECK(a.offer(mo(1, 1, 3)));
  CHECK_FALSE(a.offer(mo(2, 3, 3)));
  CHECK_FALSE(a.offer(mo(3, 2, 2)));
  CHECK(a.offer(mo(4, 1, 1)));
  CHECK(a.ids() == std::vector<CandidateId>{4});
}

TEST_CASE("funsearch prompt shows programs worse first") {
  auto task = tasks::make_task("obp");
  PromptBuilder b(*task, Method::FunSearch);
  auto A = cand(1, 3.0, "def priority(item, bins):\n    return -bins\n");
  auto B = cand(2, 5.0, "def priority(item, bins):\n    return bins\n");
  const Candidate* order[] = {&B, &A};
  const auto p = b.funsearch(order, 3);
  const auto posB = p.user.find("def priority_v0(item, bins):\n    return bins");
  const auto posA = p.user.find("def priority_v1(item, bins):\n    return -bins");
  CHECK(posB != std::string::npos);
  CHECK(posA != std::string::npos);
  CHECK(posB < posA);
  CHECK(p.user.find("priority_v2") != std::string::npos);
  CHECK(p.metadata["target_function"] == "priority_v2");
  CHECK(p.metadata["island"] == 3);
  CHECK(p.metadata["parent_ids"] == nlohmann::json::array({2, 1}));

  const Candidate* single[] = {&A};
  const auto q = b.funsearch(single, 0);
  CHECK(q.user.find("priority_v0") != std::string::npos);
  CHECK(q.user.find("priority_v1(") == std::string::npos);
  CHECK(q.metadata["target_function"] == "priority_v1");
}

TEST_CASE("prompt builder") {
  auto task = tasks::make_task("obp");
  PromptBuilder b(*task, Method::EoH);
  const auto init = b.init();
  CHECK(init.user.find("def priority(item, bins):") != std::string::npos);
  CHECK(init.user.find("Online bin packing") != std::string::npos);
  CHECK(init.metadata["operator"] == "init");
  CHECK(init.metadata["parent_ids"].empty());
  CHECK_FALSE(init.system.empty());

  auto A = cand(7, 0.25);
  A.idea = "prefer tight bins";
  const Candidate* ps[] = {&A};
  const auto m1 = b.eoh("m1", ps);
  CHECK(m1.user.find("prefer tight bins") != std::string::npos);
  CHECK(m1.user.find("0.25") != std::string::npos);
  CHECK(m1.metadata["parent_ids"] == nlohmann::json::array({7}));
  CHECK_THROWS_AS(b.eoh("x9", ps), ContractViolation);
  CHECK_THROWS_AS(b.eoh("e1", {}), ContractViolation);

  CHECK(b.vns(A, 1, 3).user != b.vns(A, 3, 3).user);
  CHECK(b.vns(A, 2, 3).metadata["level"] == 2);
  CHECK_THROWS_AS(b.vns(A, 4, 3), ContractViolation);
  CHECK(b.perturb(A).user.find("substantially different") != std::string::npos);
}

TEST_CASE("render and rename") {
  CHECK(render("a {x} {y} {z}", {{"x", "1"}, {"y", "{x}"}}) == "a 1 {x} {z}");
  CHECK(render("{", {}) == "{");
  CHECK(rename_function("def f(a):\n  return f(a)\n", "f", "g") == "def g(a):\n  return f(a)\n");
  CHECK_THROWS_AS(prompt_text("nope"), ContractViolation);
  CHECK(prompt_text("init").find("{stub}") != std::string_view::npos);
}

TEST_CASE("method names and config") {
  for (auto m : all_methods()) CHECK(method_from_string(to_string(m)) == m);
  CHECK(method_from_string("EoH") == Method::EoH);
  CHECK(method_from_string("MoEoH_NSGA2") == Method::MoEoH_NSGA2);
  CHECK(method_from_string("OnePlusOneEPS") == Method::OnePlusOneEPS);
  CHECK(method_from_string("SA") == Method::SA);
  CHECK_THROWS_AS(method_from_string("gradient_descent"), ConfigError);
  CHECK(all_methods().size() == 10);
  CHECK(is_multi_objective(Method::MOEAD));
  CHECK_FALSE(is_multi_objective(Method::EoH));

  MethodConfig d;
  CHECK(d.pop_size == 10);
  CHECK(d.num_islands == 10);
  CHECK(d.samples_per_prompt == 4);
  CHECK(d.num_samplers == 1);
  CHECK(d.num_evaluators == 1);

  auto c = method_config_from_json({{"name", "funsearch"}, {"pop_size", 4}});
  CHECK(c.method == Method::FunSearch);
  CHECK(c.pop_size == 4);
  CHECK(method_config_from_json(to_json(c)).pop_size == 4);
  try {
    method_config_from_json({{"pop_size", 0}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "method.pop_size");
  }
  CHECK_THROWS_AS(method_config_from_json({{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(method_config_from_json({{"pop_size", "big"}}), ConfigError);
  CHECK_THROWS_AS(method_config_from_json({{"sa_alpha", 1.0}}), ConfigError);
}
