#include <doctest.h>

#include <algorithm>
#include <random>

#include "hforge/core/budget.hpp"
#include "hforge/core/candidate.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/core/events.hpp"
#include "hforge/core/fitness.hpp"
#include "hforge/core/random.hpp"

using namespace hforge;

TEST_CASE("fitness vectors reject empty and non-finite values") {
  CHECK_THROWS_AS(FitnessVector(std::vector<double>{}), ContractViolation);
  CHECK_THROWS_AS(FitnessVector({1.0, std::nan("")}), ContractViolation);
  CHECK_THROWS_AS(FitnessVector({INFINITY}), ContractViolation);
  FitnessVector f{1.0, 2.0};
  CHECK(f.with_objective(3.0) == FitnessVector{1.0, 2.0, 3.0});
}

TEST_CASE("compare_scalar") {
  CHECK(compare_scalar(FitnessVector{1.0}, FitnessVector{2.0}) < 0);
  CHECK(compare_scalar(std::nullopt, FitnessVector{1e9}) > 0);
  CHECK(compare_scalar(FitnessVector{3.0}, FitnessVector{3.0}) == 0);
  CHECK(compare_scalar(std::nullopt, std::nullopt) == 0);
  CHECK_THROWS_AS(compare_scalar(FitnessVector{1.0, 2.0}, FitnessVector{1.0}), ContractViolation);
}

TEST_CASE("dominates") {
  CHECK(dominates(FitnessVector{1, 2}, FitnessVector{2, 2}));
  CHECK_FALSE(dominates(FitnessVector{1, 2}, FitnessVector{2, 1}));
  CHECK_FALSE(dominates(FitnessVector{1, 1}, FitnessVector{1, 1}));
  CHECK_THROWS_AS(dominates(FitnessVector{1}, FitnessVector{1, 2}), ContractViolation);
}

TEST_CASE("dominance is irreflexive and antisymmetric on random vectors") {
  SplitMix64 rng(7);
  for (int t = 0; t < 5000; ++t) {
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 3));
    std::vector<double> a, b;
    for (int i = 0; i < m; ++i) {
      // Small integer grid so ties are frequent.
      a.push_back(static_cast<double>(rng.uniform_int(0, 3)));
      b.push_back(static_cast<double>(rng.uniform_int(0, 3)));
    }
    FitnessVector fa(a), fb(b);
    CHECK_FALSE(dominates(fa, fa));
    CHECK_FALSE((dominates(fa, fb) && dominates(fb, fa)));
  }
}

TEST_CASE("scalar sort is stable and idempotent") {
  SplitMix64 rng(11);
  std::vector<Candidate> cands;
  for (int i = 0; i < 200; ++i) {
    Candidate c;
    c.id = i;
    c.sample_index = i;
    if (rng.uniform() < 0.8) {
      c.outcome = EvalOutcome::ok(FitnessVector{static_cast<double>(rng.uniform_int(0, 9))}, 0.0);
    }
    cands.push_back(c);
  }
  auto cmp = [](const Candidate& a, const Candidate& b) { return compare_scalar(a.fitness(), b.fitness()) < 0; };
  auto once = cands;
  std::stable_sort(once.begin(), once.end(), cmp);
  auto twice = once;
  std::stable_sort(twice.begin(), twice.end(), cmp);
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i].id == twice[i].id);
  for (std::size_t i = 1; i < once.size(); ++i) {
    CHECK(compare_scalar(once[i - 1].fitness(), once[i].fitness()) <= 0);
    if (compare_scalar(once[i - 1].fitness(), once[i].fitness()) == 0) {
      CHECK(once[i - 1].sample_index < once[i].sample_index);
    }
  }
}

TEST_CASE("better_scalar breaks ties by sample index") {
  Candidate a, b;
  a.sample_index = 3;
  b.sample_index = 5;
  a.outcome = b.outcome = EvalOutcome::ok(FitnessVector{1.0}, 0.0);
  CHECK(better_scalar(a, b));
  CHECK_FALSE(better_scalar(b, a));
}

TEST_CASE("budget_remaining") {
  Budget b;
  CHECK(budget_remaining(b, 0) == 2000);
  b.max_samples = 20;
  CHECK(budget_remaining(b, 20) == 0);
  b.max_samples = 5;
  CHECK(budget_remaining(b, 9) == 0);
  CHECK_THROWS_AS(budget_remaining(b, -1), ContractViolation);
}

TEST_CASE("budget validation") {
  Budget b;
  CHECK(b.max_samples == 2000);
  CHECK(b.eval_timeout_s == 50.0);
  b.max_samples = 0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b.max_samples = 1;
  b.eval_timeout_s = 0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
}

TEST_CASE("eval outcome carries fitness only when valid") {
  auto ok = EvalOutcome::ok(FitnessVector{0.5}, 0.1);
  CHECK(ok.valid());
  CHECK(ok.fitness.has_value());
  auto bad = EvalOutcome::failure(EvalStatus::Timeout, "slow", 1.0);
  CHECK_FALSE(bad.fitness.has_value());
  CHECK_THROWS_AS(EvalOutcome::failure(EvalStatus::Valid, "", 0), ContractViolation);
  CHECK(eval_status_from_string(to_string(EvalStatus::ParseError)) == EvalStatus::ParseError);
}

TEST_CASE("run events serialize as one JSON object and canonicalize") {
  RunEvent e;
  e.seq = 4;
  e.timestamp = 1234.5;
  e.kind = EventKind::EvalFinished;
  e.payload = {{"wall_time_s", 0.25}, {"nested", {{"wall_time_s", 3.0}}}, {"status", "valid"}};
  auto j = nlohmann::json::parse(to_line(e));
  CHECK(j.at("seq") == 4);
  CHECK(j.at("kind") == "EvalFinished");
  CHECK(j.at("ts") == 1234.5);
  auto back = event_from_json(j);
  CHECK(back.kind == EventKind::EvalFinished);
  CHECK(back.payload == e.payload);
  auto c = nlohmann::json::parse(to_line(e, true));
  CHECK(c.at("ts") == 0.0);
  CHECK(c.at("payload").at("wall_time_s") == 0.0);
  CHECK(c.at("payload").at("nested").at("wall_time_s") == 0.0);
  CHECK(c.at("payload").at("status") == "valid");
}

TEST_CASE("splitmix64 reference values") {
  // Reference stream for seed 0 from the published SplitMix64 algorithm.
  SplitMix64 r(0);
  CHECK(r.next() == 0xE220A8397B1DCDAFULL);
  CHECK(r.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(r.next() == 0x06C45D188009454FULL);
}
