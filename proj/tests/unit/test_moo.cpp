#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hforge/core/errors.hpp"
#include "hforge/core/random.hpp"
#include "hforge/search/moo.hpp"
#include "oracles.hpp"

using namespace hforge;
using namespace hforge::search;
using hforge::testing::peel;
using hforge::testing::random_points;

TEST_CASE("non-dominated sort examples") {
  std::vector<FitnessVector> pts{{1, 2}, {2, 1}, {3, 3}};
  CHECK(fast_nondominated_sort(pts) == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
  std::vector<FitnessVector> one{{5, 5}};
  CHECK(fast_nondominated_sort(one) == std::vector<std::vector<std::size_t>>{{0}});
  CHECK(fast_nondominated_sort(std::vector<FitnessVector>{}).empty());
}

TEST_CASE("non-dominated sort matches peeling oracle") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = static_cast<std::size_t>(rng.uniform_int(2, 3));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 64));
    const auto pts = random_points(rng, n, m);
    const auto fronts = fast_nondominated_sort(pts);
    REQUIRE(fronts == peel(pts));
    // Permutation, and nothing in a later front dominates an earlier one.
    std::set<std::size_t> all;
    for (const auto& f : fronts) all.insert(f.begin(), f.end());
    CHECK(all.size() == n);
    for (std::size_t a = 0; a < fronts.size(); ++a) {
      for (std::size_t b = a; b < fronts.size(); ++b) {
        for (auto i : fronts[a]) {
          for (auto j : fronts[b]) CHECK_FALSE(dominates(pts[j], pts[i]));
        }
      }
    }
  }
}

TEST_CASE("crowding distance") {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<FitnessVector> f{{1, 3}, {2, 2}, {3, 1}};
  const auto d = crowding_distance(f);
  CHECK(d[0] == inf);
  CHECK(d[1] == doctest::Approx(2.0));
  CHECK(d[2] == inf);
  std::vector<FitnessVector> two{{1, 2}, {2, 1}};
  CHECK(crowding_distance(two) == std::vector<double>{inf, inf});
  std::vector<FitnessVector> same{{1, 1}, {1, 1}, {1, 1}, {1, 1}};
  const auto z = crowding_distance(same);
  CHECK(z[1] == 0.0);
  CHECK(z[2] == 0.0);
}

TEST_CASE("nsga2 selection prefers rank then spread") {
  std::vector<FitnessVector> pts{{1, 4}, {2, 3}, {3, 2}, {4, 1}, {5, 5}, {2.5, 2.5}};
  // Front 0 = {0,1,2,3,5}; its interior points are ranked by crowding.
  const auto keep = nsga2_select(pts, 3);
  REQUIRE(keep.size() == 3);
  CHECK(keep[0] == 0);
  CHECK(keep[1] == 3);
  CHECK(std::find(keep.begin(), keep.end(), 4) == keep.end());
  CHECK(nsga2_select(pts, 10).size() == 6);
  CHECK(nsga2_select(pts, 10).back() == 4);
}

TEST_CASE("weight lattice") {
  const auto w = moead_weights(2, 4);
  REQUIRE(w.size() == 5);
  CHECK(w[0] == std::vector<double>{0, 1});
  CHECK(w[1] == std::vector<double>{0.25, 0.75});
  CHECK(w[2] == std::vector<double>{0.5, 0.5});
  CHECK(w[4] == std::vector<double>{1, 0});
  CHECK(moead_weights(2, 1) == std::vector<std::vector<double>>{{0, 1}, {1, 0}});
  for (int h = 1; h < 30; ++h) {
    for (const auto& v : moead_weights(2, h)) CHECK(std::fabs(v[0] + v[1] - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(moead_weights(3, 4), ContractViolation);
  CHECK_THROWS_AS(moead_weights(2, 0), ContractViolation);
}

TEST_CASE("tchebycheff") {
  const std::vector<double> z{1, 1};
  CHECK(tchebycheff(FitnessVector{2, 4}, std::vector<double>{0.5, 0.5}, z) == 1.5);
  CHECK(tchebycheff(FitnessVector{1, 1}, std::vector<double>{0.5, 0.5}, z) == 0.0);
  CHECK(tchebycheff(FitnessVector{3, 1e7}, std::vector<double>{1, 0}, z) == doctest::Approx(1e-6 * (1e7 - 1)));
  CHECK(tchebycheff(FitnessVector{3, 2}, std::vector<double>{1, 0}, z) == 2.0);
}

TEST_CASE("ideal point is the running minimum") {
  std::vector<double> z;
  update_ideal(z, FitnessVector{1, 5});
  update_ideal(z, FitnessVector{4, 0});
  CHECK(z == std::vector<double>{1, 0});
}

TEST_CASE("neighbors") {
  const auto nb = weight_neighbors(moead_weights(2, 4), 3);
  CHECK(nb[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(nb[2] == std::vector<std::size_t>{2, 1, 3});
  CHECK(nb[4] == std::vector<std::size_t>{4, 3, 2});
}

TEST_CASE("moead update") {
  auto make = [] {
    std::vector<Subproblem> subs(5);
    const auto w = moead_weights(2, 4);
    const auto nb = weight_neighbors(w, 4);
    for (std::size_t i = 0; i < 5; ++i) {
      subs[i].weight = w[i];
      subs[i].neighbors = nb[i];
      subs[i].incumbent = static_cast<std::ptrdiff_t>(i);
      subs[i].incumbent_fitness = FitnessVector{5, 5};
    }
    return subs;
  };
  const std::vector<double> z{0, 0};
  auto subs = make();
  auto replaced = moead_update(subs, 2, FitnessVector{1, 1}, 99, z);
  CHECK(replaced.size() == 2);
  CHECK(subs[replaced[0]].incumbent == 99);

  subs = make();
  CHECK(moead_update(subs, 2, FitnessVector{9, 9}, 99, z).empty());
  for (const auto& s : subs) CHECK(s.incumbent != 99);

  // Equal Tchebycheff value is not a replacement.
  subs = make();
  CHECK(moead_update(subs, 2, FitnessVector{5, 5}, 99, z).empty());

  subs = make();
  subs[2].incumbent = -1;
  subs[2].incumbent_fitness.reset();
  replaced = moead_update(subs, 2, FitnessVector{9, 9}, 7, z);
  CHECK(replaced == std::vector<std::size_t>{2});
}
