#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "hforge/core/fitness.hpp"
#include "hforge/core/random.hpp"

// Independent oracles and generators shared by unit and acceptance tests.
namespace hforge::testing {

// Peels non-dominated layers by direct pairwise checks.
inline std::vector<std::vector<std::size_t>> peel(const std::vector<FitnessVector>& pts) {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<bool> gone(pts.size(), false);
  std::size_t left = pts.size();
  while (left > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (gone[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
        if (!gone[j] && j != i) {
          bool le = true, lt = false;
          for (std::size_t k = 0; k < pts[i].size(); ++k) {
            le = le && pts[j][k] <= pts[i][k];
            lt = lt || pts[j][k] < pts[i][k];
          }
          dominated = le && lt;
        }
      }
      if (!dominated) front.push_back(i);
    }
    for (auto i : front) gone[i] = true;
    left -= front.size();
    fronts.push_back(front);
  }
  return fronts;
}

inline std::vector<FitnessVector> random_points(SplitMix64& rng, std::size_t n, std::size_t m) {
  std::vector<FitnessVector> pts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v;
    // Coarse grid so ties and duplicates occur.
    for (std::size_t k = 0; k < m; ++k) v.push_back(static_cast<double>(rng.uniform_int(0, 9)));
    pts.emplace_back(v);
  }
  return pts;
}

// Random well-formed expression text over {a, b, c}.
inline std::string random_expr(SplitMix64& rng, int depth) {
  static const char* kVars[] = {"a", "b", "c"};
  static const char* kUnary[] = {"abs", "sqrt", "log", "exp", "sin", "cos"};
  static const char* kBinary[] = {"+", "-", "*", "/", "^", "<", "<=", ">", ">="};
  if (depth <= 0 || rng.uniform() < 0.2) {
    if (rng.uniform() < 0.5) return kVars[rng.uniform_int(0, 2)];
    const double magnitudes[] = {0.0, 1e-13, 0.5, 2.0, 10.0, 1e3, 1e150, 1e300};
    const double v = magnitudes[rng.uniform_int(0, 7)] * (1.0 + rng.uniform());
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  switch (rng.uniform_int(0, 5)) {
    case 0: return "-" + random_expr(rng, depth - 1);
    case 1: return std::string(kUnary[rng.uniform_int(0, 5)]) + "(" + random_expr(rng, depth - 1) + ")";
    case 2: return (rng.uniform() < 0.5 ? "min(" : "max(") + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    case 3: return "if(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, depth - 1) + ")";
    default:
      return random_expr(rng, depth - 1) + " " + kBinary[rng.uniform_int(0, 8)] + " " + random_expr(rng, depth - 1);
  }
}

}  // namespace hforge::testing
