#include "hforge/search/moo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hforge/core/errors.hpp"

namespace hforge::search {

std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const FitnessVector> points) {
  const auto n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> dominators(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  if (n == 0) return fronts;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j])) {
        dominated_by_me[i].push_back(j);
        ++dominators[j];
      } else if (dominates(points[j], points[i])) {
        dominated_by_me[j].push_back(i);
        ++dominators[i];
      }
    }
  }
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (dominators[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (auto i : current) {
      for (auto j : dominated_by_me[i]) {
        if (--dominators[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const FitnessVector> front) {
  const auto n = front.size();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    return dist;
  }
  const auto m = front[0].size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < m; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return front[a][k] < front[b][k]; });
    const double lo = front[order.front()][k];
    const double hi = front[order.back()][k];
    dist[order.front()] = std::numeric_limits<double>::infinity();
    dist[order.back()] = std::numeric_limits<double>::infinity();
    const double range = hi - lo;
    if (range <= 0) continue;
    for (std::size_t r = 1; r + 1 < n; ++r) {
      dist[order[r]] += (front[order[r + 1]][k] - front[order[r - 1]][k]) / range;
    }
  }
  return dist;
}

std::vector<std::size_t> nsga2_order(std::span<const FitnessVector> points) {
  std::vector<std::size_t> out;
  for (const auto& front : fast_nondominated_sort(points)) {
    std::vector<FitnessVector> pts;
    for (auto i : front) pts.push_back(points[i]);
    const auto cd = crowding_distance(pts);
    std::vector<std::size_t> pos(front.size());
    std::iota(pos.begin(), pos.end(), 0);
    std::stable_sort(pos.begin(), pos.end(), [&](auto a, auto b) { return cd[a] > cd[b]; });
    for (auto p : pos) out.push_back(front[p]);
  }
  return out;
}

std::vector<std::size_t> nsga2_select(std::span<const FitnessVector> points, std::size_t capacity) {
  auto order = nsga2_order(points);
  if (order.size() > capacity) order.resize(capacity);
  return order;
}

std::vector<std::vector<double>> moead_weights(int m, int h) {
  if (m != 2) throw ContractViolation("weight lattices are only supported for 2 objectives");
  if (h < 1) throw ContractViolation("H must be >= 1");
  std::vector<std::vector<double>> w;
  for (int i = 0; i <= h; ++i) {
    const double a = static_cast<double>(i) / h;
    w.push_back({a, 1.0 - a});
  }
  return w;
}

double tchebycheff(const FitnessVector& f, std::span<const double> w, std::span<const double> z_star) {
  if (w.size() != f.size() || z_star.size() != f.size()) throw ContractViolation("tchebycheff length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wi = w[i] == 0.0 ? kZeroWeight : w[i];
    worst = std::max(worst, wi * std::fabs(f[i] - z_star[i]));
  }
  return worst;
}

std::vector<std::vector<std::size_t>> weight_neighbors(const std::vector<std::vector<double>>& weights,
                                                       std::size_t t) {
  const auto n = weights.size();
  t = std::min(std::max<std::size_t>(t, 1), n);
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < weights[i].size(); ++k) s += (weights[i][k] - weights[j][k]) * (weights[i][k] - weights[j][k]);
      d.emplace_back(s, j);
    }
    std::sort(d.begin(), d.end());
    for (std::size_t k = 0; k < t; ++k) out[i].push_back(d[k].second);
  }
  return out;
}

void update_ideal(std::vector<double>& z_star, const FitnessVector& f) {
  if (z_star.empty()) {
    z_star = f.to_vector();
    return;
  }
  if (z_star.size() != f.size()) throw ContractViolation("ideal point length mismatch");
  for (std::size_t i = 0; i < f.size(); ++i) z_star[i] = std::min(z_star[i], f[i]);
}

std::vector<std::size_t> moead_update(std::vector<Subproblem>& subproblems, std::size_t i,
                                      const FitnessVector& offspring, std::ptrdiff_t offspring_index,
                                      std::span<const double> z_star, std::size_t max_replacements) {
  std::vector<std::size_t> replaced;
  for (auto j : subproblems.at(i).neighbors) {
    if (replaced.size() >= max_replacements) break;
    auto& sp = subproblems[j];
    const double mine = tchebycheff(offspring, sp.weight, z_star);
    if (!sp.incumbent_fitness || mine < tchebycheff(*sp.incumbent_fitness, sp.weight, z_star)) {
      sp.incumbent = offspring_index;
      sp.incumbent_fitness = offspring;
      replaced.push_back(j);
    }
  }
  return replaced;
}

}  // namespace hforge::search
