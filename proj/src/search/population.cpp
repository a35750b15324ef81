#include "hforge/search/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hforge/core/errors.hpp"
#include "hforge/search/moo.hpp"

namespace hforge::search {

namespace {

std::vector<Candidate> valid_unique(std::span<const Candidate> a, std::span<const Candidate> b) {
  std::vector<Candidate> out;
  std::unordered_set<std::string> seen;
  for (auto part : {a, b}) {
    for (const auto& c : part) {
      if (!c.valid()) continue;
      if (!seen.insert(c.normalized_hash).second) continue;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<Candidate> eoh_survivor_selection(std::span<const Candidate> members,
                                              std::span<const Candidate> offspring, std::size_t capacity) {
  auto pool = valid_unique(members, offspring);
  std::stable_sort(pool.begin(), pool.end(), better_scalar);
  if (pool.size() > capacity) pool.resize(capacity);
  return pool;
}

std::vector<Candidate> nsga2_survivor_selection(std::span<const Candidate> members,
                                                std::span<const Candidate> offspring, std::size_t capacity) {
  auto pool = valid_unique(members, offspring);
  std::vector<FitnessVector> pts;
  for (const auto& c : pool) pts.push_back(*c.fitness());
  std::vector<Candidate> out;
  for (auto i : nsga2_select(pts, capacity)) out.push_back(pool[i]);
  return out;
}

std::vector<double> rank_weights(std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) total += w[r] = 1.0 / static_cast<double>(r + 1);
  for (auto& x : w) x /= total;
  return w;
}

std::vector<std::size_t> rank_proportional_pick(std::size_t n, std::size_t k, SplitMix64& rng) {
  std::vector<std::size_t> left(n);
  std::iota(left.begin(), left.end(), 0);
  std::vector<std::size_t> out;
  while (out.size() < k && !left.empty()) {
    double total = 0.0;
    for (auto r : left) total += 1.0 / static_cast<double>(r + 1);
    double u = rng.uniform() * total;
    std::size_t pos = left.size() - 1;
    for (std::size_t i = 0; i < left.size(); ++i) {
      u -= 1.0 / static_cast<double>(left[i] + 1);
      if (u < 0) {
        pos = i;
        break;
      }
    }
    out.push_back(left[pos]);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return out;
}

bool sa_accept(double delta, double temperature, double u) {
  if (delta <= 0) return true;
  if (temperature <= 0) return false;
  return u < std::exp(-delta / temperature);
}

bool tabu_admissible(const std::string& hash, const std::deque<std::string>& tabu_list, double fitness,
                     std::optional<double> global_best) {
  if (std::find(tabu_list.begin(), tabu_list.end(), hash) == tabu_list.end()) return true;
  return global_best && fitness < *global_best;
}

Population::Population(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ContractViolation("population capacity must be >= 1");
}

bool Population::add(const Candidate& c) {
  if (!c.valid()) return false;
  for (const auto& m : members_) {
    if (m.normalized_hash == c.normalized_hash) return false;
  }
  auto at = std::upper_bound(members_.begin(), members_.end(), c, better_scalar);
  if (static_cast<std::size_t>(at - members_.begin()) >= capacity_) return false;
  members_.insert(at, c);
  if (members_.size() > capacity_) members_.pop_back();
  return true;
}

void Population::assign(std::vector<Candidate> members) {
  if (members.size() > capacity_) throw ContractViolation("population over capacity");
  members_ = std::move(members);
}

std::vector<std::size_t> island_reset(std::vector<Island>& islands, SplitMix64& rng) {
  const auto n = islands.size();
  if (n < 2) throw ContractViolation("island reset needs at least 2 islands");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    const auto* ba = islands[a].population.best();
    const auto* bb = islands[b].population.best();
    if (!ba || !bb) return ba != nullptr && bb == nullptr;
    return compare_scalar(ba->fitness(), bb->fitness()) < 0;
  });
  const auto keep = n - n / 2;
  std::vector<std::size_t> survivors(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  std::vector<std::size_t> reset(order.begin() + static_cast<std::ptrdiff_t>(keep), order.end());
  std::sort(reset.begin(), reset.end());
  for (auto i : reset) {
    const auto donor = survivors[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(keep) - 1))];
    islands[i].population.clear();
    if (const auto* b = islands[donor].population.best()) islands[i].population.add(*b);
    islands[i].staleness = 0;
  }
  return reset;
}

bool ParetoArchive::offer(const Candidate& c) {
  if (!c.valid()) return false;
  const auto& f = *c.fitness();
  for (const auto& m : members_) {
    if (*m.fitness() == f || dominates(*m.fitness(), f)) return false;
  }
  std::erase_if(members_, [&](const Candidate& m) { return dominates(f, *m.fitness()); });
  members_.push_back(c);
  return true;
}

std::vector<CandidateId> ParetoArchive::ids() const {
  std::vector<CandidateId> out;
  for (const auto& m : members_) out.push_back(m.id);
  return out;
}

}  // namespace hforge::search
