#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hforge/core/candidate.hpp"
#include "hforge/core/random.hpp"

namespace hforge::search {

/// Union of `members` then `offspring`; invalid candidates dropped, duplicate
/// hashes keep the earlier entry, then the best `capacity` by scalar fitness
/// (ties to the lower sample_index) in ascending order.
std::vector<Candidate> eoh_survivor_selection(std::span<const Candidate> members,
                                              std::span<const Candidate> offspring, std::size_t capacity);

/// Same union and dedup, then NSGA-II selection on the full fitness vectors.
/// The result is ordered by preference (front, crowding).
std::vector<Candidate> nsga2_survivor_selection(std::span<const Candidate> members,
                                                std::span<const Candidate> offspring, std::size_t capacity);

/// Probability of rank r (0 = best) out of n under 1/(r+1) weighting.
std::vector<double> rank_weights(std::size_t n);

/// Draws `k` distinct ranks from [0, n) with probability proportional to
/// 1/(rank+1), renormalized after each draw. Returns min(k, n) ranks in draw order.
std::vector<std::size_t> rank_proportional_pick(std::size_t n, std::size_t k, SplitMix64& rng);

/// True if delta <= 0, else u < exp(-delta / temperature). Temperature 0
/// rejects every worsening move.
bool sa_accept(double delta, double temperature, double u);

/// Admissible when `hash` is not tabu, or when `fitness` is strictly better
/// than the global best (aspiration).
bool tabu_admissible(const std::string& hash, const std::deque<std::string>& tabu_list, double fitness,
                     std::optional<double> global_best);

/// Valid candidates kept best-first, at most `capacity`, unique by hash.
class Population {
 public:
  explicit Population(std::size_t capacity);
  /// Returns true when `c` is kept.
  bool add(const Candidate& c);
  void clear() { members_.clear(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const std::vector<Candidate>& members() const noexcept { return members_; }
  const Candidate* best() const noexcept { return members_.empty() ? nullptr : &members_.front(); }
  void assign(std::vector<Candidate> members);

 private:
  std::size_t capacity_;
  std::vector<Candidate> members_;
};

struct Island {
  int id = 0;
  Population population{10};
  /// Samples since the island last improved.
  int staleness = 0;
};

/// Empties the worse half of the islands (by best fitness; empty islands are
/// worst, ties to the higher index being worse) and reseeds each with a copy
/// of a uniformly chosen surviving island's best. Returns the reset island
/// indices in ascending order. Throws ContractViolation for fewer than 2 islands.
std::vector<std::size_t> island_reset(std::vector<Island>& islands, SplitMix64& rng);

/// Mutually non-dominated set of valid candidates.
class ParetoArchive {
 public:
  /// Adds `c` unless an existing member dominates it or has an equal fitness
  /// vector; removes members `c` dominates. Returns true when added.
  bool offer(const Candidate& c);
  const std::vector<Candidate>& members() const noexcept { return members_; }
  std::vector<CandidateId> ids() const;

 private:
  std::vector<Candidate> members_;
};

}  // namespace hforge::search
