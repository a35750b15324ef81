#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hforge/core/outcome.hpp"

namespace hforge {

using CandidateId = std::int64_t;

/// Sample index used for the template program evaluated before sampling starts.
inline constexpr std::int64_t kSeedSampleIndex = -1;

struct Candidate {
  CandidateId id = 0;
  std::string code;
  std::optional<std::string> idea;
  std::vector<CandidateId> parent_ids;
  std::int64_t sample_index = kSeedSampleIndex;
  EvalOutcome outcome;
  std::string normalized_hash;

  const MaybeFitness& fitness() const noexcept { return outcome.fitness; }
  bool valid() const noexcept { return outcome.valid(); }
};

/// Scalar order on the first objective; ties go to the lower sample_index.
bool better_scalar(const Candidate& a, const Candidate& b);

}  // namespace hforge
