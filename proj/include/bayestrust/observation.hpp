#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "bayestrust/opinion.hpp"

namespace bayestrust {

/// n binary trials with m successes.
struct BinaryBatch {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  friend bool operator==(const BinaryBatch&, const BinaryBatch&) = default;
};

/// Outcome counts over b categories.
struct CategoricalBatch {
  std::vector<std::uint64_t> counts;
  friend bool operator==(const CategoricalBatch&, const CategoricalBatch&) = default;
};

/// Second-hand binary evidence, discounted by the trustor's trust in the advisor.
struct AdvisorReport {
  double advisor_trust = 1.0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  friend bool operator==(const AdvisorReport&, const AdvisorReport&) = default;
};

/// Trustee reading y0 and the readings of its neighbors.
struct VotingVector {
  double y0 = 0.0;
  std::vector<double> neighbors;
  friend bool operator==(const VotingVector&, const VotingVector&) = default;
};

struct OpinionReport {
  Opinion opinion;
  friend bool operator==(const OpinionReport&, const OpinionReport&) = default;
};

using Observation = std::variant<BinaryBatch, CategoricalBatch, AdvisorReport, VotingVector, OpinionReport>;

/// Trace-file tag for the alternative held: binary, categorical, advisor, voting, opinion.
std::string_view observation_kind(const Observation& obs) noexcept;

/// Checks m <= n, advisor trust in [0, 1], finite readings; throws InvalidObservation.
void validate(const Observation& obs);

}  // namespace bayestrust
