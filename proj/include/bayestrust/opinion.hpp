#pragma once

#include <array>
#include <cstdint>

#include "bayestrust/trust_types.hpp"

namespace bayestrust {

/// Subjective opinion (belief, disbelief, ignorance) plus the Dirichlet
/// evidence mass it stands for. The bare triplet does not pin down a unique
/// Dirichlet; carrying the mass makes the evidence bridge a bijection.
class Opinion {
 public:
  /// b, d, i in [0, 1] summing to 1 within 1e-9; evidence_weight > 0.
  Opinion(double belief, double disbelief, double ignorance, double evidence_weight);

  [[nodiscard]] double belief() const noexcept { return belief_; }
  [[nodiscard]] double disbelief() const noexcept { return disbelief_; }
  [[nodiscard]] double ignorance() const noexcept { return ignorance_; }
  [[nodiscard]] double evidence_weight() const noexcept { return weight_; }

  friend bool operator==(const Opinion&, const Opinion&) = default;

 private:
  double belief_;
  double disbelief_;
  double ignorance_;
  double weight_;
};

/// Floor applied to zero evidence components when building DirichletParams.
inline constexpr double kOpinionEvidenceFloor = 1e-12;

/// Categories are ordered (belief, ignorance, disbelief).
DirichletParams opinion_to_dirichlet(const Opinion& o);
/// Throws InvalidInput unless the Dirichlet has exactly 3 categories.
Opinion dirichlet_to_opinion(const DirichletParams& p);

/// Cumulative fusion: add the two evidence vectors and renormalize.
Opinion fuse(const Opinion& a, const Opinion& b);

/// Dirichlet-bridge update with outcome counts in (belief, ignorance, disbelief) order.
Opinion observe_outcomes(const Opinion& o, const std::array<std::uint64_t, 3>& counts);

/// b + i/2: ignorance split evenly between belief and disbelief.
TrustScalar projected_trust(const Opinion& o);

/// Opinion carried by s successes and f failures with two units of ignorance
/// mass: evidence (s, 2, f) in bridge order.
Opinion opinion_from_outcomes(std::uint64_t successes, std::uint64_t failures);

}  // namespace bayestrust
