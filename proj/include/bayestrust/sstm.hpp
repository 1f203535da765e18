#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bayestrust/filter.hpp"
#include "bayestrust/observation.hpp"
#include "bayestrust/particles.hpp"
#include "bayestrust/random.hpp"
#include "bayestrust/trust_types.hpp"

namespace bayestrust::sstm {

/// State-space trust model parameters.
struct SstmConfig {
  double forgetting = 0.85;       ///< trust decay in the transition mean, [0, 1]
  double process_variance = 0.01; ///< Q, variance of the transition noise
  double sensitivity = 0.2;       ///< likelihood scale, (0, 1)
  double tolerance_r = 1.0;       ///< largest reading gap that still counts as agreement
  std::size_t particle_count = 500;
  std::size_t ipf_max_iter = 20;
  double ipf_epsilon = 1e-3;

  /// Throws InvalidParameter naming the offending field.
  void validate() const;
};

/// Trust of the trustee (index 0) and its neighbors, or of every committee member.
struct CommitteeState {
  std::vector<TrustScalar> trusts;
};

/// One exact draw of TN(forgetting * previous, Q) on [0, 1].
TrustScalar transition_sample(TrustScalar previous, const SstmConfig& cfg, RandomStream& rng);

/// 1 iff |yi - y0| < r (strict).
int vote(double y0, double yi, double tolerance_r);

/// Fraction of neighbors that vote for the trustee. Empty neighbors throw InvalidObservation.
double voting_value(const VotingVector& obs, double tolerance_r);

/// Votes weighted by neighbor trust. Returns nullopt (no information) when the
/// neighbor trusts sum to zero.
std::optional<double> weighted_voting_value(const VotingVector& obs, std::span<const double> neighbor_trusts,
                                            double tolerance_r);

/// exp(-|theta - V| / sensitivity); a weight function, not a normalized density over readings.
double voting_likelihood(double theta, double voting_value, double sensitivity);

/// Neighbor-voting likelihood: V from the observation's votes.
class VotingLikelihood final : public LikelihoodModel {
 public:
  VotingLikelihood(double sensitivity, double tolerance_r);
  double log_likelihood(std::span<const double> particle, const Observation& obs) const override;

 private:
  double sensitivity_;
  double tolerance_r_;
};

/// Voting likelihood around an already computed voting value; ignores the observation.
class FixedVoteLikelihood final : public LikelihoodModel {
 public:
  FixedVoteLikelihood(double voting_value, double sensitivity);
  double log_likelihood(std::span<const double> particle, const Observation& obs) const override;

 private:
  double voting_value_;
  double sensitivity_;
};

/// One filter step with truncated-normal dynamics and the plain voting likelihood.
ParticleSet sstm_step(const ParticleSet& prior, const VotingVector& obs, const SstmConfig& cfg,
                      const RandomStream& rng);

struct IpfResult {
  CommitteeState state;
  std::vector<ParticleSet> posteriors;  ///< resampled per-member posteriors, to carry to the next step
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Iterative particle filter over a virtual committee.
///
/// `readings[j]` is member j's reading at this time step and `priors[j]` its
/// trust posterior from the previous step. Trusts start at 1. Each sweep takes
/// every member in turn as the trustee, computes its trust-weighted voting
/// value from the others' current trusts and runs one filter iteration from
/// its prior; the member's trust becomes the weighted-sample mean. Sweeps
/// repeat until the largest change is below ipf_epsilon or ipf_max_iter is
/// reached. Members are visited in id order and member j draws from
/// rng.fork(member_ids[j]) in every sweep, so listing the committee in another
/// order permutes the output and changes nothing else. Ids must be distinct.
IpfResult ipf_estimate(std::span<const double> readings, std::span<const ParticleSet> priors,
                       std::span<const std::string> member_ids, const SstmConfig& cfg, const RandomStream& rng);

/// Single time step from uniform priors (particle_count particles), members keyed by index.
CommitteeState ipf_estimate(std::span<const double> readings, const SstmConfig& cfg, const RandomStream& rng);

}  // namespace bayestrust::sstm
