#include "bayestrust/sstm.hpp"

#include <algorithm>
#include <cmath>

#include "bayestrust/error.hpp"
#include "bayestrust/truncated_normal.hpp"

namespace bayestrust::sstm {

void SstmConfig::validate() const {
  if (!(forgetting >= 0.0 && forgetting <= 1.0)) throw InvalidParameter("forgetting must lie in [0, 1]");
  if (!(process_variance > 0.0) || !std::isfinite(process_variance)) {
    throw InvalidParameter("process_variance must be positive");
  }
  if (!(sensitivity > 0.0 && sensitivity < 1.0)) throw InvalidParameter("sensitivity must lie in (0, 1)");
  if (!(tolerance_r > 0.0) || !std::isfinite(tolerance_r)) throw InvalidParameter("tolerance_r must be positive");
  if (particle_count == 0) throw InvalidParameter("particle_count must be positive");
  if (ipf_max_iter == 0) throw InvalidParameter("ipf_max_iter must be positive");
  if (!(ipf_epsilon > 0.0)) throw InvalidParameter("ipf_epsilon must be positive");
}

TrustScalar transition_sample(TrustScalar previous, const SstmConfig& cfg, RandomStream& rng) {
  return TrustScalar(
      sample_truncated_normal(cfg.forgetting * previous.value(), std::sqrt(cfg.process_variance), 0.0, 1.0, rng));
}

int vote(double y0, double yi, double tolerance_r) { return std::abs(yi - y0) < tolerance_r ? 1 : 0; }

double voting_value(const VotingVector& obs, double tolerance_r) {
  if (obs.neighbors.empty()) throw InvalidObservation("voting vector has no neighbor readings");
  int votes = 0;
  for (double y : obs.neighbors) votes += vote(obs.y0, y, tolerance_r);
  return static_cast<double>(votes) / static_cast<double>(obs.neighbors.size());
}

std::optional<double> weighted_voting_value(const VotingVector& obs, std::span<const double> neighbor_trusts,
                                            double tolerance_r) {
  if (obs.neighbors.empty()) throw InvalidObservation("voting vector has no neighbor readings");
  if (neighbor_trusts.size() != obs.neighbors.size()) {
    throw InvalidObservation("neighbor trusts and readings differ in length");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < obs.neighbors.size(); ++i) {
    num += neighbor_trusts[i] * vote(obs.y0, obs.neighbors[i], tolerance_r);
    den += neighbor_trusts[i];
  }
  if (den <= 0.0) return std::nullopt;
  return std::clamp(num / den, 0.0, 1.0);
}

double voting_likelihood(double theta, double voting_value, double sensitivity) {
  return std::exp(-std::abs(theta - voting_value) / sensitivity);
}

VotingLikelihood::VotingLikelihood(double sensitivity, double tolerance_r)
    : sensitivity_(sensitivity), tolerance_r_(tolerance_r) {
  if (!(sensitivity > 0.0 && sensitivity < 1.0)) throw InvalidParameter("sensitivity must lie in (0, 1)");
  if (!(tolerance_r > 0.0)) throw InvalidParameter("tolerance_r must be positive");
}

double VotingLikelihood::log_likelihood(std::span<const double> particle, const Observation& obs) const {
  const auto* v = std::get_if<VotingVector>(&obs);
  if (v == nullptr) {
    throw InvalidObservation("voting likelihood cannot use a " + std::string(observation_kind(obs)) +
                             " observation");
  }
  return -std::abs(particle[0] - voting_value(*v, tolerance_r_)) / sensitivity_;
}

FixedVoteLikelihood::FixedVoteLikelihood(double voting_value, double sensitivity)
    : voting_value_(voting_value), sensitivity_(sensitivity) {
  if (!(sensitivity > 0.0 && sensitivity < 1.0)) throw InvalidParameter("sensitivity must lie in (0, 1)");
}

double FixedVoteLikelihood::log_likelihood(std::span<const double> particle, const Observation&) const {
  return -std::abs(particle[0] - voting_value_) / sensitivity_;
}

ParticleSet sstm_step(const ParticleSet& prior, const VotingVector& obs, const SstmConfig& cfg,
                      const RandomStream& rng) {
  cfg.validate();
  const TruncatedNormalTransition transition(cfg.forgetting, cfg.process_variance);
  const VotingLikelihood likelihood(cfg.sensitivity, cfg.tolerance_r);
  return step(prior, transition, likelihood, Observation{obs}, rng);
}

namespace {

// Gauss-Seidel sweeps over members already arranged in canonical order.
IpfResult ipf_sorted(const std::vector<double>& readings, const std::vector<const ParticleSet*>& priors,
                     const std::vector<const std::string*>& ids, const SstmConfig& cfg, const RandomStream& rng) {
  const std::size_t n = readings.size();
  const TruncatedNormalTransition transition(cfg.forgetting, cfg.process_variance);
  const ConstantLikelihood no_information;

  std::vector<double> trusts(n, 1.0);
  std::vector<ParticleSet> posteriors;
  posteriors.reserve(n);
  for (const auto* p : priors) posteriors.push_back(*p);
  IpfResult result;
  VotingVector obs;
  obs.neighbors.resize(n - 1);
  std::vector<double> neighbor_trusts(n - 1);

  for (std::size_t sweep = 0; sweep < cfg.ipf_max_iter; ++sweep) {
    double largest_change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      obs.y0 = readings[j];
      for (std::size_t i = 0, k = 0; i < n; ++i) {
        if (i == j) continue;
        obs.neighbors[k] = readings[i];
        neighbor_trusts[k] = trusts[i];
        ++k;
      }
      const auto v = weighted_voting_value(obs, neighbor_trusts, cfg.tolerance_r);
      const Observation wrapped{obs};
      const auto member_rng = rng.fork(*ids[j]);
      StepOutcome outcome = v ? step_detailed(*priors[j], transition, FixedVoteLikelihood(*v, cfg.sensitivity),
                                              wrapped, member_rng)
                              : step_detailed(*priors[j], transition, no_information, wrapped, member_rng);
      const double updated = estimate_mean(outcome.weighted);
      largest_change = std::max(largest_change, std::abs(updated - trusts[j]));
      trusts[j] = updated;
      posteriors[j] = std::move(outcome.posterior);
    }
    result.sweeps = sweep + 1;
    if (largest_change < cfg.ipf_epsilon) {
      result.converged = true;
      break;
    }
  }
  result.state.trusts.reserve(n);
  for (double t : trusts) result.state.trusts.emplace_back(t);
  result.posteriors = std::move(posteriors);
  return result;
}

}  // namespace

IpfResult ipf_estimate(std::span<const double> readings, std::span<const ParticleSet> priors,
                       std::span<const std::string> member_ids, const SstmConfig& cfg, const RandomStream& rng) {
  cfg.validate();
  const std::size_t n = readings.size();
  if (n < 2) throw InvalidInput("committee needs at least 2 members");
  if (priors.size() != n || member_ids.size() != n) {
    throw InvalidInput("committee readings, priors and member ids differ in length");
  }
  // Members are visited in id order, so the result does not depend on how the
  // caller happened to list them.
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return member_ids[a] < member_ids[b]; });
  for (std::size_t j = 1; j < n; ++j) {
    if (member_ids[order[j]] == member_ids[order[j - 1]]) {
      throw InvalidInput("duplicate committee member id '" + member_ids[order[j]] + "'");
    }
  }
  std::vector<double> sorted_readings(n);
  std::vector<const ParticleSet*> sorted_priors(n);
  std::vector<const std::string*> sorted_ids(n);
  for (std::size_t j = 0; j < n; ++j) {
    sorted_readings[j] = readings[order[j]];
    sorted_priors[j] = &priors[order[j]];
    sorted_ids[j] = &member_ids[order[j]];
  }
  IpfResult sorted = ipf_sorted(sorted_readings, sorted_priors, sorted_ids, cfg, rng);

  IpfResult result;
  result.sweeps = sorted.sweeps;
  result.converged = sorted.converged;
  result.state.trusts.assign(n, TrustScalar(0.0));
  result.posteriors.assign(n, sorted.posteriors.front());
  for (std::size_t j = 0; j < n; ++j) {
    result.state.trusts[order[j]] = sorted.state.trusts[j];
    result.posteriors[order[j]] = std::move(sorted.posteriors[j]);
  }
  return result;
}

CommitteeState ipf_estimate(std::span<const double> readings, const SstmConfig& cfg, const RandomStream& rng) {
  cfg.validate();
  std::vector<ParticleSet> priors;
  std::vector<std::string> ids;
  priors.reserve(readings.size());
  for (std::size_t j = 0; j < readings.size(); ++j) {
    ids.push_back(std::to_string(j));
    priors.push_back(sample_beta(BetaParams(1.0, 1.0), cfg.particle_count, rng.fork("prior").fork(ids.back())));
  }
  return ipf_estimate(readings, priors, ids, cfg, rng).state;
}

}  // namespace bayestrust::sstm
