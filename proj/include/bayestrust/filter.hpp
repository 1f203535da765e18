#pragma once

#include <memory>
#include <optional>
#include <span>

#include "bayestrust/observation.hpp"
#include "bayestrust/particles.hpp"
#include "bayestrust/random.hpp"

namespace bayestrust {

/// theta_k = f(theta_{k-1}, v_{k-1}): a sampler plus its density up to a constant.
class TransitionModel {
 public:
  virtual ~TransitionModel() = default;
  /// Writes one draw of theta_k given theta_{k-1}. Must stay inside [0, 1].
  virtual void sample(std::span<const double> previous, std::span<double> next, RandomStream& rng) const = 0;
  virtual double density(std::span<const double> next, std::span<const double> previous) const = 0;
};

/// p(y_k | theta_k) up to a theta-independent factor, evaluated in log space.
class LikelihoodModel {
 public:
  virtual ~LikelihoodModel() = default;
  /// -infinity encodes zero likelihood. Unsupported observation kinds throw InvalidObservation.
  virtual double log_likelihood(std::span<const double> particle, const Observation& obs) const = 0;
  double operator()(std::span<const double> particle, const Observation& obs) const;
};

/// theta_k = theta_{k-1}; turns the filter into a static-parameter posterior.
class StaticTransition final : public TransitionModel {
 public:
  void sample(std::span<const double> previous, std::span<double> next, RandomStream& rng) const override;
  double density(std::span<const double> next, std::span<const double> previous) const override;
};

/// theta_k ~ TN(forgetting * theta_{k-1}, variance) on [0, 1], componentwise.
class TruncatedNormalTransition final : public TransitionModel {
 public:
  TruncatedNormalTransition(double forgetting, double variance);
  void sample(std::span<const double> previous, std::span<double> next, RandomStream& rng) const override;
  double density(std::span<const double> next, std::span<const double> previous) const override;

  [[nodiscard]] double forgetting() const noexcept { return forgetting_; }
  [[nodiscard]] double variance() const noexcept { return variance_; }

 private:
  double forgetting_;
  double variance_;
  double sd_;
};

class ConstantLikelihood final : public LikelihoodModel {
 public:
  double log_likelihood(std::span<const double>, const Observation&) const override { return 0.0; }
};

/// theta^m (1 - theta)^(n - m) for binary batches. Advisor reports scale both
/// exponents by the advisor trust; opinion reports use belief and disbelief
/// mass (w b, w d) as fractional successes and failures.
class BinomialLikelihood final : public LikelihoodModel {
 public:
  double log_likelihood(std::span<const double> particle, const Observation& obs) const override;
};

/// prod_k theta_k^{c_k} for categorical batches over simplex-valued particles.
class MultinomialLikelihood final : public LikelihoodModel {
 public:
  double log_likelihood(std::span<const double> particle, const Observation& obs) const override;
};

/// base^exponent: down-weights an observation (e.g. by its age) without changing its form.
class TemperedLikelihood final : public LikelihoodModel {
 public:
  TemperedLikelihood(std::shared_ptr<const LikelihoodModel> base, double exponent);
  double log_likelihood(std::span<const double> particle, const Observation& obs) const override;

 private:
  std::shared_ptr<const LikelihoodModel> base_;
  double exponent_;
};

enum class ResamplingScheme { systematic, multinomial };

struct FilterOptions {
  ResamplingScheme scheme = ResamplingScheme::systematic;
  /// Resample only when ESS / N falls below this; unset resamples every step.
  std::optional<double> ess_threshold;
};

/// Advance every particle by one transition draw. Particle i uses rng.fork(i).
ParticleSet predict(const ParticleSet& prior, const TransitionModel& transition, const RandomStream& rng);

/// Multiply weights by the likelihood and renormalize. Throws DegenerateUpdate
/// when no particle has positive likelihood.
ParticleSet weight(const ParticleSet& predicted, const LikelihoodModel& likelihood, const Observation& obs);

/// N draws with replacement proportional to weight; output weights are 1/N.
ParticleSet resample(const ParticleSet& weighted, const RandomStream& rng,
                     ResamplingScheme scheme = ResamplingScheme::systematic);

/// Both stages of a filter step, for callers that need the pre-resampling set.
struct StepOutcome {
  ParticleSet weighted;
  ParticleSet posterior;
  double ess;
  bool resampled;
};

/// predict -> weight -> resample. Prediction draws from rng.fork(0), resampling from rng.fork(1).
StepOutcome step_detailed(const ParticleSet& prior, const TransitionModel& transition,
                          const LikelihoodModel& likelihood, const Observation& obs, const RandomStream& rng,
                          const FilterOptions& options = {});

ParticleSet step(const ParticleSet& prior, const TransitionModel& transition, const LikelihoodModel& likelihood,
                 const Observation& obs, const RandomStream& rng, const FilterOptions& options = {});

}  // namespace bayestrust
