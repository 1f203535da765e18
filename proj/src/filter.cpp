#include "bayestrust/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bayestrust/error.hpp"
#include "bayestrust/truncated_normal.hpp"

namespace bayestrust {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// a * log(x) with 0 * log(0) = 0.
double xlogy(double a, double x) {
  if (a == 0.0) return 0.0;
  return x > 0.0 ? a * std::log(x) : kNegInf;
}

double binomial_log(double theta, double successes, double failures) {
  return xlogy(successes, theta) + xlogy(failures, 1.0 - theta);
}

void require_scalar(std::span<const double> particle) {
  if (particle.size() != 1) throw InvalidObservation("binomial likelihood needs scalar particles");
}

}  // namespace

double LikelihoodModel::operator()(std::span<const double> particle, const Observation& obs) const {
  return std::exp(log_likelihood(particle, obs));
}

void StaticTransition::sample(std::span<const double> previous, std::span<double> next, RandomStream&) const {
  std::copy(previous.begin(), previous.end(), next.begin());
}

double StaticTransition::density(std::span<const double> next, std::span<const double> previous) const {
  return std::equal(next.begin(), next.end(), previous.begin(), previous.end()) ? 1.0 : 0.0;
}

TruncatedNormalTransition::TruncatedNormalTransition(double forgetting, double variance)
    : forgetting_(forgetting), variance_(variance), sd_(std::sqrt(variance)) {
  if (!(forgetting >= 0.0 && forgetting <= 1.0)) throw InvalidParameter("forgetting factor outside [0, 1]");
  if (!(variance > 0.0) || !std::isfinite(variance)) throw InvalidParameter("process variance must be positive");
}

void TruncatedNormalTransition::sample(std::span<const double> previous, std::span<double> next,
                                       RandomStream& rng) const {
  for (std::size_t d = 0; d < previous.size(); ++d) {
    next[d] = sample_truncated_normal(forgetting_ * previous[d], sd_, 0.0, 1.0, rng);
  }
}

double TruncatedNormalTransition::density(std::span<const double> next, std::span<const double> previous) const {
  double p = 1.0;
  for (std::size_t d = 0; d < previous.size(); ++d) {
    p *= truncated_normal_density(next[d], forgetting_ * previous[d], sd_, 0.0, 1.0);
  }
  return p;
}

double BinomialLikelihood::log_likelihood(std::span<const double> particle, const Observation& obs) const {
  require_scalar(particle);
  const double theta = particle[0];
  if (const auto* b = std::get_if<BinaryBatch>(&obs)) {
    if (b->m > b->n) throw InvalidObservation("binary batch has more successes than trials");
    return binomial_log(theta, static_cast<double>(b->m), static_cast<double>(b->n - b->m));
  }
  if (const auto* r = std::get_if<AdvisorReport>(&obs)) {
    if (r->m > r->n) throw InvalidObservation("advisor report has more successes than trials");
    const double t = r->advisor_trust;
    return binomial_log(theta, t * static_cast<double>(r->m), t * static_cast<double>(r->n - r->m));
  }
  if (const auto* o = std::get_if<OpinionReport>(&obs)) {
    const double w = o->opinion.evidence_weight();
    return binomial_log(theta, w * o->opinion.belief(), w * o->opinion.disbelief());
  }
  throw InvalidObservation("binomial likelihood cannot use a " + std::string(observation_kind(obs)) +
                           " observation");
}

double MultinomialLikelihood::log_likelihood(std::span<const double> particle, const Observation& obs) const {
  const auto* c = std::get_if<CategoricalBatch>(&obs);
  if (c == nullptr) {
    throw InvalidObservation("multinomial likelihood cannot use a " + std::string(observation_kind(obs)) +
                             " observation");
  }
  if (c->counts.size() != particle.size()) {
    throw InvalidObservation("categorical batch length does not match particle dimension");
  }
  double ll = 0.0;
  for (std::size_t k = 0; k < particle.size(); ++k) ll += xlogy(static_cast<double>(c->counts[k]), particle[k]);
  return ll;
}

TemperedLikelihood::TemperedLikelihood(std::shared_ptr<const LikelihoodModel> base, double exponent)
    : base_(std::move(base)), exponent_(exponent) {
  if (!base_) throw InvalidParameter("tempered likelihood needs a base model");
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) throw InvalidParameter("tempering exponent must be >= 0");
}

double TemperedLikelihood::log_likelihood(std::span<const double> particle, const Observation& obs) const {
  if (exponent_ == 0.0) return 0.0;
  return exponent_ * base_->log_likelihood(particle, obs);
}

ParticleSet predict(const ParticleSet& prior, const TransitionModel& transition, const RandomStream& rng) {
  const std::size_t n = prior.size();
  const std::size_t dim = prior.dimension();
  std::vector<double> values(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto stream = rng.fork(i);
    std::span<double> out(values.data() + i * dim, dim);
    transition.sample(prior.particle(i), out, stream);
    for (double v : out) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::logic_error("transition produced a sample outside [0, 1]");
    }
  }
  return ParticleSet(std::move(values), {prior.weights().begin(), prior.weights().end()}, dim);
}

ParticleSet weight(const ParticleSet& predicted, const LikelihoodModel& likelihood, const Observation& obs) {
  const std::size_t n = predicted.size();
  std::vector<double> logw(n);
  double top = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double ll = likelihood.log_likelihood(predicted.particle(i), obs);
    if (std::isnan(ll)) throw std::logic_error("likelihood evaluated to NaN");
    const double w = predicted.weight(i);
    logw[i] = w > 0.0 ? std::log(w) + ll : kNegInf;
    top = std::max(top, logw[i]);
  }
  if (!std::isfinite(top)) {
    throw DegenerateUpdate("every particle has zero likelihood for this " + std::string(observation_kind(obs)) +
                           " observation");
  }
  double total = 0.0;
  for (double& l : logw) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logw) l /= total;
  return ParticleSet({predicted.values().begin(), predicted.values().end()}, std::move(logw),
                     predicted.dimension());
}

ParticleSet resample(const ParticleSet& weighted, const RandomStream& rng, ResamplingScheme scheme) {
  const std::size_t n = weighted.size();
  const std::size_t dim = weighted.dimension();
  const auto w = weighted.weights();
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += w[i];
    cumulative[i] = acc;
  }
  auto stream = rng;
  std::vector<std::size_t> picks(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  if (scheme == ResamplingScheme::systematic) {
    const double offset = stream.uniform();
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(i) + offset) * inv_n * acc;
      while (j + 1 < n && cumulative[j] < u) ++j;
      picks[i] = j;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double u = stream.uniform() * acc;
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
      picks[i] = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), n - 1);
    }
  }
  std::vector<double> values;
  values.reserve(n * dim);
  for (std::size_t i : picks) {
    const auto p = weighted.particle(i);
    values.insert(values.end(), p.begin(), p.end());
  }
  return ParticleSet(std::move(values), dim);
}

StepOutcome step_detailed(const ParticleSet& prior, const TransitionModel& transition,
                          const LikelihoodModel& likelihood, const Observation& obs, const RandomStream& rng,
                          const FilterOptions& options) {
  auto weighted = weight(predict(prior, transition, rng.fork(0)), likelihood, obs);
  const double ess = effective_sample_size(weighted);
  const bool do_resample =
      !options.ess_threshold || ess / static_cast<double>(weighted.size()) < *options.ess_threshold;
  if (!do_resample) return StepOutcome{weighted, weighted, ess, false};
  auto posterior = resample(weighted, rng.fork(1), options.scheme);
  return StepOutcome{std::move(weighted), std::move(posterior), ess, true};
}

ParticleSet step(const ParticleSet& prior, const TransitionModel& transition, const LikelihoodModel& likelihood,
                 const Observation& obs, const RandomStream& rng, const FilterOptions& options) {
  return step_detailed(prior, transition, likelihood, obs, rng, options).posterior;
}

}  // namespace bayestrust
