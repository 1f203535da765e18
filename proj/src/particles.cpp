#include "bayestrust/particles.hpp"

#include <algorithm>
#include <cmath>

#include "bayestrust/error.hpp"

namespace bayestrust {

ParticleSet::ParticleSet(std::vector<double> values, std::size_t dimension)
    : values_(std::move(values)), dimension_(dimension) {
  if (dimension_ == 0) throw InvalidParameter("particle dimension must be positive");
  const std::size_t n = values_.size() / dimension_;
  weights_.assign(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  validate();
}

ParticleSet::ParticleSet(std::vector<double> values, std::vector<double> weights, std::size_t dimension)
    : values_(std::move(values)), weights_(std::move(weights)), dimension_(dimension) {
  if (dimension_ == 0) throw InvalidParameter("particle dimension must be positive");
  validate();
}

void ParticleSet::validate() const {
  if (weights_.empty()) throw InvalidParameter("particle set needs at least one particle");
  if (values_.size() != weights_.size() * dimension_) {
    throw InvalidParameter("particle values do not match weight count times dimension");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidParameter("particle weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidParameter("particle weights must sum to 1");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidParameter("particle component outside [0, 1]");
  }
}

TrustScalar estimate_mean(const ParticleSet& ps) {
  if (ps.dimension() != 1) throw InvalidInput("estimate_mean needs scalar particles");
  double mean = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) mean += ps.weight(i) * ps.value(i);
  return TrustScalar(std::clamp(mean, 0.0, 1.0));
}

std::vector<double> estimate_component_means(const ParticleSet& ps) {
  std::vector<double> mean(ps.dimension(), 0.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = ps.particle(i);
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += ps.weight(i) * p[d];
  }
  for (double& m : mean) m = std::clamp(m, 0.0, 1.0);
  return mean;
}

double estimate_variance(const ParticleSet& ps) {
  const double mean = estimate_mean(ps);
  double var = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double d = ps.value(i) - mean;
    var += ps.weight(i) * d * d;
  }
  return var;
}

double effective_sample_size(const ParticleSet& ps) {
  double sq = 0.0;
  for (double w : ps.weights()) sq += w * w;
  return std::clamp(1.0 / sq, 1.0, static_cast<double>(ps.size()));
}

ParticleSet sample_beta(const BetaParams& prior, std::size_t count, const RandomStream& rng) {
  if (count == 0) throw InvalidParameter("particle count must be positive");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto s = rng.fork(i);
    const double x = s.gamma(prior.alpha());
    const double y = s.gamma(prior.beta());
    values[i] = x + y > 0.0 ? std::clamp(x / (x + y), 0.0, 1.0) : 0.5;
  }
  return ParticleSet(std::move(values));
}

ParticleSet sample_dirichlet(const DirichletParams& prior, std::size_t count, const RandomStream& rng) {
  if (count == 0) throw InvalidParameter("particle count must be positive");
  const std::size_t b = prior.size();
  const auto alphas = prior.alphas();
  std::vector<double> values(count * b);
  for (std::size_t i = 0; i < count; ++i) {
    auto s = rng.fork(i);
    double total = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
      values[i * b + k] = s.gamma(alphas[k]);
      total += values[i * b + k];
    }
    for (std::size_t k = 0; k < b; ++k) {
      values[i * b + k] = total > 0.0 ? std::clamp(values[i * b + k] / total, 0.0, 1.0) : 1.0 / static_cast<double>(b);
    }
  }
  return ParticleSet(std::move(values), b);
}

ParticleSet point_mass(std::span<const double> value, std::size_t count) {
  if (count == 0) throw InvalidParameter("particle count must be positive");
  std::vector<double> values;
  values.reserve(count * value.size());
  for (std::size_t i = 0; i < count; ++i) values.insert(values.end(), value.begin(), value.end());
  return ParticleSet(std::move(values), value.size());
}

ParticleSet point_mass(double value, std::size_t count) { return point_mass(std::span<const double>(&value, 1), count); }

}  // namespace bayestrust
