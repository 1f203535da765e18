#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bayestrust/random.hpp"
#include "bayestrust/trust_types.hpp"

namespace bayestrust {

/// Weighted sample approximation of a trust posterior.
///
/// Particles are fixed-length vectors (dimension 1 for scalar trust) stored
/// contiguously; every component lies in [0, 1] and the weights sum to 1.
class ParticleSet {
 public:
  /// Uniform weights 1/N.
  ParticleSet(std::vector<double> values, std::size_t dimension = 1);
  /// Weights must be non-negative and sum to 1 within 1e-9.
  ParticleSet(std::vector<double> values, std::vector<double> weights, std::size_t dimension = 1);

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] std::span<const double> particle(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * dimension_, dimension_);
  }
  /// Scalar particle value; requires dimension 1.
  [[nodiscard]] double value(std::size_t i) const { return values_[i * dimension_]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }

  friend bool operator==(const ParticleSet&, const ParticleSet&) = default;

 private:
  void validate() const;

  std::vector<double> values_;
  std::vector<double> weights_;
  std::size_t dimension_;
};

/// Weighted mean of a scalar set (dimension 1).
TrustScalar estimate_mean(const ParticleSet& ps);
/// Componentwise weighted mean.
std::vector<double> estimate_component_means(const ParticleSet& ps);
/// Weighted variance of a scalar set.
double estimate_variance(const ParticleSet& ps);
/// 1 / sum(w^2), in [1, N].
double effective_sample_size(const ParticleSet& ps);

/// N equally weighted draws from a Beta prior.
ParticleSet sample_beta(const BetaParams& prior, std::size_t count, const RandomStream& rng);
/// N equally weighted draws from a Dirichlet prior (dimension = categories).
ParticleSet sample_dirichlet(const DirichletParams& prior, std::size_t count, const RandomStream& rng);
/// N identical particles at `value`.
ParticleSet point_mass(std::span<const double> value, std::size_t count);
ParticleSet point_mass(double value, std::size_t count);

}  // namespace bayestrust
