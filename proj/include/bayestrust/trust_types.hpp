#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bayestrust {

/// Probability-valued trust in [0, 1].
class TrustScalar {
 public:
  /// Throws InvalidParameter outside [0, 1] or for NaN.
  explicit TrustScalar(double value);

  [[nodiscard]] double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(TrustScalar, TrustScalar) = default;

 private:
  double value_;
};

/// Probability vector over b >= 2 outcome types.
class TrustSimplex {
 public:
  /// Components must each lie in [0, 1] and sum to 1 within 1e-9.
  explicit TrustSimplex(std::vector<double> values);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_.at(i); }

 private:
  std::vector<double> values_;
};

/// Beta posterior kept as base prior plus accumulated evidence.
///
/// alpha() = prior_alpha() + success_evidence(); integer batches therefore
/// accumulate exactly and splitting a batch never changes the result.
class BetaParams {
 public:
  /// Fresh state: the arguments are both the current and the base prior.
  BetaParams(double alpha, double beta);
  /// Explicit state; evidence is alpha - prior_alpha, which must be >= 0.
  BetaParams(double alpha, double beta, double prior_alpha, double prior_beta);

  [[nodiscard]] static BetaParams from_evidence(double prior_alpha, double prior_beta, double success_evidence,
                                                double failure_evidence);

  [[nodiscard]] double alpha() const noexcept { return prior_alpha_ + success_; }
  [[nodiscard]] double beta() const noexcept { return prior_beta_ + failure_; }
  [[nodiscard]] double prior_alpha() const noexcept { return prior_alpha_; }
  [[nodiscard]] double prior_beta() const noexcept { return prior_beta_; }
  [[nodiscard]] double success_evidence() const noexcept { return success_; }
  [[nodiscard]] double failure_evidence() const noexcept { return failure_; }

  friend bool operator==(const BetaParams&, const BetaParams&) = default;

 private:
  BetaParams() = default;
  void validate() const;

  double prior_alpha_ = 1.0;
  double prior_beta_ = 1.0;
  double success_ = 0.0;
  double failure_ = 0.0;
};

/// Dirichlet posterior over b >= 2 categories; same prior+evidence layout as BetaParams.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alphas);
  DirichletParams(std::vector<double> alphas, std::vector<double> prior_alphas);

  [[nodiscard]] static DirichletParams from_evidence(std::vector<double> prior_alphas, std::vector<double> evidence);

  [[nodiscard]] std::size_t size() const noexcept { return prior_.size(); }
  [[nodiscard]] double alpha(std::size_t i) const { return prior_.at(i) + evidence_.at(i); }
  [[nodiscard]] std::vector<double> alphas() const;
  [[nodiscard]] std::span<const double> prior_alphas() const noexcept { return prior_; }
  [[nodiscard]] std::span<const double> evidence() const noexcept { return evidence_; }
  [[nodiscard]] double total() const;

  friend bool operator==(const DirichletParams&, const DirichletParams&) = default;

 private:
  DirichletParams() = default;
  void validate() const;

  std::vector<double> prior_;
  std::vector<double> evidence_;
};

}  // namespace bayestrust
