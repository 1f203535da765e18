#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>

#include "bayestrust/particles.hpp"
#include "bayestrust/trust_types.hpp"

namespace bayestrust {

/// Utility over trust, either scalar theta or a probability vector.
///
/// A scalar utility accepts dimension-1 points; a vector utility evaluated on a
/// scalar theta receives (theta, 1 - theta).
class UtilityFunction {
 public:
  using Scalar = std::function<double(double)>;
  using Vector = std::function<double(std::span<const double>)>;

  UtilityFunction(Scalar f);  // NOLINT(google-explicit-constructor)
  UtilityFunction(Vector f);  // NOLINT(google-explicit-constructor)

  double operator()(double theta) const;
  double operator()(std::span<const double> theta) const;

 private:
  std::variant<Scalar, Vector> fn_;
};

using Posterior = std::variant<BetaParams, DirichletParams, ParticleSet>;

/// Nodes per dimension used for conjugate posteriors (Beta case).
inline constexpr std::size_t kQuadratureNodes = 256;

/// EU = integral of u against the posterior. Conjugate posteriors use
/// Gauss-Jacobi quadrature (exact for polynomial u up to degree 511 per
/// dimension); particle sets use the weighted sample average. Non-finite
/// utility values throw EvaluationError.
double expected_utility(const BetaParams& posterior, const UtilityFunction& u);
double expected_utility(const DirichletParams& posterior, const UtilityFunction& u);
double expected_utility(const ParticleSet& posterior, const UtilityFunction& u);
double expected_utility(const Posterior& posterior, const UtilityFunction& u);

struct Candidate {
  Posterior posterior;
  UtilityFunction utility;
};

/// Index of the candidate with the largest expected utility; ties go to the lowest index.
std::size_t choose_action(std::span<const Candidate> candidates);

}  // namespace bayestrust
