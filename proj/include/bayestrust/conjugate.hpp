#pragma once

#include "bayestrust/observation.hpp"
#include "bayestrust/trust_types.hpp"

namespace bayestrust {

/// B(a, b) -> B(a + m, b + n - m). Throws InvalidObservation when m > n.
BetaParams bdtm_update(const BetaParams& prior, const BinaryBatch& obs);

/// a_i -> a_i + counts_i. Throws InvalidObservation on a category-count mismatch.
DirichletParams ddtm_update(const DirichletParams& prior, const CategoricalBatch& obs);

/// Transitive update: likelihood theta^(t m) (1 - theta)^(t (n - m)) with t the
/// trustor's trust in the advisor, i.e. B(a + t m, b + t (n - m)).
BetaParams advisor_update(const BetaParams& prior, const AdvisorReport& report);

/// Shrink accumulated evidence toward the base prior: e -> lambda * e.
/// lambda = 1 keeps everything, lambda = 0 resets to the prior.
BetaParams discount_evidence(const BetaParams& params, double lambda);
DirichletParams discount_evidence(const DirichletParams& params, double lambda);

TrustScalar posterior_mean(const BetaParams& params);
TrustSimplex posterior_mean(const DirichletParams& params);

double posterior_variance(const BetaParams& params);
/// Marginal variance of each Dirichlet component.
std::vector<double> posterior_variance(const DirichletParams& params);

}  // namespace bayestrust
