#include "bayestrust/conjugate.hpp"

#include <algorithm>
#include <string>

#include "bayestrust/error.hpp"

namespace bayestrust {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidParameter("forgetting factor " + std::to_string(lambda) + " outside [0, 1]");
  }
}

}  // namespace

BetaParams bdtm_update(const BetaParams& prior, const BinaryBatch& obs) {
  if (obs.m > obs.n) throw InvalidObservation("binary batch has more successes than trials");
  return BetaParams::from_evidence(prior.prior_alpha(), prior.prior_beta(),
                                   prior.success_evidence() + static_cast<double>(obs.m),
                                   prior.failure_evidence() + static_cast<double>(obs.n - obs.m));
}

DirichletParams ddtm_update(const DirichletParams& prior, const CategoricalBatch& obs) {
  if (obs.counts.size() != prior.size()) {
    throw InvalidObservation("categorical batch has " + std::to_string(obs.counts.size()) +
                             " categories, model has " + std::to_string(prior.size()));
  }
  std::vector<double> evidence(prior.evidence().begin(), prior.evidence().end());
  for (std::size_t i = 0; i < evidence.size(); ++i) evidence[i] += static_cast<double>(obs.counts[i]);
  return DirichletParams::from_evidence({prior.prior_alphas().begin(), prior.prior_alphas().end()},
                                        std::move(evidence));
}

BetaParams advisor_update(const BetaParams& prior, const AdvisorReport& report) {
  if (report.m > report.n) throw InvalidObservation("advisor report has more successes than trials");
  const double t = report.advisor_trust;
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidObservation("advisor trust outside [0, 1]");
  return BetaParams::from_evidence(prior.prior_alpha(), prior.prior_beta(),
                                   prior.success_evidence() + t * static_cast<double>(report.m),
                                   prior.failure_evidence() + t * static_cast<double>(report.n - report.m));
}

BetaParams discount_evidence(const BetaParams& params, double lambda) {
  check_lambda(lambda);
  return BetaParams::from_evidence(params.prior_alpha(), params.prior_beta(), lambda * params.success_evidence(),
                                   lambda * params.failure_evidence());
}

DirichletParams discount_evidence(const DirichletParams& params, double lambda) {
  check_lambda(lambda);
  std::vector<double> evidence(params.evidence().begin(), params.evidence().end());
  for (double& e : evidence) e *= lambda;
  return DirichletParams::from_evidence({params.prior_alphas().begin(), params.prior_alphas().end()},
                                        std::move(evidence));
}

TrustScalar posterior_mean(const BetaParams& params) {
  const double a = params.alpha();
  return TrustScalar(std::clamp(a / (a + params.beta()), 0.0, 1.0));
}

TrustSimplex posterior_mean(const DirichletParams& params) {
  auto alphas = params.alphas();
  const double total = params.total();
  for (double& a : alphas) a /= total;
  return TrustSimplex(std::move(alphas));
}

double posterior_variance(const BetaParams& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double s = a + b;
  return a * b / (s * s * (s + 1.0));
}

std::vector<double> posterior_variance(const DirichletParams& params) {
  const auto alphas = params.alphas();
  const double s = params.total();
  std::vector<double> out(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = alphas[i] * (s - alphas[i]) / (s * s * (s + 1.0));
  return out;
}

}  // namespace bayestrust
