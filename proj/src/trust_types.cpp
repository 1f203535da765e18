#include "bayestrust/trust_types.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bayestrust/error.hpp"

namespace bayestrust {

namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }
bool nonneg_finite(double x) { return x >= 0.0 && std::isfinite(x); }

}  // namespace

TrustScalar::TrustScalar(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidParameter("trust value " + std::to_string(value) + " outside [0, 1]");
  }
}

TrustSimplex::TrustSimplex(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw InvalidParameter("trust simplex needs at least 2 components");
  double sum = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidParameter("trust simplex component outside [0, 1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidParameter("trust simplex components do not sum to 1");
}

BetaParams::BetaParams(double alpha, double beta) : prior_alpha_(alpha), prior_beta_(beta) { validate(); }

BetaParams::BetaParams(double alpha, double beta, double prior_alpha, double prior_beta)
    : prior_alpha_(prior_alpha), prior_beta_(prior_beta), success_(alpha - prior_alpha), failure_(beta - prior_beta) {
  validate();
}

BetaParams BetaParams::from_evidence(double prior_alpha, double prior_beta, double success_evidence,
                                     double failure_evidence) {
  BetaParams p;
  p.prior_alpha_ = prior_alpha;
  p.prior_beta_ = prior_beta;
  p.success_ = success_evidence;
  p.failure_ = failure_evidence;
  p.validate();
  return p;
}

void BetaParams::validate() const {
  if (!positive_finite(prior_alpha_) || !positive_finite(prior_beta_)) {
    throw InvalidParameter("beta prior parameters must be positive and finite");
  }
  if (!nonneg_finite(success_) || !nonneg_finite(failure_)) {
    throw InvalidParameter("beta parameters may not fall below their base prior");
  }
}

DirichletParams::DirichletParams(std::vector<double> alphas)
    : prior_(std::move(alphas)), evidence_(prior_.size(), 0.0) {
  validate();
}

DirichletParams::DirichletParams(std::vector<double> alphas, std::vector<double> prior_alphas)
    : prior_(std::move(prior_alphas)) {
  if (alphas.size() != prior_.size()) throw InvalidParameter("dirichlet alphas and prior lengths differ");
  evidence_.resize(prior_.size());
  for (std::size_t i = 0; i < prior_.size(); ++i) evidence_[i] = alphas[i] - prior_[i];
  validate();
}

DirichletParams DirichletParams::from_evidence(std::vector<double> prior_alphas, std::vector<double> evidence) {
  DirichletParams p;
  p.prior_ = std::move(prior_alphas);
  p.evidence_ = std::move(evidence);
  p.validate();
  return p;
}

std::vector<double> DirichletParams::alphas() const {
  std::vector<double> out(prior_.size());
  for (std::size_t i = 0; i < prior_.size(); ++i) out[i] = prior_[i] + evidence_[i];
  return out;
}

double DirichletParams::total() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < prior_.size(); ++i) sum += prior_[i] + evidence_[i];
  return sum;
}

void DirichletParams::validate() const {
  if (prior_.size() < 2) throw InvalidParameter("dirichlet needs at least 2 categories");
  if (evidence_.size() != prior_.size()) throw InvalidParameter("dirichlet evidence length mismatch");
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    if (!positive_finite(prior_[i])) throw InvalidParameter("dirichlet prior parameters must be positive");
    if (!nonneg_finite(evidence_[i])) throw InvalidParameter("dirichlet parameters may not fall below the prior");
  }
}

}  // namespace bayestrust
