#include "bayestrust/opinion.hpp"

#include <algorithm>
#include <cmath>

#include "bayestrust/conjugate.hpp"
#include "bayestrust/error.hpp"

namespace bayestrust {

namespace {

bool unit(double x) { return x >= 0.0 && x <= 1.0; }

// Evidence vector in bridge order (b, i, d) -> opinion with total weight.
Opinion from_evidence(double eb, double ei, double ed, double weight) {
  const double total = eb + ei + ed;
  return Opinion(eb / total, ed / total, ei / total, weight);
}

}  // namespace

Opinion::Opinion(double belief, double disbelief, double ignorance, double evidence_weight)
    : belief_(belief), disbelief_(disbelief), ignorance_(ignorance), weight_(evidence_weight) {
  if (!unit(belief) || !unit(disbelief) || !unit(ignorance)) {
    throw InvalidParameter("opinion components must lie in [0, 1]");
  }
  if (std::abs(belief + disbelief + ignorance - 1.0) > 1e-9) {
    throw InvalidParameter("opinion components must sum to 1");
  }
  if (!(evidence_weight > 0.0) || !std::isfinite(evidence_weight)) {
    throw InvalidParameter("opinion evidence weight must be positive");
  }
}

DirichletParams opinion_to_dirichlet(const Opinion& o) {
  const double w = o.evidence_weight();
  std::vector<double> alphas{std::max(w * o.belief(), kOpinionEvidenceFloor),
                             std::max(w * o.ignorance(), kOpinionEvidenceFloor),
                             std::max(w * o.disbelief(), kOpinionEvidenceFloor)};
  // Carried as the prior with no evidence, so a later ddtm_update adds counts to alpha exactly.
  return DirichletParams(std::move(alphas));
}

Opinion dirichlet_to_opinion(const DirichletParams& p) {
  if (p.size() != 3) throw InvalidInput("opinion bridge needs exactly 3 Dirichlet categories");
  const auto a = p.alphas();
  const double total = a[0] + a[1] + a[2];
  return Opinion(a[0] / total, a[2] / total, a[1] / total, total);
}

Opinion fuse(const Opinion& a, const Opinion& b) {
  const double wa = a.evidence_weight();
  const double wb = b.evidence_weight();
  return from_evidence(wa * a.belief() + wb * b.belief(), wa * a.ignorance() + wb * b.ignorance(),
                       wa * a.disbelief() + wb * b.disbelief(), wa + wb);
}

Opinion observe_outcomes(const Opinion& o, const std::array<std::uint64_t, 3>& counts) {
  const auto updated = ddtm_update(opinion_to_dirichlet(o), CategoricalBatch{{counts.begin(), counts.end()}});
  return dirichlet_to_opinion(updated);
}

TrustScalar projected_trust(const Opinion& o) {
  return TrustScalar(std::clamp(o.belief() + 0.5 * o.ignorance(), 0.0, 1.0));
}

Opinion opinion_from_outcomes(std::uint64_t successes, std::uint64_t failures) {
  const auto s = static_cast<double>(successes);
  const auto f = static_cast<double>(failures);
  return from_evidence(s, 2.0, f, s + f + 2.0);
}

}  // namespace bayestrust
