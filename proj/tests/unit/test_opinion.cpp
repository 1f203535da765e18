#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bayestrust/conjugate.hpp"
#include "bayestrust/error.hpp"
#include "bayestrust/opinion.hpp"

using namespace bayestrust;

namespace {

Opinion random_opinion(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(gen);
  const double y = u(gen);
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  // b, i, d from the spacings of two uniforms; weight spans several decades.
  const double w = std::pow(10.0, -1.0 + 5.0 * u(gen));
  return Opinion(lo, 1.0 - hi, hi - lo, w);
}

void check_close(const Opinion& a, const Opinion& b, double tol) {
  CHECK(std::abs(a.belief() - b.belief()) <= tol);
  CHECK(std::abs(a.disbelief() - b.disbelief()) <= tol);
  CHECK(std::abs(a.ignorance() - b.ignorance()) <= tol);
  CHECK(std::abs(a.evidence_weight() - b.evidence_weight()) <= tol * std::max(1.0, b.evidence_weight()));
}

}  // namespace

TEST_CASE("opinion validation") {
  CHECK_NOTHROW(Opinion(0.2, 0.3, 0.5, 1.0));
  CHECK_THROWS_AS(Opinion(0.2, 0.3, 0.6, 1.0), InvalidParameter);
  CHECK_THROWS_AS(Opinion(-0.1, 0.6, 0.5, 1.0), InvalidParameter);
  CHECK_THROWS_AS(Opinion(0.2, 0.3, 0.5, 0.0), InvalidParameter);
}

TEST_CASE("opinion to dirichlet") {
  const auto u = opinion_to_dirichlet(Opinion(1.0 / 3, 1.0 / 3, 1.0 / 3, 3.0));
  for (std::size_t k = 0; k < 3; ++k) CHECK(u.alpha(k) == doctest::Approx(1.0).epsilon(1e-12));
  // Opinion takes (b, d, i); the Dirichlet is ordered (b, i, d).
  const auto d = opinion_to_dirichlet(Opinion(0.5, 0.25, 0.25, 8.0));
  CHECK(d.alpha(0) == doctest::Approx(4.0));
  CHECK(d.alpha(1) == doctest::Approx(2.0));
  CHECK(d.alpha(2) == doctest::Approx(2.0));
  // Zero components are floored, never an error.
  const auto f = opinion_to_dirichlet(Opinion(1.0, 0.0, 0.0, 2.0));
  CHECK(f.alpha(1) == kOpinionEvidenceFloor);
  CHECK(f.alpha(2) == kOpinionEvidenceFloor);
}

TEST_CASE("dirichlet to opinion") {
  const auto a = dirichlet_to_opinion(DirichletParams({1, 1, 1}));
  CHECK(a.belief() == doctest::Approx(1.0 / 3));
  CHECK(a.evidence_weight() == doctest::Approx(3.0));
  const auto b = dirichlet_to_opinion(DirichletParams({4, 2, 2}));
  CHECK(b.belief() == doctest::Approx(0.5));
  CHECK(b.ignorance() == doctest::Approx(0.25));
  CHECK(b.evidence_weight() == doctest::Approx(8.0));
  const auto c = dirichlet_to_opinion(DirichletParams({3, 1, 4}));
  CHECK(c.belief() == doctest::Approx(0.375));
  CHECK(c.ignorance() == doctest::Approx(0.125));
  CHECK(c.disbelief() == doctest::Approx(0.5));
  CHECK_THROWS_AS(dirichlet_to_opinion(DirichletParams({1, 1})), InvalidInput);
}

TEST_CASE("fusion examples") {
  const Opinion o(1.0 / 3, 1.0 / 3, 1.0 / 3, 3.0);
  const auto oo = fuse(o, o);
  CHECK(oo.belief() == doctest::Approx(1.0 / 3));
  CHECK(oo.evidence_weight() == doctest::Approx(6.0));
  const auto x = dirichlet_to_opinion(DirichletParams({2, 1, kOpinionEvidenceFloor}));
  const auto y = dirichlet_to_opinion(DirichletParams({kOpinionEvidenceFloor, 1, 2}));
  const auto xy = fuse(x, y);
  CHECK(xy.belief() == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(xy.ignorance() == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(xy.evidence_weight() == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("observe outcomes") {
  const Opinion o(1.0 / 3, 1.0 / 3, 1.0 / 3, 3.0);
  const auto p = observe_outcomes(o, {2, 0, 3});
  CHECK(p.belief() == doctest::Approx(0.375));
  CHECK(p.ignorance() == doctest::Approx(0.125));
  CHECK(p.disbelief() == doctest::Approx(0.5));
  CHECK(p.evidence_weight() == doctest::Approx(8.0));
  check_close(observe_outcomes(o, {0, 0, 0}), o, 1e-15);
  check_close(observe_outcomes(observe_outcomes(o, {1, 0, 0}), {1, 0, 2}), observe_outcomes(o, {2, 0, 2}), 1e-12);
}

TEST_CASE("projected trust") {
  CHECK(projected_trust(Opinion(1, 0, 0, 1)).value() == 1.0);
  CHECK(projected_trust(Opinion(0, 1, 0, 1)).value() == 0.0);
  CHECK(projected_trust(Opinion(0, 0, 1, 1)).value() == 0.5);
  // Monotone in belief at fixed disbelief.
  for (double d = 0.0; d <= 0.8; d += 0.2) {
    double prev = -1.0;
    for (double b = 0.0; b + d <= 1.0 + 1e-12; b += 0.05) {
      const double bb = std::min(b, 1.0 - d);
      const double t = projected_trust(Opinion(bb, d, std::max(0.0, 1.0 - d - bb), 1.0));
      CHECK(t >= prev);
      prev = t;
    }
  }
}

TEST_CASE("outcome opinions carry two units of ignorance") {
  const auto o = opinion_from_outcomes(3, 1);
  CHECK(o.evidence_weight() == doctest::Approx(6.0));
  CHECK(o.belief() == doctest::Approx(0.5));
  CHECK(o.ignorance() == doctest::Approx(1.0 / 3));
  CHECK(projected_trust(opinion_from_outcomes(0, 0)).value() == doctest::Approx(0.5));
}

TEST_CASE("bridge properties under fuzzing") {
  std::mt19937_64 gen(77);
  for (int t = 0; t < 2000; ++t) {
    const auto a = random_opinion(gen);
    const auto b = random_opinion(gen);
    const auto c = random_opinion(gen);
    check_close(dirichlet_to_opinion(opinion_to_dirichlet(a)), a, 1e-12);
    const auto ab = fuse(a, b);
    CHECK(ab == fuse(b, a));
    CHECK(ab.evidence_weight() == a.evidence_weight() + b.evidence_weight());
    CHECK(std::abs(ab.belief() + ab.disbelief() + ab.ignorance() - 1.0) < 1e-9);
    check_close(fuse(ab, c), fuse(a, fuse(b, c)), 1e-12);
    const std::array<std::uint64_t, 3> n{gen() % 50, gen() % 50, gen() % 50};
    const auto via_ddtm = dirichlet_to_opinion(ddtm_update(opinion_to_dirichlet(a), {{n[0], n[1], n[2]}}));
    check_close(observe_outcomes(a, n), via_ddtm, 1e-12);
  }
}
