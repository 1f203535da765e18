#include "bayestrust/truncated_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "bayestrust/error.hpp"

namespace bayestrust {

namespace {

// Standard normal draw restricted to [a, b].
double sample_standard_truncated(double a, double b, RandomStream& rng) {
  if (a > 0.0) {
    // Keep the band in the lower tail where Phi has full relative precision.
    return -sample_standard_truncated(-b, -a, rng);
  }
  const double pa = standard_normal_cdf(a);
  const double pb = standard_normal_cdf(b);
  if (pb - pa > 0.0 && pb > 1e-300) {
    const double u = pa + (pb - pa) * rng.uniform();
    return std::clamp(standard_normal_quantile(u), a, b);
  }
  // Whole band below ~ -37 sigma: exponential-proposal rejection on the
  // mirrored tail [lo, hi] with the optimal rate for lo.
  const double lo = -b;
  const double hi = -a;
  const double rate = 0.5 * (lo + std::sqrt(lo * lo + 4.0));
  for (;;) {
    const double z = lo - std::log(rng.uniform()) / rate;
    if (z > hi) continue;
    const double d = z - rate;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return -z;
  }
}

}  // namespace

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double standard_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    if (u == 0.0) return -std::numeric_limits<double>::infinity();
    if (u == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidParameter("normal quantile requires u in [0, 1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

double sample_truncated_normal(double mean, double sd, double lower, double upper, RandomStream& rng) {
  if (!(lower <= upper)) throw InvalidParameter("truncated normal requires lower <= upper");
  if (!(sd >= 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
    throw InvalidParameter("truncated normal requires finite mean and sd >= 0");
  }
  if (sd == 0.0 || lower == upper) return std::clamp(mean, lower, upper);
  const double a = (lower - mean) / sd;
  const double b = (upper - mean) / sd;
  const double z = sample_standard_truncated(a, b, rng);
  // Rounding of mean + sd*z can step a hair outside the support.
  return std::clamp(mean + sd * z, lower, upper);
}

double truncated_normal_density(double x, double mean, double sd, double lower, double upper) {
  if (x < lower || x > upper) return 0.0;
  if (sd <= 0.0) return x == std::clamp(mean, lower, upper) ? std::numeric_limits<double>::infinity() : 0.0;
  double a = (lower - mean) / sd;
  double b = (upper - mean) / sd;
  double z = (x - mean) / sd;
  if (a > 0.0) {
    std::swap(a, b);
    a = -a;
    b = -b;
    z = -z;
  }
  const double mass = standard_normal_cdf(b) - standard_normal_cdf(a);
  if (mass > 0.0) {
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sd * mass);
  }
  // Lower-tail asymptote: mass ~ phi(b)/|b| when the band sits far below zero.
  return std::abs(b) * std::exp(-0.5 * (z * z - b * b)) / sd;
}

}  // namespace bayestrust
