#pragma once

#include "bayestrust/random.hpp"

namespace bayestrust {

double standard_normal_cdf(double z);
double standard_normal_quantile(double u);

/// Exact draw from N(mean, sd^2) restricted to [lower, upper].
///
/// Inverse-CDF on the retained probability band; when that band underflows
/// (interval far in one tail) falls back to exponential-proposal rejection.
/// Never clips: clipping would put atoms at the bounds.
double sample_truncated_normal(double mean, double sd, double lower, double upper, RandomStream& rng);

/// Density of the truncated normal at x (zero outside [lower, upper]).
double truncated_normal_density(double x, double mean, double sd, double lower, double upper);

}  // namespace bayestrust
