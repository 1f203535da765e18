#pragma once

#include <cstddef>
#include <vector>

namespace bayestrust {

/// Quadrature rule normalized as a probability measure (weights sum to 1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for the Beta(alpha, beta) density on [0, 1]: exact for
/// polynomials of degree < 2 * count. Golub-Welsch on the Jacobi matrix,
/// weights from the first eigenvector components.
QuadratureRule gauss_beta_rule(double alpha, double beta, std::size_t count);

}  // namespace bayestrust
