#include "bayestrust/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bayestrust/error.hpp"

namespace bayestrust {

namespace {

// Implicit QL on a symmetric tridiagonal matrix. Only the first row of the
// eigenvector matrix is accumulated, which is all Golub-Welsch needs.
// diag/off are overwritten; off[i] couples i and i+1, off[n-1] is scratch.
void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& first_row) {
  const int n = static_cast<int>(diag.size());
  first_row.assign(diag.size(), 0.0);
  first_row[0] = 1.0;
  off[n - 1] = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw std::runtime_error("tridiagonal QL failed to converge");
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          const double f = s * off[i];
          const double b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          const double z = first_row[i + 1];
          first_row[i + 1] = s * first_row[i] + c * z;
          first_row[i] = c * first_row[i] - s * z;
        }
        if (r == 0.0 && i >= l) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

QuadratureRule gauss_beta_rule(double alpha, double beta, std::size_t count) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidParameter("beta quadrature needs positive finite parameters");
  }
  if (count == 0) throw InvalidParameter("quadrature needs at least one node");
  // Jacobi weight (1 - t)^a (1 + t)^b on [-1, 1] with theta = (1 + t) / 2.
  const double a = beta - 1.0;
  const double b = alpha - 1.0;
  const double ab = a + b;
  std::vector<double> diag(count);
  std::vector<double> off(count, 0.0);
  diag[0] = (b - a) / (ab + 2.0);
  for (std::size_t j = 1; j < count; ++j) {
    const double k = static_cast<double>(j);
    const double t = 2.0 * k + ab;
    diag[j] = (b * b - a * a) / (t * (t + 2.0));
  }
  for (std::size_t j = 1; j < count; ++j) {
    const double k = static_cast<double>(j);
    const double t = 2.0 * k + ab;
    double beta_k = 0.0;
    if (j == 1) {
      beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta_k = 4.0 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
    }
    off[j - 1] = std::sqrt(beta_k);
  }
  std::vector<double> first_row;
  tridiagonal_ql(diag, off, first_row);

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
  QuadratureRule rule;
  rule.nodes.reserve(count);
  rule.weights.reserve(count);
  double total = 0.0;
  for (std::size_t i : order) {
    rule.nodes.push_back(std::clamp(0.5 * (1.0 + diag[i]), 0.0, 1.0));
    rule.weights.push_back(first_row[i] * first_row[i]);
    total += first_row[i] * first_row[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace bayestrust
