#include "bayestrust/decision.hpp"

#include <cmath>
#include <string>

#include "bayestrust/error.hpp"
#include "bayestrust/quadrature.hpp"

namespace bayestrust {

namespace {

constexpr std::size_t kMaxGridPoints = 65536;
constexpr std::size_t kMaxQuadratureCategories = 20;

double checked(double value) {
  if (!std::isfinite(value)) throw EvaluationError("utility function returned a non-finite value");
  return value;
}

std::size_t nodes_per_dimension(std::size_t dims) {
  if (dims == 1) return kQuadratureNodes;
  const auto grid = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(kMaxGridPoints),
                                                                  1.0 / static_cast<double>(dims)) + 1e-9));
  return std::max<std::size_t>(grid, 2);
}

}  // namespace

UtilityFunction::UtilityFunction(Scalar f) : fn_(std::move(f)) {}
UtilityFunction::UtilityFunction(Vector f) : fn_(std::move(f)) {}

double UtilityFunction::operator()(double theta) const {
  if (const auto* s = std::get_if<Scalar>(&fn_)) return (*s)(theta);
  const double pair[2] = {theta, 1.0 - theta};
  return std::get<Vector>(fn_)(std::span<const double>(pair, 2));
}

double UtilityFunction::operator()(std::span<const double> theta) const {
  if (const auto* v = std::get_if<Vector>(&fn_)) return (*v)(theta);
  if (theta.size() != 1) throw InvalidInput("scalar utility evaluated on a vector trust value");
  return std::get<Scalar>(fn_)(theta[0]);
}

double expected_utility(const BetaParams& posterior, const UtilityFunction& u) {
  const auto rule = gauss_beta_rule(posterior.alpha(), posterior.beta(), kQuadratureNodes);
  double eu = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) eu += rule.weights[i] * checked(u(rule.nodes[i]));
  return eu;
}

double expected_utility(const DirichletParams& posterior, const UtilityFunction& u) {
  const std::size_t b = posterior.size();
  if (b > kMaxQuadratureCategories) {
    throw InvalidInput("quadrature supports at most " + std::to_string(kMaxQuadratureCategories) +
                       " categories; use a particle posterior");
  }
  // Stick-breaking: x_j ~ Beta(a_j, a_{j+1} + ... + a_{b-1}) independently,
  // theta_j = x_j * prod_{l<j} (1 - x_l).
  const auto alphas = posterior.alphas();
  const std::size_t dims = b - 1;
  const std::size_t per_dim = nodes_per_dimension(dims);
  std::vector<QuadratureRule> rules;
  rules.reserve(dims);
  double tail = posterior.total();
  for (std::size_t j = 0; j < dims; ++j) {
    tail -= alphas[j];
    rules.push_back(gauss_beta_rule(alphas[j], std::max(tail, std::numeric_limits<double>::min()), per_dim));
  }
  std::vector<std::size_t> index(dims, 0);
  std::vector<double> theta(b);
  double eu = 0.0;
  for (;;) {
    double remaining = 1.0;
    double w = 1.0;
    for (std::size_t j = 0; j < dims; ++j) {
      const double x = rules[j].nodes[index[j]];
      theta[j] = remaining * x;
      remaining *= 1.0 - x;
      w *= rules[j].weights[index[j]];
    }
    theta[dims] = remaining;
    eu += w * checked(u(std::span<const double>(theta)));
    std::size_t j = 0;
    while (j < dims && ++index[j] == per_dim) index[j++] = 0;
    if (j == dims) break;
  }
  return eu;
}

double expected_utility(const ParticleSet& posterior, const UtilityFunction& u) {
  double eu = 0.0;
  for (std::size_t i = 0; i < posterior.size(); ++i) eu += posterior.weight(i) * checked(u(posterior.particle(i)));
  return eu;
}

double expected_utility(const Posterior& posterior, const UtilityFunction& u) {
  return std::visit([&](const auto& p) { return expected_utility(p, u); }, posterior);
}

std::size_t choose_action(std::span<const Candidate> candidates) {
  if (candidates.empty()) throw InvalidInput("choose_action needs at least one candidate");
  std::size_t best = 0;
  double best_eu = expected_utility(candidates[0].posterior, candidates[0].utility);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double eu = expected_utility(candidates[i].posterior, candidates[i].utility);
    if (eu > best_eu) {
      best = i;
      best_eu = eu;
    }
  }
  return best;
}

}  // namespace bayestrust
