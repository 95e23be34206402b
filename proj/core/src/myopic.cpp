#include "ehcr/myopic.hpp"

#include <cmath>
#include <stdexcept>

namespace ehcr {

namespace {

// g(w) = (1+w)*ln(1+w) - w - zeta, the root condition in w = z - 1.
// Written around log1p so the w^2/2 leading term survives cancellation.
double root_residual(double w, double zeta) {
  return (1.0 + w) * std::log1p(w) - w - zeta;
}

// Root w* of g: bracketed bisection to width 1e-8, then Newton polish
// (g' = log1p(w), positive and increasing on w > 0).
double solve_w(double zeta) {
  if (zeta < 1e-20) {
    // g(w) = w^2/2 + O(w^3); the root sits below the bisection bracket.
    return std::sqrt(2.0 * zeta);
  }
  double lo = 1e-12;
  double hi = std::max(10.0, zeta + 2.0) - 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-8; ++i) {
    const double mid = 0.5 * (lo + hi);
    (root_residual(mid, zeta) < 0.0 ? lo : hi) = mid;
  }
  double w = 0.5 * (lo + hi);
  const double target = 0.25e-12 * (1.0 + zeta);
  for (int i = 0; i < 40; ++i) {
    const double g = root_residual(w, zeta);
    if (std::abs(g) <= target) break;
    const double step = g / std::log1p(w);
    const double next = w - step;
    w = next > 0.0 ? next : 0.5 * w;
    if (std::abs(step) <= 1e-18 * (1.0 + w)) break;
  }
  return w;
}

}  // namespace

double solve_z(double zeta) {
  if (!std::isfinite(zeta) || zeta < 0.0) {
    throw std::domain_error("solve_z: zeta must be finite and nonnegative");
  }
  if (zeta == 0.0) return 1.0;
  return 1.0 + solve_w(zeta);
}

double myopic_slot(double zeta, double psi) {
  if (!std::isfinite(zeta) || zeta < 0.0) {
    throw std::domain_error("myopic_slot: zeta must be finite and nonnegative");
  }
  if (!std::isfinite(psi) || psi < 0.0 || psi > 1.0) {
    throw std::domain_error("myopic_slot: psi must lie in [0, 1]");
  }
  double unconstrained = 0.0;
  if (zeta > 0.0) {
    // zeta / (zeta + z - 1), evaluated in w = z - 1 so tiny roots keep
    // their precision.
    unconstrained = zeta / (zeta + solve_w(zeta));
  }
  const double alpha = std::max(unconstrained, psi);
  return alpha < 1.0 ? alpha : 1.0;
}

PolicySolution solve_myopic(const Instance& instance) {
  const std::size_t m = instance.slots();
  const double hp = instance.params.eta * instance.params.pp;

  PolicySolution sol;
  sol.policy_tag = PolicyTag::myopic;
  sol.alpha.resize(m);
  sol.energy.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double alpha = myopic_slot(instance.zeta[i], instance.psi[i]);
    // Degenerate slot (zeta = psi = 0 with harvest available): the rate is
    // 0 for every alpha, but alpha = 0 would pair positive energy with zero
    // transmit time. Spend the whole slot transmitting nothing instead.
    if (alpha == 0.0 && hp > 0.0) alpha = 1.0;
    sol.alpha[i] = alpha;
    sol.energy[i] = (1.0 - alpha) * hp;
  }
  finalize_solution(instance, sol);
  return sol;
}

}  // namespace ehcr
