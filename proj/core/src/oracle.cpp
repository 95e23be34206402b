#include "ehcr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ehcr {

namespace {

void check_grid_step(double grid_step) {
  if (!(grid_step > 0.0) || !(grid_step <= 0.5)) {
    throw std::invalid_argument("oracle: grid_step must lie in (0, 0.5]");
  }
}

// Largest energy feasible in one slot under a cumulative budget and the
// interference cap (vacuous when h_sp = 0). Zero transmit time consumes
// zero energy.
double max_slot_energy(double budget, double alpha, double h_sp, double p_int) {
  if (alpha <= 0.0) return 0.0;
  double e = budget;
  if (h_sp > 0.0) e = std::min(e, alpha * p_int / h_sp);
  return std::max(e, 0.0);
}

}  // namespace

PolicySolution oracle_offline_m1(const Instance& instance, double grid_step) {
  if (instance.slots() != 1) throw std::invalid_argument("oracle_offline_m1: m must be 1");
  check_grid_step(grid_step);

  const double hp = instance.params.eta * instance.params.pp;
  const double h_sp = instance.channels.h_sp[0];
  const double theta = instance.theta[0];

  double best_rate = 0.0, best_alpha = 0.0, best_energy = 0.0;
  const long steps = std::lround(1.0 / grid_step);
  for (long k = 1; k <= steps; ++k) {
    const double alpha = std::min(k * grid_step, 1.0);
    const double energy = max_slot_energy((1.0 - alpha) * hp, alpha, h_sp, instance.params.p_int);
    const double rate = slot_rate(alpha, energy, theta);
    if (rate > best_rate) {
      best_rate = rate;
      best_alpha = alpha;
      best_energy = energy;
    }
  }

  PolicySolution sol;
  sol.policy_tag = PolicyTag::oracle;
  sol.alpha = {best_alpha};
  sol.energy = {best_energy};
  finalize_solution(instance, sol);
  return sol;
}

PolicySolution oracle_offline_m2(const Instance& instance, double grid_step) {
  if (instance.slots() != 2) throw std::invalid_argument("oracle_offline_m2: m must be 2");
  check_grid_step(grid_step);

  const double hp = instance.params.eta * instance.params.pp;
  const double p_int = instance.params.p_int;
  const double th1 = instance.theta[0], th2 = instance.theta[1];
  const double hsp1 = instance.channels.h_sp[0], hsp2 = instance.channels.h_sp[1];

  const long steps = std::lround(1.0 / grid_step);
  const double e_step = grid_step * hp;

  double best_rate = -1.0, best_a1 = 1.0, best_a2 = 1.0, best_e1 = 0.0, best_e2 = 0.0;
  for (long k1 = 0; k1 <= steps; ++k1) {
    const double a1 = std::min(k1 * grid_step, 1.0);
    const double cum1 = (1.0 - a1) * hp;
    const double e1_cap = max_slot_energy(cum1, a1, hsp1, p_int);
    for (long k2 = 0; k2 <= steps; ++k2) {
      const double a2 = std::min(k2 * grid_step, 1.0);
      const double cum2 = cum1 + (1.0 - a2) * hp;
      const long e_steps = e_step > 0.0 ? std::lround(std::ceil(e1_cap / e_step)) : 0;
      for (long j = 0; j <= e_steps; ++j) {
        const double e1 = std::min(j * e_step, e1_cap);
        const double e2 = max_slot_energy(cum2 - e1, a2, hsp2, p_int);
        const double rate = slot_rate(a1, e1, th1) + slot_rate(a2, e2, th2);
        if (rate > best_rate) {
          best_rate = rate;
          best_a1 = a1;
          best_a2 = a2;
          best_e1 = e1;
          best_e2 = e2;
        }
      }
    }
  }

  PolicySolution sol;
  sol.policy_tag = PolicyTag::oracle;
  sol.alpha = {best_a1, best_a2};
  sol.energy = {best_e1, best_e2};
  finalize_solution(instance, sol);
  return sol;
}

double oracle_myopic_slot(double zeta, double psi, double grid_step) {
  if (!(psi >= 0.0 && psi <= 1.0)) {
    throw std::invalid_argument("oracle_myopic_slot: psi must lie in [0, 1]");
  }
  check_grid_step(grid_step);

  const double lo = std::max(psi, grid_step);
  double best_alpha = lo;
  double best_rate = slot_rate(lo, 1.0 - lo, zeta);
  for (double alpha = lo + grid_step; alpha < 1.0; alpha += grid_step) {
    const double rate = slot_rate(alpha, 1.0 - alpha, zeta);
    if (rate > best_rate) {
      best_rate = rate;
      best_alpha = alpha;
    }
  }
  if (slot_rate(1.0, 0.0, zeta) > best_rate) best_alpha = 1.0;
  return best_alpha;
}

}  // namespace ehcr
