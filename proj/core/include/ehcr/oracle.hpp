#pragma once

#include "ehcr/model.hpp"

// Brute-force reference solvers for desk-scale validation. Grids scan the
// time shares only: for fixed alpha the rate is nondecreasing in energy, so
// the inner maximization is attained at the largest feasible energy (see
// the lemma in the README). Grid maximizers are exact lower bounds on the
// true optima.

namespace ehcr {

/// Single-slot offline optimum by scanning alpha at grid_step resolution.
PolicySolution oracle_offline_m1(const Instance& instance, double grid_step = 1e-3);

/// Two-slot offline optimum: scans (alpha_1, alpha_2) and the slot-1 energy
/// split; slot-2 energy takes its feasible maximum.
PolicySolution oracle_offline_m2(const Instance& instance, double grid_step = 5e-3);

/// Maximizer of alpha * log2(1 + zeta*(1-alpha)/alpha) over the grid on
/// [max(psi, grid_step), 1].
double oracle_myopic_slot(double zeta, double psi, double grid_step = 1e-4);

}  // namespace ehcr
