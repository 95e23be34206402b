#pragma once

#include "ehcr/model.hpp"

// Online myopic policy: each slot consumes all of the energy it harvests,
// which decouples the horizon into independent single-slot problems with a
// closed-form time-sharing optimum.

namespace ehcr {

/// Unique root z >= 1 of z*ln z - z - zeta + 1 = 0. Exactly 1 for zeta = 0;
/// the residual at the returned z is below 1e-12 * (1 + zeta). Throws
/// std::domain_error for negative or non-finite zeta.
double solve_z(double zeta);

/// Closed-form per-slot time share: max(zeta / (zeta + z*(zeta) - 1), psi),
/// where the first argument is 0 at zeta = 0. psi must lie in [0, 1].
double myopic_slot(double zeta, double psi);

/// Applies myopic_slot to every slot and consumes the slot's harvest in
/// full: E_i = (1 - alpha_i) * eta * pp.
PolicySolution solve_myopic(const Instance& instance);

}  // namespace ehcr
