#pragma once

#include <utility>
#include <vector>

#include "ehcr/model.hpp"

// Offline optimum of the horizon problem
//
//   maximize   sum_i alpha_i * log2(1 + theta_i * E_i / alpha_i)
//   subject to sum_{j<=i} E_j <= sum_{j<=i} (1 - alpha_j) * eta * pp   (causality)
//              h_sp_i * E_i <= alpha_i * p_int                         (interference)
//              0 <= alpha <= 1,  E >= 0
//
// solved by a primal log-barrier interior-point method with damped Newton
// steps over the 2m variables (alpha, E). The objective is concave (each
// term is the perspective of log2(1 + theta*E)) and all constraints are
// affine, so the central path reaches the global optimum.

namespace ehcr {

struct SolverConfig {
  double barrier_t0 = 1.0;   ///< initial barrier parameter
  double barrier_mu = 10.0;  ///< barrier growth factor per stage
  double outer_tol = 1e-8;   ///< stop when m_ineq / t drops below this
  double newton_tol = 1e-9;  ///< stage done when (newton decrement)^2 / 2 is below
  int max_newton = 100;      ///< Newton cap per stage
  double backtrack_a = 0.01;
  double backtrack_b = 0.5;

  void validate() const;
};

/// Worst-case residuals of the first-order optimality system at a solution,
/// using the solution's dual estimates. Stationarity and complementary
/// slackness are evaluated in the base-2 rate convention; the nonnegativity
/// multipliers (nu for E >= 0, xi for alpha >= 0) are included.
struct KktReport {
  double stat_alpha_residual = 0.0;    ///< max |stationarity in alpha_i|
  double stat_energy_residual = 0.0;   ///< max |stationarity in E_i|
  double comp_slack_residual = 0.0;    ///< max |multiplier * slack|
  double primal_feas_violation = 0.0;  ///< max constraint violation, 0 if feasible
  double dual_feas_violation = 0.0;    ///< most negative multiplier, 0 if none
};

/// Interior point used to seed the barrier method: alpha_i = 1/2 and
/// E_i = 1/2 * min(eta*pp/2, p_int/(2*h_sp_i)) (interference term dropped
/// when h_sp_i = 0). Every inequality holds strictly at the result. Throws
/// std::invalid_argument for degenerate instances (eta*pp = 0, or p_int = 0
/// with some h_sp > 0), which the solver short-circuits instead.
std::pair<std::vector<double>, std::vector<double>> strictly_feasible_start(
    const Instance& instance);

/// Solves the offline program. The result is strictly feasible, within
/// outer_tol * (1 + |objective|) of the optimum, and carries barrier dual
/// estimates (multiplier = 1 / (t * slack), natural-log units) in its
/// diagnostics. Degenerate instances (p_int = 0 with all h_sp > 0, or
/// eta*pp = 0) short-circuit to the all-harvest policy alpha = 1, E = 0.
PolicySolution solve_offline(const Instance& instance, const SolverConfig& config = {});

/// Evaluates the optimality system at (solution, duals). Throws
/// std::invalid_argument when the solution carries no dual estimates.
KktReport kkt_report(const Instance& instance, const PolicySolution& solution);

/// Total harvested minus total consumed energy [J]; nonnegative for
/// feasible points, and at most ~1e-6 of the harvest at an optimum (all
/// harvested energy is spent by the end of the horizon).
double depletion_residual(const Instance& instance, const PolicySolution& solution);

}  // namespace ehcr
