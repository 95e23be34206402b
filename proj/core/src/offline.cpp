#include "ehcr/offline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ehcr {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Slots where the interference cap pins E_i to zero (p_int = 0 with
// h_sp_i > 0) are removed before the barrier runs; their harvest enters
// the cumulative budget as a constant offset. `original` maps reduced
// slot -> original slot.
struct ReducedProblem {
  double hp = 0.0;
  double p_int = 0.0;
  bool with_int = false;
  std::vector<double> theta;
  std::vector<double> h_sp;
  std::vector<double> offset;
  std::vector<std::size_t> original;

  std::size_t slots() const { return theta.size(); }
  double inequality_count() const { return double(slots()) * (with_int ? 5.0 : 4.0); }
};

struct Workspace {
  Eigen::VectorXd alpha, energy;
  Eigen::VectorXd s_cum, s_int;
  Eigen::VectorXd w1, w2;  // suffix sums of 1/s_cum and 1/s_cum^2
  Eigen::VectorXd grad, dir;
  Eigen::MatrixXd hess;
  Eigen::VectorXd alpha_try, energy_try, s_cum_try, s_int_try;
  Eigen::LLT<Eigen::MatrixXd> llt;

  explicit Workspace(std::size_t n)
      : alpha(n), energy(n), s_cum(n), s_int(n), w1(n), w2(n), grad(2 * n), dir(2 * n),
        hess(2 * n, 2 * n), alpha_try(n), energy_try(n), s_cum_try(n), s_int_try(n) {}
};

// Fills the constraint slacks; false when any is non-positive (including
// the box on alpha and E > 0).
bool compute_slacks(const ReducedProblem& p, const Eigen::VectorXd& alpha,
                    const Eigen::VectorXd& energy, Eigen::VectorXd& s_cum,
                    Eigen::VectorXd& s_int) {
  const auto n = Eigen::Index(p.slots());
  double cum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = alpha[i], e = energy[i];
    if (!(a > 0.0) || !(a < 1.0) || !(e > 0.0)) return false;
    cum += p.hp * (1.0 - a) - e;
    s_cum[i] = p.offset[std::size_t(i)] + cum;
    if (!(s_cum[i] > 0.0)) return false;
    if (p.with_int) {
      s_int[i] = p.p_int * a - p.h_sp[std::size_t(i)] * e;
      if (!(s_int[i] > 0.0)) return false;
    }
  }
  return true;
}

// Barrier merit: -t * f_nat(alpha, E) - sum log(slacks); +inf outside the
// interior.
double barrier_value(const ReducedProblem& p, double t, const Eigen::VectorXd& alpha,
                     const Eigen::VectorXd& energy, Eigen::VectorXd& s_cum,
                     Eigen::VectorXd& s_int) {
  if (!compute_slacks(p, alpha, energy, s_cum, s_int)) return kInf;
  const auto n = Eigen::Index(p.slots());
  double value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = alpha[i], e = energy[i];
    value -= t * a * std::log1p(p.theta[std::size_t(i)] * e / a);
    value -= std::log(s_cum[i]);
    if (p.with_int) value -= std::log(s_int[i]);
    value -= std::log(a) + std::log1p(-a) + std::log(e);
  }
  return value;
}

// Centering is accepted at this decrement floor when rounding noise in the
// t-scaled gradient (absolute error ~ eps * t) stops further progress; the
// path-following gap bound only needs the decrement well below 1/4.
constexpr double kStallTol = 1e-5;

enum class StageResult { failed, floor_accepted, converged };

// One centering stage: damped Newton on the barrier merit at fixed t.
// `converged` when the Newton decrement criterion is met within the
// iteration cap; `floor_accepted` when progress stops first but the point
// is already well centered.
StageResult center_stage(const ReducedProblem& p, Workspace& ws, double t,
                         const SolverConfig& cfg, int& newton_count) {
  const auto n = Eigen::Index(p.slots());
  const auto dim = 2 * n;

  if (!compute_slacks(p, ws.alpha, ws.energy, ws.s_cum, ws.s_int)) return StageResult::failed;

  const auto floor_or_failed = [](double dec2) {
    return 0.5 * dec2 <= kStallTol ? StageResult::floor_accepted : StageResult::failed;
  };
  double dec2 = kInf;
  for (int iter = 0; iter < cfg.max_newton; ++iter) {
    // suffix sums over causality slacks
    double acc1 = 0.0, acc2 = 0.0;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      const double inv = 1.0 / ws.s_cum[i];
      acc1 += inv;
      acc2 += inv * inv;
      ws.w1[i] = acc1;
      ws.w2[i] = acc2;
    }

    // The causality barrier couples all variables up to each slot; its
    // Hessian has entries proportional to the suffix sums w2[max(i,j)].
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = ws.w2[std::max(i, j)];
        ws.hess(i, j) = p.hp * p.hp * v;
        ws.hess(i, n + j) = p.hp * v;
        ws.hess(n + i, j) = p.hp * v;
        ws.hess(n + i, n + j) = v;
      }
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = ws.alpha[i], e = ws.energy[i];
      const double theta = p.theta[std::size_t(i)];
      const double u = theta * e / a;
      const double den = 1.0 + u;

      ws.grad[i] = -t * (std::log1p(u) - u / den) + p.hp * ws.w1[i] - 1.0 / a + 1.0 / (1.0 - a);
      ws.grad[n + i] = -t * theta / den + ws.w1[i] - 1.0 / e;

      // objective curvature (rank-1 per slot) plus the box barriers
      const double q = t / (a * den * den);
      ws.hess(i, i) += q * u * u + 1.0 / (a * a) + 1.0 / ((1.0 - a) * (1.0 - a));
      ws.hess(n + i, n + i) += q * theta * theta + 1.0 / (e * e);
      const double cross = -q * u * theta;
      ws.hess(i, n + i) += cross;
      ws.hess(n + i, i) += cross;

      if (p.with_int) {
        const double hsp = p.h_sp[std::size_t(i)];
        const double si = ws.s_int[i];
        ws.grad[i] -= p.p_int / si;
        ws.grad[n + i] += hsp / si;
        const double vi = 1.0 / (si * si);
        ws.hess(i, i) += vi * p.p_int * p.p_int;
        ws.hess(n + i, n + i) += vi * hsp * hsp;
        const double ci = -vi * p.p_int * hsp;
        ws.hess(i, n + i) += ci;
        ws.hess(n + i, i) += ci;
      }
    }

    ws.llt.compute(ws.hess);
    if (ws.llt.info() != Eigen::Success) {
      // near-singular at extreme barrier weights: regularize once
      const double ridge = 1e-12 * ws.hess.diagonal().maxCoeff() + 1e-300;
      ws.hess.diagonal().array() += ridge;
      ws.llt.compute(ws.hess);
      if (ws.llt.info() != Eigen::Success) return StageResult::failed;
    }
    ws.dir = ws.llt.solve(-ws.grad);
    ++newton_count;

    dec2 = -ws.grad.dot(ws.dir);
    if (!std::isfinite(dec2)) return StageResult::failed;
    if (0.5 * std::max(dec2, 0.0) <= cfg.newton_tol) return StageResult::converged;

    // longest step keeping every affine slack positive
    double step_cap = 1.0;
    double dc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      dc += -p.hp * ws.dir[i] - ws.dir[n + i];
      if (dc < 0.0) step_cap = std::min(step_cap, ws.s_cum[i] / -dc);
      if (p.with_int) {
        const double di = p.p_int * ws.dir[i] - p.h_sp[std::size_t(i)] * ws.dir[n + i];
        if (di < 0.0) step_cap = std::min(step_cap, ws.s_int[i] / -di);
      }
      if (ws.dir[n + i] < 0.0) step_cap = std::min(step_cap, ws.energy[i] / -ws.dir[n + i]);
      if (ws.dir[i] < 0.0) step_cap = std::min(step_cap, ws.alpha[i] / -ws.dir[i]);
      if (ws.dir[i] > 0.0) step_cap = std::min(step_cap, (1.0 - ws.alpha[i]) / ws.dir[i]);
    }

    bool moved = false;
    if (dec2 <= 0.25) {
      // Small-decrement phase. The merit decrease here can sit below the
      // floating-point resolution of t * f, so an Armijo test would reject
      // productive steps; take the damped Newton step directly (the slack
      // cap keeps the iterate interior).
      double step = std::min(1.0 / (1.0 + std::sqrt(dec2)), 0.99 * step_cap);
      for (int halvings = 0; halvings < 40 && step > 0.0; ++halvings) {
        ws.alpha_try = ws.alpha + step * ws.dir.head(n);
        ws.energy_try = ws.energy + step * ws.dir.tail(n);
        if (compute_slacks(p, ws.alpha_try, ws.energy_try, ws.s_cum_try, ws.s_int_try)) {
          ws.alpha.swap(ws.alpha_try);
          ws.energy.swap(ws.energy_try);
          ws.s_cum.swap(ws.s_cum_try);
          ws.s_int.swap(ws.s_int_try);
          moved = true;
          break;
        }
        step *= 0.5;
      }
    } else {
      const double psi0 = barrier_value(p, t, ws.alpha, ws.energy, ws.s_cum_try, ws.s_int_try);
      const double slope = ws.grad.dot(ws.dir);
      double step = std::min(1.0, 0.99 * step_cap);
      while (step > 1e-16) {
        ws.alpha_try = ws.alpha + step * ws.dir.head(n);
        ws.energy_try = ws.energy + step * ws.dir.tail(n);
        const double psi_try =
            barrier_value(p, t, ws.alpha_try, ws.energy_try, ws.s_cum_try, ws.s_int_try);
        if (psi_try <= psi0 + cfg.backtrack_a * step * slope) {
          ws.alpha.swap(ws.alpha_try);
          ws.energy.swap(ws.energy_try);
          ws.s_cum.swap(ws.s_cum_try);
          ws.s_int.swap(ws.s_int_try);
          moved = true;
          break;
        }
        step *= cfg.backtrack_b;
      }
    }
    if (!moved) return floor_or_failed(dec2);  // step length at its numerical floor
  }
  return floor_or_failed(dec2);
}

struct BarrierOutcome {
  Eigen::VectorXd alpha, energy, s_cum, s_int;
  double t = 0.0;
  int stages = 0;
  int newton_iterations = 0;
  bool converged = false;
};

BarrierOutcome run_barrier(const ReducedProblem& p, const SolverConfig& cfg) {
  const std::size_t n = p.slots();
  Workspace ws(n);

  // interior start: alpha = 1/2, E strictly inside budget and cap
  for (std::size_t i = 0; i < n; ++i) {
    ws.alpha[Eigen::Index(i)] = 0.5;
    double e = 0.25 * p.hp;
    if (p.with_int && p.h_sp[i] > 0.0) e = std::min(e, 0.25 * p.p_int / p.h_sp[i]);
    ws.energy[Eigen::Index(i)] = e;
  }

  BarrierOutcome out;
  double t = cfg.barrier_t0;
  bool ok = true;
  const double m_ineq = p.inequality_count();
  for (int stage = 0; stage < 1000; ++stage) {
    ++out.stages;
    ok = center_stage(p, ws, t, cfg, out.newton_iterations) != StageResult::failed;
    if (!ok || m_ineq / t <= cfg.outer_tol) break;
    t *= cfg.barrier_mu;
  }
  out.converged = ok;

  if (ok) {
    // Optional extra stages: at an optimum the horizon-final causality
    // constraint is active but the central path only approaches it at rate
    // 1/t, so keep pushing until the leftover is negligible against the
    // harvest. Roll back if a stage hits its numerical floor.
    for (int extra = 0; extra < 6 && t < 1e13; ++extra) {
      const auto n_i = Eigen::Index(n);
      const double harvest =
          p.offset[n - 1] + p.hp * (double(n) - ws.alpha.head(n_i).sum());
      if (ws.s_cum[n_i - 1] <= 1e-8 * std::max(harvest, 1e-300)) break;
      // demand full-quality centering here: a floor-accepted stage at these
      // t values would trade KKT residual quality for depletion slack
      const Eigen::VectorXd alpha_keep = ws.alpha, energy_keep = ws.energy;
      const double t_next = t * cfg.barrier_mu;
      int extra_newton = 0;
      if (center_stage(p, ws, t_next, cfg, extra_newton) == StageResult::converged) {
        out.newton_iterations += extra_newton;
        ++out.stages;
        t = t_next;
      } else {
        ws.alpha = alpha_keep;
        ws.energy = energy_keep;
        break;
      }
    }
  }

  compute_slacks(p, ws.alpha, ws.energy, ws.s_cum, ws.s_int);
  out.alpha = ws.alpha;
  out.energy = ws.energy;
  out.s_cum = ws.s_cum;
  out.s_int = ws.s_int;
  out.t = t;
  return out;
}

void validate_instance(const Instance& instance) {
  instance.params.validate();
  instance.channels.validate();
  const std::size_t m = instance.channels.slots();
  if (instance.theta.size() != m || instance.zeta.size() != m || instance.psi.size() != m) {
    throw std::invalid_argument("Instance: derived coefficient vectors must have length m");
  }
}

// All-harvest policy for instances whose only feasible energy is zero.
PolicySolution degenerate_solution(const Instance& instance, bool interference_pinned) {
  const std::size_t m = instance.slots();
  PolicySolution sol;
  sol.policy_tag = PolicyTag::offline;
  sol.alpha.assign(m, 1.0);
  sol.energy.assign(m, 0.0);
  sol.diagnostics.converged = true;
  sol.diagnostics.final_barrier_t = 0.0;

  DualEstimates& d = sol.diagnostics.duals;
  d.lambda.assign(m, 0.0);
  d.gamma.assign(m, 0.0);
  d.mu.assign(m, 0.0);
  d.nu.assign(m, 0.0);
  d.xi.assign(m, 0.0);
  if (interference_pinned) {
    // stationarity in E is balanced by the interference multiplier
    for (std::size_t i = 0; i < m; ++i) {
      d.gamma[i] = instance.theta[i] / instance.channels.h_sp[i];
    }
  } else {
    // no harvest at all: charge the causality multipliers, nonincreasing
    // suffix maxima keep every lambda_i nonnegative
    double suffix = 0.0;
    std::vector<double> big(m);
    for (std::size_t i = m; i-- > 0;) {
      suffix = std::max(suffix, instance.theta[i]);
      big[i] = suffix;
    }
    for (std::size_t i = 0; i < m; ++i) {
      d.lambda[i] = big[i] - (i + 1 < m ? big[i + 1] : 0.0);
      d.nu[i] = big[i] - instance.theta[i];
    }
  }
  finalize_solution(instance, sol);
  return sol;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(barrier_t0 > 0.0) || !(barrier_mu > 1.0) || !(outer_tol > 0.0) || !(newton_tol > 0.0) ||
      max_newton < 1 || !(backtrack_a > 0.0 && backtrack_a < 0.5) ||
      !(backtrack_b > 0.0 && backtrack_b < 1.0)) {
    throw std::invalid_argument("SolverConfig: invalid barrier/line-search parameters");
  }
}

std::pair<std::vector<double>, std::vector<double>> strictly_feasible_start(
    const Instance& instance) {
  validate_instance(instance);
  const double hp = instance.params.eta * instance.params.pp;
  if (hp <= 0.0) {
    throw std::invalid_argument("strictly_feasible_start: degenerate instance (eta*pp = 0)");
  }
  const std::size_t m = instance.slots();
  if (instance.params.p_int == 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (instance.channels.h_sp[i] > 0.0) {
        throw std::invalid_argument(
            "strictly_feasible_start: degenerate instance (p_int = 0 with h_sp > 0)");
      }
    }
  }
  std::vector<double> alpha(m, 0.5), energy(m);
  for (std::size_t i = 0; i < m; ++i) {
    double e = 0.5 * hp;
    if (instance.channels.h_sp[i] > 0.0) {
      e = std::min(e, 0.5 * instance.params.p_int / instance.channels.h_sp[i]);
    }
    energy[i] = 0.5 * e;
  }
  return {std::move(alpha), std::move(energy)};
}

PolicySolution solve_offline(const Instance& instance, const SolverConfig& config) {
  validate_instance(instance);
  config.validate();

  const std::size_t m = instance.slots();
  const double hp = instance.params.eta * instance.params.pp;
  const double p_int = instance.params.p_int;

  if (hp == 0.0) return degenerate_solution(instance, false);

  // Slots whose interference cap forces E = 0 drop out of the program;
  // they harvest the whole slot (alpha = 0) for the benefit of the rest.
  std::vector<bool> pinned(m, false);
  std::size_t free_count = m;
  if (p_int == 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (instance.channels.h_sp[i] > 0.0) {
        pinned[i] = true;
        --free_count;
      }
    }
    if (free_count == 0) return degenerate_solution(instance, true);
  }

  ReducedProblem prob;
  prob.hp = hp;
  prob.p_int = p_int;
  prob.with_int = p_int > 0.0;
  prob.theta.reserve(free_count);
  prob.h_sp.reserve(free_count);
  prob.offset.reserve(free_count);
  prob.original.reserve(free_count);
  std::size_t pinned_before = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (pinned[i]) {
      ++pinned_before;
      continue;
    }
    prob.theta.push_back(instance.theta[i]);
    prob.h_sp.push_back(instance.channels.h_sp[i]);
    prob.offset.push_back(hp * double(pinned_before));
    prob.original.push_back(i);
  }

  const BarrierOutcome out = run_barrier(prob, config);

  PolicySolution sol;
  sol.policy_tag = PolicyTag::offline;
  sol.alpha.assign(m, 0.0);
  sol.energy.assign(m, 0.0);
  sol.diagnostics.newton_iterations = out.newton_iterations;
  sol.diagnostics.barrier_stages = out.stages;
  sol.diagnostics.final_barrier_t = out.t;
  sol.diagnostics.converged = out.converged;

  DualEstimates& d = sol.diagnostics.duals;
  d.lambda.assign(m, 0.0);
  d.gamma.assign(m, 0.0);
  d.mu.assign(m, 0.0);
  d.nu.assign(m, 0.0);
  d.xi.assign(m, 0.0);

  const double t = out.t;
  for (std::size_t r = 0; r < prob.slots(); ++r) {
    const std::size_t i = prob.original[r];
    const auto ri = Eigen::Index(r);
    sol.alpha[i] = out.alpha[ri];
    sol.energy[i] = out.energy[ri];
    d.lambda[i] = 1.0 / (t * out.s_cum[ri]);
    if (prob.with_int) d.gamma[i] = 1.0 / (t * out.s_int[ri]);
    d.mu[i] = 1.0 / (t * (1.0 - out.alpha[ri]));
    d.nu[i] = 1.0 / (t * out.energy[ri]);
    d.xi[i] = 1.0 / (t * out.alpha[ri]);
  }

  // Multipliers for the pinned slots, chosen to satisfy stationarity
  // exactly at alpha = 0, E = 0.
  if (free_count < m) {
    double cum_lambda = 0.0;
    for (std::size_t i = m; i-- > 0;) {
      if (!pinned[i]) {
        cum_lambda += d.lambda[i];
        continue;
      }
      const double hsp = instance.channels.h_sp[i];
      d.gamma[i] = std::max(0.0, instance.theta[i] - cum_lambda) / hsp;
      d.nu[i] = cum_lambda + d.gamma[i] * hsp - instance.theta[i];
      d.xi[i] = hp * cum_lambda;
    }
  }

  finalize_solution(instance, sol);
  return sol;
}

KktReport kkt_report(const Instance& instance, const PolicySolution& solution) {
  validate_instance(instance);
  const std::size_t m = instance.slots();
  if (solution.alpha.size() != m || solution.energy.size() != m) {
    throw std::invalid_argument("kkt_report: solution does not match instance");
  }
  const DualEstimates& d = solution.diagnostics.duals;
  if (d.lambda.size() != m || d.gamma.size() != m || d.mu.size() != m || d.nu.size() != m ||
      d.xi.size() != m) {
    throw std::invalid_argument("kkt_report: solution carries no dual estimates");
  }

  const double hp = instance.params.eta * instance.params.pp;
  const double p_int = instance.params.p_int;

  std::vector<double> lambda_suffix(m + 1, 0.0);
  for (std::size_t i = m; i-- > 0;) lambda_suffix[i] = lambda_suffix[i + 1] + d.lambda[i];

  KktReport report;
  double cum = 0.0;
  double dual_min = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = solution.alpha[i], e = solution.energy[i];
    const double theta = instance.theta[i];
    const double hsp = instance.channels.h_sp[i];
    const double u = a > 0.0 ? theta * e / a : 0.0;
    const double den = 1.0 + u;

    const double stat_a = u / (kLn2 * den) - std::log1p(u) / kLn2 +
                          (hp * lambda_suffix[i] - p_int * d.gamma[i] + d.mu[i] - d.xi[i]) / kLn2;
    const double stat_e =
        -theta / (kLn2 * den) + (lambda_suffix[i] + d.gamma[i] * hsp - d.nu[i]) / kLn2;
    report.stat_alpha_residual = std::max(report.stat_alpha_residual, std::abs(stat_a));
    report.stat_energy_residual = std::max(report.stat_energy_residual, std::abs(stat_e));

    cum += hp * (1.0 - a) - e;
    const double s_cum = cum;
    const double s_int = p_int * a - hsp * e;
    for (double pair : {d.lambda[i] * s_cum, d.gamma[i] * s_int, d.mu[i] * (1.0 - a), d.nu[i] * e,
                        d.xi[i] * a}) {
      report.comp_slack_residual = std::max(report.comp_slack_residual, std::abs(pair) / kLn2);
    }
    for (double violation : {-s_cum, -s_int, -e, a - 1.0, -a}) {
      report.primal_feas_violation = std::max(report.primal_feas_violation, violation);
    }
    for (double mult : {d.lambda[i], d.gamma[i], d.mu[i], d.nu[i], d.xi[i]}) {
      dual_min = std::min(dual_min, mult);
    }
  }
  report.primal_feas_violation = std::max(report.primal_feas_violation, 0.0);
  report.dual_feas_violation = std::min(0.0, dual_min / kLn2);
  return report;
}

double depletion_residual(const Instance& instance, const PolicySolution& solution) {
  const std::size_t m = instance.slots();
  if (solution.alpha.size() != m || solution.energy.size() != m) {
    throw std::invalid_argument("depletion_residual: solution does not match instance");
  }
  const double hp = instance.params.eta * instance.params.pp;
  double harvested = 0.0, consumed = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    harvested += hp * (1.0 - solution.alpha[i]);
    consumed += solution.energy[i];
  }
  return harvested - consumed;
}

}  // namespace ehcr
