#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Physical quantities of the slotted energy-harvesting underlay link and
// the closed-form per-slot maps shared by every policy. All types are
// immutable values and all operations are pure.

namespace ehcr {

/// Scalar physical constants. The slot length is fixed at 1 s, so per-slot
/// energy (J) and transmit power (W) are related only through the
/// time-sharing fraction alpha.
struct SystemParams {
  double pp = 2.0;        ///< primary transmit power [W]
  double eta = 0.3;       ///< harvesting efficiency, in [0, 1]
  double p_int = 0.1;     ///< interference threshold at the primary receiver [W]
  double sigma_s2 = 0.1;  ///< noise variance at the secondary receiver [W]
  double sigma_p2 = 0.1;  ///< noise variance at the primary receiver [W] (carried, unused)
  double slot_seconds = 1.0;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Per-slot channel power gains for m slots.
struct ChannelRealization {
  std::vector<double> h_pp;  ///< primary TX -> primary RX
  std::vector<double> h_ps;  ///< primary TX -> secondary RX
  std::vector<double> h_sp;  ///< secondary TX -> primary RX
  std::vector<double> h_ss;  ///< secondary TX -> secondary RX

  std::size_t slots() const { return h_ss.size(); }
  void validate() const;
};

/// Parameters + gains + the derived per-slot coefficients consumed by the
/// solvers: theta (effective SNR per unit power), zeta = theta*eta*pp, and
/// psi (the interference-induced lower bound on alpha).
struct Instance {
  SystemParams params;
  ChannelRealization channels;
  std::vector<double> theta;
  std::vector<double> zeta;
  std::vector<double> psi;

  std::size_t slots() const { return theta.size(); }
};

enum class PolicyTag { offline, myopic, oracle };

std::string to_string(PolicyTag tag);

/// Multiplier estimates for the constraint families of the offline program,
/// in natural-log units (divide by ln 2 for the base-2 rate convention).
struct DualEstimates {
  std::vector<double> lambda;  ///< cumulative energy causality
  std::vector<double> gamma;   ///< per-slot interference cap
  std::vector<double> mu;      ///< alpha <= 1
  std::vector<double> nu;      ///< energy >= 0
  std::vector<double> xi;      ///< alpha >= 0

  bool empty() const { return lambda.empty(); }
};

struct SolveDiagnostics {
  int newton_iterations = 0;
  int barrier_stages = 0;
  double final_barrier_t = 0.0;
  bool converged = true;
  DualEstimates duals;
};

/// A time-sharing/energy policy evaluated on one realization.
struct PolicySolution {
  std::vector<double> alpha;       ///< transmit fraction per slot, in [0, 1]
  std::vector<double> energy;      ///< consumed energy per slot [J]
  std::vector<double> power;       ///< transmit power per slot [W]
  std::vector<double> slot_rates;  ///< [bits/s/Hz]
  double sum_rate = 0.0;
  PolicyTag policy_tag = PolicyTag::oracle;
  SolveDiagnostics diagnostics;

  std::size_t slots() const { return alpha.size(); }
};

/// Builds an Instance, computing theta_i = h_ss_i / (sigma_s2 + h_ps_i*pp),
/// zeta_i = theta_i*eta*pp and psi_i = h_sp_i*eta*pp / (p_int + h_sp_i*eta*pp).
/// psi_i is 0 when h_sp_i = 0 (no interference path) and 1 when the
/// denominator vanishes with h_sp_i > 0.
Instance derived_coefficients(const SystemParams& params, const ChannelRealization& channels);

/// alpha * log2(1 + theta*energy/alpha), continuously extended to 0 at
/// alpha = 0. Throws std::domain_error on negative or non-finite inputs.
double slot_rate(double alpha, double energy, double theta);

/// Sum of slot_rate over all slots. Throws on length mismatch.
double sum_rate(const std::vector<double>& alpha, const std::vector<double>& energy,
                const Instance& instance);

/// P_i = E_i / alpha_i where alpha_i > 0, else 0. A slot with energy > 0
/// and alpha = 0 is inconsistent and throws std::invalid_argument.
std::vector<double> recover_power(const std::vector<double>& alpha,
                                  const std::vector<double>& energy);

/// Per-slot harvested energy (1 - alpha_i) * eta * pp.
std::vector<double> harvest_profile(const std::vector<double>& alpha, const SystemParams& params);

/// Fills power, slot_rates and sum_rate of a solution from (alpha, energy).
void finalize_solution(const Instance& instance, PolicySolution& solution);

}  // namespace ehcr
