#include "ehcr/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ehcr {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool all_finite_nonneg(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) return false;
  }
  return true;
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(pp) && pp > 0.0, "SystemParams: pp must be positive");
  require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0, "SystemParams: eta must lie in [0, 1]");
  require(std::isfinite(p_int) && p_int >= 0.0, "SystemParams: p_int must be nonnegative");
  require(std::isfinite(sigma_s2) && sigma_s2 > 0.0, "SystemParams: sigma_s2 must be positive");
  require(std::isfinite(sigma_p2) && sigma_p2 >= 0.0, "SystemParams: sigma_p2 must be nonnegative");
  require(slot_seconds == 1.0, "SystemParams: slot length is fixed at 1 s");
}

void ChannelRealization::validate() const {
  const std::size_t m = h_ss.size();
  require(m >= 1, "ChannelRealization: need at least one slot");
  require(h_pp.size() == m && h_ps.size() == m && h_sp.size() == m,
          "ChannelRealization: gain sequences must all have length m");
  require(all_finite_nonneg(h_pp) && all_finite_nonneg(h_ps) && all_finite_nonneg(h_sp) &&
              all_finite_nonneg(h_ss),
          "ChannelRealization: gains must be finite and nonnegative");
}

std::string to_string(PolicyTag tag) {
  switch (tag) {
    case PolicyTag::offline: return "offline";
    case PolicyTag::myopic: return "myopic";
    case PolicyTag::oracle: return "oracle";
  }
  return "unknown";
}

Instance derived_coefficients(const SystemParams& params, const ChannelRealization& channels) {
  params.validate();
  channels.validate();

  const std::size_t m = channels.slots();
  Instance inst;
  inst.params = params;
  inst.channels = channels;
  inst.theta.resize(m);
  inst.zeta.resize(m);
  inst.psi.resize(m);

  const double hp = params.eta * params.pp;
  for (std::size_t i = 0; i < m; ++i) {
    inst.theta[i] = channels.h_ss[i] / (params.sigma_s2 + channels.h_ps[i] * params.pp);
    inst.zeta[i] = inst.theta[i] * hp;
    if (channels.h_sp[i] == 0.0) {
      inst.psi[i] = 0.0;
    } else {
      const double denom = params.p_int + channels.h_sp[i] * hp;
      inst.psi[i] = denom > 0.0 ? channels.h_sp[i] * hp / denom : 1.0;
    }
  }
  return inst;
}

double slot_rate(double alpha, double energy, double theta) {
  if (!std::isfinite(alpha) || !std::isfinite(energy) || !std::isfinite(theta) || alpha < 0.0 ||
      energy < 0.0 || theta < 0.0) {
    throw std::domain_error("slot_rate: inputs must be finite and nonnegative");
  }
  if (alpha == 0.0) return 0.0;
  const double x = theta * energy;
  if (x == 0.0) return 0.0;
  const double u = x / alpha;
  if (std::isinf(u)) {
    // 1 + u ~ u; evaluate alpha * log2(x/alpha) without forming the ratio
    return alpha * (std::log(x) - std::log(alpha)) * kInvLn2;
  }
  return alpha * std::log1p(u) * kInvLn2;
}

double sum_rate(const std::vector<double>& alpha, const std::vector<double>& energy,
                const Instance& instance) {
  const std::size_t m = instance.slots();
  require(alpha.size() == m && energy.size() == m, "sum_rate: vectors must have length m");
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    total += slot_rate(alpha[i], energy[i], instance.theta[i]);
  }
  return total;
}

std::vector<double> recover_power(const std::vector<double>& alpha,
                                  const std::vector<double>& energy) {
  require(alpha.size() == energy.size(), "recover_power: vectors must have equal length");
  std::vector<double> power(alpha.size(), 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0.0 || energy[i] < 0.0) {
      throw std::domain_error("recover_power: alpha and energy must be nonnegative");
    }
    if (alpha[i] > 0.0) {
      power[i] = energy[i] / alpha[i];
    } else if (energy[i] > 0.0) {
      throw std::invalid_argument("recover_power: slot " + std::to_string(i + 1) +
                                  " consumes energy with alpha = 0");
    }
  }
  return power;
}

std::vector<double> harvest_profile(const std::vector<double>& alpha, const SystemParams& params) {
  std::vector<double> harvested(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    harvested[i] = (1.0 - alpha[i]) * params.eta * params.pp;
  }
  return harvested;
}

void finalize_solution(const Instance& instance, PolicySolution& solution) {
  solution.power = recover_power(solution.alpha, solution.energy);
  const std::size_t m = instance.slots();
  solution.slot_rates.resize(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    solution.slot_rates[i] = slot_rate(solution.alpha[i], solution.energy[i], instance.theta[i]);
    total += solution.slot_rates[i];
  }
  solution.sum_rate = total;
}

}  // namespace ehcr
