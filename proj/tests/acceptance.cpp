// Acceptance suite: one criterion per line, nonzero exit on any failure.
// Criteria 7 and 8 share one full default-grid sweep (the heavyweight run).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ehcr/channel.hpp"
#include "ehcr/model.hpp"
#include "ehcr/myopic.hpp"
#include "ehcr/offline.hpp"
#include "ehcr/oracle.hpp"
#include "ehcr/rng.hpp"
#include "ehcr/sweep.hpp"

using namespace ehcr;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const char* id, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] %s %s: %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

Instance seeded_instance(std::size_t m, std::uint64_t tag, double eta = 0.3, double p_int = 0.1) {
  SystemParams params;
  params.eta = eta;
  params.p_int = p_int;
  const std::uint64_t seed = rng::splitmix64(tag);
  return derived_coefficients(params,
                              sample_realization(scenario_variances(Scenario::baseline), m, seed));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// ---- criterion 1: single-slot oracle equivalence ---------------------------

std::vector<PolicySolution> g_offline_solutions;  // pooled for criterion 5
std::vector<Instance> g_offline_instances;

void criterion_1() {
  const auto start = Clock::now();
  double worst = 0.0;
  bool pass = true;
  for (int k = 0; k < 100; ++k) {
    const Instance inst = seeded_instance(1, 100 + std::uint64_t(k));
    const PolicySolution sol = solve_offline(inst);
    const double oracle_obj = oracle_offline_m1(inst).sum_rate;
    const double rel = std::abs(sol.sum_rate - oracle_obj) / (1.0 + std::abs(oracle_obj));
    worst = std::max(worst, rel);
    pass = pass && sol.diagnostics.converged && rel <= 1e-3;
    g_offline_solutions.push_back(sol);
    g_offline_instances.push_back(inst);
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 5.0;
  report("C1", "oracle-equivalence-m1", pass,
         "max relative gap " + fmt(worst) + " over 100 instances", elapsed);
}

void criterion_2() {
  const auto start = Clock::now();
  double worst = 0.0;
  bool pass = true;
  for (int k = 0; k < 50; ++k) {
    const Instance inst = seeded_instance(2, 200 + std::uint64_t(k));
    const PolicySolution sol = solve_offline(inst);
    const double oracle_obj = oracle_offline_m2(inst).sum_rate;
    const double rel = std::abs(sol.sum_rate - oracle_obj) / (1.0 + std::abs(oracle_obj));
    worst = std::max(worst, rel);
    pass = pass && sol.diagnostics.converged && rel <= 5e-3;
    g_offline_solutions.push_back(sol);
    g_offline_instances.push_back(inst);
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 60.0;
  report("C2", "oracle-equivalence-m2", pass,
         "max relative gap " + fmt(worst) + " over 50 instances", elapsed);
}

void criterion_3() {
  const auto start = Clock::now();
  bool pass = true;
  double worst_obj_gap = 0.0, worst_residual = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double u1 = rng::to_unit(rng::word_at(3, 0, std::uint64_t(k)));
    const double u2 = rng::to_unit(rng::word_at(3, 1, std::uint64_t(k)));
    const double zeta = std::pow(10.0, -4.0 + 6.0 * u1);
    const double psi = u2;

    const double closed = myopic_slot(zeta, psi);
    const double gridded = oracle_myopic_slot(zeta, psi);
    const double gap = std::abs(slot_rate(closed, 1.0 - closed, zeta) -
                                slot_rate(gridded, 1.0 - gridded, zeta));
    worst_obj_gap = std::max(worst_obj_gap, gap);
    pass = pass && gap <= 1e-6;

    const double z = solve_z(zeta);
    const double residual = std::abs(z * std::log(z) - z - zeta + 1.0) / (1.0 + zeta);
    worst_residual = std::max(worst_residual, residual);
    pass = pass && residual <= 1e-12;
  }
  const double z1 = solve_z(1.0);
  pass = pass && std::abs(z1 - 2.718281828459045) <= 1e-12;
  report("C3", "myopic-closed-form", pass,
         "max objective gap " + fmt(worst_obj_gap) + ", max z-residual " + fmt(worst_residual) +
             ", |z*(1) - e| = " + fmt(std::abs(z1 - 2.718281828459045)),
         seconds_since(start));
}

void criterion_4() {
  const auto start = Clock::now();
  bool pass = true;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Instance inst = seeded_instance(10, 400 + std::uint64_t(k));
    const PolicySolution sol = solve_offline(inst);
    pass = pass && sol.diagnostics.converged;
    const KktReport rep = kkt_report(inst, sol);
    const double scale = 1e-4 * (1.0 + std::abs(sol.sum_rate));
    const double residual = std::max({rep.stat_alpha_residual, rep.stat_energy_residual,
                                      rep.comp_slack_residual});
    worst = std::max(worst, residual / scale);
    pass = pass && residual <= scale && rep.primal_feas_violation <= 1e-10 &&
           rep.dual_feas_violation >= -1e-12;
    g_offline_solutions.push_back(sol);
    g_offline_instances.push_back(inst);
  }
  report("C4", "kkt-residuals", pass,
         "max residual at " + fmt(worst) + " of the 1e-4*(1+|obj|) budget over 100 instances",
         seconds_since(start));
}

void criterion_5() {
  const auto start = Clock::now();
  // widen the pool with fresh m = 20 instances across the (eta, p_int) grid
  const double etas[] = {0.1, 0.3, 0.5};
  const double p_ints[] = {0.05, 0.1, 0.5};
  for (int k = 0; k < 99; ++k) {
    const Instance inst =
        seeded_instance(20, 500 + std::uint64_t(k), etas[k % 3], p_ints[(k / 3) % 3]);
    g_offline_instances.push_back(inst);
    g_offline_solutions.push_back(solve_offline(inst));
  }

  bool pass = true;
  double worst = 0.0;
  int counted = 0;
  for (std::size_t i = 0; i < g_offline_solutions.size(); ++i) {
    const PolicySolution& sol = g_offline_solutions[i];
    if (!sol.diagnostics.converged) continue;
    ++counted;
    double harvest = 0.0;
    for (double a : sol.alpha) {
      harvest += (1.0 - a) * g_offline_instances[i].params.eta * g_offline_instances[i].params.pp;
    }
    const double fraction =
        depletion_residual(g_offline_instances[i], sol) / std::max(harvest, 1e-300);
    worst = std::max(worst, fraction);
    pass = pass && fraction <= 1e-6;
  }
  report("C5", "depletion", pass,
         "max leftover fraction " + fmt(worst) + " over " + std::to_string(counted) +
             " converged solves",
         seconds_since(start));
}

void criterion_6() {
  const auto start = Clock::now();
  SweepSpec spec;  // default grid
  spec.trials = 112;  // 90 cells x 112 = 10080 paired trials
  const SweepResult result = run_sweep(spec, 0, true);

  std::map<std::tuple<std::size_t, double, double, int>, double> offline_rate;
  bool pass = result.non_converged == 0;
  long trials = 0;
  double worst_gap = 0.0;
  for (const TrialRecord& rec : result.trial_records) {
    const auto key = std::make_tuple(rec.m, rec.eta, rec.p_int, rec.trial);
    if (rec.policy == PolicyTag::offline) {
      offline_rate[key] = rec.sum_rate;
    } else {
      ++trials;
      const double gap = offline_rate.at(key) - rec.sum_rate;
      worst_gap = std::min(worst_gap, gap);
      pass = pass && gap >= -1e-6;
    }
  }
  pass = pass && trials >= 10000;
  report("C6", "dominance", pass,
         "min(offline - myopic) = " + fmt(worst_gap) + " over " + std::to_string(trials) +
             " paired trials",
         seconds_since(start));
}

// shared by criteria 7 and 8
double g_sweep_seconds = 0.0;

void criterion_7_and_8() {
  auto start = Clock::now();
  const SweepSpec spec;  // defaults: full grid, 1000 trials, default seed
  const SweepResult sweep = run_sweep(spec, 0, false);
  g_sweep_seconds = seconds_since(start);

  std::map<std::tuple<std::size_t, double, double, int>, double> avg;
  for (const AggregateResult& a : sweep.aggregates) {
    avg[{a.m, a.eta, a.p_int, int(a.policy)}] = a.avg_sum_rate;
  }
  const auto offline_avg = [&](std::size_t m, double eta, double p_int) {
    return avg.at({m, eta, p_int, int(PolicyTag::offline)});
  };
  const auto myopic_avg = [&](std::size_t m, double eta, double p_int) {
    return avg.at({m, eta, p_int, int(PolicyTag::myopic)});
  };

  bool pass = sweep.non_converged == 0;
  std::string why;

  // nondecreasing in m for every (eta, p_int)
  for (double eta : spec.etas) {
    for (double p_int : spec.p_ints) {
      for (std::size_t i = 1; i < spec.slot_counts.size(); ++i) {
        if (!(offline_avg(spec.slot_counts[i], eta, p_int) >=
              offline_avg(spec.slot_counts[i - 1], eta, p_int))) {
          pass = false;
          why += " m-trend";
        }
      }
    }
  }
  // nondecreasing in eta and p_int
  for (std::size_t m : spec.slot_counts) {
    for (double p_int : spec.p_ints) {
      if (!(offline_avg(m, 0.1, p_int) <= offline_avg(m, 0.3, p_int) &&
            offline_avg(m, 0.3, p_int) <= offline_avg(m, 0.5, p_int))) {
        pass = false;
        why += " eta-trend";
      }
    }
    for (double eta : spec.etas) {
      if (!(offline_avg(m, eta, 0.05) <= offline_avg(m, eta, 0.1) &&
            offline_avg(m, eta, 0.1) <= offline_avg(m, eta, 0.5))) {
        pass = false;
        why += " p_int-trend";
      }
    }
  }
  // policy gap shrinks as the interference budget tightens (eta 0.3, m 20)
  const double gap_tight = offline_avg(20, 0.3, 0.05) - myopic_avg(20, 0.3, 0.05);
  const double gap_loose = offline_avg(20, 0.3, 0.5) - myopic_avg(20, 0.3, 0.5);
  if (!(gap_tight < gap_loose)) {
    pass = false;
    why += " gap-trend";
  }

  // scenario comparisons at m = 20, eta = 0.3, p_int = 0.1
  start = Clock::now();
  SweepSpec scen;
  scen.slot_counts = {20};
  scen.etas = {0.3};
  scen.p_ints = {0.1};
  scen.scenarios = {Scenario::baseline, Scenario::weak_st_pr, Scenario::weak_pt_sr,
                    Scenario::strong_direct, Scenario::strong_interference};
  scen.policies = {PolicyTag::offline};
  const SweepResult scen_sweep = run_sweep(scen, 0, false);
  std::map<int, double> scen_avg;
  for (const AggregateResult& a : scen_sweep.aggregates) scen_avg[int(a.scenario)] = a.avg_sum_rate;
  const double scen_seconds = seconds_since(start);

  if (!(scen_avg.at(int(Scenario::weak_st_pr)) > scen_avg.at(int(Scenario::baseline)))) {
    pass = false;
    why += " weak_st_pr<=baseline";
  }
  if (!(scen_avg.at(int(Scenario::strong_direct)) >
        scen_avg.at(int(Scenario::strong_interference)))) {
    pass = false;
    why += " strong_direct<=strong_interference";
  }

  report("C7", "trend-reproduction", pass,
         why.empty() ? "all monotone trends and scenario orderings hold at 1000 trials"
                     : "violated:" + why,
         g_sweep_seconds + scen_seconds);

  // criterion 8: performance envelope
  start = Clock::now();
  const Instance big = seeded_instance(50, 880);
  const PolicySolution big_sol = solve_offline(big);
  const double solve50 = seconds_since(start);
  const bool pass8 = big_sol.diagnostics.converged && solve50 < 1.0 && g_sweep_seconds < 600.0;
  report("C8", "performance-envelope", pass8,
         "solve_offline(m=50) " + fmt(solve50) + " s, default sweep " + fmt(g_sweep_seconds) +
             " s",
         solve50 + g_sweep_seconds);
}

void criterion_9() {
  const auto start = Clock::now();
  SweepSpec spec;
  spec.slot_counts = {5, 10};
  spec.etas = {0.3};
  spec.p_ints = {0.1, 0.5};
  spec.trials = 50;

  const auto run_once = [&](int threads) {
    std::ostringstream agg, trials;
    const SweepResult result = run_sweep(spec, threads, true);
    write_aggregate_csv(agg, result.aggregates);
    write_trials_csv(trials, result.trial_records);
    return agg.str() + "\x1e" + trials.str();
  };
  const std::string a = run_once(1);
  const std::string b = run_once(2);
  const std::string c = run_once(0);

  std::ostringstream t1, t2;
  write_trace(std::string("/tmp/ehcr_acc_trace1.csv"),
              sample_realization(scenario_variances("baseline"), 64, 12345));
  write_trace(std::string("/tmp/ehcr_acc_trace2.csv"),
              sample_realization(scenario_variances("baseline"), 64, 12345));
  std::ifstream f1("/tmp/ehcr_acc_trace1.csv"), f2("/tmp/ehcr_acc_trace2.csv");
  std::ostringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  std::remove("/tmp/ehcr_acc_trace1.csv");
  std::remove("/tmp/ehcr_acc_trace2.csv");

  const bool pass = a == b && a == c && s1.str() == s2.str() && !a.empty() && !s1.str().empty();
  report("C9", "determinism", pass,
         pass ? "sweep and trace outputs byte-identical across runs and thread counts"
              : "outputs differ",
         seconds_since(start));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7_and_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
