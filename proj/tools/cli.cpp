#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ehcr/channel.hpp"
#include "ehcr/config.hpp"
#include "ehcr/model.hpp"
#include "ehcr/myopic.hpp"
#include "ehcr/offline.hpp"
#include "ehcr/oracle.hpp"
#include "ehcr/rng.hpp"
#include "ehcr/sweep.hpp"

namespace ehcr::cli {

namespace {

using nlohmann::json;

/// Shortest round-trip literal, shared by the table and the JSON output so
/// both carry identical numbers.
std::string num(double x) { return json(x).dump(); }

LinkVariances parse_variances(const std::string& text) {
  try {
    return scenario_variances(text);
  } catch (const std::invalid_argument&) {
    // fall through to the comma-separated form v_pp,v_ps,v_sp,v_ss
  }
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw std::invalid_argument("--variances: '" + field + "' is not a number");
    }
  }
  if (values.size() != 4) {
    throw std::invalid_argument(
        "--variances expects a scenario name or 4 comma-separated values v_pp,v_ps,v_sp,v_ss");
  }
  LinkVariances v{values[0], values[1], values[2], values[3]};
  v.validate();
  return v;
}

int cmd_gen_channels(const std::string& variances, std::size_t slots, std::uint64_t seed,
                     const std::string& out_path) {
  const ChannelRealization realization = sample_realization(parse_variances(variances), slots, seed);
  write_trace(out_path, realization);
  std::cout << "wrote " << slots << " slots to " << out_path << "\n";
  return 0;
}

int cmd_solve(const std::string& policy, const std::string& trace_path,
              const std::string& config_path, bool as_json, double eta, double p_int) {
  SystemParams params;
  if (!config_path.empty()) {
    const SweepSpec cfg = load_config(config_path);
    params = cfg.params;
  }
  params.eta = eta;
  params.p_int = p_int;

  const ChannelRealization realization = read_trace(trace_path);
  const Instance instance = derived_coefficients(params, realization);

  PolicySolution sol;
  if (policy == "offline") {
    sol = solve_offline(instance);
  } else if (policy == "myopic") {
    sol = solve_myopic(instance);
  } else {
    throw std::invalid_argument("--policy must be offline or myopic");
  }

  if (as_json) {
    json doc;
    doc["policy"] = to_string(sol.policy_tag);
    doc["converged"] = sol.diagnostics.converged;
    doc["sum_rate"] = sol.sum_rate;
    doc["slots"] = json::array();
    for (std::size_t i = 0; i < sol.slots(); ++i) {
      doc["slots"].push_back({{"slot", i + 1},
                              {"alpha", sol.alpha[i]},
                              {"energy", sol.energy[i]},
                              {"power", sol.power[i]},
                              {"rate", sol.slot_rates[i]}});
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "slot,alpha,energy,power,rate\n";
    for (std::size_t i = 0; i < sol.slots(); ++i) {
      std::cout << (i + 1) << ',' << num(sol.alpha[i]) << ',' << num(sol.energy[i]) << ','
                << num(sol.power[i]) << ',' << num(sol.slot_rates[i]) << '\n';
    }
    std::cout << "sum_rate," << num(sol.sum_rate) << " bits/s/Hz (policy " << policy
              << (sol.diagnostics.converged ? "" : ", NOT converged") << ")\n";
  }
  if (!sol.diagnostics.converged) return 1;
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, bool per_trial,
              int threads) {
  const SweepSpec spec = load_config(config_path);
  std::filesystem::create_directories(out_dir);

  const SweepResult result = run_sweep(spec, threads, per_trial);

  for (const AggregateResult& a : result.aggregates) {
    std::cout << "cell m=" << a.m << " eta=" << num(a.eta) << " p_int=" << num(a.p_int)
              << " scenario=" << to_string(a.scenario) << " policy=" << to_string(a.policy)
              << ": avg=" << num(a.avg_sum_rate) << " stderr=" << num(a.std_error) << " trials="
              << a.trials << "\n";
  }
  if (result.non_converged > 0) {
    std::cout << "excluded " << result.non_converged << " non-converged trial results\n";
  }

  const auto out = std::filesystem::path(out_dir);
  {
    std::ofstream f(out / "aggregates.csv");
    if (!f) throw std::runtime_error("cannot write " + (out / "aggregates.csv").string());
    write_aggregate_csv(f, result.aggregates);
  }
  if (per_trial) {
    std::ofstream f(out / "trials.csv");
    if (!f) throw std::runtime_error("cannot write " + (out / "trials.csv").string());
    write_trials_csv(f, result.trial_records);
  }
  for (const std::string fig : {"fig2", "fig3", "fig4"}) {
    try {
      const auto rows = figure_series(result.aggregates, fig);
      std::ofstream f(out / (fig + ".csv"));
      if (!f) throw std::runtime_error("cannot write " + (out / (fig + ".csv")).string());
      write_series_csv(f, rows);
    } catch (const std::invalid_argument&) {
      std::cout << "skipping " << fig << ".csv (grid not covered by this config)\n";
    }
  }
  std::cout << "wrote " << (out / "aggregates.csv").string() << "\n";
  return 0;
}

// --- validate: desk-scale correctness suites -------------------------------

struct SuiteOutcome {
  bool passed = true;
  int failures = 0;

  void check(bool ok) {
    if (!ok) {
      passed = false;
      ++failures;
    }
  }
};

Instance seeded_baseline_instance(std::size_t m, std::uint64_t seed, double eta, double p_int) {
  SystemParams params;
  params.eta = eta;
  params.p_int = p_int;
  return derived_coefficients(params,
                              sample_realization(scenario_variances(Scenario::baseline), m, seed));
}

int cmd_validate(int instances, std::uint64_t seed) {
  bool all_passed = true;
  const auto report = [&](const std::string& name, const SuiteOutcome& outcome,
                          const std::string& detail) {
    std::cout << (outcome.passed ? "[ ok ] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!outcome.passed) all_passed = false;
  };

  {  // offline solver vs single-slot grid oracle
    SuiteOutcome outcome;
    double worst = 0.0;
    for (int k = 0; k < instances; ++k) {
      const Instance inst = seeded_baseline_instance(1, seed ^ rng::splitmix64(1000 + k), 0.3, 0.1);
      const double solver_obj = solve_offline(inst).sum_rate;
      const double oracle_obj = oracle_offline_m1(inst).sum_rate;
      const double rel = std::abs(solver_obj - oracle_obj) / (1.0 + std::abs(oracle_obj));
      worst = std::max(worst, rel);
      outcome.check(rel <= 1e-3);
    }
    report("oracle-m1", outcome,
           "max relative gap " + num(worst) + " over " + std::to_string(instances) + " instances");
  }

  {  // offline solver vs two-slot grid oracle
    SuiteOutcome outcome;
    const int count = std::max(instances / 2, 10);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
      const Instance inst = seeded_baseline_instance(2, seed ^ rng::splitmix64(2000 + k), 0.3, 0.1);
      const double solver_obj = solve_offline(inst).sum_rate;
      const double oracle_obj = oracle_offline_m2(inst).sum_rate;
      const double rel = std::abs(solver_obj - oracle_obj) / (1.0 + std::abs(oracle_obj));
      worst = std::max(worst, rel);
      outcome.check(rel <= 5e-3);
    }
    report("oracle-m2", outcome,
           "max relative gap " + num(worst) + " over " + std::to_string(count) + " instances");
  }

  {  // first-order optimality report and depletion at m = 10
    SuiteOutcome kkt_outcome, depletion_outcome;
    double worst_stat = 0.0, worst_depl = 0.0;
    for (int k = 0; k < instances; ++k) {
      const Instance inst = seeded_baseline_instance(10, seed ^ rng::splitmix64(3000 + k), 0.3, 0.1);
      const PolicySolution sol = solve_offline(inst);
      if (!sol.diagnostics.converged) {
        kkt_outcome.check(false);
        continue;
      }
      const KktReport rep = kkt_report(inst, sol);
      const double scale = 1e-4 * (1.0 + std::abs(sol.sum_rate));
      const double stat = std::max({rep.stat_alpha_residual, rep.stat_energy_residual,
                                    rep.comp_slack_residual});
      worst_stat = std::max(worst_stat, stat);
      kkt_outcome.check(stat <= scale && rep.primal_feas_violation <= 1e-10 &&
                        rep.dual_feas_violation >= -1e-12);

      double harvest = 0.0;
      for (double a : sol.alpha) harvest += (1.0 - a) * inst.params.eta * inst.params.pp;
      const double depl = depletion_residual(inst, sol) / std::max(harvest, 1e-300);
      worst_depl = std::max(worst_depl, depl);
      depletion_outcome.check(depl <= 1e-6);
    }
    report("kkt-residuals", kkt_outcome, "max residual " + num(worst_stat));
    report("depletion", depletion_outcome, "max residual fraction " + num(worst_depl));
  }

  {  // offline dominates myopic on shared realizations
    SuiteOutcome outcome;
    double worst_gap = std::numeric_limits<double>::infinity();
    const double etas[] = {0.1, 0.3, 0.5};
    const double p_ints[] = {0.05, 0.1, 0.5};
    for (int k = 0; k < instances; ++k) {
      const Instance inst = seeded_baseline_instance(10, seed ^ rng::splitmix64(4000 + k),
                                                     etas[k % 3], p_ints[(k / 3) % 3]);
      const double off = solve_offline(inst).sum_rate;
      const double myo = solve_myopic(inst).sum_rate;
      worst_gap = std::min(worst_gap, off - myo);
      outcome.check(off >= myo - 1e-6);
    }
    report("dominance", outcome, "min(offline - myopic) " + num(worst_gap));
  }

  {  // closed-form myopic slot vs grid oracle
    SuiteOutcome outcome;
    const int count = 10 * instances;
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
      const double u1 = rng::to_unit(rng::word_at(seed, 90, k));
      const double u2 = rng::to_unit(rng::word_at(seed, 91, k));
      const double zeta = std::pow(10.0, -4.0 + 6.0 * u1);
      const double psi = u2;
      const double a_closed = myopic_slot(zeta, psi);
      const double a_oracle = oracle_myopic_slot(zeta, psi);
      const double gap =
          std::abs(slot_rate(a_closed, 1.0 - a_closed, zeta) - slot_rate(a_oracle, 1.0 - a_oracle, zeta));
      worst = std::max(worst, gap);
      outcome.check(gap <= 1e-6);
      const double z = solve_z(zeta);
      outcome.check(std::abs(z * std::log(z) - z - zeta + 1.0) <= 1e-12 * (1.0 + zeta));
    }
    report("myopic-closed-form", outcome,
           "max objective gap " + num(worst) + " over " + std::to_string(count) + " draws");
  }

  std::cout << (all_passed ? "validate: all suites passed\n" : "validate: FAILURES above\n");
  return all_passed ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"offline and myopic time-sharing policies for an RF energy-harvesting underlay link"};
  app.require_subcommand(1);

  // gen-channels
  std::string gen_variances = "baseline";
  std::size_t gen_slots = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-channels", "sample a fading realization to a trace CSV");
  gen->add_option("--variances", gen_variances,
                  "scenario name or v_pp,v_ps,v_sp,v_ss") ->capture_default_str();
  gen->add_option("--slots", gen_slots, "number of slots")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // solve
  std::string solve_policy, solve_trace, solve_config;
  bool solve_json = false;
  double solve_eta = 0.3, solve_p_int = 0.1;
  auto* solve = app.add_subcommand("solve", "solve one trace with a policy");
  solve->add_option("--policy", solve_policy, "offline | myopic")->required();
  solve->add_option("--trace", solve_trace, "channel trace CSV")->required();
  solve->add_option("--config", solve_config, "config JSON for pp/sigma values");
  solve->add_option("--eta", solve_eta, "harvesting efficiency")->capture_default_str();
  solve->add_option("--p-int", solve_p_int, "interference threshold [W]")->capture_default_str();
  solve->add_flag("--json", solve_json, "emit one JSON document");

  // sweep
  std::string sweep_config, sweep_out;
  bool sweep_per_trial = false;
  int sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo sweep from a config");
  sweep->add_option("--config", sweep_config, "config JSON path")->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();
  sweep->add_flag("--per-trial", sweep_per_trial, "also write per-trial CSV");
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = machine parallelism)")
      ->capture_default_str();

  // validate
  int validate_instances = 100;
  std::uint64_t validate_seed = 7;
  auto* validate = app.add_subcommand("validate", "run the oracle/KKT/dominance suites");
  validate->add_option("--instances", validate_instances, "instances per suite")
      ->capture_default_str();
  validate->add_option("--seed", validate_seed, "base seed")->capture_default_str();

  try {
    std::vector<const char*> argv;
    argv.push_back("ehcr");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_channels(gen_variances, gen_slots, gen_seed, gen_out);
    if (solve->parsed()) {
      return cmd_solve(solve_policy, solve_trace, solve_config, solve_json, solve_eta, solve_p_int);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_per_trial, sweep_threads);
    if (validate->parsed()) return cmd_validate(validate_instances, validate_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ehcr::cli
