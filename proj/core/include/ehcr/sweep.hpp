#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ehcr/channel.hpp"
#include "ehcr/model.hpp"
#include "ehcr/offline.hpp"

// Seeded Monte Carlo experiments over a (slots, eta, p_int, scenario) grid.
// A trial's channel seed depends only on (base_seed, slots, scenario,
// trial), so cells that differ in eta or p_int — and both policies —
// see identical realizations and can be compared pairwise. The battery
// starts empty in every trial.

namespace ehcr {

struct SweepSpec {
  std::vector<std::size_t> slot_counts = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::vector<double> etas = {0.1, 0.3, 0.5};
  std::vector<double> p_ints = {0.05, 0.1, 0.5};
  std::vector<Scenario> scenarios = {Scenario::baseline};
  int trials = 1000;
  std::uint64_t base_seed = 1234567;
  std::vector<PolicyTag> policies = {PolicyTag::offline, PolicyTag::myopic};
  SystemParams params;  ///< pp / sigma template; eta and p_int filled per cell
  SolverConfig solver;

  void validate() const;
};

/// One averaged grid cell for one policy.
struct AggregateResult {
  std::size_t m = 0;
  double eta = 0.0;
  double p_int = 0.0;
  Scenario scenario = Scenario::baseline;
  PolicyTag policy = PolicyTag::offline;
  double avg_sum_rate = 0.0;
  double std_error = 0.0;  ///< emitted as the `stderr` CSV column
  int trials = 0;          ///< converged trials entering the average
};

/// One (trial, policy) outcome, for the optional per-trial CSV.
struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  PolicyTag policy = PolicyTag::offline;
  std::size_t m = 0;
  double eta = 0.0;
  double p_int = 0.0;
  Scenario scenario = Scenario::baseline;
  double sum_rate = 0.0;
  bool converged = true;
};

struct PolicyRun {
  PolicyTag policy = PolicyTag::offline;
  double sum_rate = 0.0;
  bool converged = true;
};

struct SweepResult {
  std::vector<AggregateResult> aggregates;
  std::vector<TrialRecord> trial_records;  ///< filled when keep_trials is set
  int non_converged = 0;
};

/// Channel seed of one trial.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, Scenario scenario, int trial);

/// Runs the requested policies on one realization (identical channels for
/// every policy).
std::vector<PolicyRun> run_trial(const SystemParams& params, const ChannelRealization& realization,
                                 const std::vector<PolicyTag>& policies,
                                 const SolverConfig& solver = {});

/// Executes all cells x trials with derived per-trial seeds and reduces
/// deterministically in (cell, trial) order; results do not depend on the
/// thread count. Non-converged trials are excluded from the averages and
/// counted. threads = 0 picks the machine parallelism.
SweepResult run_sweep(const SweepSpec& spec, int threads = 0, bool keep_trials = false);

struct SeriesRow {
  std::string figure;
  std::string series;
  std::size_t m = 0;
  double avg_sum_rate = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

/// Reshapes aggregates into the ordered per-figure series:
///   fig2 — offline rate vs m, one series per (eta, p_int) pair;
///   fig3 — offline and myopic vs m at eta = 0.3, per p_int;
///   fig4 — offline rate vs m at eta = 0.3, p_int = 0.1, per scenario.
/// Throws std::invalid_argument listing the absent cell keys when the
/// aggregates do not cover the figure's grid.
std::vector<SeriesRow> figure_series(const std::vector<AggregateResult>& aggregates,
                                     const std::string& figure_id);

/// CSV with header `m,eta,p_int,scenario,policy,avg_sum_rate,stderr,trials`.
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateResult>& aggregates);

/// CSV with header `trial,seed,policy,m,eta,p_int,scenario,sum_rate,converged`.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// CSV with header `figure,series,m,avg_sum_rate,stderr,trials`.
void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows);

}  // namespace ehcr
