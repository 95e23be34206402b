#include "ehcr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ehcr/myopic.hpp"
#include "ehcr/rng.hpp"
#include "text_util.hpp"

namespace ehcr {

namespace {

struct Cell {
  std::size_t m;
  double eta;
  double p_int;
  Scenario scenario;
};

std::vector<Cell> enumerate_cells(const SweepSpec& spec) {
  std::vector<Cell> cells;
  cells.reserve(spec.slot_counts.size() * spec.etas.size() * spec.p_ints.size() *
                spec.scenarios.size());
  for (std::size_t m : spec.slot_counts) {
    for (double eta : spec.etas) {
      for (double p_int : spec.p_ints) {
        for (Scenario sc : spec.scenarios) cells.push_back({m, eta, p_int, sc});
      }
    }
  }
  return cells;
}

std::string cell_label(std::size_t m, double eta, double p_int, Scenario scenario,
                       PolicyTag policy) {
  return "(m=" + std::to_string(m) + ", eta=" + detail::format_double(eta) +
         ", p_int=" + detail::format_double(p_int) + ", scenario=" + to_string(scenario) +
         ", policy=" + to_string(policy) + ")";
}

}  // namespace

void SweepSpec::validate() const {
  if (slot_counts.empty() || etas.empty() || p_ints.empty() || scenarios.empty() ||
      policies.empty()) {
    throw std::invalid_argument("SweepSpec: all grid lists must be non-empty");
  }
  if (trials < 1) throw std::invalid_argument("SweepSpec: trials must be >= 1");
  for (std::size_t m : slot_counts) {
    if (m < 1) throw std::invalid_argument("SweepSpec: slot counts must be >= 1");
  }
  for (double eta : etas) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("SweepSpec: eta must lie in [0, 1]");
  }
  for (double p : p_ints) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("SweepSpec: p_int must be nonnegative");
    }
  }
  SystemParams probe = params;
  probe.eta = etas.front();
  probe.p_int = p_ints.front();
  probe.validate();
  solver.validate();
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, Scenario scenario, int trial) {
  std::uint64_t h = rng::splitmix64(std::uint64_t(m));
  h = rng::splitmix64(h ^ (std::uint64_t(scenario) + 1));
  h = rng::splitmix64(h ^ std::uint64_t(trial));
  return base_seed ^ h;
}

std::vector<PolicyRun> run_trial(const SystemParams& params, const ChannelRealization& realization,
                                 const std::vector<PolicyTag>& policies,
                                 const SolverConfig& solver) {
  const Instance instance = derived_coefficients(params, realization);
  std::vector<PolicyRun> runs;
  runs.reserve(policies.size());
  for (PolicyTag policy : policies) {
    PolicyRun run;
    run.policy = policy;
    switch (policy) {
      case PolicyTag::offline: {
        const PolicySolution sol = solve_offline(instance, solver);
        run.sum_rate = sol.sum_rate;
        run.converged = sol.diagnostics.converged;
        break;
      }
      case PolicyTag::myopic: {
        const PolicySolution sol = solve_myopic(instance);
        run.sum_rate = sol.sum_rate;
        run.converged = true;
        break;
      }
      case PolicyTag::oracle:
        throw std::invalid_argument("run_trial: oracle is not a sweep policy");
    }
    runs.push_back(run);
  }
  return runs;
}

SweepResult run_sweep(const SweepSpec& spec, int threads, bool keep_trials) {
  spec.validate();
  const std::vector<Cell> cells = enumerate_cells(spec);
  const std::size_t trials = std::size_t(spec.trials);
  const std::size_t n_policies = spec.policies.size();
  const std::size_t n_tasks = cells.size() * trials;

  struct Outcome {
    double rate = 0.0;
    bool converged = false;
    bool failed = true;
  };
  std::vector<Outcome> outcomes(n_tasks * n_policies);

  auto run_task = [&](std::size_t task) {
    const Cell& cell = cells[task / trials];
    const int trial = int(task % trials);
    SystemParams params = spec.params;
    params.eta = cell.eta;
    params.p_int = cell.p_int;
    const std::uint64_t seed = trial_seed(spec.base_seed, cell.m, cell.scenario, trial);
    Outcome* slot = &outcomes[task * n_policies];
    try {
      const ChannelRealization realization =
          sample_realization(scenario_variances(cell.scenario), cell.m, seed);
      const auto runs = run_trial(params, realization, spec.policies, spec.solver);
      for (std::size_t k = 0; k < n_policies; ++k) {
        slot[k] = {runs[k].sum_rate, runs[k].converged, false};
      }
    } catch (const std::exception&) {
      // leave the trial marked failed; the sweep carries on
    }
  };

  unsigned n_threads = threads > 0 ? unsigned(threads) : std::thread::hardware_concurrency();
  if (n_threads < 1) n_threads = 1;
  n_threads = std::min<unsigned>(n_threads, std::max<std::size_t>(n_tasks, 1));
  if (n_threads <= 1) {
    for (std::size_t task = 0; task < n_tasks; ++task) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t task = next.fetch_add(1); task < n_tasks; task = next.fetch_add(1)) {
          run_task(task);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // deterministic reduction in (cell, policy, trial) order
  SweepResult result;
  result.aggregates.reserve(cells.size() * n_policies);
  if (keep_trials) result.trial_records.reserve(n_tasks * n_policies);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    for (std::size_t k = 0; k < n_policies; ++k) {
      double sum = 0.0;
      int used = 0;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        const Outcome& o = outcomes[(c * trials + trial) * n_policies + k];
        if (!o.failed && o.converged) {
          sum += o.rate;
          ++used;
        } else {
          ++result.non_converged;
        }
      }
      AggregateResult agg;
      agg.m = cell.m;
      agg.eta = cell.eta;
      agg.p_int = cell.p_int;
      agg.scenario = cell.scenario;
      agg.policy = spec.policies[k];
      agg.trials = used;
      if (used > 0) {
        const double mean = sum / used;
        double ss = 0.0;
        for (std::size_t trial = 0; trial < trials; ++trial) {
          const Outcome& o = outcomes[(c * trials + trial) * n_policies + k];
          if (!o.failed && o.converged) {
            const double dev = o.rate - mean;
            ss += dev * dev;
          }
        }
        agg.avg_sum_rate = mean;
        agg.std_error = used > 1 ? std::sqrt(ss / (used - 1)) / std::sqrt(double(used)) : 0.0;
      }
      result.aggregates.push_back(agg);

      if (keep_trials) {
        for (std::size_t trial = 0; trial < trials; ++trial) {
          const Outcome& o = outcomes[(c * trials + trial) * n_policies + k];
          TrialRecord rec;
          rec.trial = int(trial);
          rec.seed = trial_seed(spec.base_seed, cell.m, cell.scenario, int(trial));
          rec.policy = spec.policies[k];
          rec.m = cell.m;
          rec.eta = cell.eta;
          rec.p_int = cell.p_int;
          rec.scenario = cell.scenario;
          rec.sum_rate = o.failed ? 0.0 : o.rate;
          rec.converged = !o.failed && o.converged;
          result.trial_records.push_back(rec);
        }
      }
    }
  }
  return result;
}

std::vector<SeriesRow> figure_series(const std::vector<AggregateResult>& aggregates,
                                     const std::string& figure_id) {
  if (figure_id != "fig2" && figure_id != "fig3" && figure_id != "fig4") {
    throw std::invalid_argument("figure_series: figure_id must be fig2, fig3 or fig4");
  }

  // index the aggregates and collect the grid values present
  std::map<std::tuple<std::size_t, double, double, int, int>, const AggregateResult*> index;
  std::set<std::size_t> ms;
  std::set<double> etas, p_ints;
  std::set<int> scenarios;
  for (const AggregateResult& a : aggregates) {
    index[{a.m, a.eta, a.p_int, int(a.scenario), int(a.policy)}] = &a;
    ms.insert(a.m);
    etas.insert(a.eta);
    p_ints.insert(a.p_int);
    scenarios.insert(int(a.scenario));
  }

  constexpr double kEta3 = 0.3, kPint1 = 0.1;
  std::vector<SeriesRow> rows;
  std::vector<std::string> missing;
  auto emit = [&](std::size_t m, double eta, double p_int, Scenario sc, PolicyTag policy,
                  const std::string& series) {
    const auto it = index.find({m, eta, p_int, int(sc), int(policy)});
    if (it == index.end()) {
      missing.push_back(cell_label(m, eta, p_int, sc, policy));
      return;
    }
    const AggregateResult& a = *it->second;
    rows.push_back({figure_id, series, m, a.avg_sum_rate, a.std_error, a.trials});
  };

  if (figure_id == "fig2") {
    for (double eta : etas) {
      for (double p_int : p_ints) {
        const std::string series =
            "eta=" + detail::format_double(eta) + " p_int=" + detail::format_double(p_int);
        for (std::size_t m : ms) {
          emit(m, eta, p_int, Scenario::baseline, PolicyTag::offline, series);
        }
      }
    }
  } else if (figure_id == "fig3") {
    for (double p_int : p_ints) {
      for (PolicyTag policy : {PolicyTag::offline, PolicyTag::myopic}) {
        const std::string series =
            to_string(policy) + " p_int=" + detail::format_double(p_int);
        for (std::size_t m : ms) emit(m, kEta3, p_int, Scenario::baseline, policy, series);
      }
    }
  } else {
    for (int sc : scenarios) {
      const std::string series = "scenario=" + to_string(Scenario(sc));
      for (std::size_t m : ms) emit(m, kEta3, kPint1, Scenario(sc), PolicyTag::offline, series);
    }
  }

  if (!missing.empty()) {
    std::string what = "figure_series: aggregates do not cover the " + figure_id + " grid; absent:";
    for (const std::string& key : missing) what += "\n  " + key;
    throw std::invalid_argument(what);
  }
  return rows;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateResult>& aggregates) {
  out << "m,eta,p_int,scenario,policy,avg_sum_rate,stderr,trials\n";
  for (const AggregateResult& a : aggregates) {
    out << a.m << ',' << detail::format_double(a.eta) << ',' << detail::format_double(a.p_int)
        << ',' << to_string(a.scenario) << ',' << to_string(a.policy) << ','
        << detail::format_double(a.avg_sum_rate) << ',' << detail::format_double(a.std_error)
        << ',' << a.trials << '\n';
  }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,seed,policy,m,eta,p_int,scenario,sum_rate,converged\n";
  for (const TrialRecord& r : records) {
    out << r.trial << ',' << r.seed << ',' << to_string(r.policy) << ',' << r.m << ','
        << detail::format_double(r.eta) << ',' << detail::format_double(r.p_int) << ','
        << to_string(r.scenario) << ',' << detail::format_double(r.sum_rate) << ','
        << (r.converged ? 1 : 0) << '\n';
  }
}

void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << "figure,series,m,avg_sum_rate,stderr,trials\n";
  for (const SeriesRow& r : rows) {
    out << r.figure << ',' << r.series << ',' << r.m << ','
        << detail::format_double(r.avg_sum_rate) << ',' << detail::format_double(r.std_error)
        << ',' << r.trials << '\n';
  }
}

}  // namespace ehcr
