#pragma once

#include <string>

#include "ehcr/sweep.hpp"

// Sweep configuration file: a single JSON object with the keys
//   pp, sigma_s2, sigma_p2, eta_list, p_int_list, slot_counts,
//   scenarios, trials, base_seed, policies
// Missing keys take the defaults of SweepSpec (pp = 2, sigma = 0.1, the
// default grids and 1000 trials); unknown keys and out-of-range values are
// rejected with an error naming the key.

namespace ehcr {

/// Defaults, as if loading `{}`.
SweepSpec default_sweep_spec();

/// Parses a config JSON document. Throws ehcr::ParseError naming the
/// offending key.
SweepSpec parse_config(const std::string& json_text);

/// Loads a config file; std::runtime_error when the file cannot be read.
SweepSpec load_config(const std::string& path);

/// Canonical JSON serialization (round-trips through parse_config).
std::string config_to_json(const SweepSpec& spec);

}  // namespace ehcr
