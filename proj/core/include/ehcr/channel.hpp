#pragma once

#include <cstdint>
#include <string>

#include "ehcr/model.hpp"

// Seeded generation of fading realizations and channel trace file I/O.
// Links are Rayleigh faded, so the power gains are i.i.d. exponential;
// a link's "variance" parameter is the mean of its power gain.

namespace ehcr {

/// Mean channel power gains of the four links.
struct LinkVariances {
  double v_pp = 1.0;
  double v_ps = 1.0;
  double v_sp = 1.0;
  double v_ss = 1.0;

  void validate() const;
};

enum class Scenario { baseline, weak_st_pr, weak_pt_sr, strong_direct, strong_interference };

std::string to_string(Scenario scenario);

/// Parses a scenario name; throws std::invalid_argument listing the valid
/// names on an unknown one.
Scenario scenario_from_name(const std::string& name);

LinkVariances scenario_variances(Scenario scenario);
LinkVariances scenario_variances(const std::string& name);

/// Draws m i.i.d. exponential gains per link. Pure in (variances, m, seed):
/// identical triples give bit-identical realizations. Link streams are
/// Philox streams 0..3 in the order h_pp, h_ps, h_sp, h_ss (see rng.hpp).
ChannelRealization sample_realization(const LinkVariances& variances, std::size_t m,
                                      std::uint64_t seed);

/// Writes the trace CSV (`slot,h_pp,h_ps,h_sp,h_ss`, slot 1-based). Gains
/// are emitted as shortest round-trip decimals. Throws std::runtime_error
/// on I/O failure.
void write_trace(const std::string& path, const ChannelRealization& realization);

/// Reads a trace CSV back. Throws ehcr::ParseError naming the offending
/// line on malformed headers, non-numeric or negative fields, and slot
/// index gaps; throws std::runtime_error when the file cannot be opened.
ChannelRealization read_trace(const std::string& path);

}  // namespace ehcr
