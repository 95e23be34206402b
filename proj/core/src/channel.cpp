#include "ehcr/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ehcr/errors.hpp"
#include "ehcr/rng.hpp"
#include "text_util.hpp"

namespace ehcr {

namespace {

constexpr std::string_view kTraceHeader = "slot,h_pp,h_ps,h_sp,h_ss";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void LinkVariances::validate() const {
  for (double v : {v_pp, v_ps, v_sp, v_ss}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("LinkVariances: all link variances must be positive");
    }
  }
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::baseline: return "baseline";
    case Scenario::weak_st_pr: return "weak_st_pr";
    case Scenario::weak_pt_sr: return "weak_pt_sr";
    case Scenario::strong_direct: return "strong_direct";
    case Scenario::strong_interference: return "strong_interference";
  }
  return "unknown";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "baseline") return Scenario::baseline;
  if (name == "weak_st_pr") return Scenario::weak_st_pr;
  if (name == "weak_pt_sr") return Scenario::weak_pt_sr;
  if (name == "strong_direct") return Scenario::strong_direct;
  if (name == "strong_interference") return Scenario::strong_interference;
  throw std::invalid_argument(
      "unknown scenario '" + name +
      "' (valid: baseline, weak_st_pr, weak_pt_sr, strong_direct, strong_interference)");
}

LinkVariances scenario_variances(Scenario scenario) {
  switch (scenario) {
    case Scenario::baseline: return {1.0, 1.0, 1.0, 1.0};
    case Scenario::weak_st_pr: return {1.0, 1.0, 0.1, 1.0};
    case Scenario::weak_pt_sr: return {1.0, 0.1, 1.0, 1.0};
    case Scenario::strong_direct: return {1.0, 0.1, 0.1, 1.0};
    case Scenario::strong_interference: return {0.1, 1.0, 1.0, 0.1};
  }
  throw std::invalid_argument("scenario_variances: invalid scenario");
}

LinkVariances scenario_variances(const std::string& name) {
  return scenario_variances(scenario_from_name(name));
}

ChannelRealization sample_realization(const LinkVariances& variances, std::size_t m,
                                      std::uint64_t seed) {
  variances.validate();
  if (m < 1) throw std::invalid_argument("sample_realization: need at least one slot");

  ChannelRealization r;
  r.h_pp.resize(m);
  r.h_ps.resize(m);
  r.h_sp.resize(m);
  r.h_ss.resize(m);
  const double means[4] = {variances.v_pp, variances.v_ps, variances.v_sp, variances.v_ss};
  std::vector<double>* gains[4] = {&r.h_pp, &r.h_ps, &r.h_sp, &r.h_ss};
  for (std::uint64_t link = 0; link < 4; ++link) {
    for (std::size_t i = 0; i < m; ++i) {
      (*gains[link])[i] = rng::to_exponential(rng::word_at(seed, link, i), means[link]);
    }
  }
  return r;
}

void write_trace(const std::string& path, const ChannelRealization& realization) {
  realization.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace: cannot open '" + path + "' for writing");

  out << kTraceHeader << '\n';
  for (std::size_t i = 0; i < realization.slots(); ++i) {
    out << (i + 1) << ',' << detail::format_double(realization.h_pp[i]) << ','
        << detail::format_double(realization.h_ps[i]) << ','
        << detail::format_double(realization.h_sp[i]) << ','
        << detail::format_double(realization.h_ss[i]) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write_trace: I/O failure writing '" + path + "'");
}

ChannelRealization read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trace: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trace file", 1);
  if (line == std::string(kTraceHeader) + "\r") line.pop_back();
  if (line != kTraceHeader) {
    throw ParseError("bad header, expected '" + std::string(kTraceHeader) + "'", 1);
  }

  ChannelRealization r;
  long line_no = 1;
  std::size_t expected_slot = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.eof()) break;  // trailing newline
      throw ParseError("blank line inside trace", line_no);
    }
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw ParseError("expected 5 columns, got " + std::to_string(fields.size()), line_no);
    }
    std::size_t slot = 0;
    if (!detail::parse_size(fields[0], slot)) {
      throw ParseError("non-integer slot index '" + std::string(fields[0]) + "'", line_no);
    }
    if (slot != expected_slot) {
      throw ParseError("slot index " + std::to_string(slot) + " out of order, expected " +
                           std::to_string(expected_slot),
                       line_no);
    }
    double g[4];
    static constexpr const char* names[4] = {"h_pp", "h_ps", "h_sp", "h_ss"};
    for (int k = 0; k < 4; ++k) {
      if (!detail::parse_double(fields[k + 1], g[k])) {
        throw ParseError("non-numeric " + std::string(names[k]) + " field '" +
                             std::string(fields[k + 1]) + "'",
                         line_no);
      }
      if (!std::isfinite(g[k]) || g[k] < 0.0) {
        throw ParseError(std::string(names[k]) + " must be finite and nonnegative", line_no);
      }
    }
    r.h_pp.push_back(g[0]);
    r.h_ps.push_back(g[1]);
    r.h_sp.push_back(g[2]);
    r.h_ss.push_back(g[3]);
    ++expected_slot;
  }
  if (r.slots() == 0) throw ParseError("trace has no data rows", line_no);
  return r;
}

}  // namespace ehcr
