#include "ehcr/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ehcr/errors.hpp"

namespace ehcr {

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ParseError(std::string("config key '") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

SweepSpec default_sweep_spec() {
  return SweepSpec{};
}

SweepSpec parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");

  static const std::set<std::string> known = {"pp",          "sigma_s2",  "sigma_p2",
                                              "eta_list",    "p_int_list", "slot_counts",
                                              "scenarios",   "trials",     "base_seed",
                                              "policies"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ParseError("unknown config key '" + item.key() + "'");
    }
  }

  SweepSpec spec;
  spec.params.pp = get_number(j, "pp", spec.params.pp);
  spec.params.sigma_s2 = get_number(j, "sigma_s2", spec.params.sigma_s2);
  spec.params.sigma_p2 = get_number(j, "sigma_p2", spec.params.sigma_p2);

  if (j.contains("eta_list")) {
    if (!j["eta_list"].is_array() || j["eta_list"].empty()) {
      throw ParseError("config key 'eta_list' must be a non-empty array of numbers");
    }
    spec.etas.clear();
    for (const auto& v : j["eta_list"]) {
      if (!v.is_number()) throw ParseError("config key 'eta_list' must contain numbers only");
      const double eta = v.get<double>();
      if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ParseError("config key 'eta_list' has out-of-range value (eta must lie in [0, 1])");
      }
      spec.etas.push_back(eta);
    }
  }
  if (j.contains("p_int_list")) {
    if (!j["p_int_list"].is_array() || j["p_int_list"].empty()) {
      throw ParseError("config key 'p_int_list' must be a non-empty array of numbers");
    }
    spec.p_ints.clear();
    for (const auto& v : j["p_int_list"]) {
      if (!v.is_number()) throw ParseError("config key 'p_int_list' must contain numbers only");
      const double p = v.get<double>();
      if (!(p >= 0.0)) throw ParseError("config key 'p_int_list' has negative value");
      spec.p_ints.push_back(p);
    }
  }
  if (j.contains("slot_counts")) {
    if (!j["slot_counts"].is_array() || j["slot_counts"].empty()) {
      throw ParseError("config key 'slot_counts' must be a non-empty array of integers");
    }
    spec.slot_counts.clear();
    for (const auto& v : j["slot_counts"]) {
      if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 1) {
        throw ParseError("config key 'slot_counts' must contain positive integers");
      }
      spec.slot_counts.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("scenarios")) {
    if (!j["scenarios"].is_array() || j["scenarios"].empty()) {
      throw ParseError("config key 'scenarios' must be a non-empty array of names");
    }
    spec.scenarios.clear();
    for (const auto& v : j["scenarios"]) {
      if (!v.is_string()) throw ParseError("config key 'scenarios' must contain strings");
      try {
        spec.scenarios.push_back(scenario_from_name(v.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("config key 'scenarios': ") + e.what());
      }
    }
  }
  if (j.contains("trials")) {
    if (!j["trials"].is_number_integer() || j["trials"].get<std::int64_t>() < 1) {
      throw ParseError("config key 'trials' must be a positive integer");
    }
    spec.trials = int(j["trials"].get<std::int64_t>());
  }
  if (j.contains("base_seed")) {
    if (!j["base_seed"].is_number_unsigned()) {
      throw ParseError("config key 'base_seed' must be a nonnegative integer");
    }
    spec.base_seed = j["base_seed"].get<std::uint64_t>();
  }
  if (j.contains("policies")) {
    if (!j["policies"].is_array() || j["policies"].empty()) {
      throw ParseError("config key 'policies' must be a non-empty array");
    }
    spec.policies.clear();
    for (const auto& v : j["policies"]) {
      const std::string name = v.is_string() ? v.get<std::string>() : std::string();
      if (name == "offline") {
        spec.policies.push_back(PolicyTag::offline);
      } else if (name == "myopic") {
        spec.policies.push_back(PolicyTag::myopic);
      } else {
        throw ParseError("config key 'policies' must contain 'offline' and/or 'myopic'");
      }
    }
  }

  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config validation failed: ") + e.what());
  }
  return spec;
}

SweepSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const SweepSpec& spec) {
  json j;
  j["pp"] = spec.params.pp;
  j["sigma_s2"] = spec.params.sigma_s2;
  j["sigma_p2"] = spec.params.sigma_p2;
  j["eta_list"] = spec.etas;
  j["p_int_list"] = spec.p_ints;
  j["slot_counts"] = spec.slot_counts;
  j["scenarios"] = json::array();
  for (Scenario sc : spec.scenarios) j["scenarios"].push_back(to_string(sc));
  j["trials"] = spec.trials;
  j["base_seed"] = spec.base_seed;
  j["policies"] = json::array();
  for (PolicyTag p : spec.policies) j["policies"].push_back(to_string(p));
  return j.dump(2) + "\n";
}

}  // namespace ehcr
