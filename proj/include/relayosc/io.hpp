#pragma once

/**
 * @file io.hpp
 * @brief Plant-spec and report JSON, CSV tables.
 *
 * Plant files look like
 *   {"version": 1, "plant": {"kind": "geometric", "a": 0.1, "gain": 1},
 *    "delay": 9, "dead_zone": 0}
 * with "rational" taking "num"/"den" (descending powers of z) and "samples"
 * taking "values".
 */

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "relayosc/analyzer.hpp"
#include "relayosc/config.hpp"
#include "relayosc/lti.hpp"
#include "relayosc/simulator.hpp"

namespace relayosc::io {

using nlohmann::json;

inline constexpr int plant_format_version = 1;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x rounded to `digits` significant digits.
[[nodiscard]] inline double round_sig(double x, int digits = defaults::output_digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::stod(buf);
}

[[nodiscard]] inline std::string format_number(double x, int digits = defaults::output_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

[[nodiscard]] inline json rounded(const RealVector& v) {
  json out = json::array();
  for (double x : v) out.push_back(round_sig(x));
  return out;
}

struct PlantFile {
  json description;  // the "plant" object as given
  ImpulseResponse response = ImpulseResponse::unit_pulse();
  int delay = 0;
  double dead_zone = 0.0;

  [[nodiscard]] PlantSpec spec() const { return PlantSpec(response, delay, dead_zone); }
};

namespace detail {

inline std::vector<double> number_list(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InvalidInput(std::string("plant: \"") + key + "\" must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw InvalidInput(std::string("plant: \"") + key + "\" must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

inline double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw InvalidInput(std::string("missing field \"") + key + "\"");
  }
  if (!j.at(key).is_number()) throw InvalidInput(std::string("field \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

}  // namespace detail

[[nodiscard]] inline ImpulseResponse response_from_json(const json& plant) {
  if (!plant.is_object() || !plant.contains("kind") || !plant.at("kind").is_string()) {
    throw InvalidInput("plant: object with a string \"kind\" required");
  }
  const std::string kind = plant.at("kind").get<std::string>();
  try {
    if (kind == "geometric") return ImpulseResponse::geometric(detail::number(plant, "a"), detail::number(plant, "gain", 1.0));
    if (kind == "rational") return ImpulseResponse::rational(detail::number_list(plant, "num"), detail::number_list(plant, "den"));
    if (kind == "samples") return ImpulseResponse::samples(detail::number_list(plant, "values"));
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  throw InvalidInput("plant: unknown kind \"" + kind + "\"");
}

[[nodiscard]] inline PlantFile plant_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("plant file: top level must be an object");
  if (j.contains("version") && (!j.at("version").is_number_integer() || j.at("version").get<int>() != plant_format_version)) {
    throw InvalidInput("plant file: unsupported version");
  }
  if (!j.contains("plant")) throw InvalidInput("plant file: missing \"plant\"");
  PlantFile f;
  f.description = j.at("plant");
  f.response = response_from_json(f.description);
  const double delay = detail::number(j, "delay", 0.0);
  if (delay < 0 || delay != std::floor(delay)) throw InvalidInput("plant file: delay must be a nonnegative integer");
  f.delay = static_cast<int>(delay);
  f.dead_zone = detail::number(j, "dead_zone", 0.0);
  if (!(f.dead_zone >= 0.0)) throw InvalidInput("plant file: dead_zone must be nonnegative");
  return f;
}

[[nodiscard]] inline json plant_to_json(const PlantFile& f) {
  return {{"version", plant_format_version}, {"plant", f.description}, {"delay", f.delay}, {"dead_zone", f.dead_zone}};
}

[[nodiscard]] inline PlantFile load_plant(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open plant file " + path);
  try {
    return plant_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw InvalidInput("plant file " + path + ": " + e.what());
  }
}

[[nodiscard]] inline json to_json(const PeriodBounds& b) {
  json j{{"lower", b.lower}, {"upper_general", b.upper_general}, {"Ps", b.ps}, {"exclusion", {b.exclusion_low, b.lower}}};
  j["upper_convex"] = b.upper_convex ? json(*b.upper_convex) : json(nullptr);
  return j;
}

[[nodiscard]] inline json to_json(const OscillationFlags& f) {
  return {{"satisfies_assumption2", f.satisfies_assumption2},
          {"sign_symmetric", f.sign_symmetric},
          {"unimodal", f.unimodal},
          {"is_self_oscillation", f.is_self_oscillation}};
}

[[nodiscard]] inline OscillationFlags flags_from_json(const json& j) {
  return {j.at("satisfies_assumption2").get<bool>(), j.at("sign_symmetric").get<bool>(), j.at("unimodal").get<bool>(),
          j.at("is_self_oscillation").get<bool>()};
}

[[nodiscard]] inline json report_to_json(const OscillationReport& report, const json& plant_description) {
  json j;
  j["version"] = plant_format_version;
  j["plant"] = plant_description;
  j["Pd"] = report.plant.delay();
  j["chi0"] = report.plant.dead_zone();
  j["assumption1"] = {{"passed", report.assumption1.passed()}, {"detail", report.assumption1.detail}};
  j["bounds"] = report.bounds ? to_json(*report.bounds) : json(nullptr);
  if (report.absence) {
    j["absence"] = {{"applicable", report.absence->applicable},
                    {"absent", report.absence->absent},
                    {"reason", report.absence->reason}};
  } else {
    j["absence"] = nullptr;
  }
  j["pmax"] = report.pmax;
  j["records"] = json::array();
  for (const auto& r : report.records) {
    j["records"].push_back({{"period", r.period},
                            {"pattern", r.pattern.to_string()},
                            {"waveform", rounded(r.waveform)},
                            {"phases", r.orbit},
                            {"in_bound_scope", report.in_bound_scope(r)},
                            {"flags", to_json(r.flags)}});
  }
  j["violations"] = json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"period", v.period}, {"pattern", v.pattern.to_string()}, {"reason", v.reason}});
  }
  j["oracle_checked_up_to"] = report.oracle_checked_up_to;
  j["oracle_diff"] = json::array();
  for (const auto& d : report.oracle_diff) {
    j["oracle_diff"].push_back({{"period", d.period}, {"pattern", d.pattern.to_string()}, {"side", d.side}});
  }
  return j;
}

struct ReportRecord {
  std::size_t period = 0;
  SignPattern pattern;
  RealVector waveform;
  OscillationFlags flags;
};

struct ParsedReport {
  PlantSpec plant;
  std::vector<ReportRecord> records;
};

[[nodiscard]] inline ParsedReport report_from_json(const json& j) {
  try {
    const ImpulseResponse g = response_from_json(j.at("plant"));
    ParsedReport out{PlantSpec(g.advanced(), j.at("Pd").get<int>(), j.at("chi0").get<double>()), {}};
    for (const auto& r : j.at("records")) {
      out.records.push_back({r.at("period").get<std::size_t>(), SignPattern::parse(r.at("pattern").get<std::string>()),
                             r.at("waveform").get<RealVector>(), flags_from_json(r.at("flags"))});
    }
    return out;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("report: ") + e.what());
  }
}

struct Reverification {
  std::size_t period = 0;
  SignPattern pattern;
  bool fixed_point = false;
  bool flags_match = false;
  double waveform_error = 0.0;

  [[nodiscard]] bool consistent() const { return fixed_point && flags_match; }
};

/// Re-runs verify_fixed_point on every record of a parsed report.
[[nodiscard]] inline std::vector<Reverification> reverify(const ParsedReport& report) {
  std::vector<Reverification> out;
  for (const auto& r : report.records) {
    Reverification v{r.period, r.pattern};
    if (const auto rec = verify_fixed_point(report.plant, r.pattern)) {
      v.fixed_point = true;
      v.flags_match = rec->flags == r.flags;
      for (std::size_t i = 0; i < rec->waveform.size() && i < r.waveform.size(); ++i) {
        v.waveform_error = std::max(v.waveform_error, std::abs(rec->waveform[i] - r.waveform[i]));
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

struct SweepPoint {
  int pd = 0;
  std::size_t period = 0;
  friend auto operator<=>(const SweepPoint&, const SweepPoint&) = default;
};

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "Pd,P\n";
  for (const auto& p : points) out << p.pd << ',' << p.period << '\n';
}

struct BoundsRow {
  int pd = 0;
  PeriodBounds bounds;
};

inline void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows) {
  out << "Pd,lower,upper_general,upper_convex,Ps\n";
  for (const auto& r : rows) {
    out << r.pd << ',' << r.bounds.lower << ',' << r.bounds.upper_general << ',';
    if (r.bounds.upper_convex) out << *r.bounds.upper_convex;
    out << ',' << r.bounds.ps << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,u,r\n";
  for (std::size_t t = 0; t < traj.horizon(); ++t) {
    out << t << ',' << format_number(traj.u[t]) << ',' << traj.r[t] << '\n';
  }
}

/// Seeds as one line of integers per seed, or a JSON array of arrays.
[[nodiscard]] inline std::vector<SignPattern> parse_seeds(const std::string& text) {
  std::vector<SignPattern> seeds;
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && text[first] == '[') {
      for (const auto& row : json::parse(text)) seeds.emplace_back(row.get<std::vector<int>>());
      return seeds;
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      for (char& c : line) {
        if (c == ',') c = ' ';
      }
      std::istringstream fields(line);
      std::vector<int> values;
      std::string tok;
      while (fields >> tok) {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw InvalidInput("seed file: bad entry \"" + tok + "\"");
        values.push_back(v);
      }
      if (!values.empty()) seeds.emplace_back(std::move(values));
    }
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("seed file: ") + e.what());
  }
  return seeds;
}

}  // namespace relayosc::io
