#pragma once

/**
 * @file commands.hpp
 * @brief The relayosc command-line verbs.
 *
 * Exit codes: 0 analysis complete (absence included), 1 invalid input,
 * 2 internal assertion or bound violation.
 */

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relayosc/analyzer.hpp"
#include "relayosc/io.hpp"
#include "relayosc/parallel.hpp"
#include "relayosc/simulator.hpp"

namespace relayosc::cli {

using nlohmann::json;

enum ExitCode : int { ok = 0, invalid_input = 1, internal_error = 2 };

class InternalViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string plant_path;
  std::string delay;      // integer, "a..b" range or comma list
  std::string dead_zone;  // number or comma list
  std::string format = "json";
  std::string out;
  std::string seed_file;
  double tol = defaults::summation_tol;
  std::size_t pmax = 0;
  std::size_t oracle_cap = defaults::oracle_cap;
  std::size_t oracle_up_to = 12;
  std::size_t period = 0;
  std::size_t steps = 200;
  bool prune = false;
  bool max_only = false;
};

[[nodiscard]] inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto dots = item.find("..");
      if (dots != std::string::npos) {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        if (hi < lo) throw io::InvalidInput("empty range " + item);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw io::InvalidInput("bad integer " + item);
      }
    }
  } catch (const io::InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw io::InvalidInput("cannot parse integer list \"" + text + "\"");
  }
  if (out.empty()) throw io::InvalidInput("empty integer list");
  for (int v : out) {
    if (v < 0) throw io::InvalidInput("delays must be nonnegative");
  }
  return out;
}

[[nodiscard]] inline std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw io::InvalidInput("bad number " + item);
    }
  } catch (const io::InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw io::InvalidInput("cannot parse number list \"" + text + "\"");
  }
  if (out.empty()) throw io::InvalidInput("empty number list");
  for (double v : out) {
    if (!(v >= 0.0)) throw io::InvalidInput("dead zones must be nonnegative");
  }
  return out;
}

/// Plant file with --delay / --dead-zone overrides applied (single values).
[[nodiscard]] inline io::PlantFile load_configured_plant(const RunConfig& cfg) {
  io::PlantFile f = io::load_plant(cfg.plant_path);
  if (!cfg.delay.empty()) {
    const auto d = parse_int_list(cfg.delay);
    if (d.size() != 1) throw io::InvalidInput("--delay takes a single value for this command");
    f.delay = d.front();
  }
  if (!cfg.dead_zone.empty()) {
    const auto z = parse_real_list(cfg.dead_zone);
    if (z.size() != 1) throw io::InvalidInput("--dead-zone takes a single value for this command");
    f.dead_zone = z.front();
  }
  return f;
}

/// Writes to --out when given, otherwise to `fallback`.
inline void emit(const RunConfig& cfg, std::ostream& fallback, const std::string& text) {
  if (cfg.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw io::InvalidInput("cannot write " + cfg.out);
  file << text;
}

[[nodiscard]] inline std::string companion_path(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return path.substr(0, dot) + suffix + path.substr(dot);
  }
  return path + suffix + ".csv";
}

inline int cmd_check_plant(const RunConfig& cfg, std::ostream& out) {
  const io::PlantFile f = load_configured_plant(cfg);
  const int degree = relative_degree(f.response);
  const PlantSpec plant = f.spec();
  const Assumption1Verdict a1 = verify_assumption1(plant.g0());
  const bool convex = is_convex_on_support(plant.g0());
  std::optional<int> ps;
  if (a1.passed()) ps = compute_Ps(plant.g0());

  json j{{"assumption1",
          {{"passed", a1.passed()},
           {"l1_summable", a1.l1_summable},
           {"support_connected", a1.support_connected},
           {"strictly_decreasing", a1.strictly_decreasing},
           {"strictly_positive", a1.strictly_positive},
           {"tail_decided", a1.tail_decided},
           {"checked_horizon", a1.checked_horizon},
           {"detail", a1.detail}}},
         {"convex", convex},
         {"relative_degree", degree},
         {"Pd", plant.delay()},
         {"chi0", plant.dead_zone()},
         {"l1_norm", io::round_sig(plant.g0().l1_norm_bound())},
         {"Ps", ps ? json(*ps) : json(nullptr)}};
  if (cfg.format == "json") {
    emit(cfg, out, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    s << "assumption1,convex,relative_degree,Pd,l1_norm,Ps,detail\n"
      << (a1.passed() ? "pass" : "fail") << ',' << (convex ? "convex" : "not-convex") << ',' << degree << ','
      << plant.delay() << ',' << io::format_number(plant.g0().l1_norm_bound()) << ',' << (ps ? std::to_string(*ps) : "")
      << ",\"" << a1.detail << "\"\n";
    emit(cfg, out, s.str());
  }
  return ok;
}

[[nodiscard]] inline OscillationReport run_analysis(const PlantSpec& plant, const RunConfig& cfg, bool with_oracle) {
  AnalyzeOptions opt;
  opt.pmax = cfg.pmax;
  opt.prune = cfg.prune;
  opt.tol = cfg.tol;
  OscillationReport report = find_oscillations(plant, opt);
  if (with_oracle) {
    report.oracle_checked_up_to = std::min({report.pmax, cfg.oracle_cap, cfg.oracle_up_to});
    report.oracle_diff = oracle_diff(report, report.oracle_checked_up_to, cfg.oracle_cap);
  }
  return report;
}

[[nodiscard]] inline std::string records_csv(const OscillationReport& report) {
  std::ostringstream s;
  s << "P,pattern,phases,in_bound_scope,assumption2,sign_symmetric,unimodal,self_oscillation\n";
  for (const auto& r : report.records) {
    s << r.period << ',' << r.pattern.to_string() << ',' << r.orbit << ',' << report.in_bound_scope(r) << ','
      << r.flags.satisfies_assumption2 << ',' << r.flags.sign_symmetric << ',' << r.flags.unimodal << ','
      << r.flags.is_self_oscillation << '\n';
  }
  return s.str();
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const io::PlantFile f = load_configured_plant(cfg);
  const PlantSpec plant = f.spec();
  const Assumption1Verdict a1 = verify_assumption1(plant.g0());
  if (!a1.passed()) {
    err << "theorems inapplicable: " << a1.detail << '\n';
    return invalid_input;
  }
  const OscillationReport report = run_analysis(plant, cfg, true);
  const std::string body = cfg.format == "json" ? io::report_to_json(report, f.description).dump(2) + "\n"
                                                : records_csv(report);
  emit(cfg, out, body);
  if (!cfg.out.empty()) {
    out << "Pd=" << plant.delay() << " chi0=" << io::format_number(plant.dead_zone()) << " Pmax=" << report.pmax;
    if (report.bounds) {
      out << " bounds=[" << report.bounds->lower << ',' << report.bounds->upper_general << ']';
      if (report.bounds->upper_convex) out << " convex<=" << *report.bounds->upper_convex;
    }
    if (report.absence) out << " absence: " << report.absence->reason;
    out << '\n' << records_csv(report);
  }
  for (const auto& v : report.violations) {
    err << "bound violation: P=" << v.period << ' ' << v.pattern.to_string() << ": " << v.reason << '\n';
  }
  for (const auto& d : report.oracle_diff) {
    err << "oracle mismatch: P=" << d.period << ' ' << d.pattern.to_string() << " (" << d.side << ")\n";
  }
  return report.violations.empty() && report.oracle_diff.empty() ? ok : internal_error;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const io::PlantFile f = io::load_plant(cfg.plant_path);
  const std::vector<int> delays = cfg.delay.empty() ? std::vector<int>{f.delay} : parse_int_list(cfg.delay);
  const std::vector<double> zones =
      cfg.dead_zone.empty() ? std::vector<double>{f.dead_zone} : parse_real_list(cfg.dead_zone);

  struct Cell {
    double chi0 = 0.0;
    int pd = 0;
    std::optional<OscillationReport> report;
  };
  std::vector<Cell> cells;
  for (double z : zones) {
    for (int d : delays) cells.push_back({z, d, std::nullopt});
  }
  // Reject inapplicable plants before any work.
  const Assumption1Verdict a1 = verify_assumption1(f.response.advanced());
  if (!a1.passed()) {
    err << "theorems inapplicable: " << a1.detail << '\n';
    return invalid_input;
  }
  parallel_for(cells.size(), [&](std::size_t i) {
    cells[i].report = run_analysis(PlantSpec(f.response, cells[i].pd, cells[i].chi0), cfg, false);
  });

  int status = ok;
  const bool multi = zones.size() > 1;
  std::ostringstream csv;
  std::ostringstream bounds_csv;
  json cells_json = json::array();
  csv << (multi ? "chi0,Pd,P\n" : "Pd,P\n");
  bounds_csv << (multi ? "chi0," : "") << "Pd,lower,upper_general,upper_convex,Ps\n";
  for (const auto& cell : cells) {
    const OscillationReport& r = *cell.report;
    std::set<std::size_t> periods;
    for (const auto& rec : r.records) {
      if (cfg.max_only && !r.in_bound_scope(rec)) continue;
      periods.insert(rec.period);
    }
    if (cfg.max_only && !periods.empty()) periods = {*periods.rbegin()};
    for (std::size_t p : periods) {
      if (multi) csv << io::format_number(cell.chi0) << ',';
      csv << r.plant.delay() << ',' << p << '\n';
    }
    if (r.bounds) {
      if (multi) bounds_csv << io::format_number(cell.chi0) << ',';
      bounds_csv << r.plant.delay() << ',' << r.bounds->lower << ',' << r.bounds->upper_general << ',';
      if (r.bounds->upper_convex) bounds_csv << *r.bounds->upper_convex;
      bounds_csv << ',' << r.bounds->ps << '\n';
    }
    for (const auto& v : r.violations) {
      err << "bound violation: Pd=" << r.plant.delay() << " P=" << v.period << ' ' << v.pattern.to_string() << ": "
          << v.reason << '\n';
      status = internal_error;
    }
    if (cfg.format == "json") {
      json c = io::report_to_json(r, f.description);
      c.erase("records");
      c["periods"] = std::vector<std::size_t>(periods.begin(), periods.end());
      cells_json.push_back(std::move(c));
    }
  }

  if (cfg.format == "json") {
    emit(cfg, out, cells_json.dump(2) + "\n");
  } else {
    emit(cfg, out, csv.str());
    if (!cfg.out.empty()) {
      RunConfig companion = cfg;
      companion.out = companion_path(cfg.out, "_bounds");
      emit(companion, out, bounds_csv.str());
    }
  }
  return status;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.seed_file.empty()) throw io::InvalidInput("simulate needs --seed-file");
  const io::PlantFile f = load_configured_plant(cfg);
  const PlantSpec plant = f.spec();
  std::ifstream in(cfg.seed_file);
  if (!in) throw io::InvalidInput("cannot open seed file " + cfg.seed_file);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::vector<SignPattern> seeds = io::parse_seeds(text);
  if (seeds.empty()) throw io::InvalidInput("seed file holds no seeds");
  if (cfg.steps == 0) throw io::InvalidInput("--steps must be positive");

  struct Outcome {
    std::optional<Trajectory> traj;
    std::optional<SteadyState> steady;
    std::string error;
  };
  std::vector<Outcome> outcomes(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    try {
      outcomes[i].traj = simulate(plant, seeds[i], cfg.steps);
      outcomes[i].steady = detect_period(*outcomes[i].traj);
    } catch (const SimulationDiverged& e) {
      outcomes[i].error = e.what();
    } catch (const std::invalid_argument& e) {
      outcomes[i].error = e.what();
    }
  });

  int status = ok;
  std::ostringstream table;
  table << "seed,period,phase,pattern,self_oscillation,assumption2,sign_symmetric,fixed_point,error\n";
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Outcome& o = outcomes[i];
    table << i << ',';
    if (!o.error.empty()) {
      table << ",,,,,,,\"" << o.error << "\"\n";
      status = std::max(status, static_cast<int>(invalid_input));
      continue;
    }
    if (!cfg.out.empty()) {
      std::ofstream file(companion_path(cfg.out, "_seed" + std::to_string(i)));
      if (!file) throw io::InvalidInput("cannot write trajectory for seed " + std::to_string(i));
      io::write_trajectory_csv(file, *o.traj);
    }
    if (!o.steady) {
      table << ",,,,,,,no period detected\n";
      continue;
    }
    const SteadyState& st = *o.steady;
    const Classification c = classify(st.waveform, plant.dead_zone());
    bool fixed = false;
    if (st.period >= 2) {
      fixed = verify_fixed_point(plant, st.pattern).has_value();
      if (!fixed) status = internal_error;
    }
    table << st.period << ',' << st.phase << ',' << st.pattern.to_string() << ',' << c.is_self_oscillation << ','
          << c.satisfies_assumption2 << ',' << c.sign_symmetric << ',' << fixed << ",\n";
  }
  out << table.str();
  if (status == internal_error) err << "a detected steady state failed fixed-point verification\n";
  return status;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const io::PlantFile f = load_configured_plant(cfg);
  const PlantSpec plant = f.spec();
  std::size_t lo = 2;
  std::size_t hi = cfg.pmax != 0 ? cfg.pmax : std::min<std::size_t>(cfg.oracle_cap, 12);
  if (cfg.period != 0) lo = hi = cfg.period;
  if (hi > cfg.oracle_cap) {
    err << "refusing: period " << hi << " exceeds the oracle cap " << cfg.oracle_cap << " (3^P candidates)\n";
    return invalid_input;
  }
  AnalyzeOptions opt;
  opt.pmax = std::max<std::size_t>(hi, 2);
  opt.tol = cfg.tol;
  const OscillationReport analysis = find_oscillations(plant, opt);
  std::set<SignPattern> analyzer;
  for (const auto& r : analysis.records) {
    for (auto& s : all_rotations(r.pattern)) analyzer.insert(std::move(s));
  }

  json listing = json::array();
  std::ostringstream csv;
  csv << "P,pattern,assumption2_pattern,in_analyzer\n";
  int status = ok;
  for (std::size_t p = lo; p <= hi; ++p) {
    for (const SignPattern& s : brute_force_fixed_points(plant, p, cfg.oracle_cap)) {
      const bool a2 = s_cyclic_plus(s) == 2;
      const bool found = analyzer.contains(s);
      if (a2 != found) status = internal_error;
      csv << p << ',' << s.to_string() << ',' << a2 << ',' << found << '\n';
      listing.push_back({{"period", p}, {"pattern", s.to_string()}, {"assumption2_pattern", a2}, {"in_analyzer", found}});
    }
  }
  emit(cfg, out, cfg.format == "json" ? listing.dump(2) + "\n" : csv.str());
  if (status != ok) err << "oracle and analyzer disagree\n";
  return status;
}

inline void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--plant", cfg.plant_path, "plant spec JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--delay", cfg.delay, "extra delay Pd (sweep: list or a..b range)");
  cmd->add_option("--dead-zone", cfg.dead_zone, "relay dead zone chi0 (sweep: comma list)");
  cmd->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", cfg.out, "output path");
  cmd->add_option("--tol", cfg.tol, "periodic-summation tolerance")->check(CLI::PositiveNumber);
}

/// Runs one command line; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Period analysis of discrete-time relay feedback loops with dead zone", "relayosc"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check-plant", "assumption checks, convexity and delay factorization");
  add_common(check, cfg);

  auto* analyze = app.add_subcommand("analyze", "verified oscillations, bounds and oracle diff for one plant");
  add_common(analyze, cfg);
  analyze->add_option("--pmax", cfg.pmax, "largest period searched (default 2(Pd+Ps) even + 2)");
  analyze->add_option("--oracle-cap", cfg.oracle_cap, "largest period for the exhaustive oracle");
  analyze->add_option("--oracle-up-to", cfg.oracle_up_to, "periods cross-checked by the oracle");
  analyze->add_flag("--prune", cfg.prune, "skip zero-free patterns that are not sign-symmetric");

  auto* sweep = app.add_subcommand("sweep", "(Pd, P) table over delays and dead zones");
  add_common(sweep, cfg);
  sweep->add_option("--pmax", cfg.pmax, "largest period searched per cell");
  sweep->add_flag("--max-only", cfg.max_only, "only the largest period with P >= Pd");
  sweep->add_flag("--prune", cfg.prune, "skip zero-free patterns that are not sign-symmetric");

  auto* sim = app.add_subcommand("simulate", "closed-loop trajectories from relay seeds");
  add_common(sim, cfg);
  sim->add_option("--seed-file", cfg.seed_file, "one seed per line, or a JSON array of arrays")->check(CLI::ExistingFile);
  sim->add_option("--steps", cfg.steps, "simulated samples per seed");

  auto* oracle = app.add_subcommand("oracle", "exhaustive fixed-point listing");
  add_common(oracle, cfg);
  oracle->add_option("--pmax", cfg.pmax, "list every period up to this one");
  oracle->add_option("--period", cfg.period, "list a single period");
  oracle->add_option("--oracle-cap", cfg.oracle_cap, "largest period accepted");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return invalid_input;
  }

  try {
    if (check->parsed()) return cmd_check_plant(cfg, out);
    if (analyze->parsed()) return cmd_analyze(cfg, out, err);
    if (sweep->parsed()) return cmd_sweep(cfg, out, err);
    if (sim->parsed()) return cmd_simulate(cfg, out, err);
    if (oracle->parsed()) return cmd_oracle(cfg, out, err);
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return invalid_input;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal_error;
  }
  return invalid_input;
}

}  // namespace relayosc::cli
