#include "rkg/cli.hpp"

#include "rkg/normalform.hpp"
#include "rkg/nullcheck.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace rkg {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

fs::path output_root() {
  if (const char* env = std::getenv("RKG_OUTPUT_ROOT"); env && *env) return env;
  return "rkg-output";
}

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string config_hash(const RunSettings& s) { return sha256_hex(canonical_config(s).dump()); }

json record_json(const RunRecord& r) {
  return {{"t_reached", r.t_reached},
          {"steps", r.steps},
          {"wall_seconds", r.wall_seconds},
          {"blowup", r.blowup},
          {"message", r.message}};
}

json nan_to_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

// Energy-norm distance between two states on the same grid.
double state_distance(const Grid& g, const GridState& a, const GridState& b, const MassPair& m) {
  Fft fft(g);
  GridState d = a;
  for (int k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < d.u[k].size(); ++i) {
      d.u[k][i] -= b.u[k][i];
      d.ut[k][i] -= b.ut[k][i];
    }
  return energy_norm(fft, d, m);
}

// ---------------------------------------------------------------------------
// Subcommands

QuadraticSystem load_system_file(const std::string& path) { return parse_system(read_text(path)); }

int cmd_check(const std::string& file, bool verbose, std::ostream& out, std::ostream& err) {
  const QuadraticSystem sys = load_system_file(file);
  const NullVerdict v = check_null(sys);
  out << verdict_json(v).dump(2) << "\n";
  if (verbose) err << certificate_report(v);
  return v.is_null ? kExitOk : kExitNotNull;
}

int cmd_decompose(const std::string& file, std::ostream& out, std::ostream& err) {
  const QuadraticSystem sys = load_system_file(file);
  require_valid(sys);
  if (!sys.masses.resonant()) {
    err << "decompose: masses (" << to_string(sys.masses.m1) << ", " << to_string(sys.masses.m2)
        << ") are not resonant (m2 = 2 m1 required)\n";
    return kExitUsage;
  }
  try {
    out << decomposition_json(decompose(sys)).dump(2) << "\n";
    return kExitOk;
  } catch (const NotNullError& e) {
    json res = json::array();
    for (int eq = 1; eq <= 2; ++eq)
      for (auto& t : quadform_json(e.residual()[eq - 1], eq)) res.push_back(t);
    json j{{"generators", json::object()},
           {"lambda", json::array()},
           {"residual", {{"message", e.what()}, {"terms", res}}}};
    out << j.dump(2) << "\n";
    return kExitNotNull;
  }
}

int cmd_resonance(const std::string& file, const std::string& masses_text, std::ostream& out, std::ostream& err) {
  MassPair m;
  if (!file.empty()) {
    m = load_system_file(file).masses;
  } else if (!masses_text.empty()) {
    const auto comma = masses_text.find(',');
    if (comma == std::string::npos) {
      err << "resonance: --masses expects m1,m2\n";
      return kExitUsage;
    }
    auto a = parse_rational(masses_text.substr(0, comma));
    auto b = parse_rational(masses_text.substr(comma + 1));
    if (!a || !b || sgn(*a) <= 0 || sgn(*b) <= 0) {
      err << "resonance: masses must be positive rationals\n";
      return kExitUsage;
    }
    m = {*a, *b};
  }
  json j{{"masses", {to_string(m.m1), to_string(m.m2)}},
         {"resonant", m.resonant()},
         {"cells", resonance_json(classify_resonance(m))}};
  if (m.resonant()) {
    const auto im = degenerate_images(m);
    j["degenerate_images"] = {{"A112", {to_string(im.a112[0]), to_string(im.a112[1])}},
                              {"A211", {to_string(im.a211[0]), to_string(im.a211[1])}}};
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& file, std::ostream& out, std::ostream& err) {
  const RunSettings settings = load_run_config(file);
  const std::string hash = config_hash(settings);
  const fs::path dir = output_root() / (fs::path(file).stem().string() + "-" + hash.substr(0, 12));
  fs::create_directories(dir);
  const SimulationOutcome res = simulate(settings);
  write_run_directory(dir, settings, res);
  out << json{{"directory", dir.string()},
              {"config_sha256", hash},
              {"record", record_json(res.record)},
              {"growth", growth_json(res.growth)}}
             .dump(2)
      << "\n";
  if (res.record.blowup) {
    err << "blow-up: " << res.record.message << "\n";
    return kExitBlowUp;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& file, int jobs, std::ostream& out) {
  const SweepSpec spec = load_sweep_config(file);
  const std::string hash = sha256_hex(canonical_config(spec.base).dump() +
                                      json{{"epsilons", spec.epsilons}, {"dts", spec.dts}}.dump());
  const fs::path dir = output_root() / (fs::path(file).stem().string() + "-sweep-" + hash.substr(0, 12));
  json table = run_sweep(spec, jobs, dir);
  out << table.dump(2) << "\n";
  return kExitOk;
}

int cmd_report(const std::string& dir, std::ostream& out, std::ostream& err) {
  const fs::path p = fs::path(dir) / "run.json";
  json run;
  try {
    run = json::parse(read_text(p));
  } catch (const json::parse_error& e) {
    err << p.string() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const auto& rec = run.at("record");
  const auto& g = run.at("growth");
  out << "t_reached      " << rec.at("t_reached").get<double>() << " (" << rec.at("steps").get<long>()
      << " steps)\n";
  out << "blowup         " << (rec.at("blowup").get<bool>() ? "yes" : "no") << "\n";
  out << "verdict        " << g.at("verdict").get<std::string>() << "\n";
  out << "energy ratio   " << g.at("ratio").get<double>() << " (final " << g.at("final_ratio").get<double>()
      << ", monotone final half: " << (g.at("monotone_final_half").get<bool>() ? "yes" : "no") << ")\n";
  const auto& d = run.at("decay");
  if (d.contains("slope"))
    out << "decay slope    " << d.at("slope").get<double>() << " over [" << d.at("window")[0].get<double>() << ", "
        << d.at("window")[1].get<double>() << "]\n";
  else
    out << "decay slope    n/a (" << d.value("error", "") << ")\n";
  out << "profile gaps  ";
  for (const auto& pr : run.at("profiles")) {
    out << " t=" << pr.at("time").get<double>() << ":";
    if (pr.at("cauchy_gap").is_null())
      out << "-";
    else
      out << pr.at("cauchy_gap").get<double>();
  }
  out << "\ngaps decreasing " << (run.at("gaps_decreasing").get<bool>() ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_builtin(const std::string& name, const std::string& dir, std::ostream& out, std::ostream& err) {
  const auto all = builtin_systems();
  std::vector<std::string> names;
  if (name.empty()) {
    for (const auto& [n, s] : all) names.push_back(n);
  } else if (all.count(name)) {
    names.push_back(name);
  } else {
    err << "unknown builtin \"" << name << "\"; available:";
    for (const auto& [n, s] : all) err << " " << n;
    err << "\n";
    return kExitUsage;
  }
  if (dir.empty()) {
    if (names.size() != 1) {
      err << "builtin: give a name to print one system, or --dir to write all of them\n";
      return kExitUsage;
    }
    out << serialize_system(all.at(names[0]), 2) << "\n";
    return kExitOk;
  }
  fs::create_directories(dir);
  for (const auto& n : names) {
    const fs::path p = fs::path(dir) / (n + ".json");
    write_text(p, serialize_system(all.at(n), 2) + "\n");
    out << p.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// Simulation driver

SimulationOutcome simulate(const RunSettings& settings) {
  const SimConfig& cfg = settings.sim;
  DiagnosticsRecorder rec(cfg.grid, cfg.system.masses, settings.sobolev_orders,
                          doubling_times(settings.profile_t0, cfg.t_end), 0.5 * cfg.dt);
  SimulationOutcome res;
  res.record = run(cfg, std::ref(rec));
  res.growth = growth_report(rec.rows(), settings.growth_threshold);
  const auto w = settings.window();
  std::vector<std::pair<double, double>> samples;
  for (const auto& r : rec.rows()) samples.emplace_back(r.time, r.linfty);
  try {
    const DecayFit fit = decay_profile(samples, w[0], w[1]);
    res.decay = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"points", fit.points}, {"window", w}};
  } catch (const InsufficientData& e) {
    res.decay = {{"error", e.what()}, {"window", w}};
  }
  res.profiles = rec.profiles();
  res.gaps_decreasing = gaps_decreasing(res.profiles);
  res.final_state = rec.last_state();
  res.diagnostics_csv = rec.csv();
  res.profiles_csv = rec.profile_csv();
  return res;
}

json run_summary_json(const RunSettings& settings, const SimulationOutcome& o) {
  json profiles = json::array();
  for (const auto& p : o.profiles)
    profiles.push_back({{"time", p.time}, {"cauchy_gap", nan_to_null(p.cauchy_gap)}, {"profile_energy", p.profile_energy}});
  return {{"record", record_json(o.record)},
          {"growth", growth_json(o.growth)},
          {"decay", o.decay},
          {"profiles", profiles},
          {"gaps_decreasing", o.gaps_decreasing},
          {"config", canonical_config(settings)}};
}

void write_run_directory(const fs::path& dir, const RunSettings& settings, const SimulationOutcome& o) {
  fs::create_directories(dir);
  write_text(dir / "diagnostics.csv", o.diagnostics_csv);
  write_text(dir / "profiles.csv", o.profiles_csv);
  write_text(dir / "run.json", run_summary_json(settings, o).dump(2) + "\n");
  std::vector<std::string> outputs{"diagnostics.csv", "profiles.csv", "run.json"};
  if (settings.snapshots && o.final_state) {
    write_snapshot((dir / "final").string(), *o.final_state, settings.sim.grid);
    outputs.push_back("final.bin");
    outputs.push_back("final.json");
  }
  const json manifest{{"tool", "rkg"},
                      {"version", kToolVersion},
                      {"config_sha256", config_hash(settings)},
                      {"system_sha256", sha256_hex(serialize_system(settings.sim.system))},
                      {"system_source", settings.system_source},
                      {"created_utc", utc_now()},
                      {"outputs", outputs}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Sweeps

json run_sweep(const SweepSpec& spec, int jobs, const fs::path& dir) {
  struct Cell {
    RunSettings settings;
    std::string name;
    bool reference = false;
    std::optional<SimulationOutcome> outcome;
    std::string error;
  };
  std::vector<Cell> cells;
  auto add = [&](double eps, double dt, bool reference) {
    Cell c;
    c.settings = spec.base;
    c.settings.sim.data.epsilon = eps;
    // keep the diagnostics cadence at the base time interval
    const double base_interval = spec.base.sim.dt * spec.base.sim.diag_every;
    c.settings.sim.dt = dt;
    c.settings.sim.diag_every = std::max(1, static_cast<int>(std::lround(base_interval / dt)));
    c.reference = reference;
    std::ostringstream nm;
    nm << (reference ? "ref" : "cell") << "-eps" << eps << "-dt" << dt;
    c.name = nm.str();
    cells.push_back(std::move(c));
  };
  for (double eps : spec.epsilons)
    for (double dt : spec.dts) add(eps, dt, false);
  const bool ladder = spec.dts.size() > 1;
  double dt_ref = 0;
  if (ladder && !spec.epsilons.empty()) {
    dt_ref = *std::min_element(spec.dts.begin(), spec.dts.end()) / 8;
    for (double eps : spec.epsilons) add(eps, dt_ref, true);
  }

  if (!cells.empty()) fs::create_directories(dir);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& c = cells[i];
      try {
        c.outcome = simulate(c.settings);
        write_run_directory(dir / c.name, c.settings, *c.outcome);
      } catch (const std::exception& e) {
        c.error = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  auto reference_for = [&](double eps) -> const Cell* {
    for (const auto& c : cells)
      if (c.reference && c.settings.sim.data.epsilon == eps) return &c;
    return nullptr;
  };

  json rows = json::array();
  for (const auto& c : cells) {
    if (c.reference) continue;
    json row{{"epsilon", c.settings.sim.data.epsilon}, {"dt", c.settings.sim.dt}, {"directory", (dir / c.name).string()}};
    if (!c.outcome) {
      row["status"] = "error";
      row["error"] = c.error;
    } else {
      const auto& o = *c.outcome;
      row["status"] = o.record.blowup ? "blowup" : "ok";
      row["verdict"] = o.growth.verdict;
      row["ratio"] = o.growth.ratio;
      row["monotone_final_half"] = o.growth.monotone_final_half;
      row["decay_slope"] = o.decay.contains("slope") ? o.decay["slope"] : json(nullptr);
      row["gaps_decreasing"] = o.gaps_decreasing;
      row["t_reached"] = o.record.t_reached;
      row["error_vs_reference"] = nullptr;
      if (ladder && !o.record.blowup) {
        const Cell* ref = reference_for(c.settings.sim.data.epsilon);
        if (ref && ref->outcome && !ref->outcome->record.blowup && o.final_state && ref->outcome->final_state)
          row["error_vs_reference"] = state_distance(c.settings.sim.grid, *o.final_state, *ref->outcome->final_state,
                                                     c.settings.sim.system.masses);
      }
    }
    rows.push_back(row);
  }

  json table{{"cells", rows}};
  if (ladder) {
    json conv = json::array();
    std::vector<double> dts = spec.dts;
    std::sort(dts.rbegin(), dts.rend());
    for (double eps : spec.epsilons) {
      json ratios = json::array();
      for (std::size_t i = 0; i + 1 < dts.size(); ++i) {
        double a = NAN, b = NAN;
        for (const auto& r : rows) {
          if (r["epsilon"] != eps || r["error_vs_reference"].is_null()) continue;
          if (r["dt"] == dts[i]) a = r["error_vs_reference"].get<double>();
          if (r["dt"] == dts[i + 1]) b = r["error_vs_reference"].get<double>();
        }
        ratios.push_back({{"dt_coarse", dts[i]}, {"dt_fine", dts[i + 1]}, {"ratio", nan_to_null(a / b)}});
      }
      conv.push_back({{"epsilon", eps}, {"reference_dt", dt_ref}, {"ratios", ratios}});
    }
    table["convergence"] = conv;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Entry point

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resonant Klein-Gordon null-condition toolkit", "rkg"};
  app.set_version_flag("--version", std::string("rkg ") + kToolVersion);
  app.require_subcommand(1);

  std::string file, masses, dir, name;
  bool verbose = false;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto* check = app.add_subcommand("check", "Decide the null condition of a system file");
  check->add_option("file", file, "system JSON")->required();
  check->add_flag("-v,--verbose", verbose, "print the certificate to stderr");

  auto* dec = app.add_subcommand("decompose", "Write a null system in generator form and build the normal form");
  dec->add_option("file", file, "system JSON")->required();

  auto* res = app.add_subcommand("resonance", "Resonance matrices for a mass pair");
  auto* res_file = res->add_option("file", file, "system JSON (masses are taken from it)");
  res->add_option("--masses", masses, "m1,m2 as rationals, e.g. 1,2")->excludes(res_file);

  auto* sim = app.add_subcommand("simulate", "Run one simulation from a config file");
  sim->add_option("config", file, "run config JSON")->required();

  auto* sweep = app.add_subcommand("sweep", "Run an epsilon/dt matrix of simulations");
  sweep->add_option("config", file, "sweep config JSON")->required();
  sweep->add_option("-j,--jobs", jobs, "concurrent cells")->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("report", "Summarize a run directory");
  rep->add_option("dir", dir, "run directory")->required();

  auto* bi = app.add_subcommand("builtin", "Print or write the builtin systems");
  bi->add_option("name", name, "builtin name");
  bi->add_option("--dir", dir, "write <name>.json files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(file, verbose, out, err);
    if (*dec) return cmd_decompose(file, out, err);
    if (*res) return cmd_resonance(file, masses, out, err);
    if (*sim) return cmd_simulate(file, out, err);
    if (*sweep) return cmd_sweep(file, jobs, out);
    if (*rep) return cmd_report(dir, out, err);
    if (*bi) return cmd_builtin(name, dir, out, err);
  } catch (const InvalidSystem& e) {
    err << "invalid system:\n";
    for (const auto& v : e.report().violations) err << "  " << v << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rkg
