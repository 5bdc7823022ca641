#include "rkg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace rkg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

void only_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where, "expected object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) fail(where + "/" + k, "unknown field");
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected number");
  return v.get<double>();
}

double positive(const json& v, const std::string& where) {
  const double x = number(v, where);
  if (!(x > 0) || !std::isfinite(x)) fail(where, "must be positive and finite");
  return x;
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected integer");
  return v.get<int>();
}

std::array<double, 2> pair_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where, "expected array of 2 numbers");
  return {number(v[0], where + "/0"), number(v[1], where + "/1")};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json_file(const std::filesystem::path& p) {
  const std::string text = read_file(p);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

QuadraticSystem load_system(const json& v, const std::filesystem::path& base_dir, std::string& source) {
  try {
    if (v.is_object()) {
      source = "inline";
      return parse_system(v.dump());
    }
    if (!v.is_string()) fail("/system", "expected \"builtin:<name>\", a file path, or an inline system object");
    const std::string s = v.get<std::string>();
    if (s.rfind("builtin:", 0) == 0) {
      const auto all = builtin_systems();
      const auto it = all.find(s.substr(8));
      if (it == all.end()) fail("/system", "unknown builtin \"" + s.substr(8) + "\"");
      source = s;
      return it->second;
    }
    std::filesystem::path p(s);
    if (p.is_relative()) p = base_dir / p;
    source = s;
    return parse_system(read_file(p));
  } catch (const ParseError& e) {
    throw ConfigError(std::string("/system: ") + e.what());
  }
}

}  // namespace

std::array<double, 2> RunSettings::window() const {
  if (decay_window) return *decay_window;
  return {sim.t_end / 8, sim.t_end};
}

RunSettings parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  only_keys(doc, "",
            {"system", "grid", "dt", "t_end", "data", "dealias", "diagnostics", "blowup_factor", "sweep"});
  RunSettings r;
  if (!doc.contains("system")) fail("/system", "missing");
  r.sim.system = load_system(doc["system"], base_dir, r.system_source);
  auto rep = validate(r.sim.system);
  if (!rep.ok()) fail("/system", rep.violations.front());

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    only_keys(g, "/grid", {"n", "length"});
    const int n = g.contains("n") ? integer(g["n"], "/grid/n") : r.sim.grid.n;
    const double len = g.contains("length") ? positive(g["length"], "/grid/length") : r.sim.grid.length;
    try {
      r.sim.grid = Grid::make(n, len);
    } catch (const std::invalid_argument& e) {
      fail("/grid", e.what());
    }
  }
  if (doc.contains("dt")) r.sim.dt = positive(doc["dt"], "/dt");
  if (doc.contains("t_end")) {
    r.sim.t_end = number(doc["t_end"], "/t_end");
    if (r.sim.t_end < 0) fail("/t_end", "must be non-negative");
  }
  if (doc.contains("data")) {
    const auto& d = doc["data"];
    only_keys(d, "/data", {"family", "epsilon", "sigma", "weights", "velocity_weights"});
    if (d.contains("family")) {
      if (!d["family"].is_string() || d["family"] != "gaussian") fail("/data/family", "only \"gaussian\" is supported");
    }
    if (d.contains("epsilon")) r.sim.data.epsilon = positive(d["epsilon"], "/data/epsilon");
    if (d.contains("sigma")) r.sim.data.sigma = positive(d["sigma"], "/data/sigma");
    if (d.contains("weights")) r.sim.data.weights = pair_of(d["weights"], "/data/weights");
    if (d.contains("velocity_weights"))
      r.sim.data.velocity_weights = pair_of(d["velocity_weights"], "/data/velocity_weights");
  }
  if (doc.contains("dealias")) {
    if (!doc["dealias"].is_boolean()) fail("/dealias", "expected boolean");
    r.sim.dealias = doc["dealias"].get<bool>();
  }
  if (doc.contains("blowup_factor")) r.sim.blowup_factor = positive(doc["blowup_factor"], "/blowup_factor");
  if (doc.contains("diagnostics")) {
    const auto& d = doc["diagnostics"];
    only_keys(d, "/diagnostics", {"every", "sobolev", "profile_t0", "decay_window", "growth_threshold", "snapshots"});
    if (d.contains("every")) {
      r.sim.diag_every = integer(d["every"], "/diagnostics/every");
      if (r.sim.diag_every < 1) fail("/diagnostics/every", "must be >= 1");
    }
    if (d.contains("sobolev")) {
      if (!d["sobolev"].is_array()) fail("/diagnostics/sobolev", "expected array of integers");
      r.sobolev_orders.clear();
      for (std::size_t i = 0; i < d["sobolev"].size(); ++i) {
        const int s = integer(d["sobolev"][i], "/diagnostics/sobolev/" + std::to_string(i));
        if (s < 0) fail("/diagnostics/sobolev/" + std::to_string(i), "must be non-negative");
        r.sobolev_orders.push_back(s);
      }
    }
    if (d.contains("profile_t0")) r.profile_t0 = positive(d["profile_t0"], "/diagnostics/profile_t0");
    if (d.contains("decay_window")) r.decay_window = pair_of(d["decay_window"], "/diagnostics/decay_window");
    if (d.contains("growth_threshold"))
      r.growth_threshold = positive(d["growth_threshold"], "/diagnostics/growth_threshold");
    if (d.contains("snapshots")) {
      if (!d["snapshots"].is_boolean()) fail("/diagnostics/snapshots", "expected boolean");
      r.snapshots = d["snapshots"].get<bool>();
    }
  }
  return r;
}

RunSettings load_run_config(const std::filesystem::path& path) {
  return parse_run_config(parse_json_file(path), path.parent_path());
}

json canonical_config(const RunSettings& s) {
  const auto w = s.window();
  return {{"system", json::parse(serialize_system(s.sim.system))},
          {"system_source", s.system_source},
          {"grid", {{"n", s.sim.grid.n}, {"length", s.sim.grid.length}}},
          {"dt", s.sim.dt},
          {"t_end", s.sim.t_end},
          {"data",
           {{"family", s.sim.data.family},
            {"epsilon", s.sim.data.epsilon},
            {"sigma", s.sim.data.sigma},
            {"weights", s.sim.data.weights},
            {"velocity_weights", s.sim.data.velocity_weights}}},
          {"dealias", s.sim.dealias},
          {"blowup_factor", s.sim.blowup_factor},
          {"diagnostics",
           {{"every", s.sim.diag_every},
            {"sobolev", s.sobolev_orders},
            {"profile_t0", s.profile_t0},
            {"decay_window", {w[0], w[1]}},
            {"growth_threshold", s.growth_threshold},
            {"snapshots", s.snapshots}}}};
}

SweepSpec parse_sweep_config(const json& doc, const std::filesystem::path& base_dir) {
  SweepSpec sp;
  sp.base = parse_run_config(doc, base_dir);
  sp.epsilons = {sp.base.sim.data.epsilon};
  sp.dts = {sp.base.sim.dt};
  if (!doc.contains("sweep")) return sp;
  const auto& sw = doc["sweep"];
  only_keys(sw, "/sweep", {"epsilons", "dts"});
  auto list = [&](const char* key, std::vector<double>& out) {
    if (!sw.contains(key)) return;
    const std::string where = std::string("/sweep/") + key;
    if (!sw[key].is_array()) fail(where, "expected array of numbers");
    out.clear();
    for (std::size_t i = 0; i < sw[key].size(); ++i) out.push_back(positive(sw[key][i], where + "/" + std::to_string(i)));
  };
  list("epsilons", sp.epsilons);
  list("dts", sp.dts);
  return sp;
}

SweepSpec load_sweep_config(const std::filesystem::path& path) {
  return parse_sweep_config(parse_json_file(path), path.parent_path());
}

}  // namespace rkg
