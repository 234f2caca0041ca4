#include "maxdiss/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace maxdiss {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("key '" + key + "' expects a number, got '" + text + "'");
  return v;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const { return to_double(key, get(key)); }

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != static_cast<int>(v)) throw ConfigError("key '" + key + "' expects an integer");
  return static_cast<int>(v);
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

GasModel model_from_config(const Config& cfg) {
  const double gamma = cfg.get_double("gamma");
  if (!(gamma > 1.0)) throw ConfigError("gamma must be greater than 1");
  const std::string variant = cfg.get("law.variant", "perfect");
  EntropyLaw law = EntropyLaw::perfect_gas();
  if (variant == "perfect") {
    law = EntropyLaw::perfect_gas();
  } else if (variant == "third-law") {
    law = EntropyLaw::third_law();
  } else if (variant == "cold-pressure") {
    law = EntropyLaw::cold_pressure(cfg.get_double("law.p_bar"));
  } else if (variant == "power") {
    law = EntropyLaw::power(cfg.get_double("law.exponent"));
  } else {
    throw ConfigError("unknown law.variant '" + variant + "'");
  }
  if (variant != "cold-pressure" && cfg.has("law.p_bar") && cfg.get_double("law.p_bar") != 0.0) {
    throw ConfigError("law.p_bar is only meaningful for the cold-pressure law");
  }
  if (cfg.has("law.chi_bound")) law.with_chi_bound(cfg.get_double("law.chi_bound"));
  return GasModel(gamma, law);
}

namespace {

Primitive read_primitive(const Config& cfg, const std::string& prefix) {
  return {cfg.get_double(prefix + "rho"), cfg.get_double(prefix + "u", 0.0),
          cfg.get_double(prefix + "p")};
}

}  // namespace

Scenario scenario_from_config(const Config& cfg) {
  Scenario sc{model_from_config(cfg)};
  sc.nx = cfg.get_int("grid.nx");
  sc.t_end = cfg.get_double("grid.t_end");
  sc.length = cfg.get_double("grid.length", 1.0);
  sc.nt = cfg.get_int("grid.nt", 50);
  if (sc.nx < 3) throw ConfigError("grid.nx must be at least 3");
  if (sc.nt < 1) throw ConfigError("grid.nt must be positive");
  if (!(sc.t_end > 0.0) || !(sc.length > 0.0)) {
    throw ConfigError("grid.t_end and grid.length must be positive");
  }
  try {
    sc.scheme.flux = parse_flux(cfg.get("scheme.flux", "lax-friedrichs"));
    sc.ic.type = parse_ic(cfg.get("ic.type"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  sc.scheme.cfl = cfg.get_double("scheme.cfl", 0.9);
  sc.scheme.viscosity = cfg.get_double("scheme.viscosity", 0.0);
  if (!(sc.scheme.cfl > 0.0 && sc.scheme.cfl <= 1.0)) throw ConfigError("scheme.cfl must lie in (0, 1]");
  if (!(sc.scheme.viscosity >= 0.0)) throw ConfigError("scheme.viscosity must be nonnegative");
  if (sc.ic.type == IcType::Riemann) {
    sc.ic.left = read_primitive(cfg, "ic.left.");
    sc.ic.right = read_primitive(cfg, "ic.right.");
  } else {
    sc.ic.base = read_primitive(cfg, "ic.");
    sc.ic.amplitude = cfg.get_double("ic.amplitude", 0.0);
    sc.ic.wavenumber = cfg.get_int("ic.wavenumber", 1);
  }
  sc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  return sc;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << std::setprecision(17);
  out << "# t x rho m E\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    for (std::size_t i = 0; i < traj.states[k].size(); ++i) {
      const ConsState& s = traj.states[k][i];
      out << traj.times[k] << ' ' << (i + 0.5) * traj.grid.dx << ' ' << s.rho << ' ' << s.m(0)
          << ' ' << s.E << '\n';
    }
  }
}

namespace {

void write_grid(std::ostream& out, const SpaceTimeGrid& g) {
  out << std::setprecision(17) << "# grid " << g.n_t << ' ' << g.n_x << ' ' << g.dt << ' ' << g.dx
      << '\n';
}

SpaceTimeGrid read_grid(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string hash, word;
    SpaceTimeGrid g;
    if (ss >> hash >> word >> g.n_t >> g.n_x >> g.dt >> g.dx && hash == "#" && word == "grid") {
      g.validate();
      return g;
    }
    break;
  }
  throw std::invalid_argument("missing '# grid n_t n_x dt dx' header");
}

}  // namespace

void write_young(std::ostream& out, const YoungMeasureField& U) {
  write_grid(out, U.grid());
  for (int t = 0; t < U.levels(); ++t) {
    for (int x = 0; x < U.grid().n_x; ++x) {
      for (const Atom& a : U.cell(t, x)) {
        out << t << ' ' << x << ' ' << a.weight << ' ' << a.state.rho;
        for (int k = 0; k < a.state.dim(); ++k) out << ' ' << a.state.m(k);
        out << ' ' << a.state.E << '\n';
      }
    }
  }
}

YoungMeasureField read_young(std::istream& in) {
  const SpaceTimeGrid g = read_grid(in);
  YoungMeasureField U(g);
  std::vector<std::vector<Atom>> cells(static_cast<std::size_t>(U.levels()) * g.n_x);
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int t = 0, x = 0;
    std::vector<double> v;
    ss >> t >> x;
    double d = 0.0;
    while (ss >> d) v.push_back(d);
    if (!ss.eof() || v.size() < 4) {
      throw std::invalid_argument("malformed Young-measure line " + std::to_string(lineno));
    }
    if (t < 0 || t >= U.levels() || x < 0 || x >= g.n_x) {
      throw std::invalid_argument("cell index out of range on line " + std::to_string(lineno));
    }
    Atom a;
    a.weight = v[0];
    a.state.rho = v[1];
    a.state.E = v.back();
    a.state.m = Vec::Zero(static_cast<int>(v.size()) - 3);
    for (std::size_t k = 2; k + 1 < v.size(); ++k) a.state.m(static_cast<int>(k - 2)) = v[k];
    cells[static_cast<std::size_t>(t) * g.n_x + x].push_back(a);
  }
  for (int t = 0; t < U.levels(); ++t) {
    for (int x = 0; x < g.n_x; ++x) {
      auto& atoms = cells[static_cast<std::size_t>(t) * g.n_x + x];
      if (atoms.empty()) {
        throw std::invalid_argument("no atoms for cell (" + std::to_string(t) + ", " +
                                    std::to_string(x) + ")");
      }
      U.set_cell(t, x, std::move(atoms));
    }
  }
  return U;
}

void write_cell_measure(std::ostream& out, const CellMeasure& sigma) {
  const SpaceTimeGrid& g = sigma.grid();
  write_grid(out, g);
  for (int t = 0; t < g.n_t; ++t) {
    for (int x = 0; x < g.n_x; ++x) out << t << ' ' << x << ' ' << sigma.at(t, x) << '\n';
  }
}

CellMeasure read_cell_measure(std::istream& in) {
  const SpaceTimeGrid g = read_grid(in);
  std::vector<double> v(static_cast<std::size_t>(g.n_t) * g.n_x, 0.0);
  std::vector<char> seen(v.size(), 0);
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int t = 0, x = 0;
    double s = 0.0;
    std::string extra;
    if (!(ss >> t >> x >> s) || (ss >> extra)) {
      throw std::invalid_argument("malformed cell-measure line " + std::to_string(lineno));
    }
    if (t < 0 || t >= g.n_t || x < 0 || x >= g.n_x) {
      throw std::invalid_argument("cell index out of range on line " + std::to_string(lineno));
    }
    const std::size_t k = static_cast<std::size_t>(t) * g.n_x + x;
    v[k] = s;
    seen[k] = 1;
  }
  for (char c : seen) {
    if (!c) throw std::invalid_argument("cell-measure file does not cover every cell");
  }
  return CellMeasure(g, std::move(v));
}

YoungMeasureField read_young_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_young(in);
}

CellMeasure read_cell_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_cell_measure(in);
}

}  // namespace maxdiss
