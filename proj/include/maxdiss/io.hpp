#pragma once

// Configuration files and the plain-text formats for trajectories, Young
// measures and cell measures.

#include "maxdiss/solver.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace maxdiss {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration; `#` starts a comment.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  /// Applies a `key=value` override; later calls win.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

GasModel model_from_config(const Config& cfg);
Scenario scenario_from_config(const Config& cfg);

void write_trajectory(std::ostream& out, const Trajectory& traj);

/// Header `# grid n_t n_x dt dx`, then `t_index x_index weight rho m E` rows.
void write_young(std::ostream& out, const YoungMeasureField& U);
YoungMeasureField read_young(std::istream& in);

/// Header `# grid n_t n_x dt dx`, then `t_index x_index sigma` rows.
void write_cell_measure(std::ostream& out, const CellMeasure& sigma);
CellMeasure read_cell_measure(std::istream& in);

YoungMeasureField read_young_file(const std::string& path);
CellMeasure read_cell_measure_file(const std::string& path);

}  // namespace maxdiss
