#pragma once

// First-order finite-volume solver for the 1-D Euler system on a periodic
// grid, with the discrete entropy residual, ensembles and run diagnostics.

#include "maxdiss/measures.hpp"
#include "maxdiss/riemann.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace maxdiss {

enum class FluxKind { LaxFriedrichs, Rusanov, Hll };

std::string to_string(FluxKind f);
FluxKind parse_flux(const std::string& name);

struct SchemeConfig {
  FluxKind flux = FluxKind::LaxFriedrichs;
  double cfl = 0.9;
  /// Coefficient of the eps u_xx term added to momentum and energy.
  double viscosity = 0.0;
};

enum class IcType { Constant, Riemann, DensityWave, AcousticWave };

std::string to_string(IcType t);
IcType parse_ic(const std::string& name);

/// Constant: `base` everywhere.
/// Riemann: `left` on [0, L/4) and [3L/4, L), `right` in between.
/// DensityWave: rho = base.rho (1 + amplitude sin(k x)), u and p from base.
/// AcousticWave: simple right-moving wave with rho = base.rho (1 + amplitude
///               sin(k x)), constant Riemann invariant and entropy.
struct InitialCondition {
  IcType type = IcType::Constant;
  Primitive base;
  Primitive left;
  Primitive right;
  double amplitude = 0.0;
  /// Number of periods across the domain.
  int wavenumber = 1;
};

struct Scenario {
  explicit Scenario(GasModel m) : model(std::move(m)) {}

  GasModel model;
  int nx = 100;
  double length = 1.0;
  double t_end = 0.1;
  /// Number of output intervals.
  int nt = 50;
  SchemeConfig scheme;
  InitialCondition ic;
  std::uint64_t seed = 0;

  SpaceTimeGrid grid() const;
  double cell_center(int i) const { return (i + 0.5) * length / nx; }
};

/// Initial cell values; point values at cell centres.
std::vector<ConsState> initial_states(const Scenario& sc);

/// Time by which the acoustic simple wave first steepens into a shock.
double acoustic_breaking_time(const Scenario& sc);

class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflViolation : public SolverAbort {
 public:
  using SolverAbort::SolverAbort;
};

class AdmissibilityLoss : public SolverAbort {
 public:
  using SolverAbort::SolverAbort;
};

class EntropyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  SpaceTimeGrid grid;
  double gamma = 1.4;
  std::vector<double> times;
  /// states[level][cell], level = 0..n_t.
  std::vector<std::vector<ConsState>> states;
  /// Time integral of the numerical entropy flux over each output interval,
  /// at the left face of each cell.
  std::vector<std::vector<double>> entropy_flux;
  /// Energy defect d(t) = E(0) - E(t) per level.
  std::vector<double> defect;
  long substeps = 0;
};

/// Physical flux (m, m^2/rho + p, (E + p) m / rho) in one dimension.
std::array<double, 3> euler_flux(const GasModel& model, const ConsState& s);

/// Lower and upper bounds on the wave speeds of the local Riemann problem.
std::pair<double, double> wave_speed_bounds(const GasModel& model, const ConsState& left,
                                            const ConsState& right);

/// One forward-Euler step of length dt on a periodic array; returns the
/// entropy flux at each left face. Throws CflViolation if dt exceeds the
/// admissible step.
std::vector<double> step(const GasModel& model, const SchemeConfig& scheme, double dx, double dt,
                         std::vector<ConsState>& cells);

/// Largest stable time step for the current cells.
double stable_time_step(const GasModel& model, const SchemeConfig& scheme, double dx,
                        const std::vector<ConsState>& cells);

Trajectory run(const Scenario& sc);

struct ResidualReport {
  double most_negative = 0.0;
  double scale = 0.0;
  double clamped_mass = 0.0;
};

/// sigma = (S^{n+1} - S^n) dx + (Q_{i+1/2} - Q_{i-1/2}) dt per cell, clamped at
/// zero after checking sigma >= -1e-10 scale (EntropyViolation otherwise).
CellMeasure entropy_residual(const Trajectory& traj, const GasModel& model,
                             ResidualReport* report = nullptr);

YoungMeasureField dirac_field(const Trajectory& traj);

struct Perturbation {
  double density_factor = 1.0;
  double pressure_factor = 1.0;
  double velocity_shift = 0.0;
};

/// `count` perturbations with factors uniform in [1 - scale, 1 + scale] and
/// velocity shifts in [-scale, scale], from a seeded generator.
std::vector<Perturbation> random_perturbations(int count, double scale, std::uint64_t seed);

Scenario perturbed(const Scenario& sc, const Perturbation& p);

struct EnsembleResult {
  YoungMeasureField field;
  /// Mean of the member entropy residuals.
  CellMeasure sigma;
};

/// Runs the perturbed scenarios (concurrently, worker count from
/// MAXDISS_WORKERS) and assembles equally weighted atoms.
EnsembleResult ensemble(const Scenario& base, const std::vector<Perturbation>& perturbations);

struct Diagnostics {
  double energy_initial = 0.0;
  double energy_max = 0.0;
  double energy_final = 0.0;
  bool energy_inequality = true;
  double defect_min = 0.0;
  double admissible_probability = 1.0;
  double kinetic_moment = 0.0;
  double pressure_moment = 0.0;
  double entropy_exponent = 1.0;
  double entropy_moment = 0.0;
  double concentration_variation = 0.0;
  /// Smallest c with |mu_C|(tau) <= c d(tau) on every level.
  double defect_constant = 0.0;

  std::string to_text() const;
};

/// Energy inequality, admissibility probability, moment bounds and the
/// defect constant of a measure-valued field. `mu_c` defaults to zero.
Diagnostics diagnostics(const GasModel& model, const YoungMeasureField& U,
                        const MatrixCellMeasure* mu_c = nullptr);

}  // namespace maxdiss
