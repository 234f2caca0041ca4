#pragma once

// Relative-energy functional R(tau) of a measure-valued field against a
// smooth reference solution, and the Gronwall-type test of its growth.

#include "maxdiss/relenergy.hpp"
#include "maxdiss/solver.hpp"

#include <functional>

namespace maxdiss {

enum class ReferenceKind { Constant, Translate, ResolvedNumeric };

std::string to_string(ReferenceKind k);

class ReferenceSolution {
 public:
  static ReferenceSolution constant(const GasModel& model, const Primitive& w);

  /// rho(t, x) = rho0(x - u t) with u and p constant; rho0 periodic of period
  /// `length`.
  static ReferenceSolution translate(const GasModel& model, std::function<double(double)> rho0,
                                     double u, double p, double length);

  /// Reference matching a DensityWave scenario.
  static ReferenceSolution density_wave(const Scenario& sc);

  /// Piecewise-linear interpolation of a (finer) trajectory in x and t.
  static ReferenceSolution resolved_numeric(const GasModel& model, const Trajectory& fine);

  ReferenceKind kind() const { return kind_; }
  Primitive primitive(double t, double x) const { return eval_(t, x); }
  StandardState operator()(double t, double x) const;

 private:
  ReferenceSolution(const GasModel& model, ReferenceKind kind,
                    std::function<Primitive(double, double)> eval)
      : model_(model), kind_(kind), eval_(std::move(eval)) {}

  GasModel model_;
  ReferenceKind kind_;
  std::function<Primitive(double, double)> eval_;
};

/// Largest |d_t log Y + u d_x log Y|, Y = theta / rho^(gamma - 1), over an
/// n_t x n_x sample grid of [0, t_end] x [0, length], using five-point
/// differences with step 1e-3.
double transport_residual(const GasModel& model, const ReferenceSolution& ref, double t_end,
                          double length, int n_t = 16, int n_x = 32);

/// sum_x dx <U_{tau,x}; relative energy w.r.t. ref(tau, x)> + (E(0) - E(tau)),
/// with x at cell centres and tau = tau_index dt.
double evaluate_R(const YoungMeasureField& U, const ReferenceSolution& ref, const GasModel& model,
                  int tau_index);

enum class Verdict { Pass, Fail, NotApplicable };

std::string to_string(Verdict v);

struct GronwallReport {
  std::vector<double> taus;
  std::vector<double> values;
  /// Smallest L with R(tau) <= (R(0) + eps + floor) exp(L tau).
  double fitted_L = 0.0;
  /// Least-squares slope of log(R + floor) against tau.
  double regression_L = 0.0;
  double max_R = 0.0;
  Verdict verdict = Verdict::Pass;
  std::string message;

  /// `tau R` rows followed by `fitted-L` and `verdict`.
  std::string to_text() const;
};

/// Fails on non-finite values or when the local exponential rate in the
/// second half of the series exceeds 1.25 times that of the first half.
GronwallReport gronwall_check(const std::vector<double>& taus, const std::vector<double>& R,
                              double eps = 0.0, double floor = 1e-300);

/// Runs the scenario, evaluates R on the Dirac field of the trajectory and
/// applies gronwall_check with eps = R(tau_1). Not applicable when R(0)
/// exceeds 1e-12 of the initial energy.
GronwallReport dmv_strong_test(const Scenario& sc, const ReferenceSolution& ref);

struct RefinementReport {
  std::vector<int> nx;
  std::vector<double> max_R;
  std::vector<double> fitted_L;
  /// log2(max_R[k-1] / max_R[k]) for k >= 1.
  std::vector<double> orders;
  bool first_order = true;
  bool monotone = true;
  bool passed = true;
};

RefinementReport refinement_study(const std::function<Scenario(int)>& make_scenario,
                                  const std::function<ReferenceSolution(const Scenario&)>& make_ref,
                                  const std::vector<int>& nx_list);

}  // namespace maxdiss
