#pragma once

// Exact solution of the 1-D Riemann problem for p = (gamma - 1) rho e and the
// entropy production rate of a single discontinuity.

#include "maxdiss/thermo.hpp"

namespace maxdiss {

/// Primitive variables (rho, u, p) in one space dimension.
struct Primitive {
  double rho = 1.0;
  double u = 0.0;
  double p = 1.0;
};

ConsState to_cons(const GasModel& model, const Primitive& w);
Primitive to_primitive(const GasModel& model, const ConsState& s);
StandardState to_standard(const GasModel& model, const Primitive& w);
Primitive to_primitive(const GasModel& model, const StandardState& s);

class VacuumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RiemannSolution {
  double gamma = 1.4;
  Primitive left;
  Primitive right;
  double p_star = 0.0;
  double u_star = 0.0;
  double rho_star_left = 0.0;
  double rho_star_right = 0.0;
  bool left_shock = false;
  bool right_shock = false;
  int iterations = 0;

  /// Self-similar solution at xi = x / t.
  Primitive sample(double xi) const;

  /// Speeds of the 1- and 3-waves: the shock speed, or the head and tail of a
  /// rarefaction.
  double left_head_speed() const;
  double left_tail_speed() const;
  double right_tail_speed() const;
  double right_head_speed() const;
};

/// Star state by a safeguarded Newton iteration on the pressure function,
/// relative tolerance 1e-12. Throws VacuumError when the data generate vacuum.
RiemannSolution exact_riemann(double gamma, const Primitive& left, const Primitive& right);
RiemannSolution exact_riemann(const GasModel& model, const StandardState& left,
                              const StandardState& right);

class RankineHugoniotError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Largest relative Rankine-Hugoniot residual of (left, right, speed).
double rankine_hugoniot_residual(const GasModel& model, const Primitive& left,
                                 const Primitive& right, double speed);

/// speed (rho_L s_L - rho_R s_R) - (rho_L s_L u_L - rho_R s_R u_R); nonnegative
/// for admissible shocks. Requires the jump conditions within 1e-8.
double shock_entropy_production(const GasModel& model, const Primitive& left,
                                const Primitive& right, double speed);
double shock_entropy_production(const GasModel& model, const StandardState& left,
                                const StandardState& right, double speed);

}  // namespace maxdiss
