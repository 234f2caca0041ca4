#pragma once

// Thermodynamics of the polytropic gas p = (gamma - 1) rho e with a general
// entropy law s = S(p / rho^gamma): equation of state, total entropy in
// conservative variables (including the vacuum and cold-threshold
// extensions), temperature, gradients, renormalized entropies and the
// stability verifier.

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxdiss {

/// Momentum or velocity vector with at most three components, stored inline.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A thermodynamic function was evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A user-supplied function violates the stated structural contract.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class LawVariant { PerfectGas, ThirdLaw, ColdPressure, Power };

/// Behaviour of S(Z) as Z approaches the cold threshold from above.
enum class BoundaryLimit { Zero, MinusInfinity };

std::string to_string(LawVariant v);

/// Entropy law S on (p_bar, inf). The concrete function depends on gamma,
/// so evaluation goes through GasModel.
///
/// PerfectGas:   S(Z) = log(Z) / (gamma - 1), p_bar = 0.
/// ThirdLaw:     S(Z) = gamma / (gamma - 1) * log(1 + Z^(1/gamma)), p_bar = 0.
/// ColdPressure: ThirdLaw shifted to Z - p_bar, p_bar > 0.
/// Power:        S(Z) = Z^a. Synthetic; used to exercise the verifier and is
///               not checked at construction.
class EntropyLaw {
 public:
  static EntropyLaw perfect_gas();
  static EntropyLaw third_law();
  static EntropyLaw cold_pressure(double p_bar);
  static EntropyLaw power(double exponent);

  EntropyLaw& with_chi_bound(double bound);

  LawVariant variant() const { return variant_; }
  double p_bar() const { return p_bar_; }
  double exponent() const { return exponent_; }
  std::optional<double> chi_bound() const { return chi_bound_; }
  BoundaryLimit boundary_limit() const;

 private:
  EntropyLaw(LawVariant v, double p_bar, double exponent)
      : variant_(v), p_bar_(p_bar), exponent_(exponent) {}

  LawVariant variant_;
  double p_bar_;
  double exponent_;
  std::optional<double> chi_bound_;
};

/// gamma together with the entropy law. Immutable; every shipped law is
/// checked against the stability hypotheses on construction.
class GasModel {
 public:
  GasModel(double gamma, EntropyLaw law);

  double gamma() const { return gamma_; }
  double cv() const { return 1.0 / (gamma_ - 1.0); }
  const EntropyLaw& law() const { return law_; }
  double p_bar() const { return law_.p_bar(); }

  /// S(Z), S'(Z), S''(Z) for Z > p_bar.
  double S(double z) const;
  double dS(double z) const;
  double d2S(double z) const;

  /// lim_{Z -> p_bar+} S(Z).
  double S_at_threshold() const;

  /// lim_{rho -> 0+} rho S((gamma - 1) E / rho^gamma) for E >= 0.
  double vacuum_entropy(double E) const;

 private:
  double gamma_;
  EntropyLaw law_;
};

/// One point (rho, m, E) of the phase space.
struct ConsState {
  double rho = 0.0;
  Vec m = Vec::Zero(1);
  double E = 0.0;

  int dim() const { return static_cast<int>(m.size()); }
};

/// (rho, theta, u), only meaningful off vacuum.
struct StandardState {
  double rho = 1.0;
  double theta = 1.0;
  Vec u = Vec::Zero(1);
};

ConsState make_cons(double rho, double m, double E);
StandardState make_standard(double rho, double theta, double u);

/// p = (gamma - 1) rho e.
double pressure(const GasModel& model, double rho, double e);

/// 1/2 |m|^2 / rho, with 0 at (0, 0) and +inf for rho = 0, m != 0.
double kinetic_energy(double rho, const Vec& m);

/// E - E_kin - p_bar rho^gamma / (gamma - 1); positive on the interior of the
/// finite-entropy region.
double admissibility_margin(const GasModel& model, const ConsState& s);

/// Slack used for the strict admissibility test: 1e-12 * max(1, E).
double admissibility_slack(const ConsState& s);

bool is_strictly_admissible(const GasModel& model, const ConsState& s);

/// Z = p / rho^gamma = (gamma - 1) e / rho^(gamma - 1).
double entropy_argument(const GasModel& model, double rho, double e);

/// Specific entropy s(rho, e) = S(Z); requires Z > p_bar.
double specific_entropy(const GasModel& model, double rho, double e);

/// Total entropy rho S(...) extended to the whole phase space. Values are
/// extended reals: -inf off the finite-entropy region.
double total_entropy(const GasModel& model, const ConsState& s);

/// theta = rho^(gamma - 1) / ((gamma - 1) S'(Z)).
double temperature(const GasModel& model, double rho, double e);

/// Specific internal energy e(rho, theta), inverting temperature() by
/// bisection on e.
double internal_energy(const GasModel& model, double rho, double theta);

/// c = sqrt(gamma p / rho), the isentropic sound speed of every law here.
double sound_speed(const GasModel& model, const ConsState& s);

struct EntropyGradient {
  double d_rho = 0.0;
  Vec d_m;
  double d_E = 0.0;
};

/// Closed-form partial derivatives of the total entropy in (rho, m, E).
EntropyGradient entropy_gradient(const GasModel& model, const ConsState& s);

/// Analytic Hessian of the total entropy in (rho, m_1..m_N, E).
Eigen::MatrixXd entropy_hessian(const GasModel& model, const ConsState& s);

ConsState to_conservative(const GasModel& model, const StandardState& s);
StandardState to_standard(const GasModel& model, const ConsState& s);

// ---------------------------------------------------------------------------
// Renormalized entropies

/// Increasing concave cut-off chi, bounded above, identity for Z <= 1, used
/// in the rescaled form chi_K(Z) = K chi(Z / K).
class CutoffFunction {
 public:
  /// chi(Z) = Z for Z <= 1, bound - (bound - 1) exp(-(Z - 1)/(bound - 1))
  /// above; bound == 1 gives min(Z, 1).
  static CutoffFunction standard(double bound);

  /// Arbitrary cut-off; sampled for monotonicity, concavity and the bound.
  /// Throws ContractViolation on failure.
  static CutoffFunction custom(std::function<double(double)> chi, double bound);

  double operator()(double z) const;
  double bound() const { return scale_ * bound_; }
  double scale() const { return scale_; }

  friend CutoffFunction chi_K(const CutoffFunction& chi, int K);

 private:
  CutoffFunction(std::function<double(double)> base, double bound, double scale)
      : base_(std::move(base)), bound_(bound), scale_(scale) {}

  std::function<double(double)> base_;
  double bound_;
  double scale_;
};

/// Z -> K chi(Z / K).
CutoffFunction chi_K(const CutoffFunction& chi, int K);

/// rho chi(S(Z)) on the finite-entropy region, 0 at (rho, m) = (0, 0),
/// -inf elsewhere.
double renormalized_entropy(const GasModel& model, const CutoffFunction& chi,
                            const ConsState& s);

// ---------------------------------------------------------------------------
// Hypothesis verification

struct Violation {
  std::string check;
  double z = 0.0;
  double residual = 0.0;
};

struct CheckSummary {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  double at_z = 0.0;
};

struct HypothesisReport {
  bool passed = true;
  std::vector<Violation> violations;
  std::vector<CheckSummary> checks;
  /// Fitted constant C of the growth bound S(Z) <= C (1 + |log Z|).
  double growth_constant = 0.0;

  /// One line per check: `check-name status worst-residual at-Z`.
  std::string to_text() const;
};

/// Log-spaced samples on (p_bar, 1e8].
std::vector<double> default_z_samples(const GasModel& model, int count = 200);

/// Checks S' > 0, (gamma - 1) S' + gamma S'' Z < 0, derivative consistency,
/// the logarithmic growth bound and the threshold limit class of S.
HypothesisReport verify_hypotheses(const GasModel& model,
                                   const std::vector<double>& z_samples);

struct HessianH {
  Eigen::Matrix2d H;
  double max_eigenvalue = 0.0;
  bool concave = false;
};

/// Hessian of h(rho, p) = rho S(p / rho^gamma) in (rho, p).
HessianH hessian_h(const GasModel& model, double rho, double p);

}  // namespace maxdiss
