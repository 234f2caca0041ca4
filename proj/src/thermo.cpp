#include "maxdiss/thermo.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maxdiss {

std::string to_string(LawVariant v) {
  switch (v) {
    case LawVariant::PerfectGas: return "perfect";
    case LawVariant::ThirdLaw: return "third-law";
    case LawVariant::ColdPressure: return "cold-pressure";
    case LawVariant::Power: return "power";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// EntropyLaw

EntropyLaw EntropyLaw::perfect_gas() { return {LawVariant::PerfectGas, 0.0, 0.0}; }

EntropyLaw EntropyLaw::third_law() { return {LawVariant::ThirdLaw, 0.0, 0.0}; }

EntropyLaw EntropyLaw::cold_pressure(double p_bar) {
  if (!(p_bar > 0.0) || !std::isfinite(p_bar)) {
    throw std::invalid_argument("cold-pressure law requires p_bar > 0");
  }
  return {LawVariant::ColdPressure, p_bar, 0.0};
}

EntropyLaw EntropyLaw::power(double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("power law requires a positive exponent");
  }
  return {LawVariant::Power, 0.0, exponent};
}

EntropyLaw& EntropyLaw::with_chi_bound(double bound) {
  if (!(bound >= 1.0)) throw std::invalid_argument("chi_bound must be >= 1");
  chi_bound_ = bound;
  return *this;
}

BoundaryLimit EntropyLaw::boundary_limit() const {
  return variant_ == LawVariant::PerfectGas ? BoundaryLimit::MinusInfinity
                                            : BoundaryLimit::Zero;
}

// ---------------------------------------------------------------------------
// GasModel

GasModel::GasModel(double gamma, EntropyLaw law) : gamma_(gamma), law_(std::move(law)) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be a finite number > 1");
  }
  if (law_.variant() != LawVariant::Power) {
    const HypothesisReport report = verify_hypotheses(*this, default_z_samples(*this));
    if (!report.passed) {
      const Violation& v = report.violations.front();
      std::ostringstream msg;
      msg << "entropy law '" << to_string(law_.variant()) << "' fails check '" << v.check
          << "' at Z=" << v.z;
      throw ContractViolation(msg.str());
    }
  }
}

double GasModel::S(double z) const {
  const double g = gamma_;
  switch (law_.variant()) {
    case LawVariant::PerfectGas:
      return std::log(z) / (g - 1.0);
    case LawVariant::ThirdLaw:
    case LawVariant::ColdPressure: {
      const double y = z - law_.p_bar();
      return g / (g - 1.0) * std::log1p(std::pow(y, 1.0 / g));
    }
    case LawVariant::Power:
      return std::pow(z, law_.exponent());
  }
  return 0.0;
}

double GasModel::dS(double z) const {
  const double g = gamma_;
  switch (law_.variant()) {
    case LawVariant::PerfectGas:
      return 1.0 / ((g - 1.0) * z);
    case LawVariant::ThirdLaw:
    case LawVariant::ColdPressure: {
      const double y = z - law_.p_bar();
      const double a = 1.0 / g;
      const double w = std::pow(y, a);
      return w / (y * (1.0 + w)) / (g - 1.0);
    }
    case LawVariant::Power: {
      const double a = law_.exponent();
      return a * std::pow(z, a - 1.0);
    }
  }
  return 0.0;
}

double GasModel::d2S(double z) const {
  const double g = gamma_;
  switch (law_.variant()) {
    case LawVariant::PerfectGas:
      return -1.0 / ((g - 1.0) * z * z);
    case LawVariant::ThirdLaw:
    case LawVariant::ColdPressure: {
      const double y = z - law_.p_bar();
      const double a = 1.0 / g;
      const double w = std::pow(y, a);
      const double q = 1.0 + w;
      return w / (y * y) * ((a - 1.0) - w) / (q * q) / (g - 1.0);
    }
    case LawVariant::Power: {
      const double a = law_.exponent();
      return a * (a - 1.0) * std::pow(z, a - 2.0);
    }
  }
  return 0.0;
}

double GasModel::S_at_threshold() const {
  return law_.boundary_limit() == BoundaryLimit::MinusInfinity ? -kInf : 0.0;
}

double GasModel::vacuum_entropy(double E) const {
  if (law_.variant() != LawVariant::Power) return 0.0;
  // rho * ((gamma-1) E)^a * rho^(-gamma a)
  const double a = law_.exponent();
  const double k = a * gamma_;
  if (k < 1.0) return 0.0;
  if (k == 1.0) return std::pow((gamma_ - 1.0) * E, a);
  return kInf;
}

// ---------------------------------------------------------------------------
// States

ConsState make_cons(double rho, double m, double E) {
  ConsState s;
  s.rho = rho;
  s.m = Vec::Constant(1, m);
  s.E = E;
  return s;
}

StandardState make_standard(double rho, double theta, double u) {
  StandardState s;
  s.rho = rho;
  s.theta = theta;
  s.u = Vec::Constant(1, u);
  return s;
}

double pressure(const GasModel& model, double rho, double e) {
  if (!(rho > 0.0) || !(e > 0.0)) throw DomainError("pressure requires rho > 0 and e > 0");
  return (model.gamma() - 1.0) * rho * e;
}

double kinetic_energy(double rho, const Vec& m) {
  const double m2 = m.squaredNorm();
  if (rho > 0.0) return 0.5 * m2 / rho;
  return m2 == 0.0 ? 0.0 : kInf;
}

double admissibility_margin(const GasModel& model, const ConsState& s) {
  const double g = model.gamma();
  const double cold = s.rho > 0.0 ? model.p_bar() / (g - 1.0) * std::pow(s.rho, g) : 0.0;
  return s.E - kinetic_energy(s.rho, s.m) - cold;
}

double admissibility_slack(const ConsState& s) { return 1e-12 * std::max(1.0, std::abs(s.E)); }

bool is_strictly_admissible(const GasModel& model, const ConsState& s) {
  return s.rho > 0.0 && admissibility_margin(model, s) > admissibility_slack(s);
}

double entropy_argument(const GasModel& model, double rho, double e) {
  const double g = model.gamma();
  return (g - 1.0) * e / std::pow(rho, g - 1.0);
}

double specific_entropy(const GasModel& model, double rho, double e) {
  if (!(rho > 0.0)) throw DomainError("specific entropy requires rho > 0");
  const double z = entropy_argument(model, rho, e);
  if (!(z > model.p_bar())) throw DomainError("specific entropy undefined at or below p_bar");
  return model.S(z);
}

double total_entropy(const GasModel& model, const ConsState& s) {
  if (s.rho < 0.0 || s.E < 0.0) return -kInf;
  if (s.rho == 0.0) {
    if (s.m.squaredNorm() != 0.0) return -kInf;
    return model.vacuum_entropy(s.E);
  }
  const double margin = admissibility_margin(model, s);
  const double slack = admissibility_slack(s);
  if (margin > slack) {
    const double g = model.gamma();
    const double z = (g - 1.0) * (s.E - kinetic_energy(s.rho, s.m)) / std::pow(s.rho, g);
    if (z > model.p_bar()) return s.rho * model.S(z);
    return s.rho * model.S_at_threshold();
  }
  if (margin >= -slack) return s.rho * model.S_at_threshold();
  return -kInf;
}

double temperature(const GasModel& model, double rho, double e) {
  if (!(rho > 0.0) || !(e > 0.0)) throw DomainError("temperature requires rho > 0 and e > 0");
  const double g = model.gamma();
  const double z = entropy_argument(model, rho, e);
  if (!(z > model.p_bar())) throw DomainError("temperature undefined at or below the cold threshold");
  return std::pow(rho, g - 1.0) / ((g - 1.0) * model.dS(z));
}

double internal_energy(const GasModel& model, double rho, double theta) {
  if (!(rho > 0.0) || !(theta > 0.0)) {
    throw DomainError("internal energy requires rho > 0 and theta > 0");
  }
  const double g = model.gamma();
  const double e_cold = model.p_bar() * std::pow(rho, g - 1.0) / (g - 1.0);
  double lo = std::max(1e-14, e_cold * (1.0 + 1e-14) + 1e-300);
  double hi = 1e14;
  if (hi <= lo) throw DomainError("internal energy bracket is empty");
  auto f = [&](double e) { return temperature(model, rho, e) - theta; };
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo > 0.0 || f_hi < 0.0) throw DomainError("temperature outside the invertible range");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  // 50 bits is well inside the required relative tolerance of 1e-12.
  const auto [a, b] =
      boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(50));
  return 0.5 * (a + b);
}

double sound_speed(const GasModel& model, const ConsState& s) {
  const double p = (model.gamma() - 1.0) * (s.E - kinetic_energy(s.rho, s.m));
  return std::sqrt(model.gamma() * std::max(p, 0.0) / s.rho);
}

namespace {

void require_interior(const GasModel& model, const ConsState& s, const char* what) {
  if (!(s.rho > 0.0)) throw DomainError(std::string(what) + " is undefined at vacuum");
  if (!is_strictly_admissible(model, s)) {
    throw DomainError(std::string(what) + " requires a strictly admissible state");
  }
}

Eigen::Matrix2d h_hessian(const GasModel& model, double rho, double z) {
  const double g = model.gamma();
  const double s1 = model.dS(z);
  const double s2 = model.d2S(z);
  const double rg = std::pow(rho, g);
  const double p = z * rg;
  Eigen::Matrix2d H;
  H(0, 0) = -g * s1 * p / (rg * rho) + g * g * s1 * p / (rg * rho) +
            g * g * s2 * p * p / (rg * rg * rho);
  H(1, 1) = s2 * rho / (rg * rg);
  H(0, 1) = (1.0 - g) / rg * s1 - g * s2 * p / (rg * rg);
  H(1, 0) = H(0, 1);
  return H;
}

}  // namespace

EntropyGradient entropy_gradient(const GasModel& model, const ConsState& s) {
  require_interior(model, s, "entropy gradient");
  const double ekin = kinetic_energy(s.rho, s.m);
  const double e = (s.E - ekin) / s.rho;
  const double theta = temperature(model, s.rho, e);
  const double sp = specific_entropy(model, s.rho, e);
  const double p = (model.gamma() - 1.0) * s.rho * e;
  EntropyGradient grad;
  grad.d_rho = (theta * sp - p / s.rho - e + 0.5 * s.m.squaredNorm() / (s.rho * s.rho)) / theta;
  grad.d_m = -s.m / (s.rho * theta);
  grad.d_E = 1.0 / theta;
  return grad;
}

Eigen::MatrixXd entropy_hessian(const GasModel& model, const ConsState& s) {
  require_interior(model, s, "entropy Hessian");
  const int n = s.dim();
  const double g = model.gamma();
  const double rho = s.rho;
  const double m2 = s.m.squaredNorm();
  const double p = (g - 1.0) * (s.E - 0.5 * m2 / rho);
  const double z = p / std::pow(rho, g);

  // Total entropy = h(rho, P(rho, m, E)) with P the pressure.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, n + 2);
  J(0, 0) = 1.0;
  J(1, 0) = 0.5 * (g - 1.0) * m2 / (rho * rho);
  for (int k = 0; k < n; ++k) J(1, 1 + k) = -(g - 1.0) * s.m(k) / rho;
  J(1, n + 1) = g - 1.0;

  Eigen::MatrixXd P2 = Eigen::MatrixXd::Zero(n + 2, n + 2);
  P2(0, 0) = -(g - 1.0) * m2 / (rho * rho * rho);
  for (int k = 0; k < n; ++k) {
    P2(0, 1 + k) = (g - 1.0) * s.m(k) / (rho * rho);
    P2(1 + k, 0) = P2(0, 1 + k);
    P2(1 + k, 1 + k) = -(g - 1.0) / rho;
  }
  const double h_p = model.dS(z) * std::pow(rho, 1.0 - g);
  return J.transpose() * h_hessian(model, rho, z) * J + h_p * P2;
}

ConsState to_conservative(const GasModel& model, const StandardState& s) {
  const double e = internal_energy(model, s.rho, s.theta);
  ConsState out;
  out.rho = s.rho;
  out.m = s.rho * s.u;
  out.E = 0.5 * s.rho * s.u.squaredNorm() + s.rho * e;
  return out;
}

StandardState to_standard(const GasModel& model, const ConsState& s) {
  if (!(s.rho > 0.0)) throw DomainError("standard variables are undefined at vacuum");
  if (!is_strictly_admissible(model, s)) {
    throw DomainError("standard variables require a strictly admissible state");
  }
  const double e = (s.E - kinetic_energy(s.rho, s.m)) / s.rho;
  StandardState out;
  out.rho = s.rho;
  out.theta = temperature(model, s.rho, e);
  out.u = s.m / s.rho;
  return out;
}

// ---------------------------------------------------------------------------
// Cut-off functions

CutoffFunction CutoffFunction::standard(double bound) {
  if (!(bound >= 1.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("cut-off bound must be finite and >= 1");
  }
  auto chi = [bound](double z) {
    if (z <= 1.0) return z;
    if (bound == 1.0) return 1.0;
    const double w = bound - 1.0;
    return bound - w * std::exp(-(z - 1.0) / w);
  };
  return {chi, bound, 1.0};
}

CutoffFunction CutoffFunction::custom(std::function<double(double)> chi, double bound) {
  constexpr int n = 2001;
  const double lo = -10.0;
  const double hi = 10.0 + 10.0 * std::abs(bound);
  std::vector<double> v(n);
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = chi(lo + h * i);
  for (int i = 0; i < n; ++i) {
    const double z = lo + h * i;
    if (!(v[i] <= bound + 1e-12)) {
      throw ContractViolation("cut-off exceeds its bound at z=" + std::to_string(z));
    }
    if (i + 1 < n && v[i + 1] < v[i] - 1e-12) {
      throw ContractViolation("cut-off is not nondecreasing at z=" + std::to_string(z));
    }
    if (i > 0 && i + 1 < n) {
      const double second = v[i + 1] - 2.0 * v[i] + v[i - 1];
      if (second > 1e-9 * std::max(1.0, std::abs(v[i]))) {
        throw ContractViolation("cut-off is not concave at z=" + std::to_string(z));
      }
    }
  }
  return {std::move(chi), bound, 1.0};
}

double CutoffFunction::operator()(double z) const { return scale_ * base_(z / scale_); }

CutoffFunction chi_K(const CutoffFunction& chi, int K) {
  if (K < 1) throw std::invalid_argument("chi_K requires K >= 1");
  return {chi.base_, chi.bound_, chi.scale_ * K};
}

double renormalized_entropy(const GasModel& model, const CutoffFunction& chi, const ConsState& s) {
  if (s.rho < 0.0 || s.E < 0.0) return -kInf;
  if (s.rho == 0.0) return s.m.squaredNorm() == 0.0 ? 0.0 : -kInf;
  const double margin = admissibility_margin(model, s);
  const double slack = admissibility_slack(s);
  if (margin > slack) {
    const double g = model.gamma();
    const double z = (g - 1.0) * (s.E - kinetic_energy(s.rho, s.m)) / std::pow(s.rho, g);
    if (z > model.p_bar()) return s.rho * chi(model.S(z));
  }
  if (margin >= -slack) return s.rho * chi(model.S_at_threshold());
  return -kInf;
}

// ---------------------------------------------------------------------------
// Hypotheses

std::vector<double> default_z_samples(const GasModel& model, int count) {
  const double pb = model.p_bar();
  const double lo = 1e-6 * std::max(1.0, pb);
  const double hi = 1e8;
  std::vector<double> z(count);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    z[i] = pb + lo * std::pow(hi / lo, t);
  }
  return z;
}

namespace {

struct Tracker {
  CheckSummary summary;
  bool larger_is_worse = true;
  bool seen = false;

  void observe(double z, double r) {
    const bool worse = !seen || (larger_is_worse ? r > summary.worst_residual
                                                 : r < summary.worst_residual);
    if (worse || std::isnan(r)) {
      summary.worst_residual = r;
      summary.at_z = z;
    }
    seen = true;
  }
};

}  // namespace

HypothesisReport verify_hypotheses(const GasModel& model, const std::vector<double>& z_samples) {
  const double pb = model.p_bar();
  const double g = model.gamma();
  for (double z : z_samples) {
    if (!(z > pb)) throw std::invalid_argument("hypothesis samples must exceed p_bar");
  }

  HypothesisReport report;
  auto fail = [&](Tracker& t, double z, double r) {
    t.summary.passed = false;
    report.violations.push_back({t.summary.name, z, r});
  };

  Tracker positivity{{"positivity", true, 0.0, 0.0}, false};
  Tracker stability{{"stability", true, 0.0, 0.0}, true};
  Tracker derivatives{{"derivatives", true, 0.0, 0.0}, true};
  for (double z : z_samples) {
    const double s1 = model.dS(z);
    const double s2 = model.d2S(z);
    positivity.observe(z, s1);
    if (!(s1 > 0.0) || !std::isfinite(s1)) fail(positivity, z, s1);

    const double combo = (g - 1.0) * s1 + g * s2 * z;
    stability.observe(z, combo);
    if (!(combo < 0.0)) fail(stability, z, combo);

    const double h = std::min(1e-6 * std::max(1.0, std::abs(z)), 1e-3 * (z - pb));
    const double fd1 = (model.S(z + h) - model.S(z - h)) / (2.0 * h);
    const double fd2 = (model.dS(z + h) - model.dS(z - h)) / (2.0 * h);
    const double err = std::max(std::abs(fd1 - s1) / std::max(std::abs(s1), 1e-300),
                                std::abs(fd2 - s2) / std::max(std::abs(s2), 1e-300));
    derivatives.observe(z, err);
    if (!(err <= 1e-4)) fail(derivatives, z, err);
  }

  // Growth bound: fit C on a log grid, then require the ratio
  // S / (1 + |log Z|) to have levelled off over the top two decades.
  Tracker growth{{"growth", true, 0.0, 0.0}, true};
  {
    const auto grid = default_z_samples(model, 400);
    double c = -kInf;
    for (double z : grid) c = std::max(c, model.S(z) / (1.0 + std::abs(std::log(z))));
    for (double z : z_samples) c = std::max(c, model.S(z) / (1.0 + std::abs(std::log(z))));
    report.growth_constant = c;
    for (double z : z_samples) {
      const double excess = model.S(z) - c * (1.0 + std::abs(std::log(z)));
      if (!(excess <= 1e-12 * std::max(1.0, std::abs(model.S(z))))) fail(growth, z, excess);
    }
    auto ratio = [&](double z) { return model.S(z) / (1.0 + std::abs(std::log(z))); };
    const double top = pb + 1e8;
    const double mid = pb + 1e6;
    const double trend = ratio(mid) > 0.0 ? ratio(top) / ratio(mid) : 1.0;
    growth.observe(top, trend);
    if (!(trend <= 1.1) || !std::isfinite(c)) fail(growth, top, trend);
  }

  // Threshold behaviour along Z = p_bar + 10^-k.
  Tracker limit{{"boundary-limit", true, 0.0, 0.0}, true};
  Tracker slope{{"threshold-slope", true, 0.0, 0.0}, false};
  {
    const double scale = std::max(1.0, pb);
    std::vector<double> s, ds;
    std::vector<double> zs;
    for (int k = 2; k <= 12; ++k) {
      const double z = pb + std::pow(10.0, -k) * scale;
      zs.push_back(z);
      s.push_back(model.S(z));
      ds.push_back(model.dS(z));
    }
    const double last = s.back();
    if (model.law().boundary_limit() == BoundaryLimit::Zero) {
      const double r = std::abs(last);
      limit.observe(zs.back(), r);
      if (!(r <= 1e-3 * std::max(1.0, std::abs(s.front())))) fail(limit, zs.back(), r);
    } else {
      const double first_drop = s[0] - s[1];
      const double last_drop = s[s.size() - 2] - s.back();
      limit.observe(zs.back(), last);
      bool ok = first_drop > 0.0 && last_drop >= 0.5 * first_drop;
      for (std::size_t i = 1; i < s.size(); ++i) ok = ok && s[i] < s[i - 1];
      if (!ok) fail(limit, zs.back(), last);
    }
    const double growth_ratio = ds.back() / ds.front();
    slope.observe(zs.back(), growth_ratio);
    bool ok = growth_ratio > 2.0;
    for (std::size_t i = 1; i < ds.size(); ++i) ok = ok && ds[i] > ds[i - 1];
    if (!ok) fail(slope, zs.back(), growth_ratio);
  }

  report.checks = {positivity.summary, stability.summary, derivatives.summary,
                   growth.summary,     limit.summary,     slope.summary};
  report.passed = report.violations.empty();
  return report;
}

std::string HypothesisReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& c : checks) {
    out << c.name << ' ' << (c.passed ? "pass" : "fail") << ' ' << c.worst_residual << ' '
        << c.at_z << '\n';
  }
  out << "growth-constant " << growth_constant << '\n';
  out << "verdict " << (passed ? "pass" : "fail") << '\n';
  return out.str();
}

HessianH hessian_h(const GasModel& model, double rho, double p) {
  if (!(rho > 0.0)) throw DomainError("hessian_h requires rho > 0");
  const double z = p / std::pow(rho, model.gamma());
  if (!(z > model.p_bar())) throw DomainError("hessian_h undefined at or below the cold threshold");
  HessianH out;
  out.H = h_hessian(model, rho, z);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(out.H, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  out.max_eigenvalue = ev.maxCoeff();
  const double norm = ev.cwiseAbs().maxCoeff();
  out.concave = out.max_eigenvalue <= 1e-8 * norm;
  return out;
}

}  // namespace maxdiss
