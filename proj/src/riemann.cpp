#include "maxdiss/riemann.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace maxdiss {

ConsState to_cons(const GasModel& model, const Primitive& w) {
  return make_cons(w.rho, w.rho * w.u, 0.5 * w.rho * w.u * w.u + w.p / (model.gamma() - 1.0));
}

Primitive to_primitive(const GasModel& model, const ConsState& s) {
  if (!(s.rho > 0.0)) throw DomainError("primitive variables are undefined at vacuum");
  Primitive w;
  w.rho = s.rho;
  w.u = s.m(0) / s.rho;
  w.p = (model.gamma() - 1.0) * (s.E - kinetic_energy(s.rho, s.m));
  return w;
}

StandardState to_standard(const GasModel& model, const Primitive& w) {
  const double e = w.p / ((model.gamma() - 1.0) * w.rho);
  return make_standard(w.rho, temperature(model, w.rho, e), w.u);
}

Primitive to_primitive(const GasModel& model, const StandardState& s) {
  const double e = internal_energy(model, s.rho, s.theta);
  return {s.rho, s.u(0), pressure(model, s.rho, e)};
}

namespace {

struct WaveFunction {
  double value;
  double derivative;
};

// Change of velocity across the wave connecting side state w to pressure p.
WaveFunction wave_function(double g, const Primitive& w, double p) {
  const double c = std::sqrt(g * w.p / w.rho);
  if (p > w.p) {
    const double A = 2.0 / ((g + 1.0) * w.rho);
    const double B = (g - 1.0) / (g + 1.0) * w.p;
    const double q = std::sqrt(A / (p + B));
    return {(p - w.p) * q, q * (1.0 - 0.5 * (p - w.p) / (p + B))};
  }
  const double z = (g - 1.0) / (2.0 * g);
  const double r = p / w.p;
  return {2.0 * c / (g - 1.0) * (std::pow(r, z) - 1.0), std::pow(r, -(g + 1.0) / (2.0 * g)) / (w.rho * c)};
}

double sound(double g, const Primitive& w) { return std::sqrt(g * w.p / w.rho); }

}  // namespace

RiemannSolution exact_riemann(double g, const Primitive& left, const Primitive& right) {
  if (!(g > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  for (const Primitive* w : {&left, &right}) {
    if (!(w->rho > 0.0) || !(w->p > 0.0)) {
      throw DomainError("Riemann data need positive density and pressure");
    }
  }
  const double cl = sound(g, left);
  const double cr = sound(g, right);
  const double du = right.u - left.u;
  if (2.0 * (cl + cr) / (g - 1.0) <= du) throw VacuumError("Riemann data generate vacuum");

  RiemannSolution sol;
  sol.gamma = g;
  sol.left = left;
  sol.right = right;

  auto f = [&](double p) {
    const WaveFunction a = wave_function(g, left, p);
    const WaveFunction b = wave_function(g, right, p);
    return std::make_pair(a.value + b.value + du, a.derivative + b.derivative);
  };

  // Two-rarefaction estimate as the starting guess; the pressure function is
  // increasing and concave, so Newton from the left is monotone.
  const double z = (g - 1.0) / (2.0 * g);
  const double num = cl + cr - 0.5 * (g - 1.0) * du;
  const double den = cl / std::pow(left.p, z) + cr / std::pow(right.p, z);
  double guess = std::pow(std::max(num / den, 1e-300), 1.0 / z);
  double hi = std::max({left.p, right.p, guess});
  while (f(hi).first < 0.0) hi *= 2.0;
  double lo = std::min({left.p, right.p, guess});
  while (lo > 1e-300 && f(lo).first > 0.0) lo *= 0.5;
  guess = std::clamp(guess, lo, hi);

  std::uintmax_t iters = 200;
  sol.p_star = boost::math::tools::newton_raphson_iterate(f, guess, lo, hi, 44, iters);
  sol.iterations = static_cast<int>(iters);
  const WaveFunction fl = wave_function(g, left, sol.p_star);
  const WaveFunction fr = wave_function(g, right, sol.p_star);
  sol.u_star = 0.5 * (left.u + right.u) + 0.5 * (fr.value - fl.value);

  const double gm = (g - 1.0) / (g + 1.0);
  auto star_density = [&](const Primitive& w) {
    const double r = sol.p_star / w.p;
    if (sol.p_star > w.p) return w.rho * (r + gm) / (gm * r + 1.0);
    return w.rho * std::pow(r, 1.0 / g);
  };
  sol.left_shock = sol.p_star > left.p;
  sol.right_shock = sol.p_star > right.p;
  sol.rho_star_left = star_density(left);
  sol.rho_star_right = star_density(right);
  return sol;
}

RiemannSolution exact_riemann(const GasModel& model, const StandardState& left,
                              const StandardState& right) {
  if (model.law().variant() != LawVariant::PerfectGas) {
    throw std::invalid_argument("exact_riemann takes standard variables for the perfect gas only");
  }
  return exact_riemann(model.gamma(), to_primitive(model, left), to_primitive(model, right));
}

double RiemannSolution::left_head_speed() const {
  const double g = gamma;
  const double cl = std::sqrt(g * left.p / left.rho);
  if (left_shock) {
    return left.u - cl * std::sqrt((g + 1.0) / (2.0 * g) * p_star / left.p + (g - 1.0) / (2.0 * g));
  }
  return left.u - cl;
}

double RiemannSolution::left_tail_speed() const {
  if (left_shock) return left_head_speed();
  return u_star - std::sqrt(gamma * p_star / rho_star_left);
}

double RiemannSolution::right_head_speed() const {
  const double g = gamma;
  const double cr = std::sqrt(g * right.p / right.rho);
  if (right_shock) {
    return right.u + cr * std::sqrt((g + 1.0) / (2.0 * g) * p_star / right.p + (g - 1.0) / (2.0 * g));
  }
  return right.u + cr;
}

double RiemannSolution::right_tail_speed() const {
  if (right_shock) return right_head_speed();
  return u_star + std::sqrt(gamma * p_star / rho_star_right);
}

Primitive RiemannSolution::sample(double xi) const {
  const double g = gamma;
  if (xi <= u_star) {
    if (xi <= left_head_speed()) return left;
    if (xi >= left_tail_speed()) return {rho_star_left, u_star, p_star};
    // Inside the left fan.
    const double cl = std::sqrt(g * left.p / left.rho);
    const double c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (left.u - xi));
    const double u = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * left.u + xi);
    const double rho = left.rho * std::pow(c / cl, 2.0 / (g - 1.0));
    const double p = left.p * std::pow(c / cl, 2.0 * g / (g - 1.0));
    return {rho, u, p};
  }
  if (xi >= right_head_speed()) return right;
  if (xi <= right_tail_speed()) return {rho_star_right, u_star, p_star};
  const double cr = std::sqrt(g * right.p / right.rho);
  const double c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (right.u - xi));
  const double u = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * right.u + xi);
  const double rho = right.rho * std::pow(c / cr, 2.0 / (g - 1.0));
  const double p = right.p * std::pow(c / cr, 2.0 * g / (g - 1.0));
  return {rho, u, p};
}

double rankine_hugoniot_residual(const GasModel& model, const Primitive& left,
                                 const Primitive& right, double speed) {
  const double g = model.gamma();
  auto state = [&](const Primitive& w) {
    return std::array<double, 3>{w.rho, w.rho * w.u, 0.5 * w.rho * w.u * w.u + w.p / (g - 1.0)};
  };
  auto flux = [&](const Primitive& w) {
    const double E = 0.5 * w.rho * w.u * w.u + w.p / (g - 1.0);
    return std::array<double, 3>{w.rho * w.u, w.rho * w.u * w.u + w.p, (E + w.p) * w.u};
  };
  const auto UL = state(left), UR = state(right), FL = flux(left), FR = flux(right);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double scale = std::max({1.0, std::abs(FL[k]), std::abs(FR[k]), std::abs(speed * UL[k]),
                                   std::abs(speed * UR[k])});
    worst = std::max(worst, std::abs(speed * (UR[k] - UL[k]) - (FR[k] - FL[k])) / scale);
  }
  return worst;
}

double shock_entropy_production(const GasModel& model, const Primitive& left,
                                const Primitive& right, double speed) {
  const double res = rankine_hugoniot_residual(model, left, right, speed);
  if (!(res <= 1e-8)) {
    throw RankineHugoniotError("jump violates the Rankine-Hugoniot conditions (residual " +
                               std::to_string(res) + ")");
  }
  const double g = model.gamma();
  const double sl = specific_entropy(model, left.rho, left.p / ((g - 1.0) * left.rho));
  const double sr = specific_entropy(model, right.rho, right.p / ((g - 1.0) * right.rho));
  return speed * (left.rho * sl - right.rho * sr) -
         (left.rho * sl * left.u - right.rho * sr * right.u);
}

double shock_entropy_production(const GasModel& model, const StandardState& left,
                                const StandardState& right, double speed) {
  return shock_entropy_production(model, to_primitive(model, left), to_primitive(model, right),
                                  speed);
}

}  // namespace maxdiss
