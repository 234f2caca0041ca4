#include "maxdiss/weakstrong.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace maxdiss {

std::string to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::Constant: return "constant";
    case ReferenceKind::Translate: return "translate";
    case ReferenceKind::ResolvedNumeric: return "resolved-numeric";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

ReferenceSolution ReferenceSolution::constant(const GasModel& model, const Primitive& w) {
  if (!(w.rho > 0.0) || !(w.p > 0.0)) throw DomainError("reference must be strictly admissible");
  return {model, ReferenceKind::Constant, [w](double, double) { return w; }};
}

ReferenceSolution ReferenceSolution::translate(const GasModel& model,
                                               std::function<double(double)> rho0, double u,
                                               double p, double length) {
  if (!(p > 0.0)) throw DomainError("reference pressure must be positive");
  return {model, ReferenceKind::Translate, [rho0 = std::move(rho0), u, p, length](double t, double x) {
            double y = std::fmod(x - u * t, length);
            if (y < 0.0) y += length;
            return Primitive{rho0(y), u, p};
          }};
}

ReferenceSolution ReferenceSolution::density_wave(const Scenario& sc) {
  if (sc.ic.type != IcType::DensityWave && sc.ic.type != IcType::Constant) {
    throw std::invalid_argument("density_wave reference needs a density-wave or constant scenario");
  }
  const Primitive b = sc.ic.base;
  const double A = sc.ic.type == IcType::Constant ? 0.0 : sc.ic.amplitude;
  const double k = 2.0 * std::numbers::pi * sc.ic.wavenumber / sc.length;
  return translate(
      sc.model, [b, A, k](double y) { return b.rho * (1.0 + A * std::sin(k * y)); }, b.u, b.p,
      sc.length);
}

ReferenceSolution ReferenceSolution::resolved_numeric(const GasModel& model, const Trajectory& fine) {
  auto traj = std::make_shared<Trajectory>(fine);
  auto gm = std::make_shared<GasModel>(model);
  return {model, ReferenceKind::ResolvedNumeric, [traj, gm](double t, double x) {
            const SpaceTimeGrid& g = traj->grid;
            const double length = g.n_x * g.dx;
            double y = std::fmod(x, length);
            if (y < 0.0) y += length;
            const double fx = y / g.dx - 0.5;
            const int i0 = static_cast<int>(std::floor(fx));
            const double ax = fx - i0;
            const double ft = std::clamp(t / g.dt, 0.0, static_cast<double>(g.n_t));
            const int k0 = std::min(static_cast<int>(std::floor(ft)), g.n_t - 1);
            const double at = ft - k0;
            auto at_cell = [&](int k, int i) {
              const int n = g.n_x;
              return to_primitive(*gm, traj->states[k][((i % n) + n) % n]);
            };
            auto mix = [](const Primitive& a, const Primitive& b, double w) {
              return Primitive{(1 - w) * a.rho + w * b.rho, (1 - w) * a.u + w * b.u,
                               (1 - w) * a.p + w * b.p};
            };
            const Primitive lo = mix(at_cell(k0, i0), at_cell(k0, i0 + 1), ax);
            const Primitive hi = mix(at_cell(k0 + 1, i0), at_cell(k0 + 1, i0 + 1), ax);
            return mix(lo, hi, at);
          }};
}

StandardState ReferenceSolution::operator()(double t, double x) const {
  return to_standard(model_, eval_(t, x));
}

double transport_residual(const GasModel& model, const ReferenceSolution& ref, double t_end,
                          double length, int n_t, int n_x) {
  const double g = model.gamma();
  const double h = 1e-3;
  auto logY = [&](double t, double x) {
    const StandardState s = ref(t, x);
    return std::log(s.theta / std::pow(s.rho, g - 1.0));
  };
  auto d5 = [h](const std::function<double(double)>& f, double a) {
    return (-f(a + 2 * h) + 8 * f(a + h) - 8 * f(a - h) + f(a - 2 * h)) / (12 * h);
  };
  double worst = 0.0;
  for (int k = 0; k <= n_t; ++k) {
    // Keep the time stencil inside [0, t_end].
    const double t = 2 * h + (std::max(t_end - 4 * h, 0.0)) * k / std::max(n_t, 1);
    for (int i = 0; i < n_x; ++i) {
      const double x = length * (i + 0.5) / n_x;
      const double dt = d5([&](double s) { return logY(s, x); }, t);
      const double dx = d5([&](double y) { return logY(t, y); }, x);
      worst = std::max(worst, std::abs(dt + ref(t, x).u(0) * dx));
    }
  }
  return worst;
}

double evaluate_R(const YoungMeasureField& U, const ReferenceSolution& ref, const GasModel& model,
                  int tau_index) {
  const SpaceTimeGrid& g = U.grid();
  const double tau = tau_index * g.dt;
  double rel = 0.0;
  double e0 = 0.0;
  double et = 0.0;
  const Observable energy = [](const ConsState& s) { return s.E; };
  for (int x = 0; x < g.n_x; ++x) {
    const StandardState r = ref(tau, (x + 0.5) * g.dx);
    if (!(r.rho > 0.0) || !(r.theta > 0.0)) throw DomainError("reference is not strictly admissible");
    rel += g.dx * expect(U.cell(tau_index, x), [&](const ConsState& s) {
             return relative_energy_conservative(model, s, r);
           });
    e0 += g.dx * expect(U, 0, x, energy);
    et += g.dx * expect(U, tau_index, x, energy);
  }
  return rel + (e0 - et);
}

GronwallReport gronwall_check(const std::vector<double>& taus, const std::vector<double>& R,
                              double eps, double floor) {
  if (taus.size() != R.size() || R.empty()) {
    throw std::invalid_argument("gronwall_check needs matching, nonempty series");
  }
  GronwallReport rep;
  rep.taus = taus;
  rep.values = R;
  for (double v : R) {
    if (!std::isfinite(v)) {
      rep.verdict = Verdict::Fail;
      rep.message = "non-finite relative energy";
      rep.fitted_L = kInf;
      rep.max_R = kInf;
      return rep;
    }
    rep.max_R = std::max(rep.max_R, v);
  }
  const double base = std::max(R.front(), 0.0) + eps + floor;
  for (std::size_t k = 1; k < R.size(); ++k) {
    if (taus[k] > taus.front()) {
      const double L = std::log((std::max(R[k], 0.0) + floor) / base) / (taus[k] - taus.front());
      rep.fitted_L = std::max(rep.fitted_L, L);
    }
  }

  std::vector<double> y(R.size());
  for (std::size_t k = 0; k < R.size(); ++k) y[k] = std::log(std::max(R[k], 0.0) + floor);
  if (R.size() >= 2) {
    double mt = 0, my = 0;
    for (std::size_t k = 0; k < R.size(); ++k) {
      mt += taus[k];
      my += y[k];
    }
    mt /= R.size();
    my /= R.size();
    double num = 0, den = 0;
    for (std::size_t k = 0; k < R.size(); ++k) {
      num += (taus[k] - mt) * (y[k] - my);
      den += (taus[k] - mt) * (taus[k] - mt);
    }
    rep.regression_L = den > 0 ? num / den : 0.0;
  }

  if (R.size() >= 5) {
    std::vector<double> rate;
    for (std::size_t k = 1; k < R.size(); ++k) rate.push_back((y[k] - y[k - 1]) / (taus[k] - taus[k - 1]));
    const std::size_t half = rate.size() / 2;
    const double early = *std::max_element(rate.begin(), rate.begin() + half);
    const double late = *std::max_element(rate.begin() + half, rate.end());
    if (late > 1.25 * std::max(early, 0.0) + 1e-9) {
      rep.verdict = Verdict::Fail;
      std::ostringstream msg;
      msg << "growth rate increases from " << early << " to " << late;
      rep.message = msg.str();
    }
  }
  return rep;
}

GronwallReport dmv_strong_test(const Scenario& sc, const ReferenceSolution& ref) {
  if (ref.kind() != ReferenceKind::ResolvedNumeric) {
    const double res = transport_residual(sc.model, ref, sc.t_end, sc.length);
    if (!(res <= 1e-8)) {
      throw std::invalid_argument("reference violates the entropy transport identity (residual " +
                                  std::to_string(res) + ")");
    }
  }
  const Trajectory traj = run(sc);
  const YoungMeasureField U = dirac_field(traj);
  std::vector<double> taus, R;
  for (int k = 0; k < U.levels(); ++k) {
    taus.push_back(k * U.grid().dt);
    R.push_back(evaluate_R(U, ref, sc.model, k));
  }
  double energy = 0.0;
  for (const auto& s : traj.states.front()) energy += s.E * traj.grid.dx;
  const double floor = 1e-12 * std::max(1.0, energy);

  GronwallReport rep = gronwall_check(taus, R, R.size() > 1 ? std::max(R[1], 0.0) : 0.0, floor);
  for (double v : R) {
    if (v < -floor) {
      rep.verdict = Verdict::Fail;
      rep.message = "relative energy functional is negative";
    }
  }
  if (std::abs(R.front()) > floor) {
    rep.verdict = Verdict::NotApplicable;
    rep.message = "initial data differ from the reference (R(0) > 0)";
  }
  return rep;
}

RefinementReport refinement_study(const std::function<Scenario(int)>& make_scenario,
                                  const std::function<ReferenceSolution(const Scenario&)>& make_ref,
                                  const std::vector<int>& nx_list) {
  RefinementReport rep;
  for (int nx : nx_list) {
    const Scenario sc = make_scenario(nx);
    const GronwallReport g = dmv_strong_test(sc, make_ref(sc));
    rep.nx.push_back(nx);
    rep.max_R.push_back(g.max_R);
    rep.fitted_L.push_back(g.fitted_L);
    if (g.verdict != Verdict::Pass) rep.passed = false;
  }
  for (std::size_t k = 1; k < rep.max_R.size(); ++k) {
    const double ratio = rep.max_R[k - 1] / rep.max_R[k];
    rep.orders.push_back(std::log2(ratio));
    if (!(rep.orders.back() >= 1.0)) rep.first_order = false;
    if (rep.max_R[k] > 1.1 * rep.max_R[k - 1]) rep.monotone = false;
  }
  rep.passed = rep.passed && rep.first_order && rep.monotone;
  return rep;
}

std::string GronwallReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t k = 0; k < taus.size(); ++k) out << taus[k] << ' ' << values[k] << '\n';
  out << "fitted-L " << fitted_L << '\n';
  out << "verdict " << to_string(verdict) << '\n';
  return out.str();
}

}  // namespace maxdiss
