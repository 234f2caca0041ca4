#include "maxdiss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace maxdiss {

std::string to_string(FluxKind f) {
  switch (f) {
    case FluxKind::LaxFriedrichs: return "lax-friedrichs";
    case FluxKind::Rusanov: return "rusanov";
    case FluxKind::Hll: return "hll";
  }
  return "unknown";
}

FluxKind parse_flux(const std::string& name) {
  if (name == "lax-friedrichs") return FluxKind::LaxFriedrichs;
  if (name == "rusanov") return FluxKind::Rusanov;
  if (name == "hll") return FluxKind::Hll;
  throw std::invalid_argument("unknown flux '" + name + "'");
}

std::string to_string(IcType t) {
  switch (t) {
    case IcType::Constant: return "constant";
    case IcType::Riemann: return "riemann";
    case IcType::DensityWave: return "density-wave";
    case IcType::AcousticWave: return "acoustic-wave";
  }
  return "unknown";
}

IcType parse_ic(const std::string& name) {
  if (name == "constant") return IcType::Constant;
  if (name == "riemann") return IcType::Riemann;
  if (name == "density-wave") return IcType::DensityWave;
  if (name == "acoustic-wave") return IcType::AcousticWave;
  throw std::invalid_argument("unknown initial condition '" + name + "'");
}

SpaceTimeGrid Scenario::grid() const {
  SpaceTimeGrid g{nt, nx, t_end / nt, length / nx};
  g.validate();
  return g;
}

namespace {

// Compact 1-D state used inside the time loop.
struct Cell {
  double r;
  double m;
  double E;
};

Cell pack(const ConsState& s) { return {s.rho, s.m(0), s.E}; }

ConsState unpack(const Cell& c) { return make_cons(c.r, c.m, c.E); }

double cell_pressure(double g, const Cell& c) { return (g - 1.0) * (c.E - 0.5 * c.m * c.m / c.r); }

double cell_entropy(const GasModel& model, const Cell& c) {
  const double g = model.gamma();
  const double z = cell_pressure(g, c) / std::pow(c.r, g);
  return c.r * model.S(z);
}

Primitive acoustic_state(const Scenario& sc, double x, double* dlambda_dx) {
  const double g = sc.model.gamma();
  const Primitive& b = sc.ic.base;
  const double k = 2.0 * std::numbers::pi * sc.ic.wavenumber / sc.length;
  const double A = sc.ic.amplitude;
  const double rho = b.rho * (1.0 + A * std::sin(k * x));
  const double p = b.p * std::pow(rho / b.rho, g);
  const double c0 = std::sqrt(g * b.p / b.rho);
  const double c = std::sqrt(g * p / rho);
  if (dlambda_dx) {
    const double drho = b.rho * A * k * std::cos(k * x);
    const double dc = 0.5 * (g - 1.0) * c / rho * drho;
    *dlambda_dx = (g + 1.0) / (g - 1.0) * dc;
  }
  return {rho, b.u + 2.0 * (c - c0) / (g - 1.0), p};
}

}  // namespace

std::vector<ConsState> initial_states(const Scenario& sc) {
  const double L = sc.length;
  std::vector<ConsState> out(sc.nx);
  for (int i = 0; i < sc.nx; ++i) {
    const double x = sc.cell_center(i);
    Primitive w;
    switch (sc.ic.type) {
      case IcType::Constant:
        w = sc.ic.base;
        break;
      case IcType::Riemann:
        w = (x < 0.25 * L || x >= 0.75 * L) ? sc.ic.left : sc.ic.right;
        break;
      case IcType::DensityWave: {
        const double k = 2.0 * std::numbers::pi * sc.ic.wavenumber / L;
        w = sc.ic.base;
        w.rho = sc.ic.base.rho * (1.0 + sc.ic.amplitude * std::sin(k * x));
        break;
      }
      case IcType::AcousticWave:
        w = acoustic_state(sc, x, nullptr);
        break;
    }
    if (!(w.rho > 0.0) || !(w.p > 0.0)) {
      throw DomainError("initial data need positive density and pressure");
    }
    out[i] = to_cons(sc.model, w);
    if (!is_strictly_admissible(sc.model, out[i])) {
      throw DomainError("initial data are not strictly admissible at cell " + std::to_string(i));
    }
  }
  return out;
}

double acoustic_breaking_time(const Scenario& sc) {
  double worst = 0.0;
  constexpr int n = 4096;
  for (int i = 0; i < n; ++i) {
    double d = 0.0;
    acoustic_state(sc, sc.length * i / n, &d);
    worst = std::min(worst, d);
  }
  return worst < 0.0 ? -1.0 / worst : kInf;
}

std::array<double, 3> euler_flux(const GasModel& model, const ConsState& s) {
  if (!(s.rho > 0.0)) throw DomainError("flux is undefined at vacuum");
  const double u = s.m(0) / s.rho;
  const double p = (model.gamma() - 1.0) * (s.E - 0.5 * s.m(0) * u);
  return {s.m(0), s.m(0) * u + p, (s.E + p) * u};
}

namespace {

std::pair<double, double> speed_bounds(const GasModel& model, const Cell& L, const Cell& R) {
  const double g = model.gamma();
  const double pl = cell_pressure(g, L), pr = cell_pressure(g, R);
  const double ul = L.m / L.r, ur = R.m / R.r;
  const double cl = std::sqrt(g * pl / L.r), cr = std::sqrt(g * pr / R.r);
  double p_hat = 0.0;
  if (g <= 5.0 / 3.0) {
    // Two-rarefaction pressure, an upper bound of the star pressure here.
    const double z = (g - 1.0) / (2.0 * g);
    const double num = cl + cr - 0.5 * (g - 1.0) * (ur - ul);
    if (num > 0.0) p_hat = std::pow(num / (cl / std::pow(pl, z) + cr / std::pow(pr, z)), 1.0 / z);
  } else if (2.0 * (cl + cr) / (g - 1.0) > ur - ul) {
    p_hat = exact_riemann(g, {L.r, ul, pl}, {R.r, ur, pr}).p_star;
  }
  const double k = (g + 1.0) / (2.0 * g);
  const double ql = std::sqrt(1.0 + k * std::max(p_hat / pl - 1.0, 0.0));
  const double qr = std::sqrt(1.0 + k * std::max(p_hat / pr - 1.0, 0.0));
  return {std::min(ul - cl * ql, ur - cr), std::max(ur + cr * qr, ul + cl)};
}

struct FaceData {
  std::vector<double> sl, sr;
  double alpha = 0.0;
};

FaceData face_speeds(const GasModel& model, const std::vector<Cell>& u) {
  const int n = static_cast<int>(u.size());
  FaceData f;
  f.sl.resize(n);
  f.sr.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto [a, b] = speed_bounds(model, u[(j + n - 1) % n], u[j]);
    f.sl[j] = a;
    f.sr[j] = b;
    f.alpha = std::max({f.alpha, std::abs(a), std::abs(b)});
  }
  return f;
}

double rate_limit(const SchemeConfig& scheme, double dx, double alpha) {
  return alpha / dx + 2.0 * scheme.viscosity / (dx * dx);
}

void check_cells(const GasModel& model, const std::vector<Cell>& u, double floor) {
  const double g = model.gamma();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Cell& c = u[i];
    if (!(c.r > floor)) {
      throw AdmissibilityLoss("vacuum formed at cell " + std::to_string(i) +
                              " (rho = " + std::to_string(c.r) + ")");
    }
    const double margin =
        c.E - 0.5 * c.m * c.m / c.r - model.p_bar() / (g - 1.0) * std::pow(c.r, g);
    if (!(margin > 1e-12 * std::max(1.0, std::abs(c.E)))) {
      throw AdmissibilityLoss("state left the admissible region at cell " + std::to_string(i));
    }
  }
}

// Advances u by dt and returns the entropy flux at each left face.
std::vector<double> advance(const GasModel& model, const SchemeConfig& scheme, double dx,
                            double dt, std::vector<Cell>& u) {
  const int n = static_cast<int>(u.size());
  const double g = model.gamma();
  const FaceData fd = face_speeds(model, u);
  if (dt * rate_limit(scheme, dx, fd.alpha) > 1.0 + 1e-12) {
    throw CflViolation("time step exceeds the stability limit");
  }

  std::vector<std::array<double, 3>> phys(n);
  std::vector<double> ent(n), ent_flux(n);
  for (int i = 0; i < n; ++i) {
    const double v = u[i].m / u[i].r;
    const double p = cell_pressure(g, u[i]);
    phys[i] = {u[i].m, u[i].m * v + p, (u[i].E + p) * v};
    ent[i] = cell_entropy(model, u[i]);
    ent_flux[i] = ent[i] * v;
  }

  std::vector<std::array<double, 3>> F(n);
  std::vector<double> Q(n);
  for (int j = 0; j < n; ++j) {
    const int l = (j + n - 1) % n;
    const double UL[3] = {u[l].r, u[l].m, u[l].E};
    const double UR[3] = {u[j].r, u[j].m, u[j].E};
    if (scheme.flux == FluxKind::Hll) {
      const double a = fd.sl[j], b = fd.sr[j];
      if (a >= 0.0) {
        F[j] = phys[l];
        Q[j] = ent_flux[l];
      } else if (b <= 0.0) {
        F[j] = phys[j];
        Q[j] = ent_flux[j];
      } else {
        for (int k = 0; k < 3; ++k) {
          F[j][k] = (b * phys[l][k] - a * phys[j][k] + a * b * (UR[k] - UL[k])) / (b - a);
        }
        Q[j] = (b * ent_flux[l] - a * ent_flux[j] + a * b * (ent[j] - ent[l])) / (b - a);
      }
    } else {
      const double alpha = scheme.flux == FluxKind::LaxFriedrichs
                               ? fd.alpha
                               : std::max(std::abs(fd.sl[j]), std::abs(fd.sr[j]));
      for (int k = 0; k < 3; ++k) {
        F[j][k] = 0.5 * (phys[l][k] + phys[j][k]) - 0.5 * alpha * (UR[k] - UL[k]);
      }
      Q[j] = 0.5 * (ent_flux[l] + ent_flux[j]) - 0.5 * alpha * (ent[j] - ent[l]);
    }
  }

  const double lam = dt / dx;
  const double nu = scheme.viscosity * dt / (dx * dx);
  std::vector<Cell> next(n);
  for (int i = 0; i < n; ++i) {
    const int r = (i + 1) % n;
    const int l = (i + n - 1) % n;
    next[i].r = u[i].r - lam * (F[r][0] - F[i][0]);
    next[i].m = u[i].m - lam * (F[r][1] - F[i][1]) + nu * (u[r].m - 2.0 * u[i].m + u[l].m);
    next[i].E = u[i].E - lam * (F[r][2] - F[i][2]) + nu * (u[r].E - 2.0 * u[i].E + u[l].E);
  }
  u.swap(next);
  return Q;
}

}  // namespace

std::pair<double, double> wave_speed_bounds(const GasModel& model, const ConsState& left,
                                            const ConsState& right) {
  return speed_bounds(model, pack(left), pack(right));
}

double stable_time_step(const GasModel& model, const SchemeConfig& scheme, double dx,
                        const std::vector<ConsState>& cells) {
  std::vector<Cell> u;
  u.reserve(cells.size());
  for (const auto& c : cells) u.push_back(pack(c));
  return scheme.cfl / rate_limit(scheme, dx, face_speeds(model, u).alpha);
}

std::vector<double> step(const GasModel& model, const SchemeConfig& scheme, double dx, double dt,
                         std::vector<ConsState>& cells) {
  std::vector<Cell> u;
  u.reserve(cells.size());
  for (const auto& c : cells) u.push_back(pack(c));
  check_cells(model, u, 0.0);
  auto Q = advance(model, scheme, dx, dt, u);
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = unpack(u[i]);
  return Q;
}

Trajectory run(const Scenario& sc) {
  if (!(sc.scheme.cfl > 0.0 && sc.scheme.cfl <= 1.0)) {
    throw std::invalid_argument("CFL number must lie in (0, 1]");
  }
  if (!(sc.scheme.viscosity >= 0.0)) throw std::invalid_argument("viscosity must be nonnegative");
  const SpaceTimeGrid grid = sc.grid();
  const GasModel& model = sc.model;

  std::vector<Cell> u;
  for (const auto& c : initial_states(sc)) u.push_back(pack(c));
  double rho_max = 0.0;
  for (const auto& c : u) rho_max = std::max(rho_max, c.r);
  const double floor = 1e-12 * rho_max;

  Trajectory traj;
  traj.grid = grid;
  traj.gamma = model.gamma();
  auto snapshot = [&](double t) {
    std::vector<ConsState> level;
    level.reserve(u.size());
    double energy = 0.0;
    for (const auto& c : u) {
      level.push_back(unpack(c));
      energy += c.E * grid.dx;
    }
    traj.times.push_back(t);
    traj.states.push_back(std::move(level));
    return energy;
  };
  const double e0 = snapshot(0.0);
  traj.defect.push_back(0.0);

  double t = 0.0;
  for (int n = 0; n < grid.n_t; ++n) {
    const double target = (n + 1) * grid.dt;
    std::vector<double> qint(u.size(), 0.0);
    while (target - t > 1e-14 * target) {
      check_cells(model, u, floor);
      const double alpha = face_speeds(model, u).alpha;
      const double dt = std::min(sc.scheme.cfl / rate_limit(sc.scheme, grid.dx, alpha), target - t);
      const auto Q = advance(model, sc.scheme, grid.dx, dt, u);
      for (std::size_t j = 0; j < qint.size(); ++j) qint[j] += dt * Q[j];
      t += dt;
      ++traj.substeps;
    }
    t = target;
    check_cells(model, u, floor);
    traj.entropy_flux.push_back(std::move(qint));
    traj.defect.push_back(e0 - snapshot(t));
  }
  return traj;
}

CellMeasure entropy_residual(const Trajectory& traj, const GasModel& model,
                             ResidualReport* report) {
  const SpaceTimeGrid& g = traj.grid;
  const int n = g.n_x;
  std::vector<double> raw(static_cast<std::size_t>(g.n_t) * n);
  double scale = 0.0;
  for (int k = 0; k < g.n_t; ++k) {
    const auto& a = traj.states[k];
    const auto& b = traj.states[k + 1];
    const auto& q = traj.entropy_flux[k];
    for (int i = 0; i < n; ++i) {
      const double s0 = cell_entropy(model, pack(a[i])) * g.dx;
      const double s1 = cell_entropy(model, pack(b[i])) * g.dx;
      const double qr = q[(i + 1) % n];
      const double ql = q[i];
      raw[static_cast<std::size_t>(k) * n + i] = (s1 - s0) + (qr - ql);
      scale = std::max({scale, std::abs(s0), std::abs(s1), std::abs(qr), std::abs(ql)});
    }
  }
  ResidualReport rep;
  rep.scale = scale;
  for (double& v : raw) {
    rep.most_negative = std::min(rep.most_negative, v);
    if (v < 0.0) {
      if (v < -1e-10 * scale) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "cell entropy inequality violated: sigma = " << v << " with scale " << scale;
        throw EntropyViolation(msg.str());
      }
      rep.clamped_mass += -v;
      v = 0.0;
    }
  }
  if (report) *report = rep;
  return CellMeasure(g, std::move(raw));
}

YoungMeasureField dirac_field(const Trajectory& traj) { return dirac_field(traj.grid, traj.states); }

std::vector<Perturbation> random_perturbations(int count, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Perturbation> out(count);
  for (auto& p : out) {
    p.density_factor = 1.0 + scale * unit(rng);
    p.pressure_factor = 1.0 + scale * unit(rng);
    p.velocity_shift = scale * unit(rng);
  }
  return out;
}

Scenario perturbed(const Scenario& sc, const Perturbation& p) {
  Scenario out = sc;
  for (Primitive* w : {&out.ic.base, &out.ic.left, &out.ic.right}) {
    w->rho *= p.density_factor;
    w->p *= p.pressure_factor;
    w->u += p.velocity_shift;
  }
  return out;
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("MAXDISS_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

EnsembleResult ensemble(const Scenario& base, const std::vector<Perturbation>& perturbations) {
  if (perturbations.empty()) throw std::invalid_argument("ensemble needs at least one member");
  const int k = static_cast<int>(perturbations.size());
  std::vector<Trajectory> runs(k);
  std::vector<std::optional<CellMeasure>> sig(k);

  const int workers = std::min(worker_count(), k);
  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < k; i += workers) {
        const Scenario sc = perturbed(base, perturbations[i]);
        runs[i] = run(sc);
        sig[i] = entropy_residual(runs[i], sc.model);
      }
    }));
  }
  for (auto& j : jobs) j.get();

  const SpaceTimeGrid grid = runs.front().grid;
  YoungMeasureField field(grid);
  for (int t = 0; t < field.levels(); ++t) {
    for (int x = 0; x < grid.n_x; ++x) {
      std::vector<Atom> atoms;
      for (int i = 0; i < k; ++i) {
        const ConsState& s = runs[i].states[t][x];
        bool merged = false;
        for (auto& a : atoms) {
          if (std::abs(a.state.rho - s.rho) <= 1e-14 && std::abs(a.state.E - s.E) <= 1e-14 &&
              (a.state.m - s.m).cwiseAbs().maxCoeff() <= 1e-14) {
            a.weight += 1.0 / k;
            merged = true;
            break;
          }
        }
        if (!merged) atoms.push_back({1.0 / k, s});
      }
      field.set_cell(t, x, std::move(atoms));
    }
  }
  std::vector<double> mean(sig[0]->values().size(), 0.0);
  for (int i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += sig[i]->values()[c] / k;
  }
  return {std::move(field), CellMeasure(grid, std::move(mean))};
}

// ---------------------------------------------------------------------------
// Diagnostics

Diagnostics diagnostics(const GasModel& model, const YoungMeasureField& U,
                        const MatrixCellMeasure* mu_c) {
  const SpaceTimeGrid& g = U.grid();
  const double gamma = model.gamma();
  Diagnostics d;
  const double C = verify_hypotheses(model, default_z_samples(model)).growth_constant;
  d.entropy_exponent = C > 0.0 ? 1.0 + 1.0 / (2.0 * C) : 1.0;

  const Observable energy = [](const ConsState& s) { return s.E; };
  const Observable kinetic = [](const ConsState& s) { return kinetic_energy(s.rho, s.m); };
  const Observable pressure_like = [gamma](const ConsState& s) { return std::pow(s.rho, gamma); };
  const double q = d.entropy_exponent;
  const Observable entropy_power = [&model, q](const ConsState& s) {
    const double v = total_entropy(model, s);
    return std::isfinite(v) ? std::pow(std::abs(v), q) : kInf;
  };
  const Observable admissible = [&model](const ConsState& s) {
    return admissibility_margin(model, s) >= -admissibility_slack(s) ? 1.0 : 0.0;
  };

  std::vector<double> defect(U.levels());
  for (int t = 0; t < U.levels(); ++t) {
    double E = 0.0, K = 0.0, P = 0.0, H = 0.0;
    for (int x = 0; x < g.n_x; ++x) {
      E += g.dx * expect(U, t, x, energy);
      K += g.dx * expect(U, t, x, kinetic);
      P += g.dx * expect(U, t, x, pressure_like);
      H += g.dx * expect(U, t, x, entropy_power);
      d.admissible_probability = std::min(d.admissible_probability, expect(U, t, x, admissible));
    }
    if (t == 0) {
      d.energy_initial = E;
      d.energy_max = E;
    }
    d.energy_max = std::max(d.energy_max, E);
    d.energy_final = E;
    defect[t] = d.energy_initial - E;
    d.kinetic_moment = std::max(d.kinetic_moment, K);
    d.pressure_moment = std::max(d.pressure_moment, P);
    d.entropy_moment = std::max(d.entropy_moment, H);
  }
  d.defect_min = *std::min_element(defect.begin(), defect.end());
  d.energy_inequality = d.energy_max <= d.energy_initial + 1e-12 * std::max(1.0, d.energy_initial);

  if (mu_c) {
    if (!(mu_c->grid == g)) throw GridMismatch("concentration measure uses a different grid");
    d.concentration_variation = mu_c->total_variation();
    // |mu_C| restricted to [0, tau] against d(tau).
    double accumulated = 0.0;
    for (int t = 0; t < g.n_t; ++t) {
      for (int x = 0; x < g.n_x; ++x) {
        accumulated += mu_c->values[static_cast<std::size_t>(t) * g.n_x + x].cwiseAbs().sum();
      }
      if (accumulated > 0.0) {
        const double dt = defect[t + 1];
        d.defect_constant = std::max(d.defect_constant, dt > 0.0 ? accumulated / dt : kInf);
      }
    }
  }
  return d;
}

std::string Diagnostics::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "energy-initial " << energy_initial << '\n'
      << "energy-max " << energy_max << '\n'
      << "energy-final " << energy_final << '\n'
      << "energy-inequality " << (energy_inequality ? "pass" : "fail") << '\n'
      << "defect-min " << defect_min << '\n'
      << "admissible-probability " << admissible_probability << '\n'
      << "kinetic-moment " << kinetic_moment << '\n'
      << "pressure-moment " << pressure_moment << '\n'
      << "entropy-exponent " << entropy_exponent << '\n'
      << "entropy-moment " << entropy_moment << '\n'
      << "concentration-variation " << concentration_variation << '\n'
      << "defect-constant " << defect_constant << '\n';
  return out.str();
}

}  // namespace maxdiss
