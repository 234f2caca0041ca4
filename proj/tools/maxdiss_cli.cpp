// maxdiss: command-line front end.
//
//   maxdiss run --config scenario.cfg --out DIR [--set key=value ...]
//   maxdiss compare SIGMA1 SIGMA2 [--tol T]
//   maxdiss select-maximal YOUNG1 SIGMA1 YOUNG2 SIGMA2 ... [--tol T]
//   maxdiss verify-eos --config law.cfg [--out report.txt]
//   maxdiss weak-strong --config scenario.cfg [--out report.txt]
//   maxdiss riemann --config riemann.cfg [--out table.txt]
//
// Exit codes: 0 success, 1 configuration or domain error, 2 solver abort,
// 3 entropy-law hypothesis violation.

#include "maxdiss/io.hpp"
#include "maxdiss/weakstrong.hpp"

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

using namespace maxdiss;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitHypothesis = 3;

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Config cfg = Config::load(path);
  for (const auto& o : overrides) cfg.apply_override(o);
  return cfg;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << std::setprecision(17);
  return out;
}

// Writes to `path` when given, otherwise to stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    auto out = open_out(path);
    out << text;
  }
}

int cmd_run(const std::string& config, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
  const Config cfg = load_config(config, overrides);
  const Scenario sc = scenario_from_config(cfg);
  const int members = cfg.get_int("ensemble.count", 1);
  const double spread = cfg.get_double("ensemble.scale", 0.01);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  const Trajectory traj = run(sc);
  YoungMeasureField field = dirac_field(traj);
  CellMeasure sigma = entropy_residual(traj, sc.model);
  if (members > 1) {
    EnsembleResult ens = ensemble(sc, random_perturbations(members, spread, sc.seed));
    field = std::move(ens.field);
    sigma = std::move(ens.sigma);
  }

  auto t = open_out(dir / "trajectory.txt");
  write_trajectory(t, traj);
  auto y = open_out(dir / "young.txt");
  write_young(y, field);
  auto s = open_out(dir / "sigma.txt");
  write_cell_measure(s, sigma);
  auto d = open_out(dir / "diagnostics.txt");
  d << diagnostics(sc.model, field).to_text();
  d << "sigma-total " << sigma.total() << '\n';
  d << "substeps " << traj.substeps << '\n';
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, std::optional<double> tol) {
  const CellMeasure s1 = read_cell_measure_file(a);
  const CellMeasure s2 = read_cell_measure_file(b);
  const Comparison c = compare(s1, s2, tol.value_or(default_tolerance(s1, s2)));
  std::cout << std::setprecision(17) << to_string(c.order) << '\n'
            << "extremal-cell " << c.t << ' ' << c.x << ' ' << c.difference << '\n';
  return 0;
}

int cmd_select(const std::vector<std::string>& files, std::optional<double> tol) {
  if (files.empty() || files.size() % 2 != 0) {
    throw ConfigError("select-maximal expects YOUNG SIGMA file pairs");
  }
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < files.size(); i += 2) {
    cands.push_back({read_young_file(files[i]), read_cell_measure_file(files[i + 1])});
  }
  double order_tol = 0.0;
  if (tol) {
    order_tol = *tol;
  } else {
    for (const auto& c : cands) order_tol = std::max(order_tol, 1e-10 * c.sigma.total());
  }
  const std::vector<int> keep = select_maximal(cands, order_tol);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      std::cout << i << ' ' << j << ' '
                << to_string(compare(cands[i].sigma, cands[j].sigma, order_tol).order) << '\n';
    }
  }
  std::cout << "maximal";
  for (int k : keep) std::cout << ' ' << k;
  std::cout << '\n';
  return 0;
}

int cmd_verify(const std::string& config, const std::vector<std::string>& overrides,
               const std::string& out) {
  const Config cfg = load_config(config, overrides);
  const GasModel model = model_from_config(cfg);
  const HypothesisReport rep = verify_hypotheses(model, default_z_samples(model));

  // Concavity of the total entropy on random admissible states.
  std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.get_int("seed", 0)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int samples = cfg.get_int("hessian.samples", 1000);
  double worst = -kInf;
  int non_concave = 0;
  const double g = model.gamma();
  for (int k = 0; k < samples; ++k) {
    const double rho = std::pow(10.0, -2.0 + 4.0 * unit(rng));
    const double u = -3.0 + 6.0 * unit(rng);
    const double z = model.p_bar() + std::pow(10.0, -3.0 + 6.0 * unit(rng));
    const double p = z * std::pow(rho, g);
    const HessianH hh = hessian_h(model, rho, p);
    const ConsState s = make_cons(rho, rho * u, 0.5 * rho * u * u + p / (g - 1.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entropy_hessian(model, s),
                                                       Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    worst = std::max(worst, top / norm);
    if (!hh.concave || top > 1e-8 * norm) ++non_concave;
  }
  std::ostringstream text;
  text << std::setprecision(17) << rep.to_text() << "hessian-samples " << samples << '\n'
       << "hessian-max-relative-eigenvalue " << worst << '\n'
       << "hessian-non-concave " << non_concave << '\n';
  const bool ok = rep.passed && non_concave == 0;
  text << "overall " << (ok ? "pass" : "fail") << '\n';
  emit(out, text.str());
  return ok ? 0 : kExitHypothesis;
}

ReferenceSolution reference_for(const Scenario& sc) {
  if (sc.ic.type == IcType::Constant) return ReferenceSolution::constant(sc.model, sc.ic.base);
  if (sc.ic.type == IcType::DensityWave) return ReferenceSolution::density_wave(sc);
  throw ConfigError("weak-strong needs ic.type constant or density-wave");
}

int cmd_weak_strong(const std::string& config, const std::vector<std::string>& overrides,
                    const std::string& out) {
  const Config cfg = load_config(config, overrides);
  Scenario sc = scenario_from_config(cfg);
  Scenario ref_sc = sc;
  // Optional reference data differing from the run (negative control).
  if (cfg.has("ref.rho")) ref_sc.ic.base.rho = cfg.get_double("ref.rho");
  if (cfg.has("ref.u")) ref_sc.ic.base.u = cfg.get_double("ref.u");
  if (cfg.has("ref.p")) ref_sc.ic.base.p = cfg.get_double("ref.p");
  const GronwallReport rep = dmv_strong_test(sc, reference_for(ref_sc));
  std::ostringstream text;
  text << std::setprecision(17) << rep.to_text() << "max-R " << rep.max_R << '\n';
  if (!rep.message.empty()) text << "message " << rep.message << '\n';
  emit(out, text.str());
  return 0;
}

int cmd_riemann(const std::string& config, const std::vector<std::string>& overrides,
                const std::string& out) {
  const Config cfg = load_config(config, overrides);
  const double gamma = cfg.get_double("gamma");
  if (!(gamma > 1.0)) throw ConfigError("gamma must be greater than 1");
  const Primitive left{cfg.get_double("ic.left.rho"), cfg.get_double("ic.left.u", 0.0),
                       cfg.get_double("ic.left.p")};
  const Primitive right{cfg.get_double("ic.right.rho"), cfg.get_double("ic.right.u", 0.0),
                        cfg.get_double("ic.right.p")};
  const double t = cfg.get_double("grid.t_end");
  const int nx = cfg.get_int("grid.nx", 200);
  const double length = cfg.get_double("grid.length", 1.0);
  const RiemannSolution sol = exact_riemann(gamma, left, right);
  std::ostringstream text;
  text << std::setprecision(17) << "p-star " << sol.p_star << '\n'
       << "u-star " << sol.u_star << '\n'
       << "rho-star-left " << sol.rho_star_left << '\n'
       << "rho-star-right " << sol.rho_star_right << '\n'
       << "left-wave " << (sol.left_shock ? "shock" : "rarefaction") << '\n'
       << "right-wave " << (sol.right_shock ? "shock" : "rarefaction") << '\n'
       << "# x rho u p\n";
  for (int i = 0; i < nx; ++i) {
    const double x = (i + 0.5) * length / nx;
    const Primitive w = sol.sample((x - 0.5 * length) / t);
    text << x << ' ' << w.rho << ' ' << w.u << ' ' << w.p << '\n';
  }
  emit(out, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal-dissipation toolkit for the compressible Euler system"};
  app.require_subcommand(1);

  std::string config, out, out_dir;
  std::vector<std::string> overrides;
  std::optional<double> tol;
  std::vector<std::string> files;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write trajectory, measures and diagnostics");
  run_cmd->add_option("--config", config, "Scenario file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--set", overrides, "key=value override (last wins)");

  auto* cmp = app.add_subcommand("compare", "Compare two entropy-production measures");
  cmp->add_option("files", files, "Two sigma files")->required()->expected(2);
  cmp->add_option("--tol", tol, "Comparison tolerance");

  auto* sel = app.add_subcommand("select-maximal", "Indices of undominated candidates");
  sel->add_option("files", files, "YOUNG SIGMA pairs")->required()->expected(2, -1);
  sel->add_option("--tol", tol, "Comparison tolerance");

  auto* ver = app.add_subcommand("verify-eos", "Check the entropy-law hypotheses");
  ver->add_option("--config", config, "Law file")->required();
  ver->add_option("--set", overrides, "key=value override (last wins)");
  ver->add_option("--out", out, "Report file (default stdout)");

  auto* ws = app.add_subcommand("weak-strong", "Relative-energy test against a smooth reference");
  ws->add_option("--config", config, "Scenario file")->required();
  ws->add_option("--set", overrides, "key=value override (last wins)");
  ws->add_option("--out", out, "Report file (default stdout)");

  auto* rp = app.add_subcommand("riemann", "Exact Riemann solution");
  rp->add_option("--config", config, "Riemann data file")->required();
  rp->add_option("--set", overrides, "key=value override (last wins)");
  rp->add_option("--out", out, "Table file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config, overrides, out_dir);
    if (*cmp) return cmd_compare(files[0], files[1], tol);
    if (*sel) return cmd_select(files, tol);
    if (*ver) return cmd_verify(config, overrides, out);
    if (*ws) return cmd_weak_strong(config, overrides, out);
    if (*rp) return cmd_riemann(config, overrides, out);
  } catch (const SolverAbort& e) {
    std::cerr << "solver aborted: " << e.what() << '\n';
    return kExitSolver;
  } catch (const VacuumError& e) {
    std::cerr << "solver aborted: " << e.what() << '\n';
    return kExitSolver;
  } catch (const EntropyViolation& e) {
    std::cerr << "solver aborted: " << e.what() << '\n';
    return kExitSolver;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitHypothesis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
