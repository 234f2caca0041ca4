#include "maxdiss/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace maxdiss {

void SpaceTimeGrid::validate() const {
  if (n_t < 1 || n_x < 1) throw std::invalid_argument("grid needs at least one cell");
  if (!(dt > 0.0) || !(dx > 0.0)) throw std::invalid_argument("grid spacings must be positive");
}

// ---------------------------------------------------------------------------
// Young measures

YoungMeasureField::YoungMeasureField(const SpaceTimeGrid& grid) : grid_(grid) {
  grid_.validate();
  atoms_.assign(static_cast<std::size_t>(levels()) * grid_.n_x, {Atom{}});
}

std::size_t YoungMeasureField::index(int t, int x) const {
  if (t < 0 || t >= levels() || x < 0 || x >= grid_.n_x) {
    throw std::out_of_range("cell index out of range");
  }
  return static_cast<std::size_t>(t) * grid_.n_x + x;
}

void YoungMeasureField::set_cell(int t, int x, std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("a cell needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0)) throw std::invalid_argument("atom weights must be positive");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "weights of cell (" << t << ", " << x << ") sum to " << total;
    throw std::invalid_argument(msg.str());
  }
  atoms_[index(t, x)] = std::move(atoms);
}

double expect(const std::vector<Atom>& atoms, const Observable& g) {
  double sum = 0.0;
  bool pos_inf = false;
  bool neg_inf = false;
  for (const auto& a : atoms) {
    const double v = g(a.state);
    if (v == kInf) {
      pos_inf = true;
    } else if (v == -kInf) {
      neg_inf = true;
    } else {
      sum += a.weight * v;
    }
  }
  if (pos_inf && neg_inf) throw DomainError("expectation mixes +inf and -inf");
  if (neg_inf) return -kInf;
  if (pos_inf) return kInf;
  return sum;
}

double expect(const YoungMeasureField& U, int t, int x, const Observable& g) {
  return expect(U.cell(t, x), g);
}

YoungMeasureField dirac_field(const SpaceTimeGrid& grid,
                              const std::vector<std::vector<ConsState>>& states) {
  YoungMeasureField U(grid);
  if (static_cast<int>(states.size()) != U.levels()) {
    throw GridMismatch("dirac_field needs n_t + 1 time levels");
  }
  for (int t = 0; t < U.levels(); ++t) {
    if (static_cast<int>(states[t].size()) != grid.n_x) {
      throw GridMismatch("dirac_field level has the wrong number of cells");
    }
    for (int x = 0; x < grid.n_x; ++x) U.set_cell(t, x, {Atom{1.0, states[t][x]}});
  }
  return U;
}

namespace {

bool same_state(const ConsState& a, const ConsState& b) {
  if (a.dim() != b.dim()) return false;
  return std::abs(a.rho - b.rho) <= 1e-14 && std::abs(a.E - b.E) <= 1e-14 &&
         (a.m - b.m).cwiseAbs().maxCoeff() <= 1e-14;
}

}  // namespace

YoungMeasureField convex_combination(const YoungMeasureField& U1, const YoungMeasureField& U2,
                                     double lambda) {
  if (!(U1.grid() == U2.grid())) throw GridMismatch("convex_combination: grids differ");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (lambda == 0.0) return U2;
  if (lambda == 1.0) return U1;
  YoungMeasureField out(U1.grid());
  for (int t = 0; t < U1.levels(); ++t) {
    for (int x = 0; x < U1.grid().n_x; ++x) {
      std::vector<Atom> merged;
      auto add = [&](const Atom& a, double scale) {
        for (auto& m : merged) {
          if (same_state(m.state, a.state)) {
            m.weight += scale * a.weight;
            return;
          }
        }
        merged.push_back({scale * a.weight, a.state});
      };
      for (const auto& a : U1.cell(t, x)) add(a, lambda);
      for (const auto& a : U2.cell(t, x)) add(a, 1.0 - lambda);
      out.set_cell(t, x, std::move(merged));
    }
  }
  return out;
}

bool check_initial_admissibility(const GasModel& model, const YoungMeasureField& U,
                                 double delta) {
  for (int x = 0; x < U.grid().n_x; ++x) {
    for (const auto& a : U.cell(0, x)) {
      if (!(a.state.rho > delta)) return false;
      if (!(admissibility_margin(model, a.state) > delta)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cell measures

CellMeasure::CellMeasure(const SpaceTimeGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != static_cast<std::size_t>(grid_.n_t) * grid_.n_x) {
    throw GridMismatch("cell measure size does not match its grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("cell measure values must be finite and nonnegative");
    }
  }
}

double CellMeasure::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double MatrixCellMeasure::total_variation() const {
  double tv = 0.0;
  for (const auto& m : values) tv += m.cwiseAbs().sum();
  return tv;
}

std::string to_string(Order o) {
  switch (o) {
    case Order::Greater: return "GREATER";
    case Order::Less: return "LESS";
    case Order::Equal: return "EQUAL";
    case Order::Incomparable: return "INCOMPARABLE";
  }
  return "UNKNOWN";
}

double default_tolerance(const CellMeasure& s1, const CellMeasure& s2) {
  return 1e-10 * std::max(s1.total(), s2.total());
}

Comparison compare(const CellMeasure& s1, const CellMeasure& s2, double tol) {
  if (!(s1.grid() == s2.grid())) throw GridMismatch("compare: grids differ");
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
  const auto& a = s1.values();
  const auto& b = s2.values();
  bool ge = true;
  bool le = true;
  bool above = false;
  bool below = false;
  std::size_t worst = 0;
  double worst_abs = -1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    if (d < -tol) ge = false;
    if (d > tol) le = false;
    if (d > tol) above = true;
    if (d < -tol) below = true;
    if (std::abs(d) > worst_abs) {
      worst_abs = std::abs(d);
      worst = k;
    }
  }
  Comparison c;
  c.t = static_cast<int>(worst / s1.grid().n_x);
  c.x = static_cast<int>(worst % s1.grid().n_x);
  c.difference = a[worst] - b[worst];
  if (!above && !below) {
    c.order = Order::Equal;
  } else if (ge && above) {
    c.order = Order::Greater;
  } else if (le && below) {
    c.order = Order::Less;
  } else {
    c.order = Order::Incomparable;
  }
  return c;
}

CellMeasure sup_chain(const std::vector<CellMeasure>& chain, double tol) {
  if (chain.empty()) throw std::invalid_argument("sup_chain needs a nonempty chain");
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      if (compare(chain[i], chain[j], tol).order == Order::Incomparable) {
        throw NotAChain("elements " + std::to_string(i) + " and " + std::to_string(j) +
                        " are incomparable");
      }
    }
  }
  std::vector<double> v = chain.front().values();
  for (const auto& s : chain) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::max(v[k], s.values()[k]);
  }
  return CellMeasure(chain.front().grid(), std::move(v));
}

std::vector<CellObservable> test_basis(const SpaceTimeGrid& grid, int M) {
  const int cells = grid.n_t * grid.n_x;
  if (M < 1 || M > cells) throw std::invalid_argument("test_basis needs 1 <= M <= cell count");
  std::vector<CellObservable> basis(M, CellObservable(cells, 0.0));
  for (int k = 0; k < cells; ++k) {
    const int b = static_cast<int>(static_cast<long long>(k) * M / cells);
    basis[b][k] = 1.0;
  }
  return basis;
}

double pair(const CellMeasure& sigma, const CellObservable& g) {
  const auto& v = sigma.values();
  if (g.size() != v.size()) throw GridMismatch("observable size does not match the grid");
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += v[k] * g[k];
  return s;
}

std::vector<int> select_maximal(const std::vector<Candidate>& candidates, double order_tol,
                                double data_tol) {
  if (candidates.empty()) return {};
  const auto& ref = candidates.front();
  const Observable rho = [](const ConsState& s) { return s.rho; };
  const Observable E = [](const ConsState& s) { return s.E; };
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (!(c.field.grid() == ref.field.grid()) || !(c.sigma.grid() == ref.sigma.grid()) ||
        !(c.sigma.grid() == c.field.grid())) {
      throw GridMismatch("candidate " + std::to_string(i) + " uses a different grid");
    }
    for (int x = 0; x < ref.field.grid().n_x; ++x) {
      const int dim = ref.field.cell(0, x).front().state.dim();
      std::vector<Observable> obs = {rho, E};
      for (int k = 0; k < dim; ++k) {
        obs.push_back([k](const ConsState& s) { return k < s.dim() ? s.m(k) : 0.0; });
      }
      for (const auto& g : obs) {
        const double a = expect(c.field, 0, x, g);
        const double b = expect(ref.field, 0, x, g);
        if (std::abs(a - b) > data_tol * std::max(1.0, std::abs(b))) {
          throw InitialDataMismatch("candidate " + std::to_string(i) +
                                        " has different initial data at cell x=" +
                                        std::to_string(x),
                                    x);
        }
      }
    }
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
      if (i == j) continue;
      dominated = compare(candidates[j].sigma, candidates[i].sigma, order_tol).order == Order::Greater;
    }
    if (!dominated) out.push_back(static_cast<int>(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Concentration defect

namespace {

struct Extrapolated {
  double value = 0.0;
  bool converged = true;
};

// a_n = a + b/n fitted on the last two terms, cross-checked against the
// preceding pair.
Extrapolated extrapolate(const std::vector<double>& n, const std::vector<double>& a) {
  const std::size_t k = a.size();
  auto limit = [&](std::size_t i, std::size_t j) {
    return (n[j] * a[j] - n[i] * a[i]) / (n[j] - n[i]);
  };
  Extrapolated out;
  out.value = limit(k - 2, k - 1);
  const double prev = limit(k - 3, k - 2);
  out.converged = std::isfinite(out.value) &&
                  std::abs(out.value - prev) <= 1e-8 * std::max(1.0, std::abs(out.value));
  return out;
}

}  // namespace

DefectReport concentration_defect_check(const std::vector<IndexedField>& sequence,
                                        const Observable& G, const Observable& F) {
  if (sequence.size() < 3) throw std::invalid_argument("defect check needs at least three terms");
  const SpaceTimeGrid& grid = sequence.front().field.grid();
  std::vector<double> ns;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (!(sequence[i].field.grid() == grid)) throw GridMismatch("sequence grids differ");
    if (i > 0 && !(sequence[i].n > sequence[i - 1].n)) {
      throw std::invalid_argument("sequence indices must increase");
    }
    ns.push_back(sequence[i].n);
  }

  DefectReport report;
  const int levels = grid.n_t + 1;
  std::vector<double> l1(sequence.size(), 0.0);
  for (int t = 0; t < levels; ++t) {
    for (int x = 0; x < grid.n_x; ++x) {
      std::vector<double> eg, ef;
      for (std::size_t i = 0; i < sequence.size(); ++i) {
        const auto& atoms = sequence[i].field.cell(t, x);
        eg.push_back(expect(atoms, G));
        ef.push_back(expect(atoms, F));
        l1[i] += grid.dx * std::abs(ef.back());
      }
      const Extrapolated G_bar = extrapolate(ns, eg);
      const Extrapolated F_bar = extrapolate(ns, ef);

      // Atom-wise limit measure.
      const std::size_t n_atoms = sequence.back().field.cell(t, x).size();
      std::vector<Atom> limit;
      for (std::size_t k = 0; k < n_atoms; ++k) {
        std::vector<double> w, rho, E;
        std::vector<std::vector<double>> m;
        for (const auto& term : sequence) {
          const auto& atoms = term.field.cell(t, x);
          if (atoms.size() != n_atoms) {
            throw std::invalid_argument("atoms must be listed consistently along the sequence");
          }
          w.push_back(atoms[k].weight);
          rho.push_back(atoms[k].state.rho);
          E.push_back(atoms[k].state.E);
          m.resize(atoms[k].state.dim());
          for (int d = 0; d < atoms[k].state.dim(); ++d) m[d].push_back(atoms[k].state.m(d));
        }
        const Extrapolated lw = extrapolate(ns, w);
        if (!lw.converged) throw std::invalid_argument("atom weights do not converge");
        Atom a;
        a.weight = lw.value;
        bool converged = true;
        const Extrapolated lr = extrapolate(ns, rho);
        const Extrapolated le = extrapolate(ns, E);
        converged = lr.converged && le.converged;
        a.state.rho = lr.value;
        a.state.E = le.value;
        a.state.m = Vec::Zero(static_cast<int>(m.size()));
        for (std::size_t d = 0; d < m.size(); ++d) {
          const Extrapolated lm = extrapolate(ns, m[d]);
          converged = converged && lm.converged;
          a.state.m(static_cast<int>(d)) = lm.value;
        }
        if (!converged) {
          report.escaped_mass = std::max(report.escaped_mass, std::max(lw.value, 0.0));
          continue;
        }
        if (a.weight > 1e-12) limit.push_back(std::move(a));
      }

      DefectCell c;
      c.t = t;
      c.x = x;
      c.G_bar = G_bar.value;
      c.F_bar = F_bar.value;
      c.limit_G = expect(limit, G);
      c.limit_F = expect(limit, F);
      c.lhs = std::abs(c.G_bar - c.limit_G);
      c.rhs = c.F_bar - c.limit_F;
      const bool ok = G_bar.converged && F_bar.converged &&
                      c.lhs <= c.rhs + 1e-10 * std::max(1.0, std::abs(c.rhs));
      if (!ok && report.passed) {
        report.passed = false;
        report.failing_cell = static_cast<int>(report.cells.size());
      }
      report.cells.push_back(c);
    }
  }
  report.l1_bound = *std::max_element(l1.begin(), l1.end()) / levels;
  report.l1_bounded = std::isfinite(report.l1_bound) && l1.back() <= 2.0 * l1.front() + 1e-12;
  if (!report.l1_bounded) report.passed = false;
  return report;
}

}  // namespace maxdiss
