#pragma once

// Atomic Young measures on the phase space, cellwise entropy-production
// measures, their local partial order, chain suprema, maximal selection and
// the concentration-defect inequality for weakly converging sequences.

#include "maxdiss/thermo.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace maxdiss {

/// Periodic space-time grid: n_t time intervals of length dt, n_x cells of
/// width dx.
struct SpaceTimeGrid {
  int n_t = 1;
  int n_x = 1;
  double dt = 1.0;
  double dx = 1.0;

  bool operator==(const SpaceTimeGrid&) const = default;
  void validate() const;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotAChain : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InitialDataMismatch : public std::invalid_argument {
 public:
  InitialDataMismatch(const std::string& what, int x) : std::invalid_argument(what), cell_x(x) {}
  int cell_x;
};

struct Atom {
  double weight = 1.0;
  ConsState state;
};

using Observable = std::function<double(const ConsState&)>;

/// Probability measures U_{t,x} at the n_t + 1 time levels of a grid.
class YoungMeasureField {
 public:
  explicit YoungMeasureField(const SpaceTimeGrid& grid);

  const SpaceTimeGrid& grid() const { return grid_; }
  int levels() const { return grid_.n_t + 1; }

  const std::vector<Atom>& cell(int t, int x) const { return atoms_[index(t, x)]; }

  /// Replaces the atoms of one cell. Weights must be positive and sum to 1
  /// within 1e-12.
  void set_cell(int t, int x, std::vector<Atom> atoms);

 private:
  std::size_t index(int t, int x) const;

  SpaceTimeGrid grid_;
  std::vector<std::vector<Atom>> atoms_;
};

/// Sum of weight * g(state) with extended-real absorption: any -inf term
/// gives -inf, any +inf term gives +inf; both at once is a DomainError.
double expect(const YoungMeasureField& U, int t, int x, const Observable& g);
double expect(const std::vector<Atom>& atoms, const Observable& g);

/// One Dirac atom per cell; states[t][x] for t = 0..n_t.
YoungMeasureField dirac_field(const SpaceTimeGrid& grid,
                              const std::vector<std::vector<ConsState>>& states);

/// lambda U1 + (1 - lambda) U2, coalescing atoms closer than 1e-14.
YoungMeasureField convex_combination(const YoungMeasureField& U1, const YoungMeasureField& U2,
                                     double lambda);

/// Every t = 0 atom has rho > delta and E - E_kin > p_bar rho^gamma/(gamma-1) + delta.
bool check_initial_admissibility(const GasModel& model, const YoungMeasureField& U,
                                 double delta);

/// Nonnegative value per space-time cell (n_t x n_x).
class CellMeasure {
 public:
  CellMeasure(const SpaceTimeGrid& grid, std::vector<double> values);

  const SpaceTimeGrid& grid() const { return grid_; }
  double at(int t, int x) const { return values_[static_cast<std::size_t>(t) * grid_.n_x + x]; }
  const std::vector<double>& values() const { return values_; }
  double total() const;

 private:
  SpaceTimeGrid grid_;
  std::vector<double> values_;
};

/// Signed N x N matrix per cell.
struct MatrixCellMeasure {
  SpaceTimeGrid grid;
  std::vector<Eigen::MatrixXd> values;

  double total_variation() const;
};

enum class Order { Greater, Less, Equal, Incomparable };

std::string to_string(Order o);

struct Comparison {
  Order order = Order::Equal;
  int t = 0;
  int x = 0;
  /// s1 - s2 at the cell of largest |s1 - s2|.
  double difference = 0.0;
};

/// 1e-10 * max total mass of the two measures.
double default_tolerance(const CellMeasure& s1, const CellMeasure& s2);

Comparison compare(const CellMeasure& s1, const CellMeasure& s2, double tol);

/// Cellwise maximum of a chain; NotAChain if some pair is Incomparable.
CellMeasure sup_chain(const std::vector<CellMeasure>& chain, double tol = 0.0);

/// Nonnegative weights per cell.
using CellObservable = std::vector<double>;

/// Per-cell indicators for M = n_t n_x, otherwise indicators of M contiguous
/// blocks covering the grid.
std::vector<CellObservable> test_basis(const SpaceTimeGrid& grid, int M);

double pair(const CellMeasure& sigma, const CellObservable& g);

struct Candidate {
  YoungMeasureField field;
  CellMeasure sigma;
};

/// Indices of candidates no other candidate compares Greater to.
std::vector<int> select_maximal(const std::vector<Candidate>& candidates, double order_tol,
                                double data_tol = 1e-10);

struct IndexedField {
  double n = 1.0;
  YoungMeasureField field;
};

struct DefectCell {
  int t = 0;
  int x = 0;
  double G_bar = 0.0;
  double F_bar = 0.0;
  double limit_G = 0.0;
  double limit_F = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct DefectReport {
  bool passed = true;
  std::vector<DefectCell> cells;
  /// sup_n sum_cells dx |<U^n; F>| per level.
  double l1_bound = 0.0;
  bool l1_bounded = true;
  /// Weight carried by atoms whose states do not converge.
  double escaped_mass = 0.0;
  int failing_cell = -1;
};

/// Checks |G_bar - <U; G>| <= F_bar - <U; F> cellwise, where the bars are the
/// limits of <U^n; .> and U the atom-wise limit measure. The sequence must
/// have at least three terms with atoms listed in a consistent order;
/// limits are extrapolated assuming a_n = a + b / n.
DefectReport concentration_defect_check(const std::vector<IndexedField>& sequence,
                                        const Observable& G, const Observable& F);

}  // namespace maxdiss
