#include "maxdiss/measures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace maxdiss;

namespace {

const SpaceTimeGrid kGrid{2, 3, 0.1, 0.25};

YoungMeasureField uniform_field(const SpaceTimeGrid& g, const std::vector<Atom>& atoms) {
  YoungMeasureField U(g);
  for (int t = 0; t < U.levels(); ++t) {
    for (int x = 0; x < g.n_x; ++x) U.set_cell(t, x, atoms);
  }
  return U;
}

CellMeasure filled(const SpaceTimeGrid& g, double v) {
  return CellMeasure(g, std::vector<double>(static_cast<std::size_t>(g.n_t) * g.n_x, v));
}

CellMeasure bumped(const CellMeasure& s, int cell, double amount) {
  std::vector<double> v = s.values();
  v[cell] += amount;
  return CellMeasure(s.grid(), v);
}

const Observable kEnergy = [](const ConsState& s) { return s.E; };

}  // namespace

TEST(Expect, DiracAndMixtures) {
  const GasModel m(1.4, EntropyLaw::perfect_gas());
  EXPECT_EQ(expect({{1.0, make_cons(1, 0, 3)}}, kEnergy), 3.0);
  EXPECT_EQ(expect({{0.5, make_cons(1, 0, 0)}, {0.5, make_cons(1, 0, 2)}}, kEnergy), 1.0);
  const Observable S = [&m](const ConsState& s) { return total_entropy(m, s); };
  EXPECT_EQ(expect({{0.5, make_cons(1, 0, 1)}, {0.5, make_cons(1, 0, 0)}}, S), -kInf);
}

TEST(Expect, MixedInfinitiesThrow) {
  const Observable g = [](const ConsState& s) { return s.E > 1 ? kInf : -kInf; };
  EXPECT_THROW(expect({{0.5, make_cons(1, 0, 0)}, {0.5, make_cons(1, 0, 2)}}, g), DomainError);
}

TEST(Expect, LinearAndMonotone) {
  const std::vector<Atom> atoms{{0.25, make_cons(1, 0.5, 2)}, {0.75, make_cons(2, -1, 3)}};
  const Observable f = [](const ConsState& s) { return s.rho * s.rho; };
  const Observable g = [](const ConsState& s) { return s.m(0) + s.E; };
  const Observable h = [&](const ConsState& s) { return 2 * f(s) - 3 * g(s); };
  EXPECT_NEAR(expect(atoms, h), 2 * expect(atoms, f) - 3 * expect(atoms, g), 1e-14);
  EXPECT_GE(expect(atoms, f), 0.0);
}

TEST(YoungMeasureField, WeightsMustSumToOne) {
  YoungMeasureField U(kGrid);
  EXPECT_THROW(U.set_cell(0, 0, {{0.5, make_cons(1, 0, 1)}}), std::invalid_argument);
  EXPECT_NO_THROW(U.set_cell(0, 0, {{0.5, make_cons(1, 0, 1)}, {0.5, make_cons(1, 0, 2)}}));
}

TEST(DiracField, ExpectationIsPointValue) {
  std::vector<std::vector<ConsState>> states(kGrid.n_t + 1);
  for (int t = 0; t <= kGrid.n_t; ++t) {
    for (int x = 0; x < kGrid.n_x; ++x) states[t].push_back(make_cons(1 + x, t, 3 + t + x));
  }
  const YoungMeasureField U = dirac_field(kGrid, states);
  for (int t = 0; t <= kGrid.n_t; ++t) {
    for (int x = 0; x < kGrid.n_x; ++x) {
      ASSERT_EQ(U.cell(t, x).size(), 1u);
      EXPECT_EQ(expect(U, t, x, kEnergy), states[t][x].E);
    }
  }
}

TEST(ConvexCombination, Endpoints) {
  const YoungMeasureField a = uniform_field(kGrid, {{1.0, make_cons(1, 0, 1)}});
  const YoungMeasureField b = uniform_field(kGrid, {{1.0, make_cons(2, 0, 5)}});
  const YoungMeasureField c0 = convex_combination(a, b, 0.0);
  const YoungMeasureField c1 = convex_combination(a, b, 1.0);
  EXPECT_EQ(c0.cell(1, 1).size(), 1u);
  EXPECT_EQ(c0.cell(1, 1)[0].state.E, 5.0);
  EXPECT_EQ(c1.cell(1, 1)[0].state.E, 1.0);
  const YoungMeasureField h = convex_combination(a, b, 0.5);
  EXPECT_EQ(h.cell(0, 2).size(), 2u);
  EXPECT_EQ(expect(h, 0, 2, kEnergy), 3.0);
}

TEST(ConvexCombination, CommutesWithExpect) {
  const YoungMeasureField a = uniform_field(kGrid, {{0.3, make_cons(1, 1, 4)}, {0.7, make_cons(2, 0, 1)}});
  const YoungMeasureField b = uniform_field(kGrid, {{1.0, make_cons(1, 1, 4)}});
  const YoungMeasureField c = convex_combination(a, b, 0.4);
  EXPECT_EQ(c.cell(0, 0).size(), 2u);
  EXPECT_NEAR(expect(c, 0, 0, kEnergy), 0.4 * expect(a, 0, 0, kEnergy) + 0.6 * 4.0, 1e-14);
}

TEST(ConvexCombination, GridMismatch) {
  const YoungMeasureField a(kGrid);
  const YoungMeasureField b(SpaceTimeGrid{2, 4, 0.1, 0.25});
  EXPECT_THROW(convex_combination(a, b, 0.5), GridMismatch);
}

TEST(InitialAdmissibility, StrictThreshold) {
  const GasModel m(1.4, EntropyLaw::perfect_gas());
  EXPECT_TRUE(check_initial_admissibility(m, uniform_field(kGrid, {{1.0, make_cons(1, 0, 1)}}), 0.0));
  EXPECT_FALSE(check_initial_admissibility(m, uniform_field(kGrid, {{1.0, make_cons(0, 0, 1)}}), 0.0));
  const GasModel cold(1.4, EntropyLaw::cold_pressure(0.4));
  // p_bar rho^gamma / (gamma - 1) = 1 at rho = 1.
  EXPECT_FALSE(check_initial_admissibility(cold, uniform_field(kGrid, {{1.0, make_cons(1, 0, 1)}}), 0.0));
  EXPECT_TRUE(check_initial_admissibility(cold, uniform_field(kGrid, {{1.0, make_cons(1, 0, 1.1)}}), 0.05));
  EXPECT_FALSE(check_initial_admissibility(cold, uniform_field(kGrid, {{1.0, make_cons(1, 0, 1.1)}}), 0.2));
}

TEST(Compare, Examples) {
  const CellMeasure s = filled(kGrid, 1.0);
  EXPECT_EQ(compare(s, s, 0.0).order, Order::Equal);
  const Comparison c = compare(bumped(s, 4, 0.5), s, 0.0);
  EXPECT_EQ(c.order, Order::Greater);
  EXPECT_EQ(c.t, 1);
  EXPECT_EQ(c.x, 1);
  EXPECT_EQ(c.difference, 0.5);
  EXPECT_EQ(compare(s, bumped(s, 4, 0.5), 0.0).order, Order::Less);
  EXPECT_EQ(compare(bumped(s, 0, 1), bumped(s, 5, 1), 0.0).order, Order::Incomparable);
  EXPECT_EQ(compare(bumped(s, 0, 1e-12), s, 1e-10).order, Order::Equal);
  EXPECT_THROW(compare(s, filled(SpaceTimeGrid{3, 2, 0.1, 0.25}, 1.0), 0.0), GridMismatch);
}

TEST(CellMeasure, RejectsNegativeMass) {
  EXPECT_THROW(CellMeasure(kGrid, {1, 1, 1, 1, 1, -1}), std::invalid_argument);
  EXPECT_THROW(CellMeasure(kGrid, {1, 1}), std::invalid_argument);
}

TEST(SupChain, Examples) {
  const CellMeasure s = filled(kGrid, 2.0);
  EXPECT_EQ(sup_chain({s}).values(), s.values());
  EXPECT_EQ(sup_chain({filled(kGrid, 1), s, filled(kGrid, 1.5)}).values(), s.values());
  EXPECT_THROW(sup_chain({bumped(s, 0, 1), bumped(s, 1, 1)}), NotAChain);
}

TEST(TestBasis, SeparatesAndIsNonnegative) {
  const auto full = test_basis(kGrid, 6);
  ASSERT_EQ(full.size(), 6u);
  const CellMeasure s(kGrid, {1, 2, 3, 4, 5, 6});
  for (int c = 0; c < 6; ++c) EXPECT_EQ(pair(s, full[c]), s.values()[c]);
  const auto coarse = test_basis(kGrid, 2);
  ASSERT_EQ(coarse.size(), 2u);
  double total = 0;
  for (const auto& g : coarse) {
    for (double w : g) EXPECT_GE(w, 0.0);
    total += pair(s, g);
  }
  EXPECT_EQ(total, 21.0);
  const CellMeasure other = bumped(s, 3, 1.0);
  bool separated = false;
  for (const auto& g : full) separated = separated || pair(s, g) != pair(other, g);
  EXPECT_TRUE(separated);
}

TEST(SelectMaximal, Examples) {
  const YoungMeasureField U = uniform_field(kGrid, {{1.0, make_cons(1, 0, 1)}});
  const CellMeasure s = filled(kGrid, 1.0);
  EXPECT_EQ(select_maximal({{U, s}}, 0.0), std::vector<int>{0});
  EXPECT_EQ(select_maximal({{U, s}, {U, bumped(s, 2, 1)}}, 0.0), std::vector<int>{1});
  EXPECT_EQ(select_maximal({{U, bumped(s, 0, 1)}, {U, bumped(s, 1, 1)}, {U, bumped(s, 2, 1)}}, 0.0),
            (std::vector<int>{0, 1, 2}));
}

TEST(SelectMaximal, AntichainAndDomination) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(0, 2);
  const YoungMeasureField U = uniform_field(kGrid, {{1.0, make_cons(1, 0, 1)}});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Candidate> c;
    for (int i = 0; i < 8; ++i) {
      std::vector<double> v(6);
      for (double& x : v) x = pick(rng);
      c.push_back({U, CellMeasure(kGrid, v)});
    }
    const std::vector<int> keep = select_maximal(c, 0.0);
    ASSERT_FALSE(keep.empty());
    for (int a : keep) {
      for (int b : keep) EXPECT_NE(compare(c[a].sigma, c[b].sigma, 0.0).order, Order::Greater);
    }
    for (int i = 0; i < 8; ++i) {
      if (std::find(keep.begin(), keep.end(), i) != keep.end()) continue;
      bool dominated = false;
      for (int a : keep) dominated = dominated || compare(c[a].sigma, c[i].sigma, 0.0).order == Order::Greater;
      EXPECT_TRUE(dominated);
    }
  }
}

TEST(SelectMaximal, InitialDataMismatch) {
  const YoungMeasureField a = uniform_field(kGrid, {{1.0, make_cons(1, 0, 1)}});
  YoungMeasureField b = a;
  b.set_cell(0, 2, {{1.0, make_cons(1, 0, 2)}});
  try {
    select_maximal({{a, filled(kGrid, 1)}, {b, filled(kGrid, 1)}}, 0.0);
    FAIL() << "expected InitialDataMismatch";
  } catch (const InitialDataMismatch& e) {
    EXPECT_EQ(e.cell_x, 2);
  }
}

TEST(ConcentrationDefect, MassEscape) {
  const SpaceTimeGrid g{1, 1, 1.0, 1.0};
  std::vector<IndexedField> seq;
  for (double n : {10.0, 20.0, 40.0, 80.0}) {
    seq.push_back({n, uniform_field(g, {{1.0 / n, make_cons(1, 0, n)}, {1.0 - 1.0 / n, make_cons(1, 0, 0)}})});
  }
  const DefectReport r = concentration_defect_check(seq, [](const ConsState& s) { return 0.5 * s.E; }, kEnergy);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.cells[0].G_bar, 0.5, 1e-12);
  EXPECT_NEAR(r.cells[0].F_bar, 1.0, 1e-12);
  EXPECT_NEAR(r.cells[0].lhs, 0.5, 1e-12);
  EXPECT_NEAR(r.cells[0].rhs, 1.0, 1e-12);
  // The escaping weight itself vanishes in the limit.
  EXPECT_NEAR(r.escaped_mass, 0.0, 1e-12);

  const DefectReport same = concentration_defect_check(seq, kEnergy, kEnergy);
  EXPECT_NEAR(same.cells[0].lhs, same.cells[0].rhs, 1e-12);
}

TEST(ConcentrationDefect, TightSequenceHasNoDefect) {
  const SpaceTimeGrid g{1, 2, 1.0, 0.5};
  std::vector<IndexedField> seq;
  for (double n : {4.0, 8.0, 16.0, 32.0}) {
    seq.push_back({n, uniform_field(g, {{0.5 + 1.0 / n, make_cons(1, 0, 2)}, {0.5 - 1.0 / n, make_cons(2, 1, 3)}})});
  }
  const DefectReport r = concentration_defect_check(seq, [](const ConsState& s) { return -s.E; }, kEnergy);
  EXPECT_TRUE(r.passed);
  for (const auto& c : r.cells) {
    EXPECT_NEAR(c.lhs, 0.0, 1e-10);
    EXPECT_NEAR(c.rhs, 0.0, 1e-10);
  }
}

TEST(ConcentrationDefect, ViolationIsReported) {
  // |G| <= F fails here, so the inequality can break.
  const SpaceTimeGrid g{1, 1, 1.0, 1.0};
  std::vector<IndexedField> seq;
  for (double n : {10.0, 20.0, 40.0}) {
    seq.push_back({n, uniform_field(g, {{1.0 / n, make_cons(1, 0, n)}, {1.0 - 1.0 / n, make_cons(1, 0, 0)}})});
  }
  const DefectReport r = concentration_defect_check(seq, [](const ConsState& s) { return 2 * s.E; }, kEnergy);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.failing_cell, 0);
}
