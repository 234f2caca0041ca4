#include "maxdiss/relenergy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace maxdiss;

namespace {

GasModel perfect(double g) { return GasModel(g, EntropyLaw::perfect_gas()); }

StandardState random_standard(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  return make_standard(std::pow(10.0, u(rng)), std::pow(10.0, u(rng)), 2 * u(rng));
}

}  // namespace

TEST(BallisticFreeEnergy, Values) {
  const GasModel m = perfect(2.0);
  EXPECT_NEAR(ballistic_free_energy(m, 1, 1, 1), 1.0, 1e-12);

  const GasModel g(1.4, EntropyLaw::third_law());
  const double e = internal_energy(g, 2.0, 0.7);
  const double s = specific_entropy(g, 2.0, e);
  EXPECT_NEAR(ballistic_free_energy(g, 2.0, 0.7, 0.7), 2.0 * (e - 0.7 * s), 1e-12);
  EXPECT_THROW(ballistic_free_energy(m, 1, 1, 0), DomainError);
}

TEST(RelativeEnergyStandard, EqualityAndKineticShift) {
  const GasModel m = perfect(1.4);
  const StandardState ref = make_standard(1.3, 0.8, 0.2);
  EXPECT_NEAR(relative_energy_standard(m, ref, ref), 0.0, 1e-14);
  StandardState moved = ref;
  moved.u(0) += 0.1;
  EXPECT_NEAR(relative_energy_standard(m, moved, ref), 0.5 * 1.3 * 0.01, 1e-14);
}

TEST(RelativeEnergyStandard, PositiveAndMatchesConservative) {
  std::mt19937_64 rng(5);
  for (double g : {1.4, 5.0 / 3.0, 2.0}) {
    const GasModel m = perfect(g);
    for (int k = 0; k < 2000; ++k) {
      const StandardState a = random_standard(rng), b = random_standard(rng);
      const double v = relative_energy_standard(m, a, b);
      const ConsState c = to_conservative(m, a);
      EXPECT_GT(v, 0.0);
      EXPECT_NEAR(v, relative_energy_conservative(m, c, b), 1e-10 * relative_energy_scale(m, c, b));
    }
  }
}

TEST(RelativeEnergyConservative, EqualityCase) {
  for (const GasModel& m : {perfect(1.4), GasModel(1.4, EntropyLaw::cold_pressure(0.5))}) {
    const StandardState ref = make_standard(0.9, 1.7, -0.4);
    EXPECT_NEAR(relative_energy_conservative(m, to_conservative(m, ref), ref), 0.0, 1e-12);
    EXPECT_NEAR(bregman_gap(m, to_conservative(m, ref), ref), 0.0, 1e-12);
  }
}

TEST(RelativeEnergyConservative, VacuumBranch) {
  const GasModel m = perfect(1.4);
  const StandardState ref = make_standard(1.2, 0.9, 0.3);
  const double p = 1.2 * 0.9;  // perfect gas: p = rho theta
  // E - theta S(0,0,0) + p~ with S(0,0,0) = 0.
  EXPECT_NEAR(relative_energy_conservative(m, make_cons(0, 0, 0), ref), p, 1e-12);
  EXPECT_NEAR(relative_energy_conservative(m, make_cons(0, 0, 2), ref), 2.0 + p, 1e-12);
}

TEST(RelativeEnergyConservative, InadmissibleIsInfinite) {
  const GasModel m = perfect(1.4);
  const StandardState ref = make_standard(1, 1, 0);
  EXPECT_EQ(relative_energy_conservative(m, make_cons(1, 0, 0), ref), kInf);
  EXPECT_EQ(relative_energy_conservative(m, make_cons(0, 1, 1), ref), kInf);
  const GasModel cold(2.0, EntropyLaw::cold_pressure(1.0));
  EXPECT_EQ(relative_energy_conservative(cold, make_cons(1, 0, 0.4), to_standard(cold, make_cons(1, 0, 2))), kInf);
}

TEST(RelativeEnergyConservative, CoercivityOnRandomPairs) {
  std::mt19937_64 rng(6);
  for (const GasModel& m : {perfect(5.0 / 3.0), GasModel(1.4, EntropyLaw::third_law()),
                            GasModel(2.0, EntropyLaw::cold_pressure(0.5))}) {
    for (int k = 0; k < 2000; ++k) {
      const StandardState ref = random_standard(rng);
      const ConsState s = to_conservative(m, random_standard(rng));
      const double scale = relative_energy_scale(m, s, ref);
      EXPECT_GE(relative_energy_conservative(m, s, ref), -1e-12 * scale);
      EXPECT_LE(bregman_gap(m, s, ref), 1e-10 * scale);
      EXPECT_NEAR(relative_energy_expanded(m, s, ref), relative_energy_conservative(m, s, ref), 1e-10 * scale);
    }
  }
}

TEST(BregmanGap, WrongGradientIsDetected) {
  // Bregman form assembled with the momentum derivative negated.
  const GasModel m = perfect(1.4);
  const StandardState ref = make_standard(1.0, 1.0, 0.8);
  const ConsState r = to_conservative(m, ref);
  const ConsState s = make_cons(1.3, 0.2, 2.0);
  const EntropyGradient g = entropy_gradient(m, r);
  const double wrong = -ref.theta * (total_entropy(m, s) - total_entropy(m, r) - g.d_rho * (s.rho - r.rho) +
                                     g.d_m(0) * (s.m(0) - r.m(0)) - g.d_E * (s.E - r.E));
  const double scale = relative_energy_scale(m, s, ref);
  EXPECT_GT(std::abs(wrong - relative_energy_expanded(m, s, ref)), 1e3 * 1e-10 * scale);
  EXPECT_LE(bregman_gap(m, s, ref), 1e-10 * scale);
}
