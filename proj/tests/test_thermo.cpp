#include "maxdiss/thermo.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace maxdiss;

namespace {

GasModel perfect(double g) { return GasModel(g, EntropyLaw::perfect_gas()); }

double fd_entropy_dE(const GasModel& m, ConsState s) {
  const double h = 1e-6;
  ConsState a = s, b = s;
  a.E += h;
  b.E -= h;
  return (total_entropy(m, a) - total_entropy(m, b)) / (2 * h);
}

}  // namespace

TEST(Pressure, DirectEvaluation) {
  EXPECT_DOUBLE_EQ(pressure(perfect(1.4), 2.0, 5.0), 4.0);
  EXPECT_DOUBLE_EQ(pressure(perfect(2.0), 1.0, 1.0), 1.0);
  EXPECT_NEAR(pressure(perfect(5.0 / 3.0), 3.0, 2.0), 4.0, 1e-14);
}

TEST(Pressure, RejectsNonPositiveArguments) {
  EXPECT_THROW(pressure(perfect(1.4), 0.0, 1.0), DomainError);
  EXPECT_THROW(pressure(perfect(1.4), 1.0, -1.0), DomainError);
}

TEST(KineticEnergy, Branches) {
  Vec m(1);
  m << 4.0;
  EXPECT_DOUBLE_EQ(kinetic_energy(2.0, m), 4.0);
  EXPECT_EQ(kinetic_energy(0.0, Vec::Zero(1)), 0.0);
  m << 1.0;
  EXPECT_EQ(kinetic_energy(0.0, m), kInf);
}

TEST(TotalEntropy, RegularVacuumAndCold) {
  EXPECT_NEAR(total_entropy(perfect(2.0), make_cons(1, 0, 1)), 0.0, 1e-15);

  // rho S((gamma - 1) E / rho^gamma) along rho = 10^-k tends to zero.
  const GasModel m = perfect(1.4);
  double last = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double rho = std::pow(10.0, -k);
    last = rho * std::log(0.4 / std::pow(rho, 1.4)) / 0.4;
  }
  EXPECT_NEAR(total_entropy(m, make_cons(0, 0, 1)), 0.0, 1e-9);
  EXPECT_NEAR(last, 0.0, 1e-9);

  const GasModel cold(2.0, EntropyLaw::cold_pressure(1.0));
  EXPECT_EQ(total_entropy(cold, make_cons(1, 0, 0.4)), -kInf);
}

TEST(TotalEntropy, OffRegionIsMinusInfinity) {
  const GasModel m = perfect(1.4);
  EXPECT_EQ(total_entropy(m, make_cons(0, 1, 1)), -kInf);
  EXPECT_EQ(total_entropy(m, make_cons(1, 0, 0)), -kInf);
  EXPECT_EQ(total_entropy(m, make_cons(-1, 0, 1)), -kInf);
}

TEST(Temperature, MatchesDifferenceOracle) {
  const GasModel m = perfect(2.0);
  EXPECT_NEAR(temperature(m, 1.0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(1.0 / fd_entropy_dE(m, make_cons(1, 0, 1)), 1.0, 1e-8);
  for (double g : {1.4, 5.0 / 3.0, 2.0}) {
    for (double e : {0.1, 1.0, 7.0}) EXPECT_NEAR(temperature(perfect(g), 1.0, e), (g - 1) * e, 1e-13 * e);
  }
}

TEST(Temperature, VanishesAtColdThreshold) {
  const GasModel m(1.4, EntropyLaw::cold_pressure(0.5));
  // Z = 0.4 e for rho = 1; approach Z -> 0.5.
  double prev = kInf;
  for (double dz : {1e-1, 1e-2, 1e-4, 1e-6, 1e-9, 1e-12}) {
    const double theta = temperature(m, 1.0, (0.5 + dz) / 0.4);
    EXPECT_LT(theta, prev);
    prev = theta;
  }
  EXPECT_LT(prev, 1e-2);
  EXPECT_THROW(temperature(m, 1.0, 0.5 / 0.4), DomainError);
}

TEST(EntropyGradient, ClosedFormAgainstDifferences) {
  const GasModel m = perfect(2.0);
  const EntropyGradient g0 = entropy_gradient(m, make_cons(1, 0, 1));
  EXPECT_NEAR(g0.d_E, 1.0, 1e-14);
  EXPECT_EQ(g0.d_m(0), 0.0);

  const ConsState s = make_cons(1, 1, 1.5);
  const EntropyGradient g = entropy_gradient(m, s);
  EXPECT_NEAR(g.d_m(0), -1.0 / temperature(m, 1.0, 1.0), 1e-14);
  const double h = 1e-6;
  ConsState a = s, b = s;
  a.m(0) += h;
  b.m(0) -= h;
  EXPECT_NEAR((total_entropy(m, a) - total_entropy(m, b)) / (2 * h), g.d_m(0), 1e-6);
  EXPECT_NEAR(fd_entropy_dE(m, s), g.d_E, 1e-6);
}

TEST(EntropyGradient, RejectsVacuumAndCold) {
  EXPECT_THROW(entropy_gradient(perfect(1.4), make_cons(0, 0, 1)), DomainError);
  const GasModel cold(2.0, EntropyLaw::cold_pressure(1.0));
  EXPECT_THROW(entropy_gradient(cold, make_cons(1, 0, 0.4)), DomainError);
}

TEST(EntropyHessian, NegativeSemidefiniteOnShippedLaws) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const GasModel& m : {perfect(1.4), GasModel(1.4, EntropyLaw::third_law()),
                            GasModel(5.0 / 3.0, EntropyLaw::cold_pressure(0.5))}) {
    for (int k = 0; k < 200; ++k) {
      const double rho = std::pow(10.0, u(rng));
      const double z = m.p_bar() + std::pow(10.0, 2 * u(rng));
      const double v = u(rng);
      const ConsState s = make_cons(rho, rho * v, 0.5 * rho * v * v + z * std::pow(rho, m.gamma()) / (m.gamma() - 1));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entropy_hessian(m, s));
      EXPECT_LE(eig.eigenvalues().maxCoeff(), 1e-8 * eig.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
}

TEST(Renormalized, VacuumIdentityAndBound) {
  const GasModel m = perfect(1.4);
  const CutoffFunction chi = CutoffFunction::standard(1.0);
  EXPECT_EQ(renormalized_entropy(m, chi, make_cons(0, 0, 1)), 0.0);

  // S(Z) = 0 at Z = 1.
  const ConsState zero = make_cons(2.0, 0.0, std::pow(2.0, 1.4) / 0.4);
  EXPECT_NEAR(renormalized_entropy(m, chi_K(chi, 10), zero), total_entropy(m, zero), 1e-14);

  // S(Z) = 50.
  const ConsState hot = make_cons(2.0, 0.0, std::exp(50 * 0.4) * std::pow(2.0, 1.4) / 0.4);
  EXPECT_LE(renormalized_entropy(m, chi, hot), 2.0);
}

TEST(ChiK, ScalingProperties) {
  const CutoffFunction chi = CutoffFunction::standard(2.0);
  EXPECT_EQ(chi_K(chi, 10)(5.0), 5.0);
  for (double z : {-3.0, 0.5, 1.5, 40.0}) EXPECT_EQ(chi_K(chi, 1)(z), chi(z));
  double prev = -kInf;
  for (int K = 1; K <= 1024; K *= 2) {
    const double v = chi_K(chi, K)(300.0);
    EXPECT_GE(v, prev);
    EXPECT_LE(v, 300.0);
    prev = v;
  }
  EXPECT_EQ(prev, 300.0);
  EXPECT_DOUBLE_EQ(chi_K(chi, 8).bound(), 16.0);
}

TEST(ChiK, CustomCutoffContract) {
  EXPECT_NO_THROW(CutoffFunction::custom([](double z) { return z <= 1 ? z : 1.0; }, 1.0));
  EXPECT_THROW(CutoffFunction::custom([](double z) { return z; }, 1.0), ContractViolation);
  EXPECT_THROW(CutoffFunction::custom([](double z) { return z <= 1 ? z : z * z; }, 5.0), ContractViolation);
}

TEST(Hypotheses, PerfectGasPasses) {
  const GasModel m = perfect(1.4);
  const HypothesisReport r = verify_hypotheses(m, default_z_samples(m));
  EXPECT_TRUE(r.passed) << r.to_text();
  EXPECT_LE(r.growth_constant, std::max(1.0, 1.0 / 0.4) + 1e-12);
  EXPECT_NE(r.to_text().find("verdict pass"), std::string::npos);
}

TEST(Hypotheses, ConvexSyntheticLawFails) {
  const GasModel m(1.4, EntropyLaw::power(2.0));
  const HypothesisReport r = verify_hypotheses(m, default_z_samples(m));
  EXPECT_FALSE(r.passed);
  bool stability_failed = false;
  for (const auto& c : r.checks) stability_failed = stability_failed || (c.name == "stability" && !c.passed);
  EXPECT_TRUE(stability_failed);
}

TEST(Hypotheses, ShippedLawsPass) {
  for (double g : {1.4, 5.0 / 3.0, 2.0}) {
    for (const EntropyLaw& law : {EntropyLaw::third_law(), EntropyLaw::cold_pressure(0.5)}) {
      const GasModel m(g, law);
      EXPECT_TRUE(verify_hypotheses(m, default_z_samples(m)).passed);
    }
  }
}

TEST(HessianH, MatchesDifferenceOracle) {
  const GasModel m = perfect(2.0);
  const HessianH r = hessian_h(m, 1.0, 1.0);
  auto h = [](double rho, double p) { return rho * std::log(p / (rho * rho)); };
  const double d = 1e-4;
  const double hrr = (h(1 + d, 1) - 2 * h(1, 1) + h(1 - d, 1)) / (d * d);
  const double hpp = (h(1, 1 + d) - 2 * h(1, 1) + h(1, 1 - d)) / (d * d);
  const double hrp = (h(1 + d, 1 + d) - h(1 + d, 1 - d) - h(1 - d, 1 + d) + h(1 - d, 1 - d)) / (4 * d * d);
  EXPECT_NEAR(r.H(0, 0), hrr, 1e-5 * std::abs(hrr));
  EXPECT_NEAR(r.H(1, 1), hpp, 1e-5 * std::abs(hpp));
  EXPECT_NEAR(r.H(0, 1), hrp, 1e-5 * std::abs(hrp));
  EXPECT_GE(r.H.determinant(), -1e-14);
  EXPECT_LT(r.H.trace(), 0.0);
  EXPECT_TRUE(r.concave);
}

TEST(HessianH, SyntheticLawNotConcave) {
  EXPECT_FALSE(hessian_h(GasModel(1.4, EntropyLaw::power(2.0)), 1.0, 1.0).concave);
  EXPECT_THROW(hessian_h(GasModel(1.4, EntropyLaw::cold_pressure(1.0)), 1.0, 0.5), DomainError);
}

TEST(ChangeOfVariables, ExamplesAndRoundTrip) {
  const GasModel m = perfect(2.0);
  const ConsState c = to_conservative(m, make_standard(1, 1, 0));
  EXPECT_NEAR(c.rho, 1.0, 1e-15);
  EXPECT_NEAR(c.m(0), 0.0, 1e-15);
  EXPECT_NEAR(c.E, 1.0, 1e-12);

  for (const GasModel& g : {m, GasModel(1.4, EntropyLaw::third_law()), GasModel(1.4, EntropyLaw::cold_pressure(0.5))}) {
    const StandardState back = to_standard(g, to_conservative(g, make_standard(2, 3, 1)));
    EXPECT_NEAR(back.rho, 2.0, 1e-12);
    EXPECT_NEAR(back.theta, 3.0, 3e-12);
    EXPECT_NEAR(back.u(0), 1.0, 1e-12);
  }
  EXPECT_THROW(to_standard(m, make_cons(0, 0, 1)), DomainError);
}

TEST(GasModel, RejectsGammaAtMostOne) {
  EXPECT_THROW(GasModel(1.0, EntropyLaw::perfect_gas()), std::invalid_argument);
}

TEST(KineticEnergy, JointlyConvex) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> r(0.0, 3.0), m(-3.0, 3.0);
  for (int k = 0; k < 10000; ++k) {
    const double ra = r(rng), rb = r(rng);
    Vec ma(1), mb(1);
    ma << m(rng);
    mb << m(rng);
    for (double l : {0.25, 0.5, 0.75}) {
      const double mix = kinetic_energy(l * ra + (1 - l) * rb, l * ma + (1 - l) * mb);
      const double chord = l * kinetic_energy(ra, ma) + (1 - l) * kinetic_energy(rb, mb);
      EXPECT_LE(mix, chord * (1 + 1e-12) + 1e-14);
    }
  }
}

TEST(TotalEntropy, VacuumBranchIsUpperLimit) {
  for (const GasModel& m : {perfect(1.4), GasModel(1.4, EntropyLaw::third_law()),
                            GasModel(2.0, EntropyLaw::cold_pressure(0.5))}) {
    const double E = 1.5;
    const double at_vacuum = total_entropy(m, make_cons(0, 0, E));
    double prev = kInf;
    for (int k = 2; k <= 10; ++k) {
      const double rho = std::pow(10.0, -k);
      const double v = total_entropy(m, make_cons(rho, 0, E));
      EXPECT_LE(std::abs(v - at_vacuum), std::abs(prev - at_vacuum) + 1e-15);
      prev = v;
    }
    EXPECT_NEAR(prev, at_vacuum, 1e-7);
  }
}

TEST(ColdPressure, PressureOverRhoGammaFallsToThreshold) {
  const GasModel m(1.4, EntropyLaw::cold_pressure(0.5));
  for (double rho : {0.5, 1.0, 3.0}) {
    double prev = kInf;
    for (double theta : {10.0, 1.0, 0.1, 1e-2, 1e-3}) {
      const double z = pressure(m, rho, internal_energy(m, rho, theta)) / std::pow(rho, 1.4);
      EXPECT_LE(z, prev);
      EXPECT_GT(z, 0.5);
      prev = z;
    }
    EXPECT_LT(prev - 0.5, 1e-2);
  }
}
