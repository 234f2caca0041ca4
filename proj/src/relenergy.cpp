#include "maxdiss/relenergy.hpp"

#include <algorithm>
#include <cmath>

namespace maxdiss {

namespace {

struct RefData {
  ConsState cons;
  double e = 0.0;
  double s = 0.0;
  double p = 0.0;
  double entropy = 0.0;
  EntropyGradient grad;
};

RefData reference_data(const GasModel& model, const StandardState& ref) {
  if (!(ref.rho > 0.0) || !(ref.theta > 0.0)) {
    throw DomainError("reference state must have rho > 0 and theta > 0");
  }
  RefData d;
  d.e = internal_energy(model, ref.rho, ref.theta);
  d.s = specific_entropy(model, ref.rho, d.e);
  d.p = pressure(model, ref.rho, d.e);
  d.cons.rho = ref.rho;
  d.cons.m = ref.rho * ref.u;
  d.cons.E = 0.5 * ref.rho * ref.u.squaredNorm() + ref.rho * d.e;
  d.entropy = ref.rho * d.s;
  d.grad = entropy_gradient(model, d.cons);
  return d;
}

}  // namespace

double ballistic_free_energy(const GasModel& model, double rho, double theta, double Theta) {
  if (!(Theta > 0.0)) throw DomainError("ballistic free energy requires Theta > 0");
  const double e = internal_energy(model, rho, theta);
  return rho * (e - Theta * specific_entropy(model, rho, e));
}

double relative_energy_standard(const GasModel& model, const StandardState& state,
                                const StandardState& ref) {
  const double th = ref.theta;
  const double e_ref = internal_energy(model, ref.rho, th);
  const double s_ref = specific_entropy(model, ref.rho, e_ref);
  const double p_ref = pressure(model, ref.rho, e_ref);
  const double dH = e_ref - th * s_ref + p_ref / ref.rho;
  const double H = ballistic_free_energy(model, state.rho, state.theta, th);
  const double H_ref = ref.rho * (e_ref - th * s_ref);
  return 0.5 * state.rho * (state.u - ref.u).squaredNorm() + H - dH * (state.rho - ref.rho) - H_ref;
}

double relative_energy_conservative(const GasModel& model, const ConsState& s,
                                    const StandardState& ref) {
  const RefData d = reference_data(model, ref);
  const double S = total_entropy(model, s);
  if (S == -kInf) return kInf;
  if (S == kInf) return -kInf;
  const double lin = d.grad.d_rho * (s.rho - d.cons.rho) + d.grad.d_m.dot(s.m - d.cons.m) +
                     d.grad.d_E * (s.E - d.cons.E);
  return -ref.theta * (S - d.entropy - lin);
}

double relative_energy_expanded(const GasModel& model, const ConsState& s,
                                const StandardState& ref) {
  const RefData d = reference_data(model, ref);
  const double S = total_entropy(model, s);
  if (S == -kInf) return kInf;
  if (S == kInf) return -kInf;
  const double th = ref.theta;
  return s.E - th * S - s.m.dot(ref.u) + 0.5 * s.rho * ref.u.squaredNorm() + d.p -
         (d.e - th * d.s + d.p / ref.rho) * s.rho;
}

double relative_energy_scale(const GasModel& model, const ConsState& s, const StandardState& ref) {
  const RefData d = reference_data(model, ref);
  const double th = ref.theta;
  const double S = total_entropy(model, s);
  const double terms[] = {1.0,
                          std::abs(s.E),
                          std::abs(th * S),
                          std::abs(s.m.dot(ref.u)),
                          0.5 * s.rho * ref.u.squaredNorm(),
                          d.p,
                          std::abs(th * d.entropy),
                          d.cons.E,
                          std::abs((d.e - th * d.s + d.p / ref.rho) * s.rho)};
  return *std::max_element(std::begin(terms), std::end(terms));
}

double bregman_gap(const GasModel& model, const ConsState& s, const StandardState& ref) {
  if (!is_strictly_admissible(model, s)) {
    throw DomainError("bregman_gap requires an interior state");
  }
  return std::abs(relative_energy_expanded(model, s, ref) -
                  relative_energy_conservative(model, s, ref));
}

}  // namespace maxdiss
