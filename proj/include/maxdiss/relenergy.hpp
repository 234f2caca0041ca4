#pragma once

// Ballistic free energy and the relative energy of a phase-space point with
// respect to a strictly admissible reference in standard variables.

#include "maxdiss/thermo.hpp"

namespace maxdiss {

/// H_Theta(rho, theta) = rho (e(rho, theta) - Theta s(rho, theta)).
double ballistic_free_energy(const GasModel& model, double rho, double theta, double Theta);

/// 1/2 rho |u - u~|^2 + H(rho, theta) - dH/drho(rho~, theta~)(rho - rho~) - H(rho~, theta~)
/// with H = H_{theta~}. Both states must be strictly admissible.
double relative_energy_standard(const GasModel& model, const StandardState& state,
                                const StandardState& ref);

/// Relative energy in conservative variables, evaluated as
/// -theta~ [S(U) - S(U~) - grad S(U~) . (U - U~)]. Extended-valued: +inf
/// whenever the total entropy of `s` is -inf.
double relative_energy_conservative(const GasModel& model, const ConsState& s,
                                    const StandardState& ref);

/// The same quantity assembled term by term:
/// E - theta~ S - m.u~ + 1/2 rho |u~|^2 + p~ - (e~ - theta~ s~ + p~/rho~) rho.
double relative_energy_expanded(const GasModel& model, const ConsState& s,
                                const StandardState& ref);

/// Magnitude of the largest term entering either evaluation; the natural
/// unit for round-off in the relative energy.
double relative_energy_scale(const GasModel& model, const ConsState& s, const StandardState& ref);

/// |expanded - Bregman|. Both states must be interior.
double bregman_gap(const GasModel& model, const ConsState& s, const StandardState& ref);

}  // namespace maxdiss
