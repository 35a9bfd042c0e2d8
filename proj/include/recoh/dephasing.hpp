// dephasing.hpp — spin-1/2 dephasing under a coupling schedule: analytic
// branch-overlap evolution, an exact mode-resolved oracle, and sudden
// decoupling with free radiation.

#pragma once

#include "recoh/bath.hpp"
#include "recoh/bloch.hpp"
#include "recoh/coherent.hpp"

namespace recoh {

enum class OdeScheme {
    // Per-step integrating-factor update, exact for piecewise-linear eps(t).
    // Step count only needs to resolve the schedule envelope, not omega_max.
    ExactPropagator,
    // Classic fixed-step RK4 on the per-mode amplitude; requires
    // dt <= 0.1/omega_max. Kept as an independent cross-check.
    RungeKutta4,
};

// Adiabatic closed form: rho3 conserved, transverse coherence multiplied by
// J(t) = exp(-c eps(t)^2 D). Rejects schedules containing steps.
DephasingTrace run_analytic(const BathSpec& bath, const CouplingSchedule& s,
                            const BlochState& rho0, double sample_dt);

// Mode-resolved branch evolution: d a_k/dt = -i omega_k a_k - s (eps/2) h_k sqrt(omega_k)
// per branch s = +-1, J(t) from the pairwise branch overlap. Exact across
// step segments (amplitudes are continuous; only the Hamiltonian jumps).
DephasingTrace run_ode_oracle(const BathSpec& bath, const CouplingSchedule& s,
                              const BlochState& rho0, double dt,
                              OdeScheme scheme = OdeScheme::ExactPropagator);

struct DecoupleResult {
    DephasingTrace trace;
    double t_step = 0.0;
    double abs_J_at_step = 1.0;
    double min_abs_J_after = 1.0;
    double max_abs_J_after = 1.0;
};

// Adiabatic ramp to eps_max, hold, instantaneous decoupling, then free
// evolution of the radiated branch fields over t_after.
// t_ramp = 0 picks a ramp long enough that the non-adiabatic error bound
// stays below 1e-4; dt = 0 picks a step resolving the schedule envelope.
DecoupleResult run_sudden_decouple(const BathSpec& bath, double eps_max, double t_hold,
                                   double t_after, const BlochState& rho0,
                                   double t_ramp = 0.0, double dt = 0.0);

} // namespace recoh
