// spin_boson.hpp — tunneling spin with sigma3 bath coupling: renormalized
// splitting Omega J(t), adiabatic Bloch evolution, entropy cycling.

#pragma once

#include <complex>
#include <optional>
#include <string>

#include "recoh/bath.hpp"
#include "recoh/bloch.hpp"

namespace recoh {

struct SpinBosonSpec {
    double omega = 0.1;  // bare tunneling frequency, << bath mass
    BathSpec bath;
    CouplingSchedule schedule;
    cplx c_plus{1.0, 0.0};   // initial amplitude on |+>_{sigma3}
    cplx c_minus{0.0, 0.0};  // initial amplitude on |->_{sigma3}

    BlochState initial_bloch() const;

    // Throws on hard violations; returns a warning string when Omega/m is
    // above the comfortable adiabatic range (0.05) but still allowed (<= 0.2).
    std::optional<std::string> validate() const;
};

// Instantaneous dressed splitting (1/2) Omega J(t)
double renormalized_splitting(const SpinBosonSpec& spec, double t);

// Adiabatic evolution: rotation angle theta_R(t) = Omega * integral of J,
// Bloch vector (J rho01, J rho02, rho03). Trace carries theta_R per sample.
DephasingTrace run_adiabatic(const SpinBosonSpec& spec, double sample_dt);

struct EntropyCycleStats {
    double S_min = 0.0;
    double S_max = 0.0;
    double period = 0.0;  // full Bloch-vector cycle, ~ 2 pi/(Omega J) at constant eps
};

// Requires the trace to span at least one full rotation period.
EntropyCycleStats entropy_cycle_stats(const DephasingTrace& trace);

} // namespace recoh
