// oscillator.hpp — harmonic oscillator against the massive bath: mass
// renormalization, position-space density matrix with the Gaussian
// decoherence kernel, fringe visibility.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "recoh/bath.hpp"

namespace recoh {

struct GaussPacket {
    double center = 0.0;    // q-bar
    double momentum = 0.0;  // p-bar
    double width = 1.0;     // position stddev of |psi|^2
    cplx weight{1.0, 0.0};
};

struct PositionGrid {
    double q_min = -10.0;
    double q_max = 10.0;
    int n_points = 512;

    double dq() const { return (q_max - q_min) / (n_points - 1); }
    std::vector<double> points() const;
};

struct OscillatorSpec {
    double omega = 1.0;  // bare frequency, << bath mass
    std::vector<GaussPacket> packets;
    PositionGrid grid;

    void validate(const BathSpec& bath) const;
};

struct RenormalizationReport {
    double M = 1.0;            // renormalized mass factor 1 + eps^2 K
    double omega_tilde = 1.0;  // Omega / sqrt(M)
    double kernel_coeff = 0.0; // kappa multiplying (q - q')^2
    double K = 0.0;            // mass-kernel integral
    double quadrature_error = 0.0;
};

struct PositionDensityMatrix {
    Eigen::MatrixXcd rho;
    std::vector<double> q;
    double time = 0.0;

    double grid_trace() const;
    void validate() const;  // Hermitian, unit trace, real non-negative diagonal
};

RenormalizationReport renormalization(const BathSpec& bath, double eps, double omega = 1.0);

// Free renormalized-oscillator propagation of the packet superposition
// (exact Gaussian evolution through the quadratic flow), multiplied by the
// instantaneous kernel exp(-kappa(eps(t)) (q-q')^2).
PositionDensityMatrix evolve_reduced(const OscillatorSpec& spec, const BathSpec& bath,
                                     const CouplingSchedule& s, double t);

// Time at which the first two packet centers next coincide (fringe readout
// instant for recombination experiments).
double recombination_time(const OscillatorSpec& spec, const BathSpec& bath,
                          const CouplingSchedule& s);

struct Visibility {
    double value = 0.0;
    bool fringes_found = false;
};

// (P_max - P_min)/(P_max + P_min) across the central interference region of
// the position distribution. Flat distributions return 0 with the flag unset.
Visibility fringe_visibility(const PositionDensityMatrix& rho);

// Diagnostic bound on the neglected vacuum-forcing term: steady-state
// <delta q^2> relative to the ground-state width, evaluated on the mode grid.
// Small compared to omega_tilde/m whenever m >> omega_tilde.
double forcing_deviation(const OscillatorSpec& spec, const BathSpec& bath, double eps);

} // namespace recoh
