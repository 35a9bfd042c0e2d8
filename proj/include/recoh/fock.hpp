// fock.hpp — exact split-step evolution of spin x truncated multi-mode Fock
// space under the full time-dependent Hamiltonian, with partial trace to the
// spin. Brute-force reference for every closed-form result.

#pragma once

#include <vector>

#include "recoh/bath.hpp"
#include "recoh/bloch.hpp"

namespace recoh {

struct OracleConfig {
    int n_modes = 1;
    int fock_dim = 8;                     // per-mode truncation d
    std::vector<double> mode_freqs;       // omega_j
    std::vector<double> mode_couplings;   // g_j in H = sum 1/2 (pi_j - eps g_j sigma3)^2 + ...
    double dt = 0.01;                     // Trotter step
    CouplingSchedule schedule;
    double tunneling_omega = 0.0;         // (Omega/2) sigma1 term; 0 allowed
    double sample_dt = 0.0;               // 0 -> every 20 steps

    std::size_t field_dim() const;
    std::size_t total_dim() const { return 2 * field_dim(); }
    void validate() const;

    // Few-mode continuum surrogate: mode frequencies at quantiles of the
    // h^2/omega spectral density, couplings sized so the branch overlap
    // matches the grid exponent. Validity window T < 2 pi / min mode spacing.
    static OracleConfig bath_surrogate(const BathSpec& bath, int n_modes, int fock_dim,
                                       double dt, CouplingSchedule schedule,
                                       double tunneling_omega = 0.0);
};

struct FockState {
    std::vector<cplx> amplitudes;  // length 2 d^n, spin slowest index
    double time = 0.0;
};

struct OracleSample {
    double t = 0.0;
    std::array<double, 3> rho{0.0, 0.0, 0.0};
    double norm = 1.0;
    double leakage = 0.0;  // max top-level occupation over modes
};

struct OracleResult {
    std::vector<OracleSample> samples;
    double max_norm_drift = 0.0;
    double max_leakage = 0.0;
    double recurrence_time = 0.0;  // 2 pi / min mode spacing (surrogate validity)
};

// Evolve spin x vacuum with a pure initial spin state (|rho| = 1 within 1e-6).
// Throws OracleInvalid on norm drift > 1e-6 or truncation leakage > 1e-4.
OracleResult evolve(const OracleConfig& cfg, const BlochState& initial_spin);

// Reduced spin Bloch vector by summing over field indices
BlochState partial_trace_spin(const FockState& state);

// Exact dressed-branch overlap of the discrete model at coupling eps:
// exp(-eps^2 sum_j g_j^2/omega_j)
double expected_branch_overlap(const OracleConfig& cfg, double eps);

// Truncated coherent state |alpha| in a d-level Fock space (normalized)
std::vector<cplx> coherent_fock_vector(int d, cplx alpha);

} // namespace recoh
