// sudden.hpp — instantaneous spin rotation at t0: radiated field, overlap
// table, and the recoverable-vs-radiated coherence split via four-branch
// bookkeeping.

#pragma once

#include <array>
#include <string>

#include "recoh/bath.hpp"
#include "recoh/bloch.hpp"
#include "recoh/coherent.hpp"

namespace recoh {

struct RotationEvent {
    double theta = 0.0;  // rotation angle about sigma1, in [0, 2 pi)
    double t0 = 0.0;

    void validate() const {
        if (theta < 0.0 || theta >= 2.0 * kPi)
            throw ValidationError("rotation angle must lie in [0, 2 pi)");
        if (t0 < 0.0) throw ValidationError("rotation time must be non-negative");
    }
};

// Dressed pre-rotation configuration: adiabatically prepared at coupling
// eps_at_t0 with spin amplitudes (c_plus, c_minus) on the sigma3 branches.
struct SuddenSetup {
    BathSpec bath;
    double eps_at_t0 = 1.0;
    cplx c_plus{1.0, 0.0};
    cplx c_minus{0.0, 0.0};

    BlochState initial_bloch() const;
    void validate() const;
};

// Wrong-branch relaxation radiation: beta_k = i eps(t0) h(k)/sqrt(omega_k)
// times the free rotation exp(-i omega_k dt_after). Twice the dressed
// amplitude at t0, rotating freely.
BranchAmplitudes radiated_amplitude(const BathSpec& bath, double eps_t0, double dt_after);

struct OverlapEntry {
    std::string label;
    cplx closed_form;   // long-time closed form built from J(t) and J(t0)
    cplx direct;        // pairwise overlap of the explicit amplitude lists
    double discrepancy = 0.0;
    bool flagged = false;  // beyond the orthogonality-assumption budget
};

struct OverlapTable {
    std::array<OverlapEntry, 6> rows;
    // |sum w conj(alpha) beta| relative to the amplitude norms; the closed
    // forms assume this residual vanishes.
    double orthogonality_ratio = 0.0;
};

OverlapTable overlap_table(const BathSpec& bath, double eps_t0, double eps_t,
                           double dt_after);

struct SuddenOutcome {
    BlochState bloch_final;        // four-branch Gram computation (authoritative)
    BlochState bloch_closed_form;  // verbatim closed-form route
    OverlapTable table;            // overlaps at the pre-decoupling moment
    double real_loss_factor = 1.0; // final/initial transverse length (NaN if no transverse input)
    double closed_form_discrepancy = 0.0;  // max component gap between the two routes
};

// Delta-pulse rotation exp(-i theta sigma1 / 2) on the spin at t0, exact
// branch evolution afterwards, adiabatic re-decoupling by t_final.
SuddenOutcome apply_sudden_rotation(const SuddenSetup& setup, const RotationEvent& event,
                                    double t_final);

} // namespace recoh
