// coherent.hpp — multi-mode coherent-state bookkeeping: branch amplitudes,
// displacements, and log-space overlaps.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "recoh/bath.hpp"

namespace recoh {

// Per-mode complex amplitudes for one sigma_3 branch. Amplitudes are
// density-normalized: sum_k w_k |a_k|^2 approximates the continuum integral
// of |a(k)|^2 dk over the full line.
struct BranchAmplitudes {
    std::vector<cplx> amplitudes;
    std::uint64_t grid_tag = 0;  // fingerprint of the owning mode grid
    char branch = '+';

    void validate() const;
};

// Overlap <a|b> accumulated in log space; |J| can underflow to zero while
// log_overlap stays finite.
struct OverlapFactor {
    cplx log_overlap{0.0, 0.0};
    cplx J() const { return std::exp(log_overlap); }
    double abs_J() const { return std::exp(log_overlap.real()); }
};

// log <a|b> = sum_k w_k ( conj(a_k) b_k - (|a_k|^2 + |b_k|^2)/2 )
OverlapFactor pairwise_log_overlap(const BranchAmplitudes& a, const BranchAmplitudes& b,
                                   const std::vector<Mode>& grid);

BranchAmplitudes displace(const BranchAmplitudes& a, const std::vector<cplx>& shift);

// Dressed-state amplitude on the grid: a_k = branch * (i/2) eps h(k)/sqrt(omega_k).
// Valid for schedules starting at eps(0) = 0 (no frozen transient).
BranchAmplitudes adiabatic_branch_amplitudes(const BathSpec& bath, double eps, int branch);

} // namespace recoh
