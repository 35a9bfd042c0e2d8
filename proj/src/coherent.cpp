#include "recoh/coherent.hpp"

#include <cmath>

namespace recoh {

void BranchAmplitudes::validate() const {
    for (const cplx& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw ValidationError("branch amplitudes must be finite");
    }
    if (branch != '+' && branch != '-')
        throw ValidationError("branch label must be '+' or '-'");
}

OverlapFactor pairwise_log_overlap(const BranchAmplitudes& a, const BranchAmplitudes& b,
                                   const std::vector<Mode>& grid) {
    if (a.amplitudes.size() != grid.size() || b.amplitudes.size() != grid.size())
        throw ValidationError("amplitude list length does not match the mode grid");
    if (a.grid_tag != b.grid_tag)
        throw ValidationError("overlap requires both amplitude lists on the same grid");

    OverlapFactor out;
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx& x = a.amplitudes[i];
        const cplx& y = b.amplitudes[i];
        acc += grid[i].weight *
               (std::conj(x) * y - 0.5 * (std::norm(x) + std::norm(y)));
    }
    out.log_overlap = acc;
    return out;
}

BranchAmplitudes displace(const BranchAmplitudes& a, const std::vector<cplx>& shift) {
    if (shift.size() != a.amplitudes.size())
        throw ValidationError("displacement shift length does not match amplitudes");
    BranchAmplitudes out = a;
    for (std::size_t i = 0; i < shift.size(); ++i) out.amplitudes[i] += shift[i];
    return out;
}

BranchAmplitudes adiabatic_branch_amplitudes(const BathSpec& bath, double eps, int branch) {
    if (eps < 0.0) throw ValidationError("coupling value must be non-negative");
    if (branch != 1 && branch != -1)
        throw ValidationError("branch must be +1 or -1");
    BranchAmplitudes out;
    out.branch = branch > 0 ? '+' : '-';
    out.grid_tag = bath.grid_fingerprint();
    out.amplitudes.reserve(bath.modes.size());
    const cplx pre = cplx(0.0, 0.5 * branch * eps);
    for (const Mode& mo : bath.modes)
        out.amplitudes.push_back(pre * bath.h_hat(mo.k) / std::sqrt(bath.omega(mo.k)));
    return out;
}

} // namespace recoh
