// bloch.hpp — qubit Bloch vectors, entropy, and scenario trace records

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "recoh/errors.hpp"
#include "recoh/util.hpp"

namespace recoh {

struct BlochState {
    std::array<double, 3> rho{0.0, 0.0, 0.0};
    double time = 0.0;

    double length() const {
        return std::sqrt(rho[0] * rho[0] + rho[1] * rho[1] + rho[2] * rho[2]);
    }

    // von Neumann entropy in nats from the Bloch eigenvalues (1 +- r)/2
    double entropy() const {
        const double r = std::min(length(), 1.0);
        const double lp = 0.5 * (1.0 + r);
        const double lm = 0.5 * (1.0 - r);
        auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
        return -(xlnx(lp) + xlnx(lm));
    }

    void validate() const {
        if (length() > 1.0 + 1e-9)
            throw ValidationError("Bloch vector longer than 1");
        for (double c : rho)
            if (!std::isfinite(c)) throw ValidationError("Bloch components must be finite");
    }
};

struct TraceSample {
    double t = 0.0;
    std::array<double, 3> rho{0.0, 0.0, 0.0};
    cplx J{1.0, 0.0};
    double adiabaticity = 0.0;
    double entropy = 0.0;
    double theta_R = std::numeric_limits<double>::quiet_NaN();
};

struct DephasingTrace {
    std::vector<TraceSample> samples;
    bool has_theta_r = false;
};

} // namespace recoh
