#include "recoh/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace recoh {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

// Apply a d x d operator to mode `mode` of psi (layout: spin slowest, then
// mode 0 ... mode n-1 with mode n-1 fastest), restricted to one spin block.
void apply_mode_op(std::vector<cplx>& psi, const MatrixXcd& U, int mode, int n_modes,
                   int d, std::size_t field_dim, int spin) {
    std::size_t stride = 1;
    for (int j = n_modes - 1; j > mode; --j) stride *= static_cast<std::size_t>(d);
    const std::size_t group = stride * static_cast<std::size_t>(d);
    const std::size_t base_spin = static_cast<std::size_t>(spin) * field_dim;

    std::vector<cplx> tmp(static_cast<std::size_t>(d));
    for (std::size_t blk = 0; blk < field_dim; blk += group) {
        for (std::size_t in = 0; in < stride; ++in) {
            const std::size_t base = base_spin + blk + in;
            for (int m = 0; m < d; ++m)
                tmp[static_cast<std::size_t>(m)] = psi[base + static_cast<std::size_t>(m) * stride];
            for (int m = 0; m < d; ++m) {
                cplx acc{0.0, 0.0};
                for (int mp = 0; mp < d; ++mp)
                    acc += U(m, mp) * tmp[static_cast<std::size_t>(mp)];
                psi[base + static_cast<std::size_t>(m) * stride] = acc;
            }
        }
    }
}

// Momentum quadrature pi = i sqrt(omega/2) (a^dag - a) in the Fock basis
MatrixXcd momentum_matrix(int d, double omega) {
    MatrixXcd pi = MatrixXcd::Zero(d, d);
    const double c = std::sqrt(0.5 * omega);
    for (int n = 0; n + 1 < d; ++n) {
        const double r = c * std::sqrt(static_cast<double>(n + 1));
        pi(n + 1, n) = cplx(0.0, r);
        pi(n, n + 1) = cplx(0.0, -r);
    }
    return pi;
}

struct ModeGenerators {
    MatrixXcd V;      // eigenvectors of pi
    VectorXd lambda;  // eigenvalues of pi
};

} // namespace

std::size_t OracleConfig::field_dim() const {
    std::size_t f = 1;
    for (int j = 0; j < n_modes; ++j) f *= static_cast<std::size_t>(fock_dim);
    return f;
}

void OracleConfig::validate() const {
    if (n_modes < 1 || n_modes > 4) throw ValidationError("oracle supports 1-4 modes");
    if (fock_dim < 4 || fock_dim > 16) throw ValidationError("fock_dim must be in [4, 16]");
    if (total_dim() > 65536) throw ValidationError("total dimension exceeds 2^16");
    if (mode_freqs.size() != static_cast<std::size_t>(n_modes) ||
        mode_couplings.size() != static_cast<std::size_t>(n_modes))
        throw ValidationError("mode frequency/coupling lists must match n_modes");
    double wmax = 0.0;
    for (double w : mode_freqs) {
        if (!(w > 0.0)) throw ValidationError("mode frequencies must be positive");
        wmax = std::max(wmax, w);
    }
    if (!(dt > 0.0) || dt * wmax > 0.05)
        throw ValidationError("Trotter step must satisfy dt * max(omega) <= 0.05");
    if (tunneling_omega < 0.0) throw ValidationError("tunneling frequency must be >= 0");
    if (schedule.duration() <= 0.0) throw ValidationError("oracle needs a schedule");
}

OracleConfig OracleConfig::bath_surrogate(const BathSpec& bath, int n_modes, int fock_dim,
                                          double dt, CouplingSchedule schedule,
                                          double tunneling_omega) {
    // Quantiles of p(k) ~ h(k)^2/omega on [0, k_max]
    const double kmax = bath.grid_k_max();
    const int n_tab = 4000;
    std::vector<double> cdf(static_cast<std::size_t>(n_tab) + 1, 0.0);
    const double h = kmax / n_tab;
    for (int i = 1; i <= n_tab; ++i) {
        const double k = (i - 0.5) * h;
        const double hh = bath.h_hat(k);
        cdf[static_cast<std::size_t>(i)] =
            cdf[static_cast<std::size_t>(i - 1)] + hh * hh / bath.omega(k) * h;
    }
    const double total = cdf.back();

    OracleConfig cfg;
    cfg.n_modes = n_modes;
    cfg.fock_dim = fock_dim;
    cfg.dt = dt;
    cfg.schedule = std::move(schedule);
    cfg.tunneling_omega = tunneling_omega;
    for (int j = 0; j < n_modes; ++j) {
        const double target = total * (j + 0.5) / n_modes;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        const double k = h * static_cast<double>(std::distance(cdf.begin(), it));
        const double w = bath.omega(k);
        cfg.mode_freqs.push_back(w);
        // per-mode share of the full-line spectral weight: sum g^2/omega = D/2
        cfg.mode_couplings.push_back(std::sqrt(w * total / n_modes));
    }
    cfg.validate();
    return cfg;
}

double expected_branch_overlap(const OracleConfig& cfg, double eps) {
    double s = 0.0;
    for (int j = 0; j < cfg.n_modes; ++j) {
        const double g = cfg.mode_couplings[static_cast<std::size_t>(j)];
        s += g * g / cfg.mode_freqs[static_cast<std::size_t>(j)];
    }
    return std::exp(-eps * eps * s);
}

std::vector<cplx> coherent_fock_vector(int d, cplx alpha) {
    std::vector<cplx> v(static_cast<std::size_t>(d));
    cplx term = std::exp(-0.5 * std::norm(alpha));
    v[0] = term;
    for (int n = 1; n < d; ++n) {
        term *= alpha / std::sqrt(static_cast<double>(n));
        v[static_cast<std::size_t>(n)] = term;
    }
    return v;
}

BlochState partial_trace_spin(const FockState& state) {
    const std::size_t field_dim = state.amplitudes.size() / 2;
    cplx rho_pm{0.0, 0.0};
    double p_up = 0.0, p_dn = 0.0;
    for (std::size_t f = 0; f < field_dim; ++f) {
        const cplx up = state.amplitudes[f];
        const cplx dn = state.amplitudes[field_dim + f];
        p_up += std::norm(up);
        p_dn += std::norm(dn);
        rho_pm += up * std::conj(dn);
    }
    BlochState b;
    b.time = state.time;
    b.rho = {2.0 * rho_pm.real(), -2.0 * rho_pm.imag(), p_up - p_dn};
    return b;
}

OracleResult evolve(const OracleConfig& cfg, const BlochState& initial_spin) {
    cfg.validate();
    const double r = initial_spin.length();
    if (std::abs(r - 1.0) > 1e-6)
        throw ValidationError("oracle evolves pure spin states (|rho| = 1)");

    const int d = cfg.fock_dim;
    const std::size_t field_dim = cfg.field_dim();
    const std::size_t dim = 2 * field_dim;

    // Initial state: (c+, c-) spin amplitudes x vacuum
    const double theta = std::acos(std::clamp(initial_spin.rho[2] / r, -1.0, 1.0));
    const double phi = std::atan2(initial_spin.rho[1], initial_spin.rho[0]);
    const cplx c_up = std::cos(0.5 * theta);
    const cplx c_dn = std::sin(0.5 * theta) * std::exp(cplx(0.0, phi));

    FockState state;
    state.amplitudes.assign(dim, cplx{0.0, 0.0});
    state.amplitudes[0] = c_up;
    state.amplitudes[field_dim] = c_dn;

    // Per-mode machinery: free-field phases and momentum eigenbases
    std::vector<ModeGenerators> gens;
    gens.reserve(static_cast<std::size_t>(cfg.n_modes));
    for (int j = 0; j < cfg.n_modes; ++j) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(
            momentum_matrix(d, cfg.mode_freqs[static_cast<std::size_t>(j)]));
        if (es.info() != Eigen::Success)
            throw std::runtime_error("momentum quadrature eigendecomposition failed");
        gens.push_back({es.eigenvectors(), es.eigenvalues()});
    }

    // Field-index excitation energies for the diagonal free-field factor
    std::vector<double> field_energy(field_dim);
    for (std::size_t f = 0; f < field_dim; ++f) {
        std::size_t rem = f;
        double e = 0.0;
        for (int j = cfg.n_modes - 1; j >= 0; --j) {
            e += cfg.mode_freqs[static_cast<std::size_t>(j)] *
                 static_cast<double>(rem % static_cast<std::size_t>(d));
            rem /= static_cast<std::size_t>(d);
        }
        field_energy[f] = e;
    }

    std::vector<cplx> half_phase(field_dim);
    double cached_dt = -1.0;
    cplx tc{1.0, 0.0}, ts{0.0, 0.0};
    auto prepare_step = [&](double dt_step) {
        if (dt_step == cached_dt) return;
        cached_dt = dt_step;
        for (std::size_t f = 0; f < field_dim; ++f)
            half_phase[f] = std::polar(1.0, -0.5 * dt_step * field_energy[f]);
        const double ang = 0.25 * cfg.tunneling_omega * dt_step;
        tc = std::cos(ang);
        ts = cplx(0.0, -std::sin(ang));
    };

    const double T = cfg.schedule.duration();
    const auto n_steps = static_cast<std::size_t>(std::ceil(T / cfg.dt - 1e-9));
    const double sample_dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 20.0 * cfg.dt;
    const auto sample_every =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::round(sample_dt / cfg.dt)));

    auto apply_half_diagonal = [&](std::vector<cplx>& psi) {
        for (std::size_t f = 0; f < field_dim; ++f) {
            psi[f] *= half_phase[f];
            psi[field_dim + f] *= half_phase[f];
        }
        if (cfg.tunneling_omega != 0.0) {
            for (std::size_t f = 0; f < field_dim; ++f) {
                const cplx up = psi[f];
                const cplx dn = psi[field_dim + f];
                psi[f] = tc * up + ts * dn;
                psi[field_dim + f] = ts * up + tc * dn;
            }
        }
    };

    MatrixXcd disp(d, d);
    auto apply_coupling = [&](std::vector<cplx>& psi, double eps, double dt_step) {
        if (eps == 0.0) return;
        for (int j = 0; j < cfg.n_modes; ++j) {
            const double th =
                eps * dt_step * cfg.mode_couplings[static_cast<std::size_t>(j)];
            const ModeGenerators& g = gens[static_cast<std::size_t>(j)];
            for (int spin = 0; spin < 2; ++spin) {
                const double s = (spin == 0) ? 1.0 : -1.0;
                disp = g.V *
                       (g.lambda.array() * (s * th)).unaryExpr([](double x) {
                           return std::polar(1.0, x);
                       }).matrix().asDiagonal() *
                       g.V.adjoint();
                apply_mode_op(psi, disp, j, cfg.n_modes, d, field_dim, spin);
            }
        }
    };

    OracleResult out;
    {
        double spacing = std::numeric_limits<double>::infinity();
        std::vector<double> ws = cfg.mode_freqs;
        std::sort(ws.begin(), ws.end());
        for (std::size_t j = 0; j + 1 < ws.size(); ++j)
            spacing = std::min(spacing, ws[j + 1] - ws[j]);
        out.recurrence_time = std::isfinite(spacing) && spacing > 0.0
                                  ? 2.0 * kPi / spacing
                                  : std::numeric_limits<double>::infinity();
    }

    auto record = [&](double t) {
        state.time = t;
        OracleSample smp;
        smp.t = t;
        double norm2 = 0.0;
        for (const cplx& a : state.amplitudes) norm2 += std::norm(a);
        smp.norm = std::sqrt(norm2);

        // top-level occupation per mode
        double leak = 0.0;
        std::size_t stride = 1;
        for (int j = cfg.n_modes - 1; j >= 0; --j) {
            double p = 0.0;
            const std::size_t group = stride * static_cast<std::size_t>(d);
            for (std::size_t base = 0; base < dim; base += group)
                for (std::size_t in = 0; in < stride; ++in)
                    p += std::norm(state.amplitudes[base + static_cast<std::size_t>(d - 1) * stride + in]);
            leak = std::max(leak, p);
            stride *= static_cast<std::size_t>(d);
        }
        smp.leakage = leak;

        const BlochState b = partial_trace_spin(state);
        smp.rho = b.rho;
        out.samples.push_back(smp);

        out.max_norm_drift = std::max(out.max_norm_drift, std::abs(smp.norm - 1.0));
        out.max_leakage = std::max(out.max_leakage, leak);
        if (out.max_norm_drift > 1e-6)
            throw OracleInvalid("state norm drifted beyond 1e-6", t);
        if (leak > 1e-4)
            throw OracleInvalid("truncation leakage exceeded 1e-4", t);
    };

    record(0.0);
    double t = 0.0;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double dt_step = std::min(cfg.dt, T - t);
        if (dt_step <= 0.0) break;
        prepare_step(dt_step);
        const double eps = cfg.schedule.eval(std::min(T, t + 0.5 * dt_step)).eps;
        apply_half_diagonal(state.amplitudes);
        apply_coupling(state.amplitudes, eps, dt_step);
        apply_half_diagonal(state.amplitudes);
        t += dt_step;
        if ((step + 1) % sample_every == 0 || step + 1 == n_steps) record(t);
    }
    return out;
}

} // namespace recoh
