#include "recoh/dephasing.hpp"

#include <algorithm>
#include <cmath>

namespace recoh {

namespace {

// Instantaneous counterpart of the schedule trust metric, emitted per sample.
double sample_adiabaticity(const ScheduleValue& v, double T, double phi2, double mass) {
    if (v.step_edge) return std::numeric_limits<double>::infinity();
    return v.eps_dot * v.eps_dot * T * phi2 / mass;
}

std::vector<double> sample_times(double T, double sample_dt) {
    if (!(sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
    std::vector<double> ts;
    const auto n = static_cast<std::size_t>(std::floor(T / sample_dt + 1e-9));
    ts.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) ts.push_back(std::min(T, sample_dt * static_cast<double>(i)));
    if (ts.back() < T) ts.push_back(T);
    return ts;
}

void fill_sample(TraceSample& s, const BlochState& rho0, const cplx& J) {
    const cplx tr0(rho0.rho[0], rho0.rho[1]);
    const cplx tr = tr0 * J;
    s.rho = {tr.real(), tr.imag(), rho0.rho[2]};
    BlochState b;
    b.rho = s.rho;
    s.entropy = b.entropy();
    s.J = J;
}

// Forced-mode state for one grid, both branches. The minus-branch amplitudes
// are the exact negation of the plus branch (same linear flow, flipped
// forcing), but both lists are kept so overlaps go through the coherent
// algebra unchanged.
struct BranchPair {
    BranchAmplitudes plus;
    BranchAmplitudes minus;

    explicit BranchPair(const BathSpec& bath) {
        plus.amplitudes.assign(bath.modes.size(), cplx{0.0, 0.0});
        plus.grid_tag = bath.grid_fingerprint();
        plus.branch = '+';
        minus = plus;
        minus.branch = '-';
    }

    void mirror() {
        for (std::size_t i = 0; i < plus.amplitudes.size(); ++i)
            minus.amplitudes[i] = -plus.amplitudes[i];
    }
};

// integral_0^dt exp(-i w (dt - tau)) * (linear eps between e0 and e1) dtau
cplx forced_response(double w, double dt, double e0, double e1) {
    const double u = w * dt;
    if (std::abs(u) < 1e-4) {
        // Simpson on the slowly-rotating kernel; exact enough below u ~ 1e-4
        const cplx r_full = std::polar(1.0, -u);
        const cplx r_half = std::polar(1.0, -0.5 * u);
        return dt / 6.0 * (e0 * r_full + 4.0 * (0.5 * (e0 + e1)) * r_half + e1);
    }
    const cplx iw(0.0, w);
    const cplx rot = std::polar(1.0, -u);
    const cplx E1 = (1.0 - rot) / iw;
    const double b = (e1 - e0) / dt;
    return e1 * E1 - b * (E1 - dt * rot) / iw;
}

class ModeIntegrator {
  public:
    ModeIntegrator(const BathSpec& bath, const CouplingSchedule& sched, OdeScheme scheme)
        : bath_(bath), sched_(sched), scheme_(scheme), state_(bath) {
        const std::size_t n = bath.modes.size();
        omega_.resize(n);
        force_.resize(n);
        guard_.resize(n);
        const double eps_cap = sched.max_eps();
        for (std::size_t i = 0; i < n; ++i) {
            const double k = bath.modes[i].k;
            omega_[i] = bath.omega(k);
            force_[i] = 0.5 * bath.h_hat(k) * std::sqrt(omega_[i]);
            // 10x the adiabatic envelope: growth beyond it flags instability
            guard_[i] = 10.0 * 0.5 * eps_cap * bath.h_hat(k) / std::sqrt(omega_[i]) + 1e-9;
        }
    }

    const BranchPair& state() const { return state_; }

    // Advance the plus branch across [t0, t1]; schedule treated as linear
    // on the interval (exact for linear/plateau segments).
    void advance(double t0, double t1) {
        const double dt = t1 - t0;
        if (dt <= 0.0) return;
        const double e0 = sched_.eval(t0).eps;
        const double e1 = sched_.eval(t1).eps;
        auto& amp = state_.plus.amplitudes;
        if (scheme_ == OdeScheme::ExactPropagator) {
            for (std::size_t i = 0; i < amp.size(); ++i) {
                const double w = omega_[i];
                const cplx rot = std::polar(1.0, -w * dt);
                amp[i] = rot * amp[i] - force_[i] * forced_response(w, dt, e0, e1);
            }
        } else {
            const double em = sched_.eval(0.5 * (t0 + t1)).eps;
            for (std::size_t i = 0; i < amp.size(); ++i) {
                const double w = omega_[i];
                auto rhs = [&](const cplx& a, double eps) {
                    return cplx(0.0, -w) * a - force_[i] * eps;
                };
                const cplx a = amp[i];
                const cplx k1 = rhs(a, e0);
                const cplx k2 = rhs(a + 0.5 * dt * k1, em);
                const cplx k3 = rhs(a + 0.5 * dt * k2, em);
                const cplx k4 = rhs(a + dt * k3, e1);
                amp[i] = a + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        for (std::size_t i = 0; i < amp.size(); ++i) {
            if (!(std::abs(amp[i]) <= guard_[i]))
                throw IntegrationFailure("mode amplitude grew beyond the adiabatic envelope", t1);
        }
        state_.mirror();
    }

    cplx branch_overlap() {
        return pairwise_log_overlap(state_.plus, state_.minus, bath_.modes).J();
    }

  private:
    const BathSpec& bath_;
    const CouplingSchedule& sched_;
    OdeScheme scheme_;
    BranchPair state_;
    std::vector<double> omega_;
    std::vector<double> force_;
    std::vector<double> guard_;
};

} // namespace

DephasingTrace run_analytic(const BathSpec& bath, const CouplingSchedule& s,
                            const BlochState& rho0, double sample_dt) {
    rho0.validate();
    if (s.has_steps())
        throw ValidationError("analytic run rejects step schedules; use the sudden-decouple path");
    const SpectralReport rep = spectral_integral(bath);
    const double T = s.duration();

    DephasingTrace trace;
    for (double t : sample_times(T, sample_dt)) {
        const ScheduleValue v = s.eval(t);
        TraceSample smp;
        smp.t = t;
        const double lnJ = -kOverlapExponentScale * v.eps * v.eps * rep.D;
        fill_sample(smp, rho0, std::exp(cplx(lnJ, 0.0)));
        smp.adiabaticity = sample_adiabaticity(v, T, rep.phi2, bath.mass);
        trace.samples.push_back(smp);
    }
    return trace;
}

DephasingTrace run_ode_oracle(const BathSpec& bath, const CouplingSchedule& s,
                              const BlochState& rho0, double dt, OdeScheme scheme) {
    rho0.validate();
    if (!(dt > 0.0)) throw ValidationError("integration step must be positive");
    if (bath.modes.empty()) throw ValidationError("ODE oracle requires a mode grid");
    double omega_max = 0.0;
    for (const Mode& mo : bath.modes) omega_max = std::max(omega_max, bath.omega(mo.k));
    if (scheme == OdeScheme::RungeKutta4 && dt > 0.1 / omega_max)
        throw ValidationError("RK4 scheme requires dt <= 0.1/omega_max of the grid");

    const SpectralReport rep = spectral_integral(bath);
    const double T = s.duration();
    ModeIntegrator integ(bath, s, scheme);

    DephasingTrace trace;
    auto record = [&](double t) {
        const ScheduleValue v = s.eval(t);
        TraceSample smp;
        smp.t = t;
        fill_sample(smp, rho0, integ.branch_overlap());
        smp.adiabaticity = sample_adiabaticity(v, T, rep.phi2, bath.mass);
        trace.samples.push_back(smp);
    };

    record(0.0);
    for (const Segment& seg : s.segments()) {
        if (seg.shape == SegmentShape::Step) {
            // Amplitudes are untouched by an instantaneous coupling change;
            // re-record so the trace shows the right-limit schedule values.
            record(seg.t1);
            continue;
        }
        const double span = seg.t1 - seg.t0;
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt)));
        for (std::size_t i = 0; i < n; ++i) {
            const double a = seg.t0 + span * static_cast<double>(i) / static_cast<double>(n);
            const double b = (i + 1 == n) ? seg.t1
                                          : seg.t0 + span * static_cast<double>(i + 1) /
                                                         static_cast<double>(n);
            integ.advance(a, b);
            record(b);
        }
    }
    return trace;
}

DecoupleResult run_sudden_decouple(const BathSpec& bath, double eps_max, double t_hold,
                                   double t_after, const BlochState& rho0,
                                   double t_ramp, double dt) {
    if (!(t_after > 0.0)) throw ValidationError("post-step window must be positive");
    if (eps_max < 0.0) throw ValidationError("coupling value must be non-negative");
    const SpectralReport rep = spectral_integral(bath);
    if (t_ramp <= 0.0) {
        // smooth-ramp slope pi*eps/(2 Tr); pick Tr so the error bound is 1e-4
        t_ramp = std::max(1.0 / bath.mass,
                          0.5 * kPi * eps_max * std::sqrt(rep.phi2 / 1e-4) / bath.mass);
    }
    const CouplingSchedule sched =
        CouplingSchedule::ramp_hold_step_off(eps_max, t_ramp, t_hold, t_after);
    if (dt <= 0.0) dt = std::min({t_ramp, std::max(t_hold, 1e-3), t_after}) / 256.0;

    DecoupleResult out;
    out.t_step = t_ramp + t_hold;
    out.trace = run_ode_oracle(bath, sched, rho0, dt);

    bool first = true;
    for (const TraceSample& smp : out.trace.samples) {
        if (smp.t < out.t_step) continue;
        const double aj = std::abs(smp.J);
        if (first) {
            out.abs_J_at_step = aj;
            out.min_abs_J_after = aj;
            out.max_abs_J_after = aj;
            first = false;
        } else {
            out.min_abs_J_after = std::min(out.min_abs_J_after, aj);
            out.max_abs_J_after = std::max(out.max_abs_J_after, aj);
        }
    }
    return out;
}

} // namespace recoh
