#include "recoh/oscillator.hpp"

#include <algorithm>
#include <cmath>

namespace recoh {

namespace {

// Fundamental 2x2 flow of qdot = p/M(t), pdot = -Omega^2 q over [t0, t1].
// Plateau segments use the exact rotation; ramps take RK4 substeps.
struct Flow {
    double qq = 1.0, qp = 0.0, pq = 0.0, pp = 1.0;

    void right_multiply(const Flow& g) {
        // this <- this * g (g acts first)
        const double a = qq * g.qq + qp * g.pq;
        const double b = qq * g.qp + qp * g.pp;
        const double c = pq * g.qq + pp * g.pq;
        const double d = pq * g.qp + pp * g.pp;
        qq = a;
        qp = b;
        pq = c;
        pp = d;
    }
};

struct FlowContext {
    const CouplingSchedule* sched;
    double omega2;  // bare Omega^2 (spring constant)
    double K;       // mass-kernel integral

    double mass_of(double t) const {
        const double e = sched->eval(t).eps;
        return 1.0 + e * e * K;
    }
};

Flow segment_flow(const FlowContext& ctx, double t0, double t1) {
    Flow f;
    const double span = t1 - t0;
    if (span <= 0.0) return f;
    const ScheduleValue v0 = ctx.sched->eval(t0);
    const ScheduleValue v1 = ctx.sched->eval(t1);
    if (v0.eps_dot == 0.0 && v1.eps_dot == 0.0 && v0.eps == v1.eps) {
        const double M = 1.0 + v0.eps * v0.eps * ctx.K;
        const double wt = std::sqrt(ctx.omega2 / M);
        const double a = wt * span;
        f.qq = std::cos(a);
        f.qp = std::sin(a) / (M * wt);
        f.pq = -M * wt * std::sin(a);
        f.pp = std::cos(a);
        return f;
    }
    const int n_sub = 16;
    const double h = span / n_sub;
    for (int i = 0; i < n_sub; ++i) {
        const double a = t0 + h * i;
        auto deriv = [&](double t, const Flow& s) {
            const double Minv = 1.0 / ctx.mass_of(t);
            Flow d;
            d.qq = Minv * s.pq;
            d.qp = Minv * s.pp;
            d.pq = -ctx.omega2 * s.qq;
            d.pp = -ctx.omega2 * s.qp;
            return d;
        };
        auto axpy = [](const Flow& s, double c, const Flow& d) {
            Flow r = s;
            r.qq += c * d.qq;
            r.qp += c * d.qp;
            r.pq += c * d.pq;
            r.pp += c * d.pp;
            return r;
        };
        const Flow k1 = deriv(a, f);
        const Flow k2 = deriv(a + 0.5 * h, axpy(f, 0.5 * h, k1));
        const Flow k3 = deriv(a + 0.5 * h, axpy(f, 0.5 * h, k2));
        const Flow k4 = deriv(a + h, axpy(f, h, k3));
        f.qq += h / 6.0 * (k1.qq + 2.0 * k2.qq + 2.0 * k3.qq + k4.qq);
        f.qp += h / 6.0 * (k1.qp + 2.0 * k2.qp + 2.0 * k3.qp + k4.qp);
        f.pq += h / 6.0 * (k1.pq + 2.0 * k2.pq + 2.0 * k3.pq + k4.pq);
        f.pp += h / 6.0 * (k1.pp + 2.0 * k2.pp + 2.0 * k3.pp + k4.pp);
    }
    return f;
}

struct PacketState {
    double q, p;
    double qp0;    // q*p at t = 0; the action phase is (qp - qp0)/2
    cplx A;        // complex width parameter, Im A > 0
    cplx log_amp;  // accumulated prefactor (includes the packet weight)
};

// Interval endpoints covering [0, t]: segment boundaries plus a cadence that
// keeps each interval well under a rotation period.
std::vector<double> flow_breakpoints(const FlowContext& ctx, double t) {
    const double w = std::sqrt(ctx.omega2);
    const double max_iv = 2.0 * kPi / w / 64.0;
    std::vector<double> cuts{0.0};
    for (const Segment& s : ctx.sched->segments()) {
        if (s.t0 > 0.0 && s.t0 < t) cuts.push_back(s.t0);
        if (s.t1 > 0.0 && s.t1 < t) cuts.push_back(s.t1);
    }
    cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_iv)));
        for (int j = 0; j < n; ++j) out.push_back(a + (b - a) * j / n);
    }
    out.push_back(t);
    return out;
}

void advance_packet(PacketState& ps, const Flow& f) {
    const cplx den = f.qq + f.qp * ps.A;
    ps.A = (f.pq + f.pp * ps.A) / den;
    ps.log_amp -= 0.5 * std::log(den);
    const double q1 = f.qq * ps.q + f.qp * ps.p;
    const double p1 = f.pq * ps.q + f.pp * ps.p;
    ps.q = q1;
    ps.p = p1;
}

} // namespace

std::vector<double> PositionGrid::points() const {
    std::vector<double> q(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) q[static_cast<std::size_t>(i)] = q_min + dq() * i;
    return q;
}

void OscillatorSpec::validate(const BathSpec& bath) const {
    if (!(omega > 0.0)) throw ValidationError("oscillator frequency must be positive");
    if (!(omega < bath.mass))
        throw ValidationError("oscillator frequency must sit below the bath gap");
    if (packets.empty()) throw ValidationError("at least one packet required");
    if (grid.n_points < 16) throw ValidationError("grid too coarse");
    if (!(grid.q_max > grid.q_min)) throw ValidationError("empty position grid");
    for (const GaussPacket& p : packets) {
        if (!(p.width > 0.0)) throw ValidationError("packet widths must be positive");
        if (p.center - 5.0 * p.width < grid.q_min || p.center + 5.0 * p.width > grid.q_max)
            throw std::domain_error("grid must cover packet centers +- 5 widths");
    }
}

RenormalizationReport renormalization(const BathSpec& bath, double eps, double omega) {
    if (eps < 0.0) throw ValidationError("coupling value must be non-negative");
    RenormalizationReport rep;
    rep.K = mass_kernel(bath);
    rep.M = 1.0 + eps * eps * rep.K;
    rep.omega_tilde = omega / std::sqrt(rep.M);
    rep.kernel_coeff = eps * eps / 8.0 * squared_profile_weight(bath);
    return rep;
}

double PositionDensityMatrix::grid_trace() const {
    double tr = 0.0;
    const double dq = q.size() > 1 ? q[1] - q[0] : 1.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) tr += rho(i, i).real();
    return tr * dq;
}

void PositionDensityMatrix::validate() const {
    if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != q.size())
        throw ValidationError("density matrix shape does not match the grid");
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        if (rho(i, i).real() < -1e-10 || std::abs(rho(i, i).imag()) > 1e-10)
            throw ValidationError("diagonal must be real and non-negative");
        for (Eigen::Index j = i + 1; j < rho.cols(); ++j) {
            if (std::abs(rho(i, j) - std::conj(rho(j, i))) > 1e-10)
                throw ValidationError("density matrix must be Hermitian");
        }
    }
    if (std::abs(grid_trace() - 1.0) > 1e-6)
        throw ValidationError("grid-weighted trace must be 1 within 1e-6");
}

PositionDensityMatrix evolve_reduced(const OscillatorSpec& spec, const BathSpec& bath,
                                     const CouplingSchedule& s, double t) {
    spec.validate(bath);
    if (s.has_steps()) throw ValidationError("oscillator evolution requires a smooth schedule");
    if (t < 0.0 || t > s.duration())
        throw std::domain_error("evaluation time outside the schedule");

    FlowContext ctx{&s, spec.omega * spec.omega, mass_kernel(bath)};

    std::vector<PacketState> states;
    states.reserve(spec.packets.size());
    for (const GaussPacket& p : spec.packets) {
        PacketState ps;
        ps.q = p.center;
        ps.p = p.momentum;
        ps.qp0 = p.center * p.momentum;
        ps.A = cplx(0.0, 1.0 / (2.0 * p.width * p.width));
        ps.log_amp = std::log(p.weight) - 0.25 * std::log(2.0 * kPi * p.width * p.width);
        states.push_back(ps);
    }

    const std::vector<double> cuts = flow_breakpoints(ctx, t);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Flow f = segment_flow(ctx, cuts[i], cuts[i + 1]);
        for (PacketState& ps : states) advance_packet(ps, f);
    }

    // Evolved widths must stay on the grid
    for (const PacketState& ps : states) {
        const double w = std::sqrt(0.5 / ps.A.imag());
        if (ps.q - 5.0 * w < spec.grid.q_min || ps.q + 5.0 * w > spec.grid.q_max)
            throw std::domain_error("grid too small for the evolved packets");
    }

    const std::vector<double> q = spec.grid.points();
    const auto n = static_cast<Eigen::Index>(q.size());
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    for (const PacketState& ps : states) {
        const double action = 0.5 * (ps.q * ps.p - ps.qp0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dqq = q[static_cast<std::size_t>(i)] - ps.q;
            const cplx phase = cplx(0.0, 1.0) *
                               (0.5 * ps.A * dqq * dqq + ps.p * dqq + action);
            psi(i) += std::exp(ps.log_amp + phase);
        }
    }

    const double eps_t = s.eval(t).eps;
    const double kappa = eps_t * eps_t / 8.0 * squared_profile_weight(bath);

    PositionDensityMatrix out;
    out.q = q;
    out.time = t;
    out.rho = Eigen::MatrixXcd(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double dq = q[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(j)];
            out.rho(i, j) = psi(i) * std::conj(psi(j)) * std::exp(-kappa * dq * dq);
        }
    }

    // Renormalize away the grid-truncation residue; unnormalized weights are
    // a configuration error, not a truncation artifact.
    const double tr = out.grid_trace();
    if (std::abs(tr - 1.0) > 1e-4)
        throw ValidationError("packet weights must normalize the superposition on the grid");
    out.rho /= tr;
    return out;
}

double recombination_time(const OscillatorSpec& spec, const BathSpec& bath,
                          const CouplingSchedule& s) {
    spec.validate(bath);
    if (spec.packets.size() < 2)
        throw ValidationError("recombination needs at least two packets");
    FlowContext ctx{&s, spec.omega * spec.omega, mass_kernel(bath)};
    const double dq0 = spec.packets[0].center - spec.packets[1].center;
    const double dp0 = spec.packets[0].momentum - spec.packets[1].momentum;

    Flow acc;
    const std::vector<double> cuts = flow_breakpoints(ctx, s.duration());
    double prev_t = 0.0, prev_sep = dq0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Flow f = segment_flow(ctx, cuts[i], cuts[i + 1]);
        f.right_multiply(acc);
        acc = f;
        const double sep = acc.qq * dq0 + acc.qp * dp0;
        const double t1 = cuts[i + 1];
        if ((prev_sep > 0.0) != (sep > 0.0) || sep == 0.0) {
            // linear interpolation inside the short interval is plenty
            const double frac = prev_sep / (prev_sep - sep);
            return prev_t + frac * (t1 - prev_t);
        }
        prev_t = t1;
        prev_sep = sep;
    }
    throw std::domain_error("packet centers never coincide within the schedule");
}

Visibility fringe_visibility(const PositionDensityMatrix& rho) {
    const Eigen::Index n = rho.rho.rows();
    std::vector<double> P(static_cast<std::size_t>(n));
    double pmax = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        P[static_cast<std::size_t>(i)] = std::max(0.0, rho.rho(i, i).real());
        pmax = std::max(pmax, P[static_cast<std::size_t>(i)]);
    }
    Visibility vis;
    if (pmax <= 0.0) return vis;

    // Interior extrema above the noise floor
    struct Extremum {
        std::size_t idx;
        bool is_max;
    };
    std::vector<Extremum> ext;
    const double floor = 1e-9 * pmax;
    for (std::size_t i = 1; i + 1 < P.size(); ++i) {
        const bool up = P[i] > P[i - 1] + floor;
        const bool down = P[i] > P[i + 1] + floor;
        const bool lo = P[i] < P[i - 1] - floor;
        const bool lo2 = P[i] < P[i + 1] - floor;
        if (up && down) ext.push_back({i, true});
        else if (lo && lo2) ext.push_back({i, false});
    }

    // Contrast of each fringe: a local maximum flanked by interior minima
    for (std::size_t e = 0; e < ext.size(); ++e) {
        if (!ext[e].is_max || e == 0 || e + 1 == ext.size()) continue;
        if (ext[e - 1].is_max || ext[e + 1].is_max) continue;
        const double hi = P[ext[e].idx];
        const double lo = 0.5 * (P[ext[e - 1].idx] + P[ext[e + 1].idx]);
        const double c = (hi - lo) / (hi + lo);
        if (c > vis.value) {
            vis.value = c;
            vis.fringes_found = true;
        }
    }
    return vis;
}

double forcing_deviation(const OscillatorSpec& spec, const BathSpec& bath, double eps) {
    const RenormalizationReport rep = renormalization(bath, eps, spec.omega);
    const double wt = rep.omega_tilde;
    double s = 0.0;
    for (const Mode& mo : bath.modes) {
        const double h = bath.h_hat(mo.k);
        const double w = bath.omega(mo.k);
        const double den = w * w - wt * wt;
        s += mo.weight * h * h * w / (den * den);
    }
    return eps * eps * wt / (2.0 * rep.M) * s;
}

} // namespace recoh
