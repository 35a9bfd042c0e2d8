#include "recoh/bath.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace recoh {

namespace {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
};

// Adaptive Simpson with absolute-error target. The local acceptance test is
// the classic |S2 - S1| <= 15 tol with Richardson correction.
class AdaptiveSimpson {
  public:
    AdaptiveSimpson(std::function<double(double)> f, long max_evals)
        : f_(std::move(f)), budget_(max_evals) {}

    QuadResult integrate(double a, double b, double tol) {
        result_ = QuadResult{};
        const double fa = eval(a), fm = eval(0.5 * (a + b)), fb = eval(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        recurse(a, b, fa, fm, fb, whole, tol, 48);
        return result_;
    }

  private:
    double eval(double x) {
        ++result_.evals;
        if (result_.evals > budget_) {
            throw QuadratureFailure("adaptive quadrature exhausted its evaluation budget",
                                    result_.value, result_.error);
        }
        return f_(x);
    }

    void recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double fl = eval(0.5 * (a + m));
        const double fr = eval(0.5 * (m + b));
        const double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
        const double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
            result_.value += left + right + delta / 15.0;
            result_.error += std::abs(delta) / 15.0;
            return;
        }
        recurse(a, m, fa, fl, fm, left, 0.5 * tol, depth - 1);
        recurse(m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
    }

    std::function<double(double)> f_;
    long budget_;
    QuadResult result_;
};

// Integral of f over [0, inf) for integrands bounded by exp(-cutoff k)/max(k, m).
// Splits at the dispersion knee k = m, truncates where the exponential bound
// drops below the tolerance, and adds the analytic tail bound to the error.
QuadResult half_line_integral(const BathSpec& bath,
                              const std::function<double(double)>& f,
                              double tol) {
    const double m = bath.mass;
    const double G = bath.cutoff;

    // exp(-G K)/(G max(K, m)) <= tol/4
    double K = std::max(m, 1.0 / G);
    for (int i = 0; i < 64; ++i) {
        const double bound = std::exp(-G * K) / (G * std::max(K, m));
        if (bound <= 0.25 * tol) break;
        K *= 1.5;
    }
    const double tail = std::exp(-G * K) / (G * std::max(K, m));

    AdaptiveSimpson quad(f, 4'000'000);
    QuadResult total;
    const double split = std::min(m, K);
    const QuadResult low = quad.integrate(0.0, split, 0.5 * tol);
    total.value += low.value;
    total.error += low.error;
    total.evals += low.evals;
    if (K > split) {
        const QuadResult high = quad.integrate(split, K, 0.5 * tol);
        total.value += high.value;
        total.error += high.error;
        total.evals += high.evals;
    }
    total.error += tail;
    return total;
}

} // namespace

void BathSpec::validate() const {
    if (!(mass > 0.0)) throw ValidationError("bath mass must be positive");
    if (!(cutoff > 0.0)) throw ValidationError("bath cutoff must be positive");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (!(modes[i].weight > 0.0))
            throw ValidationError("mode weights must be positive");
        if (i > 0 && !(modes[i].k > modes[i - 1].k))
            throw ValidationError("mode grid must be strictly increasing in k");
        if (!(omega(modes[i].k) >= mass))
            throw ValidationError("mode dispersion below the bath gap");
    }
}

std::uint64_t BathSpec::grid_fingerprint() const {
    std::uint64_t h = fnv1a64("bath-grid");
    for (const Mode& mo : modes) {
        h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&mo.k), sizeof(double)), h);
        h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&mo.weight), sizeof(double)), h);
    }
    return h;
}

BathSpec BathSpec::with_grid(double mass, double cutoff, int panel_order) {
    if (panel_order < 2) throw ValidationError("panel order must be >= 2");
    BathSpec bath;
    bath.mass = mass;
    bath.cutoff = cutoff;

    const double k_max = bath.grid_k_max();
    std::vector<double> edges{0.0};
    double e = std::min(mass, k_max);
    while (e < k_max) {
        edges.push_back(e);
        e *= 2.0;
    }
    edges.push_back(k_max);

    std::vector<double> gx, gw;
    gauss_legendre(panel_order, gx, gw);

    std::vector<Mode> half;
    half.reserve(edges.size() * static_cast<std::size_t>(panel_order));
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < panel_order; ++i)
            half.push_back({c + h * gx[static_cast<std::size_t>(i)],
                            h * gw[static_cast<std::size_t>(i)]});
    }

    // Mirror to the full line
    bath.modes.reserve(2 * half.size());
    for (auto it = half.rbegin(); it != half.rend(); ++it)
        bath.modes.push_back({-it->k, it->weight});
    for (const Mode& mo : half) bath.modes.push_back(mo);

    bath.validate();
    return bath;
}

BathSpec BathSpec::with_modes(double mass, double cutoff, std::vector<Mode> modes) {
    BathSpec bath;
    bath.mass = mass;
    bath.cutoff = cutoff;
    bath.modes = std::move(modes);
    bath.validate();
    return bath;
}

SpectralReport spectral_integral(const BathSpec& bath, double tol) {
    if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
    const QuadResult half = half_line_integral(
        bath,
        [&](double k) { return bath.h_hat(k) * bath.h_hat(k) / bath.omega(k); },
        0.5 * tol);
    SpectralReport rep;
    rep.D = 2.0 * half.value;
    rep.phi2 = 0.5 * rep.D;
    rep.quadrature_error = 2.0 * half.error;
    return rep;
}

double decoherence_exponent(const BathSpec& bath, double eps, double tol) {
    if (eps < 0.0) throw ValidationError("coupling value must be non-negative");
    if (eps == 0.0) return 0.0;
    return -kOverlapExponentScale * eps * eps * spectral_integral(bath, tol).D;
}

double spectral_sum_on_grid(const BathSpec& bath) {
    double s = 0.0;
    for (const Mode& mo : bath.modes) {
        const double h = bath.h_hat(mo.k);
        s += mo.weight * h * h / bath.omega(mo.k);
    }
    return s;
}

double decoherence_exponent_on_grid(const BathSpec& bath, double eps) {
    if (eps < 0.0) throw ValidationError("coupling value must be non-negative");
    return -kOverlapExponentScale * eps * eps * spectral_sum_on_grid(bath);
}

double squared_profile_weight(const BathSpec& bath, double tol) {
    const QuadResult half = half_line_integral(
        bath, [&](double k) { return bath.h_hat(k) * bath.h_hat(k); }, 0.5 * tol);
    return 2.0 * half.value;
}

double mass_kernel(const BathSpec& bath, double tol) {
    const QuadResult half = half_line_integral(
        bath,
        [&](double k) {
            const double h = bath.h_hat(k);
            return h * h / (k * k + bath.mass * bath.mass);
        },
        0.5 * tol);
    return 2.0 * half.value;
}

// ---------------------------------------------------------------------------

CouplingSchedule::CouplingSchedule(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) throw ValidationError("schedule needs at least one segment");
    constexpr double kJoinTol = 1e-12;
    if (std::abs(segments_.front().t0) > kJoinTol)
        throw ValidationError("schedule must start at t = 0");
    double t = 0.0, eps = segments_.front().eps0;
    for (const Segment& s : segments_) {
        if (std::abs(s.t0 - t) > kJoinTol)
            throw ValidationError("schedule segments must be contiguous");
        if (s.shape == SegmentShape::Step) {
            if (std::abs(s.t1 - s.t0) > kJoinTol)
                throw ValidationError("step segments must have zero duration");
        } else if (!(s.t1 > s.t0)) {
            throw ValidationError("segment end must follow its start");
        }
        if (s.shape == SegmentShape::Plateau && std::abs(s.eps1 - s.eps0) > kJoinTol)
            throw ValidationError("plateau endpoints must match");
        if (s.eps0 < 0.0 || s.eps1 < 0.0)
            throw ValidationError("coupling must stay non-negative");
        if (s.shape != SegmentShape::Step && std::abs(s.eps0 - eps) > 1e-9)
            throw ValidationError("coupling must be continuous except across steps");
        t = s.t1;
        eps = s.eps1;
    }
    if (!(duration() > 0.0)) throw ValidationError("schedule duration must be positive");
}

bool CouplingSchedule::has_steps() const {
    for (const Segment& s : segments_)
        if (s.shape == SegmentShape::Step) return true;
    return false;
}

double CouplingSchedule::max_eps() const {
    double m = 0.0;
    for (const Segment& s : segments_) m = std::max({m, s.eps0, s.eps1});
    return m;
}

ScheduleValue CouplingSchedule::eval(double t) const {
    if (t < 0.0 || t > duration())
        throw std::domain_error("schedule evaluated outside [0, T]");

    // Right-limit convention: prefer the latest segment containing t.
    const Segment* seg = nullptr;
    for (const Segment& s : segments_) {
        if (t >= s.t0 && t <= s.t1) seg = &s;
        if (s.t0 > t) break;
    }
    ScheduleValue out;
    if (seg->shape == SegmentShape::Step) {
        out.eps = seg->eps1;
        out.eps_dot = std::numeric_limits<double>::infinity();
        out.step_edge = true;
        return out;
    }
    const double dt = seg->t1 - seg->t0;
    const double u = (t - seg->t0) / dt;
    const double de = seg->eps1 - seg->eps0;
    switch (seg->shape) {
        case SegmentShape::Plateau:
            out.eps = seg->eps0;
            out.eps_dot = 0.0;
            break;
        case SegmentShape::LinearRamp:
            out.eps = seg->eps0 + de * u;
            out.eps_dot = de / dt;
            break;
        case SegmentShape::SmoothRamp:
            out.eps = seg->eps0 + de * 0.5 * (1.0 - std::cos(kPi * u));
            out.eps_dot = de * 0.5 * kPi * std::sin(kPi * u) / dt;
            break;
        case SegmentShape::Step:
            break;  // handled above
    }
    return out;
}

CouplingSchedule CouplingSchedule::constant(double eps, double T) {
    return CouplingSchedule({{0.0, T, SegmentShape::Plateau, eps, eps}});
}

CouplingSchedule CouplingSchedule::round_trip(double eps_max, double t_ramp, double t_hold) {
    return CouplingSchedule({
        {0.0, t_ramp, SegmentShape::SmoothRamp, 0.0, eps_max},
        {t_ramp, t_ramp + t_hold, SegmentShape::Plateau, eps_max, eps_max},
        {t_ramp + t_hold, 2.0 * t_ramp + t_hold, SegmentShape::SmoothRamp, eps_max, 0.0},
    });
}

CouplingSchedule CouplingSchedule::ramp_hold_step_off(double eps_max, double t_ramp,
                                                      double t_hold, double t_after) {
    const double ts = t_ramp + t_hold;
    return CouplingSchedule({
        {0.0, t_ramp, SegmentShape::SmoothRamp, 0.0, eps_max},
        {t_ramp, ts, SegmentShape::Plateau, eps_max, eps_max},
        {ts, ts, SegmentShape::Step, eps_max, 0.0},
        {ts, ts + t_after, SegmentShape::Plateau, 0.0, 0.0},
    });
}

namespace {

double max_abs_slope(const Segment& s) {
    switch (s.shape) {
        case SegmentShape::Plateau: return 0.0;
        case SegmentShape::LinearRamp:
            return std::abs(s.eps1 - s.eps0) / (s.t1 - s.t0);
        case SegmentShape::SmoothRamp:
            return std::abs(s.eps1 - s.eps0) * 0.5 * kPi / (s.t1 - s.t0);
        case SegmentShape::Step: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

} // namespace

double adiabaticity_metric(const BathSpec& bath, const CouplingSchedule& s, double tol) {
    if (s.has_steps()) return std::numeric_limits<double>::infinity();
    const double phi2 = spectral_integral(bath, tol).phi2;
    const double T = s.duration();
    double metric = 0.0;
    for (const Segment& seg : s.segments()) {
        const double r = max_abs_slope(seg);
        metric = std::max(metric, r * r * T * phi2 / bath.mass);
    }
    return metric;
}

double nonadiabatic_error_bound(const BathSpec& bath, const CouplingSchedule& s, double tol) {
    if (s.has_steps()) return std::numeric_limits<double>::infinity();
    const double phi2 = spectral_integral(bath, tol).phi2;
    double r = 0.0;
    for (const Segment& seg : s.segments()) r = std::max(r, max_abs_slope(seg));
    return r * r * phi2 / (bath.mass * bath.mass);
}

} // namespace recoh
