// bath.hpp — massive 1-D scalar bath: coupling profile, mode grids,
// spectral integrals, coupling schedules, adiabaticity diagnostics.

#pragma once

#include <cstdint>
#include <vector>

#include "recoh/errors.hpp"
#include "recoh/util.hpp"

namespace recoh {

// Single discretized bath mode: wavenumber and quadrature weight, chosen so
// that sums sum_j w_j f(k_j) approximate full-line integrals of even f.
struct Mode {
    double k = 0.0;
    double weight = 0.0;
};

enum class CouplingProfile { Exponential };

// Normalization of ln J = -c eps^2 D, with D the full-line spectral integral
// of |h(k)|^2/omega_k. Fixed once by matching the exact dressed-state algebra
// of the discrete-mode Hamiltonian (per-mode ground state amplitude
// i eps g / sqrt(2 omega) with g^2 = w h^2 / 2), and cross-checked against
// the truncated-Fock reference evolution. Recorded in every run manifest.
inline constexpr double kOverlapExponentScale = 0.5;

struct BathSpec {
    double mass = 1.0;    // bath gap m (inverse time, natural units)
    double cutoff = 1.0;  // profile length scale Gamma
    CouplingProfile profile = CouplingProfile::Exponential;
    std::vector<Mode> modes;  // strictly increasing in k, weights > 0

    double h_hat(double k) const { return std::exp(-0.5 * cutoff * std::abs(k)); }
    double omega(double k) const { return std::sqrt(k * k + mass * mass); }

    // k beyond which h(k)^2 < 1e-8; truncation point for mode grids
    double grid_k_max() const { return 8.0 * std::log(10.0) / cutoff; }

    void validate() const;

    // Identity tag for amplitude-list shape checks
    std::uint64_t grid_fingerprint() const;

    // Composite Gauss-Legendre grid: octave panels from 0 to grid_k_max()
    // (split at the dispersion knee k = m), mirrored to +-k.
    static BathSpec with_grid(double mass, double cutoff, int panel_order = 16);

    // Explicit grid, e.g. few-mode configurations matched to Fock oracles
    static BathSpec with_modes(double mass, double cutoff, std::vector<Mode> modes);
};

struct SpectralReport {
    double D = 0.0;                 // full-line integral of h(k)^2/omega_k
    double phi2 = 0.0;              // smeared-field variance, D/2 (symmetric-mode convention)
    double quadrature_error = 0.0;  // absolute error estimate
};

// D and phi2 by adaptive quadrature with absolute-error target `tol`.
// Throws QuadratureFailure if the subdivision budget is exhausted.
SpectralReport spectral_integral(const BathSpec& bath, double tol = 1e-10);

// ln J = -kOverlapExponentScale * eps^2 * D (continuum quadrature route)
double decoherence_exponent(const BathSpec& bath, double eps, double tol = 1e-10);

// Same exponent evaluated as a grid sum over bath.modes; exactly consistent
// with pairwise overlaps of adiabatic branch amplitudes on that grid.
double decoherence_exponent_on_grid(const BathSpec& bath, double eps);

// Grid sum of w h^2/omega (the discrete counterpart of D)
double spectral_sum_on_grid(const BathSpec& bath);

// Full-line integrals used by the oscillator scenario:
//   squared_profile_weight = integral of h(k)^2 dk
//   mass_kernel            = integral of h(k)^2/(k^2+m^2) dk
double squared_profile_weight(const BathSpec& bath, double tol = 1e-10);
double mass_kernel(const BathSpec& bath, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Coupling schedule eps(t): contiguous segments over [0, T]

enum class SegmentShape { LinearRamp, SmoothRamp, Plateau, Step };

struct Segment {
    double t0 = 0.0;
    double t1 = 0.0;
    SegmentShape shape = SegmentShape::Plateau;
    double eps0 = 0.0;
    double eps1 = 0.0;
};

struct ScheduleValue {
    double eps = 0.0;
    double eps_dot = 0.0;
    bool step_edge = false;  // exactly on a step; eps is the right limit
};

class CouplingSchedule {
  public:
    CouplingSchedule() = default;
    explicit CouplingSchedule(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    double duration() const { return segments_.empty() ? 0.0 : segments_.back().t1; }
    bool has_steps() const;
    double max_eps() const;

    // eps(t) and eps_dot(t); right-limit convention on boundaries.
    // Throws std::domain_error outside [0, T].
    ScheduleValue eval(double t) const;

    // Convenience builders
    static CouplingSchedule constant(double eps, double T);
    // smooth ramp 0->eps_max, hold, smooth ramp back to 0
    static CouplingSchedule round_trip(double eps_max, double t_ramp, double t_hold);
    // smooth ramp 0->eps_max, hold, instantaneous drop to 0, free window
    static CouplingSchedule ramp_hold_step_off(double eps_max, double t_ramp,
                                               double t_hold, double t_after);

  private:
    std::vector<Segment> segments_;
};

// Trust diagnostic for the analytic formulas: max over non-step segments of
// eps_dot^2 * T * (1/m) * phi2 (the neglected-term estimate; T is the total
// schedule duration). Infinite if the schedule contains steps.
double adiabaticity_metric(const BathSpec& bath, const CouplingSchedule& s,
                           double tol = 1e-10);

// Sharper bound on the ln J error for a gapped bath: the quasi-steady mode
// deviation gives |delta ln J| <= max eps_dot^2 * phi2 / m^2. This is the
// quantity the analytic/oracle agreement actually tracks.
double nonadiabatic_error_bound(const BathSpec& bath, const CouplingSchedule& s,
                                double tol = 1e-10);

} // namespace recoh
