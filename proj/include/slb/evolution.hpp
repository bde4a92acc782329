#pragma once

// Time integration of the simplified extensible filament evolution:
// the stiff main part is advanced by the exact semigroup of the straight
// NtD composed with the fourth derivative, conjugated by the frame map Phi
// (or by a fixed Cartesian axis frame); an optional boundary-integral
// correction is applied as an explicit forcing.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "slb/bvp.hpp"
#include "slb/errors.hpp"
#include "slb/fields.hpp"
#include "slb/geometry.hpp"
#include "slb/multipliers.hpp"

namespace slb::evolution {

using Eigen::Vector3d;
using fields::PeriodicVectorField;
using multipliers::Direction;

enum class Variant { FrameSpectral, Cartesian };

struct SchemeConfig {
    Variant variant = Variant::FrameSpectral;
    double dt = 1e-5;
    long steps = 100;
    long correction_every = 0;         // 0 disables the boundary-integral correction
    std::size_t bvp_ns = 48;           // correction solve resolution
    std::size_t bvp_ntheta = 8;
    double separation_floor = 0.0;     // 0: half of the initial separation
    double lambda_min = 0.5, lambda_max = 1.5;
    long snapshot_every = 0;
};

struct Diagnostics {
    double lambda = 0.0;
    double kappa_star = 0.0;
    double separation = 0.0;
    double bending_energy = 0.0;   // int |d^2 X / d sigma^2|^2 d sigma
    double effective_radius = 0.0; // lambda / (2 pi)
};

struct EvolutionState {
    double t = 0.0;
    geometry::FourierCurve curve;  // material parameterization
    double lambda = 0.0;
    Diagnostics diag;
    bool underresolved = false;
};

enum class AbortReason { None, LambdaOutOfRange, SelfIntersection };

struct StepReport {
    double energy_before = 0.0;  // weighted spectral energy in the step frame
    double energy_after = 0.0;
    AbortReason abort = AbortReason::None;
};

// ---------------------------------------------------------------------------

inline double bending_energy(const geometry::FourierCurve& c) {
    double acc = 0.0;
    for (int k = 1; k <= c.mode_count(); ++k) {
        const double w = std::pow(2.0 * M_PI * k, 4);
        acc += 2.0 * w * c.coeff(k).squaredNorm();
    }
    return acc;
}

inline Diagnostics compute_diagnostics(const geometry::FourierCurve& c) {
    Diagnostics d;
    d.lambda = geometry::compute_length(c);
    d.kappa_star = geometry::max_curvature(c);
    d.separation = geometry::min_separation(c).value;
    d.bending_energy = bending_energy(c);
    d.effective_radius = d.lambda / (2.0 * M_PI);
    return d;
}

/// R(t) = R0 - (2 pi)^3 m_n(1) t: the closed-form radius law of the scheme
/// on a centered circle, valid while the geometry constraints hold
inline double circle_reduction_oracle(double r0, double eps, double t) {
    if (!(r0 > 0)) throw DomainError("circle_reduction_oracle: R0 must be positive");
    const double mn1 = 1.0 / multipliers::dtn_eigen_normal(multipliers::SymbolQuery(eps, 1));
    return r0 - std::pow(2.0 * M_PI, 3) * mn1 * t;
}

namespace detail {

/// frame triads of the unit-length rescaling, sampled at the arclength
/// positions of the material grid points
inline fields::FrameOnGrid scheme_frame(const geometry::FourierCurve& curve,
                                        const SchemeConfig& cfg, std::size_t n,
                                        double lambda) {
    if (cfg.variant == Variant::Cartesian) {
        // fixed axis: the material average of the unit tangent, or the mean
        // binormal when that degenerates (closed curves in a plane)
        Vector3d axis = Vector3d::Zero(), binormal = Vector3d::Zero();
        Vector3d center = Vector3d::Zero();
        for (std::size_t i = 0; i < n; ++i)
            center += curve.eval(static_cast<double>(i) / static_cast<double>(n));
        center /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(n);
            const Vector3d d1 = curve.eval(s, 1);
            axis += d1.normalized();
            binormal += (curve.eval(s) - center).cross(d1.normalized());
        }
        if (axis.norm() < 1e-8) axis = binormal;
        if (axis.norm() < 1e-12)
            throw GeometryError("scheme_frame: cartesian axis is degenerate");
        axis.normalize();
        int a = 0;
        for (int d = 1; d < 3; ++d)
            if (std::fabs(axis[d]) < std::fabs(axis[a])) a = d;
        const Vector3d u = (Vector3d::Unit(a) - axis[a] * axis).normalized();
        fields::FrameOnGrid fr;
        fr.e_t.assign(n, axis);
        fr.e_n1.assign(n, u);
        fr.e_n2.assign(n, axis.cross(u));
        return fr;
    }

    // frame-spectral: frame of the unit-length rescaled curve at the
    // arclength positions of the material nodes
    const auto unit = geometry::rescale_to_unit_length(curve);
    const auto frame = geometry::periodicized_frame(unit);
    // cumulative arclength of the material curve via its speed spectrum
    std::vector<double> speed(n);
    for (std::size_t i = 0; i < n; ++i)
        speed[i] = curve.eval(static_cast<double>(i) / static_cast<double>(n), 1).norm();
    const auto vh = fft::forward(speed);
    fields::FrameOnGrid fr;
    fr.e_t.resize(n);
    fr.e_n1.resize(n);
    fr.e_n2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = static_cast<double>(i) / static_cast<double>(n);
        double arc = vh[0].real() * sigma;
        for (std::size_t m = 1; m < n; ++m) {
            if (n % 2 == 0 && m == n / 2) continue;
            const long k = fft::mode_of_bin(m, n);
            const fft::Cd iw(0.0, 2.0 * M_PI * static_cast<double>(k));
            arc += ((vh[m] / iw) *
                    (std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) * sigma) - 1.0))
                       .real();
        }
        const auto tr = frame.eval(arc / lambda);
        fr.e_t[i] = tr.e_t;
        fr.e_n1[i] = tr.e_n1;
        fr.e_n2[i] = tr.e_n2;
    }
    return fr;
}

} // namespace detail

/// One exponential-integrator step of the main part: conjugate by Phi,
/// advance each mode by the semigroup factor with tau = dt / lambda (lambda
/// frozen at step start), the k = 0 channel by the nearest-mode mobility.
inline StepReport main_part_step(EvolutionState& state, const SchemeConfig& cfg) {
    StepReport rep;
    const int kcap = state.curve.mode_count();
    const std::size_t n = std::max<std::size_t>(4 * static_cast<std::size_t>(kcap), 64);
    const double lambda = geometry::compute_length(state.curve);
    state.lambda = lambda;
    if (lambda < cfg.lambda_min || lambda > cfg.lambda_max) {
        rep.abort = AbortReason::LambdaOutOfRange;
        return rep;
    }
    const double eps = state.curve.eps();
    const double tau = cfg.dt / lambda;

    const auto fr = detail::scheme_frame(state.curve, cfg, n, lambda);
    PeriodicVectorField x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = state.curve.eval(static_cast<double>(i) / static_cast<double>(n));
    const auto h = fields::phi_inverse(fr, x);
    auto spec = h.spectrum();

    const double mt1 = 1.0 / multipliers::dtn_eigen_tangential(multipliers::SymbolQuery(eps, 1));
    const double mn1 = 1.0 / multipliers::dtn_eigen_normal(multipliers::SymbolQuery(eps, 1));
    const double w41 = std::pow(2.0 * M_PI, 4);

    auto energy = [&](const std::array<std::vector<fft::Cd>, 3>& sp) {
        double acc = 0.0;
        for (std::size_t m = 1; m < n; ++m) {
            const long k = fft::mode_of_bin(m, n);
            if (k == 0) continue;
            const multipliers::SymbolQuery q(eps, k);
            const double w4 = std::pow(2.0 * M_PI * static_cast<double>(k), 4);
            acc += w4 / multipliers::dtn_eigen_normal(q) *
                   (std::norm(sp[0][m]) + std::norm(sp[1][m]));
            acc += w4 / multipliers::dtn_eigen_tangential(q) * std::norm(sp[2][m]);
        }
        return acc;
    };
    rep.energy_before = energy(spec);

    for (std::size_t m = 0; m < n; ++m) {
        const long k = fft::mode_of_bin(m, n);
        double fn, ft;
        if (k == 0) {
            // nearest-mode mobility regularizes the log-divergent zero mode
            fn = std::exp(-tau * w41 * mn1);
            ft = std::exp(-tau * w41 * mt1);
        } else {
            const multipliers::SymbolQuery q(eps, k);
            fn = multipliers::semigroup_factor(Direction::Normal, q, tau);
            ft = multipliers::semigroup_factor(Direction::Tangential, q, tau);
        }
        spec[0][m] *= fn;
        spec[1][m] *= fn;
        spec[2][m] *= ft;
    }
    rep.energy_after = energy(spec);

    const auto xnew = fields::phi_forward(fr, PeriodicVectorField::from_spectrum(spec));

    // re-truncate to the mode cap and flag unresolved tails
    const auto full_spec = xnew.spectrum();
    double tail = 0.0, total = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
        const long k = fft::mode_of_bin(m, n);
        const double e = std::norm(full_spec[0][m]) + std::norm(full_spec[1][m]) +
                         std::norm(full_spec[2][m]);
        total += e;
        if (std::labs(k) > kcap) tail += e;
    }
    if (tail > 1e-12 * total) state.underresolved = true;

    state.curve = geometry::FourierCurve::from_samples(xnew.values(), kcap, eps);
    state.t += cfg.dt;
    state.lambda = geometry::compute_length(state.curve);
    return rep;
}

/// explicit boundary-integral correction: the difference between the curved
/// NtD applied to the fourth-derivative forcing (through the rescaling rule)
/// and the main-part prediction, returned as a forcing on the material grid
inline PeriodicVectorField correction_force(const EvolutionState& state,
                                            const SchemeConfig& cfg) {
    const int kcap = state.curve.mode_count();
    const std::size_t n = cfg.bvp_ns;
    const double lambda = geometry::compute_length(state.curve);
    const double eps = state.curve.eps();

    // forcing -d^4 X / d sigma^4 at the rescaled arclength parameter: on the
    // unit-length curve the material index is reused directly
    const auto unit = geometry::rescale_to_unit_length(state.curve);
    PeriodicVectorField f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        f[i] = -state.curve.eval(s, 4);
    }

    const auto frame = geometry::periodicized_frame(unit);
    bvp::DtnSystem sys(frame, n, cfg.bvp_ntheta);
    const auto curved = bvp::ntd_curved(sys, f);

    // main-part prediction with the same zero-mode convention
    const fields::FrameOnGrid fr(frame, n);
    auto spec = fields::phi_inverse(fr, f).spectrum();
    const double mt1 = 1.0 / multipliers::dtn_eigen_tangential(multipliers::SymbolQuery(eps, 1));
    const double mn1 = 1.0 / multipliers::dtn_eigen_normal(multipliers::SymbolQuery(eps, 1));
    for (std::size_t m = 0; m < n; ++m) {
        const long k = fft::mode_of_bin(m, n);
        double fn = mn1, ft = mt1;
        if (k != 0) {
            const multipliers::SymbolQuery q(eps, k);
            fn = 1.0 / multipliers::dtn_eigen_normal(q);
            ft = 1.0 / multipliers::dtn_eigen_tangential(q);
        }
        spec[0][m] *= fn;
        spec[1][m] *= fn;
        spec[2][m] *= ft;
    }
    const auto predicted = fields::phi_forward(fr, PeriodicVectorField::from_spectrum(spec));

    PeriodicVectorField delta(n);
    for (std::size_t i = 0; i < n; ++i)
        delta[i] = (curved.velocity[i] - predicted[i]) / lambda;
    (void)kcap;
    return delta;
}

struct Trajectory {
    std::vector<EvolutionState> states;  // one record per accepted step
    AbortReason abort = AbortReason::None;
    long aborted_at_step = -1;
};

/// run the scheme from a unit-length arclength-parameterized initial curve
inline Trajectory evolve(const geometry::FourierCurve& initial, const SchemeConfig& cfg) {
    // enforce the arclength initial condition |d X / d sigma| = 1
    {
        const std::size_t n = geometry::dense_grid_size(initial);
        for (std::size_t i = 0; i < n; ++i) {
            const double v =
                initial.eval(static_cast<double>(i) / static_cast<double>(n), 1).norm();
            if (std::fabs(v - 1.0) > 1e-6)
                throw DomainError("evolve: initial curve must be unit-speed (unit length)");
        }
    }
    Trajectory traj;
    EvolutionState state;
    state.curve = initial;
    state.t = 0.0;
    state.diag = compute_diagnostics(initial);
    state.lambda = state.diag.lambda;
    const double sep_floor = cfg.separation_floor > 0.0 ? cfg.separation_floor
                                                        : 0.5 * state.diag.separation;
    traj.states.push_back(state);

    PeriodicVectorField correction;
    for (long step = 0; step < cfg.steps; ++step) {
        if (cfg.correction_every > 0 && step % cfg.correction_every == 0)
            correction = correction_force(state, cfg);
        const auto rep = main_part_step(state, cfg);
        if (rep.abort != AbortReason::None) {
            traj.abort = rep.abort;
            traj.aborted_at_step = step;
            break;
        }
        if (cfg.correction_every > 0) {
            // Euler application of the explicit forcing on the material grid
            const int kcap = state.curve.mode_count();
            const std::size_t n = std::max<std::size_t>(4 * static_cast<std::size_t>(kcap), 64);
            std::vector<Vector3d> vals(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double s = static_cast<double>(i) / static_cast<double>(n);
                vals[i] = state.curve.eval(s) + cfg.dt * correction.eval(s);
            }
            state.curve =
                geometry::FourierCurve::from_samples(vals, kcap, state.curve.eps());
        }
        state.diag = compute_diagnostics(state.curve);
        state.lambda = state.diag.lambda;
        if (state.diag.separation < sep_floor) {
            traj.abort = AbortReason::SelfIntersection;
            traj.aborted_at_step = step;
            traj.states.push_back(state);
            break;
        }
        traj.states.push_back(state);
    }
    return traj;
}

} // namespace slb::evolution
