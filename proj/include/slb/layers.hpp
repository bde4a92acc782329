#pragma once

// Stokes layer kernels (Stokeslet, stresslet, rotlet, double-layer pressure,
// hypersingular traction kernel, completion flow) and their quadrature-based
// application on the filament surface. On-surface evaluation uses the
// staggered trapezoid rule: sources sit half a cell off the targets in both
// s and theta, so no node hits the singularity and the principal value needs
// no special handling.
//
// A straight-cylinder rule with periodic images provides the reference
// against the analytic symbols, together with the Bessel theta-integral
// identities behind them.

#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "slb/errors.hpp"
#include "slb/fields.hpp"
#include "slb/geometry.hpp"
#include "slb/multipliers.hpp"
#include "slb/specfun.hpp"

namespace slb::layers {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using fields::PeriodicVectorField;
using fields::SurfaceField;
using geometry::SurfaceGrid;

inline constexpr double kCoincidentTol = 1e-13;

// ---------------------------------------------------------------------------
// Kernels

/// free-space Stokeslet (1/8 pi)(I/|R| + R R^T/|R|^3)
inline Matrix3d stokeslet(const Vector3d& x, const Vector3d& xp) {
    const Vector3d r = x - xp;
    const double d = r.norm();
    if (d < kCoincidentTol) throw SingularityError("stokeslet: coincident points");
    return (Matrix3d::Identity() / d + r * r.transpose() / (d * d * d)) / (8.0 * M_PI);
}

/// stresslet (3/4 pi) R R^T (R . n') / |R|^5
inline Matrix3d stresslet(const Vector3d& x, const Vector3d& xp, const Vector3d& np) {
    const Vector3d r = x - xp;
    const double d = r.norm();
    if (d < kCoincidentTol) throw SingularityError("stresslet: coincident points");
    const double d5 = d * d * d * d * d;
    return (3.0 / (4.0 * M_PI)) * (r.dot(np) / d5) * (r * r.transpose());
}

/// rotlet kernel -R/|R|^3 (point-torque flow is (1/8 pi) rotlet x torque)
inline Vector3d rotlet(const Vector3d& x, const Vector3d& y) {
    const Vector3d r = x - y;
    const double d = r.norm();
    if (d < kCoincidentTol) throw SingularityError("rotlet: coincident points");
    return -r / (d * d * d);
}

/// vector-valued pressure kernel of the double layer representation
inline Vector3d pressure_kernel(const Vector3d& x, const Vector3d& xp, const Vector3d& np) {
    const Vector3d r = x - xp;
    const double d = r.norm();
    if (d < kCoincidentTol) throw SingularityError("pressure_kernel: coincident points");
    const double d3 = d * d * d, d5 = d3 * d * d;
    return (-np / d3 + 3.0 * r * (r.dot(np)) / d5) / (2.0 * M_PI);
}

/// kernel of the double-layer stress contracted with the target normal
inline Matrix3d hypersingular_kernel(const Vector3d& x, const Vector3d& xp, const Vector3d& n,
                                     const Vector3d& np) {
    const Vector3d r = x - xp;
    const double d = r.norm();
    if (d < kCoincidentTol) throw SingularityError("hypersingular_kernel: coincident points");
    const double d3 = d * d * d;
    const double d5 = d3 * d * d;
    const double d7 = d5 * d * d;
    const double rn = r.dot(n), rnp = r.dot(np);
    Matrix3d k = 2.0 * (n * np.transpose()) / d3;
    k += 3.0 * (rnp * (r * n.transpose()) + n.dot(np) * (r * r.transpose())) / d5;
    k += 3.0 * (rn * rnp * Matrix3d::Identity() + rn * (np * r.transpose())) / d5;
    k += -30.0 * rn * rnp * (r * r.transpose()) / d7;
    return k / (4.0 * M_PI);
}

// ---------------------------------------------------------------------------
// Deterministic parallel loop over targets (sources summed in fixed order
// within each target, so results are bit-identical for any thread count)

inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("SBF_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    return std::max(1u, n);
}

template <typename Fn>
void parallel_over_targets(std::size_t count, Fn&& body) {
    const unsigned nw = std::min<std::size_t>(worker_count(), count);
    if (nw <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += nw) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Surface quadrature applications

inline std::vector<Vector3d> single_layer_apply_points(const SurfaceGrid& src,
                                                       const SurfaceField& phi,
                                                       const std::vector<Vector3d>& points) {
    std::vector<Vector3d> out(points.size());
    const double w = src.ds() * src.dtheta();
    parallel_over_targets(points.size(), [&](std::size_t f) {
        Vector3d acc = Vector3d::Zero();
        for (std::size_t g = 0; g < src.node.size(); ++g)
            acc += stokeslet(points[f], src.node[g]) * phi[g] * src.jac[g];
        out[f] = acc * w;
    });
    return out;
}

enum class Side { OnSurface, ExteriorLimit };

inline std::vector<Vector3d> double_layer_apply_points(const SurfaceGrid& src,
                                                       const SurfaceField& psi,
                                                       const std::vector<Vector3d>& points) {
    std::vector<Vector3d> out(points.size());
    const double w = src.ds() * src.dtheta();
    parallel_over_targets(points.size(), [&](std::size_t f) {
        Vector3d acc = Vector3d::Zero();
        for (std::size_t g = 0; g < src.node.size(); ++g)
            acc += stresslet(points[f], src.node[g], src.normal[g]) * psi[g] * src.jac[g];
        out[f] = acc * w;
    });
    return out;
}

/// completion flow: centerline Stokeslets plus (1/8 pi)-normalized rotlets
/// with moment (x' - X(s')) x phi(x'); smooth on the surface since the
/// singularities sit on the centerline
template <typename TargetAt>
std::vector<Vector3d> completion_flow_generic(const SurfaceGrid& src, const SurfaceField& phi,
                                              std::size_t count, TargetAt&& target_at) {
    std::vector<Vector3d> out(count);
    const double w = src.ds() * src.dtheta();
    parallel_over_targets(count, [&](std::size_t f) {
        const Vector3d x = target_at(f);
        Vector3d acc = Vector3d::Zero();
        for (std::size_t i = 0; i < src.ns; ++i) {
            const Vector3d& xc = src.center[i];
            for (std::size_t j = 0; j < src.ntheta; ++j) {
                const std::size_t g = src.idx(i, j);
                const Vector3d moment = (src.node[g] - xc).cross(phi[g]);
                acc += (stokeslet(x, xc) * phi[g] +
                        rotlet(x, xc).cross(moment) / (8.0 * M_PI)) *
                       src.jac[g];
            }
        }
        out[f] = acc * w;
    });
    return out;
}

inline SurfaceField completion_flow_apply(const SurfaceGrid& src, const SurfaceField& phi,
                                          const SurfaceGrid& tgt) {
    if (phi.ns() != src.ns || phi.ntheta() != src.ntheta)
        throw GridMismatchError("completion_flow_apply: density does not match source grid");
    const auto vals = completion_flow_generic(src, phi, tgt.node.size(),
                                              [&](std::size_t f) { return tgt.node[f]; });
    SurfaceField out(tgt.ns, tgt.ntheta);
    for (std::size_t f = 0; f < vals.size(); ++f) out[f] = vals[f];
    return out;
}

inline std::vector<Vector3d> completion_flow_apply_points(const SurfaceGrid& src,
                                                          const SurfaceField& phi,
                                                          const std::vector<Vector3d>& pts) {
    return completion_flow_generic(src, phi, pts.size(),
                                   [&](std::size_t f) { return pts[f]; });
}

/// distance from a point to the sampled centerline (for inside/outside tests)
inline double centerline_distance(const SurfaceGrid& src, const Vector3d& x) {
    double d = std::numeric_limits<double>::max();
    for (const auto& xc : src.center) d = std::min(d, (x - xc).norm());
    return d;
}

/// u(x) = D[phi](x) + V[phi](x) for x in the exterior
inline Vector3d exterior_velocity(const SurfaceGrid& src, const SurfaceField& phi,
                                  const Vector3d& x) {
    if (centerline_distance(src, x) < src.eps)
        throw DomainError("exterior_velocity: point lies inside the filament");
    const auto d = double_layer_apply_points(src, phi, {x});
    const auto v = completion_flow_apply_points(src, phi, {x});
    return d[0] + v[0];
}

/// sigma[V[phi]] n at the target nodes: Stokeslet traction plus rotlet
/// stress of the centerline distribution
inline SurfaceField completion_traction(const SurfaceGrid& src, const SurfaceField& phi,
                                        const SurfaceGrid& tgt) {
    if (phi.ns() != src.ns || phi.ntheta() != src.ntheta)
        throw GridMismatchError("completion_traction: density does not match source grid");
    SurfaceField out(tgt.ns, tgt.ntheta);
    const double w = src.ds() * src.dtheta();
    parallel_over_targets(tgt.ns * tgt.ntheta, [&](std::size_t f) {
        const Vector3d& x = tgt.node[f];
        const Vector3d& n = tgt.normal[f];
        Vector3d acc = Vector3d::Zero();
        for (std::size_t i = 0; i < src.ns; ++i) {
            const Vector3d& xc = src.center[i];
            const Vector3d rx = x - xc;
            const double d = rx.norm();
            const double d5 = std::pow(d, 5);
            for (std::size_t j = 0; j < src.ntheta; ++j) {
                const std::size_t g = src.idx(i, j);
                const Vector3d moment = (src.node[g] - xc).cross(phi[g]);
                const Vector3d rxm = rx.cross(moment);
                Vector3d tr = -2.0 * rx.dot(n) * rx.dot(phi[g]) * rx / d5;
                tr += rx.dot(n) / d5 * rxm;
                tr += rx / d5 * (n.dot(rxm));
                acc += (3.0 / (8.0 * M_PI)) * tr * src.jac[g];
            }
        }
        out[f] = acc * w;
    });
    return out;
}

/// T[phi](x_t) = -sigma[D[phi]] n - sigma[V[phi]] n with the density
/// subtraction form: the hypersingular kernel acts on phi(x') - phi(x_t)
inline SurfaceField hypersingular_traction(const SurfaceGrid& src, const SurfaceField& phi,
                                           const SurfaceGrid& tgt) {
    if (phi.ns() != src.ns || phi.ntheta() != src.ntheta)
        throw GridMismatchError("hypersingular_traction: density does not match source grid");
    const SurfaceField phi_t = fields::resample_surface_field(
        phi, tgt.offset_s - src.offset_s, tgt.offset_theta - src.offset_theta);
    SurfaceField out(tgt.ns, tgt.ntheta);
    const double w = src.ds() * src.dtheta();
    parallel_over_targets(tgt.ns * tgt.ntheta, [&](std::size_t f) {
        const Vector3d& x = tgt.node[f];
        const Vector3d& n = tgt.normal[f];
        Vector3d acc = Vector3d::Zero();
        for (std::size_t g = 0; g < src.node.size(); ++g)
            acc -= hypersingular_kernel(x, src.node[g], n, src.normal[g]) *
                   (phi[g] - phi_t[f]) * src.jac[g];
        out[f] = acc * w;
    });
    const SurfaceField vtr = completion_traction(src, phi, tgt);
    for (std::size_t f = 0; f < out.size(); ++f) out[f] -= vtr[f];
    return out;
}


// ---------------------------------------------------------------------------
// Local correction of the staggered rule (the flagged singularity-subtraction
// variant): subtract the straight-cylinder model kernel with frozen density
// at the target, add back its exact one-period window integral. Because the
// relative (s, theta) offsets form the same lattice for every target, the
// subtracted sum factors and the whole correction is one 3x3 matrix
// diag(T - L) rotated into the local (e_r, e_theta, e_t) basis.

enum class QuadratureVariant { PlainStaggered, StraightSubtraction };

namespace detail {

/// window s-integrals A_nm(c) = int_{-L}^{L} s^n (s^2+c^2)^{-m/2} ds, L = 1/2
struct WindowA {
    double a01, a23, a03, a05, a25;
    WindowA(double c) {
        const double L = 0.5;
        const double r = std::sqrt(L * L + c * c);
        a01 = 2.0 * std::asinh(L / c);
        a23 = a01 - 2.0 * L / r;
        a03 = 2.0 * L / (c * c * r);
        a05 = 2.0 * L * (2.0 * L * L + 3.0 * c * c) / (3.0 * c * c * c * c * r * r * r);
        a25 = 2.0 * L * L * L / (3.0 * c * c * r * r * r);
    }
};

} // namespace detail

/// continuous one-period window integrals of the straight single and double
/// layer kernels against a frozen unit density, diagonal in the local
/// (e_r, e_theta, e_z) basis at the target
struct WindowIntegrals {
    Vector3d single_diag;
    Vector3d double_diag;
};

inline WindowIntegrals window_integrals(double eps) {
    // theta' integrals of elementary s-antiderivatives; log singularity at 0
    // handled by tanh-sinh, symmetric about theta' = pi
    // integrands factored so the c -> 0 cancellations are explicit
    auto fs = [&](double th) -> Vector3d {
        const double L = 0.5;
        const double c = 2.0 * eps * std::sin(0.5 * th);
        const double r = std::sqrt(L * L + c * c);
        const double a01 = 2.0 * std::asinh(L / c);
        const double a23 = a01 - 2.0 * L / r;
        const double omc = 1.0 - std::cos(th);
        return Vector3d(a01 + L * omc / r, a01 + L * (1.0 + std::cos(th)) / r, a01 + a23);
    };
    auto fd = [&](double th) -> Vector3d {
        const double L = 0.5;
        const double c = 2.0 * eps * std::sin(0.5 * th);
        const double r = std::sqrt(L * L + c * c);
        const double r3 = r * r * r;
        const double q = L * (2.0 * L * L + 3.0 * c * c) / (6.0 * eps * r3);
        const double omc = 1.0 - std::cos(th);
        return Vector3d(-omc * q, -(1.0 + std::cos(th)) * q,
                        -L * L * L / (3.0 * eps * r3));
    };
    Vector3d is = Vector3d::Zero(), id = Vector3d::Zero();
    const double h = 1.0 / 64.0;
    for (int i = -400; i <= 400; ++i) {
        const double t = h * static_cast<double>(i);
        const double sh = std::sinh(t);
        const double u = std::tanh(0.5 * M_PI * sh);
        const double w = 0.5 * M_PI * std::cosh(t) / std::pow(std::cosh(0.5 * M_PI * sh), 2);
        if (!(w > 1e-280)) continue;  // endpoint weight underflow
        const double th = 0.5 * M_PI * (u + 1.0);
        if (th < 1e-12 || th > M_PI - 1e-12) continue;
        is += w * fs(th);
        id += w * fd(th);
    }
    const double fac = h * 0.5 * M_PI * 2.0;  // symmetric half doubled
    WindowIntegrals out;
    out.single_diag = is * fac * eps / (8.0 * M_PI);
    out.double_diag = id * fac * eps * 3.0 / (4.0 * M_PI);
    return out;
}

/// lattice sums of the model kernels over the relative staggered grid,
/// diagonal by the parity of the offsets
struct LatticeSums {
    Vector3d single_diag;
    Vector3d double_diag;
};

inline LatticeSums lattice_sums(double eps, std::size_t ns, std::size_t ntheta,
                                double rel_offset_s, double rel_offset_theta) {
    const double ds = 1.0 / static_cast<double>(ns);
    const double dth = 2.0 * M_PI / static_cast<double>(ntheta);
    Eigen::Matrix3d accs = Eigen::Matrix3d::Zero(), accd = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < ns; ++i) {
        double dl = (static_cast<double>(i) - rel_offset_s) * ds;
        dl -= std::round(dl);  // wrap to [-1/2, 1/2)
        for (std::size_t j = 0; j < ntheta; ++j) {
            const double al = (static_cast<double>(j) - rel_offset_theta) * dth;
            // model source relative to target at (eps, 0, 0) on the local tube
            const Vector3d xp(eps * std::cos(al), eps * std::sin(al), dl);
            const Vector3d x(eps, 0.0, 0.0);
            const Vector3d np(std::cos(al), std::sin(al), 0.0);
            accs += stokeslet(x, xp) * eps;
            accd += stresslet(x, xp, np) * eps;
        }
    }
    accs *= ds * dth;
    accd *= ds * dth;
    return {accs.diagonal(), accd.diagonal()};
}

/// correction matrices diag(T - L) for both layer kernels on a fixed
/// source/target grid pair
struct LocalCorrection {
    Vector3d single_diag = Vector3d::Zero();
    Vector3d double_diag = Vector3d::Zero();

    static LocalCorrection for_grids(const SurfaceGrid& src, const SurfaceGrid& tgt) {
        const auto w = window_integrals(src.eps);
        const auto l = lattice_sums(src.eps, src.ns, src.ntheta,
                                    tgt.offset_s - src.offset_s,
                                    tgt.offset_theta - src.offset_theta);
        return {w.single_diag - l.single_diag, w.double_diag - l.double_diag};
    }
};

/// local orthonormal basis [e_r, e_theta, e_t] at a target node
inline Eigen::Matrix3d local_basis(const SurfaceGrid& g, std::size_t i, std::size_t j) {
    Eigen::Matrix3d b;
    b.col(0) = g.normal[g.idx(i, j)];
    b.col(2) = g.tangent[i];
    b.col(1) = b.col(2).cross(b.col(0));
    return b;
}

/// S[phi](x_t): staggered trapezoid sum of G(x_t, x_j) phi_j J_j ds dtheta;
/// the subtraction variant adds the local correction B diag(T - L) B^T phi(x_t)
inline SurfaceField single_layer_apply(const SurfaceGrid& src, const SurfaceField& phi,
                                       const SurfaceGrid& tgt,
                                       QuadratureVariant variant = QuadratureVariant::PlainStaggered) {
    if (phi.ns() != src.ns || phi.ntheta() != src.ntheta)
        throw GridMismatchError("single_layer_apply: density does not match source grid");
    SurfaceField out(tgt.ns, tgt.ntheta);
    const double w = src.ds() * src.dtheta();
    parallel_over_targets(tgt.ns * tgt.ntheta, [&](std::size_t f) {
        const Vector3d& x = tgt.node[f];
        Vector3d acc = Vector3d::Zero();
        for (std::size_t g = 0; g < src.node.size(); ++g)
            acc += stokeslet(x, src.node[g]) * phi[g] * src.jac[g];
        out[f] = acc * w;
    });
    if (variant == QuadratureVariant::StraightSubtraction) {
        const auto corr = LocalCorrection::for_grids(src, tgt);
        const SurfaceField phi_t = fields::resample_surface_field(
            phi, tgt.offset_s - src.offset_s, tgt.offset_theta - src.offset_theta);
        for (std::size_t i = 0; i < tgt.ns; ++i)
            for (std::size_t j = 0; j < tgt.ntheta; ++j) {
                const Eigen::Matrix3d b = local_basis(tgt, i, j);
                const std::size_t f = tgt.idx(i, j);
                out[f] += b * corr.single_diag.asDiagonal() * b.transpose() * phi_t[f];
            }
    }
    return out;
}

/// D[psi](x_t); the exterior limit adds the jump +psi/2 with psi resampled
/// at the target nodes
inline SurfaceField double_layer_apply(const SurfaceGrid& src, const SurfaceField& psi,
                                       const SurfaceGrid& tgt, Side side = Side::OnSurface,
                                       QuadratureVariant variant = QuadratureVariant::PlainStaggered) {
    if (psi.ns() != src.ns || psi.ntheta() != src.ntheta)
        throw GridMismatchError("double_layer_apply: density does not match source grid");
    SurfaceField out(tgt.ns, tgt.ntheta);
    const double w = src.ds() * src.dtheta();
    parallel_over_targets(tgt.ns * tgt.ntheta, [&](std::size_t f) {
        const Vector3d& x = tgt.node[f];
        Vector3d acc = Vector3d::Zero();
        for (std::size_t g = 0; g < src.node.size(); ++g)
            acc += stresslet(x, src.node[g], src.normal[g]) * psi[g] * src.jac[g];
        out[f] = acc * w;
    });
    const bool need_resample =
        side == Side::ExteriorLimit || variant == QuadratureVariant::StraightSubtraction;
    if (need_resample) {
        const SurfaceField psi_t = fields::resample_surface_field(
            psi, tgt.offset_s - src.offset_s, tgt.offset_theta - src.offset_theta);
        if (variant == QuadratureVariant::StraightSubtraction) {
            const auto corr = LocalCorrection::for_grids(src, tgt);
            for (std::size_t i = 0; i < tgt.ns; ++i)
                for (std::size_t j = 0; j < tgt.ntheta; ++j) {
                    const Eigen::Matrix3d b = local_basis(tgt, i, j);
                    const std::size_t f = tgt.idx(i, j);
                    out[f] += b * corr.double_diag.asDiagonal() * b.transpose() * psi_t[f];
                }
        }
        if (side == Side::ExteriorLimit)
            for (std::size_t f = 0; f < out.size(); ++f) out[f] += 0.5 * psi_t[f];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Straight periodic cylinder reference rule

/// Quadrature rule for the 1-periodic straight cylinder of radius eps around
/// e_z. Sources carry +-image copies in z; a half-cell stagger separates
/// sources from targets. Used to validate the discrete layer operators
/// against the analytic symbols.
struct StraightCylinderRule {
    double eps;
    std::size_t ns, ntheta;
    long images;  // sources replicated for z-shifts -images..images

    Vector3d node(double s, double theta) const {
        return Vector3d(eps * std::cos(theta), eps * std::sin(theta), s);
    }
    static Vector3d normal_at(double theta) {
        return Vector3d(std::cos(theta), std::sin(theta), 0.0);
    }
};

enum class DensityDirection { TangentialZ, TangentialR, NormalX };

/// real source density evaluated at (s, theta): cos(2 pi k s) times e_z,
/// e_r or e_x
inline Vector3d straight_density(DensityDirection dir, long k, double s, double theta) {
    const double c = std::cos(2.0 * M_PI * static_cast<double>(k) * s);
    switch (dir) {
        case DensityDirection::TangentialZ: return Vector3d(0.0, 0.0, c);
        case DensityDirection::TangentialR: return c * StraightCylinderRule::normal_at(theta);
        case DensityDirection::NormalX: return Vector3d(c, 0.0, 0.0);
    }
    throw DomainError("straight_density: bad direction");
}

enum class LayerKind { Single, Double };

/// evaluate the discrete layer potential of the given density at one target
/// ring (s_t, theta_j + half stagger), summing the periodic images
inline std::vector<Vector3d> straight_layer_on_ring(
    const StraightCylinderRule& rule, LayerKind kind, DensityDirection dir, long k, double s_t,
    std::vector<double>& theta_out,
    QuadratureVariant variant = QuadratureVariant::PlainStaggered) {
    const double ds = 1.0 / static_cast<double>(rule.ns);
    const double dth = 2.0 * M_PI / static_cast<double>(rule.ntheta);
    theta_out.resize(rule.ntheta);
    for (std::size_t j = 0; j < rule.ntheta; ++j)
        theta_out[j] = dth * (static_cast<double>(j) + 0.5);

    std::vector<Vector3d> out(rule.ntheta, Vector3d::Zero());
    parallel_over_targets(rule.ntheta, [&](std::size_t jt) {
        const Vector3d x = rule.node(s_t, theta_out[jt]);
        Vector3d acc = Vector3d::Zero();
        Vector3d acc_half = Vector3d::Zero();  // partial sum at half the image count
        for (long m = -rule.images; m <= rule.images; ++m) {
            Vector3d shell = Vector3d::Zero();
            for (std::size_t i = 0; i < rule.ns; ++i) {
                const double s = ds * static_cast<double>(i);
                const double sz = s + static_cast<double>(m);
                for (std::size_t j = 0; j < rule.ntheta; ++j) {
                    const double th = dth * static_cast<double>(j);
                    const Vector3d xp = rule.node(sz, th);
                    const Vector3d ph = straight_density(dir, k, s, th);
                    if (kind == LayerKind::Single)
                        shell += stokeslet(x, xp) * ph;
                    else
                        shell += stresslet(x, xp, StraightCylinderRule::normal_at(th)) * ph;
                }
            }
            acc += shell;
            if (std::labs(m) <= rule.images / 2) acc_half += shell;
        }
        // the image tail decays like M^{-2}: Richardson-extrapolate it away
        acc += (acc - acc_half) / 3.0;
        out[jt] = acc * (rule.eps * ds * dth);  // J = eps on the straight tube
    });
    if (variant == QuadratureVariant::StraightSubtraction) {
        const auto w = window_integrals(rule.eps);
        const auto l = lattice_sums(rule.eps, rule.ns, rule.ntheta,
                                    s_t * static_cast<double>(rule.ns), 0.5);
        const Vector3d diag = kind == LayerKind::Single ? w.single_diag - l.single_diag
                                                        : w.double_diag - l.double_diag;
        for (std::size_t jt = 0; jt < rule.ntheta; ++jt) {
            Eigen::Matrix3d b;
            b.col(0) = StraightCylinderRule::normal_at(theta_out[jt]);
            b.col(2) = Vector3d::UnitZ();
            b.col(1) = b.col(2).cross(b.col(0));
            const Vector3d phi_t = straight_density(dir, k, s_t, theta_out[jt]);
            out[jt] += b * diag.asDiagonal() * b.transpose() * phi_t;
        }
    }
    return out;
}

/// measured symbol coefficients from the ring values; see the analytic
/// actions in multipliers.hpp for the expected combinations
struct RingProjection {
    double coef_ez = 0.0;        // theta-average of u . e_z
    double coef_er = 0.0;        // theta-average against e_r
    double coef_cos_er = 0.0;    // against cos(theta) e_r
    double coef_sin_eth = 0.0;   // against sin(theta) e_theta
    double coef_cos_ez = 0.0;    // against cos(theta) e_z
};

inline RingProjection project_ring(const std::vector<Vector3d>& u,
                                   const std::vector<double>& theta) {
    RingProjection p;
    const std::size_t n = u.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double ct = std::cos(theta[j]), st = std::sin(theta[j]);
        const Vector3d er(ct, st, 0.0), eth(-st, ct, 0.0);
        p.coef_ez += u[j][2];
        p.coef_er += u[j].dot(er);
        p.coef_cos_er += 2.0 * u[j].dot(er) * ct;
        p.coef_sin_eth += 2.0 * u[j].dot(eth) * st;
        p.coef_cos_ez += 2.0 * u[j][2] * ct;
    }
    const double inv = 1.0 / static_cast<double>(n);
    p.coef_ez *= inv;
    p.coef_er *= inv;
    p.coef_cos_er *= inv;
    p.coef_sin_eth *= inv;
    p.coef_cos_ez *= inv;
    return p;
}

// ---------------------------------------------------------------------------
// Bessel theta-integral identities (the closed forms behind the symbols)

namespace detail {

/// tanh-sinh quadrature on (0, pi); handles the integrable log endpoint
template <typename F>
double tanh_sinh_0_pi(F&& f) {
    const double h = 1.0 / 64.0;
    double acc = 0.0;
    for (int i = -400; i <= 400; ++i) {
        const double t = h * static_cast<double>(i);
        const double sh = std::sinh(t);
        const double u = std::tanh(0.5 * M_PI * sh);           // in (-1, 1)
        const double w = 0.5 * M_PI * std::cosh(t) /
                         std::pow(std::cosh(0.5 * M_PI * sh), 2);
        if (!(w > 1e-280)) continue;  // endpoint weight underflow
        const double theta = 0.5 * M_PI * (u + 1.0);           // in (0, pi)
        if (theta < 1e-14 || theta > M_PI - 1e-14) continue;
        acc += w * f(theta);
    }
    return acc * h * 0.5 * M_PI;
}

} // namespace detail

struct ThetaIdentity {
    double lhs;  // numeric quadrature of sin^m(theta/2) K_j(z sin(theta/2))
    double rhs;  // printed I/K combination at z/2
};

/// index 1..6: integrals of K_0, sin K_1, sin^2 K_0, sin^3 K_1, sin^4 K_0,
/// sin^5 K_1 over theta in (0, 2 pi), kernel argument z sin(theta/2)
inline ThetaIdentity bessel_theta_identity(int index, double z) {
    if (index < 1 || index > 6) throw DomainError("bessel_theta_identity: index must be 1..6");
    if (!(z > 0)) throw DomainError("bessel_theta_identity: z must be positive");
    const int power = index - 1;
    const int order = index % 2 == 0 ? 1 : 0;
    auto integrand = [&](double theta) {
        const double sh = std::sin(0.5 * theta);
        const double arg = z * sh;
        const double kj = order == 0 ? specfun::bessel_k0_scaled(arg)
                                     : specfun::bessel_k1_scaled(arg);
        return std::pow(sh, power) * kj * std::exp(-arg);
    };
    // integrand is symmetric about theta = pi
    const double lhs = 2.0 * detail::tanh_sinh_0_pi(integrand);

    const double h = 0.5 * z;
    const specfun::ScaledBessel b(h);
    const double i0k0 = b.i0k0(), i1k1 = b.i1k1();
    const double d10 = b.i0k1() - b.i1k0();  // I0 K1 - I1 K0 at z/2
    double rhs = 0.0;
    switch (index) {
        case 1: rhs = 2.0 * M_PI * i0k0; break;
        case 2: rhs = M_PI * d10; break;
        case 3: rhs = M_PI * (i0k0 - i1k1); break;
        case 4: rhs = M_PI * d10 - 2.0 * M_PI / z * i1k1; break;
        case 5:
            rhs = M_PI * (i0k0 - i1k1) + M_PI / z * d10 - 4.0 * M_PI / (z * z) * i1k1;
            break;
        case 6:
            rhs = M_PI * d10 + M_PI / z * (i0k0 - 3.0 * i1k1) +
                  4.0 / (z * z) * M_PI * d10 - 16.0 * M_PI / (z * z * z) * i1k1;
            break;
    }
    return {lhs, rhs};
}

} // namespace slb::layers
