#pragma once

// Closed filament centerlines as truncated Fourier series, arclength
// reparameterization, Bishop and periodicized orthonormal frames, the
// tubular surface with its Jacobian, and geometric diagnostics.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "slb/errors.hpp"
#include "slb/fft.hpp"

namespace slb::geometry {

using Eigen::Vector3d;
using Cd = std::complex<double>;
using Vector3cd = Eigen::Vector3cd;

// ---------------------------------------------------------------------------
// FourierCurve

/// Closed space curve X: T -> R^3 as a truncated Fourier series,
/// coefficients c_k for k = -K..K (conjugate symmetric), plus the
/// radius-to-length ratio eps of the tube built around it.
class FourierCurve {
  public:
    FourierCurve() = default;

    FourierCurve(int mode_count, std::vector<Vector3cd> coeffs, double eps)
        : modes_(mode_count), coeff_(std::move(coeffs)), eps_(eps) {
        if (coeff_.size() != static_cast<std::size_t>(2 * modes_ + 1))
            throw DomainError("FourierCurve: coefficient count != 2K+1");
        enforce_real();
    }

    /// build from samples at s_j = j/N (N >= 2K+2), truncating at mode K
    static FourierCurve from_samples(const std::vector<Vector3d>& samples, int mode_count,
                                     double eps) {
        const std::size_t n = samples.size();
        if (n < static_cast<std::size_t>(2 * mode_count + 2))
            throw DomainError("FourierCurve::from_samples: grid too coarse for mode count");
        const auto spec = fft::forward3(samples);
        std::vector<Vector3cd> c(static_cast<std::size_t>(2 * mode_count + 1),
                                 Vector3cd::Zero());
        for (int k = -mode_count; k <= mode_count; ++k) {
            const std::size_t bin = k >= 0 ? static_cast<std::size_t>(k)
                                           : n - static_cast<std::size_t>(-k);
            for (int d = 0; d < 3; ++d)
                c[static_cast<std::size_t>(k + mode_count)][d] = spec[d][bin];
        }
        return FourierCurve(mode_count, std::move(c), eps);
    }

    int mode_count() const { return modes_; }
    double eps() const { return eps_; }
    void set_eps(double e) { eps_ = e; }
    const Vector3cd& coeff(int k) const {
        return coeff_[static_cast<std::size_t>(k + modes_)];
    }
    Vector3cd& coeff(int k) { return coeff_[static_cast<std::size_t>(k + modes_)]; }

    /// X^{(m)}(s), derivatives up to order 4 by exact trigonometric evaluation
    Vector3d eval(double s, int order = 0) const {
        if (order < 0 || order > 4) throw DomainError("FourierCurve::eval: order must be 0..4");
        Vector3d acc = Vector3d::Zero();
        if (order == 0) acc = coeff(0).real();
        for (int k = 1; k <= modes_; ++k) {
            const double w = 2.0 * M_PI * static_cast<double>(k);
            const Cd iw = std::pow(Cd(0.0, w), order);
            const Cd ph = std::polar(1.0, w * s);
            const Vector3cd term = coeff(k) * (iw * ph);
            acc += 2.0 * term.real();
        }
        return acc;
    }

    std::vector<Vector3d> sample(std::size_t n, int order = 0) const {
        std::vector<Vector3d> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = eval(static_cast<double>(i) / static_cast<double>(n), order);
        return v;
    }

    FourierCurve scaled_about(const Vector3d& base, double factor) const {
        auto c = coeff_;
        for (auto& ck : c) ck *= factor;
        c[static_cast<std::size_t>(modes_)] += ((1.0 - factor) * base).cast<Cd>();
        return FourierCurve(modes_, std::move(c), eps_);
    }

    FourierCurve rotated(const Eigen::Matrix3d& rot) const {
        auto c = coeff_;
        for (auto& ck : c) ck = rot.cast<Cd>() * ck;
        return FourierCurve(modes_, std::move(c), eps_);
    }

  private:
    void enforce_real() {
        for (int k = 1; k <= modes_; ++k) {
            const Vector3cd avg = 0.5 * (coeff(k) + coeff(-k).conjugate());
            coeff(k) = avg;
            coeff(-k) = avg.conjugate();
        }
        coeff(0) = coeff(0).real().cast<Cd>();
    }

    int modes_ = 0;
    std::vector<Vector3cd> coeff_;
    double eps_ = 0.0;
};

inline std::size_t dense_grid_size(const FourierCurve& c, std::size_t floor_n = 512) {
    return std::max<std::size_t>(floor_n, 8 * static_cast<std::size_t>(c.mode_count()));
}

// ---------------------------------------------------------------------------
// Length, curvature, separation

/// total length by spectrally accurate trapezoid quadrature of |X'|
inline double compute_length(const FourierCurve& c) {
    const std::size_t n = dense_grid_size(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += c.eval(static_cast<double>(i) / static_cast<double>(n), 1).norm();
    return acc / static_cast<double>(n);
}

/// sup of curvature |X' x X''| / |X'|^3 over a dense grid with parabolic refinement
inline double max_curvature(const FourierCurve& c) {
    const std::size_t n = std::max<std::size_t>(1024, 16 * static_cast<std::size_t>(c.mode_count()));
    auto kappa = [&](double s) {
        const Vector3d d1 = c.eval(s, 1), d2 = c.eval(s, 2);
        const double v = d1.norm();
        return d1.cross(d2).norm() / (v * v * v);
    };
    double best = 0.0, sbest = 0.0;
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) * h;
        const double v = kappa(s);
        if (v > best) { best = v; sbest = s; }
    }
    // parabolic refinement around the grid argmax
    const double km = kappa(sbest - h), kp = kappa(sbest + h);
    const double denom = km - 2.0 * best + kp;
    if (std::fabs(denom) > 1e-300) {
        const double ds = 0.5 * h * (km - kp) / denom;
        if (std::fabs(ds) < h) best = std::max(best, kappa(sbest + ds));
    }
    return best;
}

struct SeparationResult {
    double value;      // inf over pairs of chord / periodic parameter distance
    double s1, s2;     // argmin pair
};

/// non-self-intersection diagnostic inf |X(a)-X(b)| / d_T(a,b); pairs closer
/// than 2/N in parameter are excluded (they only probe |X'| ~ speed)
inline SeparationResult min_separation(const FourierCurve& c) {
    const std::size_t n = std::max<std::size_t>(256, 8 * static_cast<std::size_t>(c.mode_count()));
    const auto pts = c.sample(n);
    auto dist_param = [](double a, double b) {
        double d = std::fabs(a - b);
        return std::min(d, 1.0 - d);
    };
    const double exclude = 2.0 / static_cast<double>(n);
    double best = std::numeric_limits<double>::max();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dp = dist_param(static_cast<double>(i) / n, static_cast<double>(j) / n);
            if (dp < exclude) continue;
            const double r = (pts[i] - pts[j]).norm() / dp;
            if (r < best) { best = r; bi = i; bj = j; }
        }
    }
    // deterministic local refinement (coordinate pattern search)
    double s1 = static_cast<double>(bi) / n, s2 = static_cast<double>(bj) / n;
    double step = 1.0 / static_cast<double>(n);
    auto ratio = [&](double a, double b) {
        const double dp = dist_param(a - std::floor(a), b - std::floor(b));
        if (dp < exclude) return std::numeric_limits<double>::max();
        return (c.eval(a) - c.eval(b)).norm() / dp;
    };
    for (int it = 0; it < 40; ++it) {
        bool moved = false;
        for (const auto& [da, db] : std::initializer_list<std::array<double, 2>>{
                 {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
            const double cand = ratio(s1 + da * step, s2 + db * step);
            if (cand < best) {
                best = cand;
                s1 += da * step;
                s2 += db * step;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
        if (step < 1e-12) break;
    }
    return {best, s1 - std::floor(s1), s2 - std::floor(s2)};
}

// ---------------------------------------------------------------------------
// Arclength reparameterization

/// Reparameterize to uniform speed (|X'| == total length everywhere),
/// preserving the curve as a set and the image of sigma = 0. A curve on T
/// has unit speed iff it additionally has unit length; the unit-speed
/// invariant is checked after rescaling total length to 1.
inline FourierCurve arclength_reparameterize(const FourierCurve& c, double tol = 1e-10,
                                             int max_iter = 50) {
    FourierCurve cur = c;
    const int K = c.mode_count();
    const std::size_t n = dense_grid_size(c);
    for (int iter = 0; iter < max_iter; ++iter) {
        // speed samples and their spectrum
        std::vector<double> speed(n);
        double vmin = std::numeric_limits<double>::max(), vmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            speed[i] = cur.eval(static_cast<double>(i) / static_cast<double>(n), 1).norm();
            vmin = std::min(vmin, speed[i]);
            vmax = std::max(vmax, speed[i]);
        }
        if (vmax < 1e-12 || vmin < 1e-8 * vmax)
            throw GeometryError("arclength_reparameterize: curve is not regular");
        const auto vh = fft::forward(speed);
        const double lambda = vh[0].real();
        if (vmax - vmin <= tol * lambda) break;

        // arclength function a(sigma) = int_0^sigma |X'| = lambda sigma + p(sigma)
        // with p periodic, assembled spectrally from the speed spectrum
        auto arc = [&](double sigma) {
            double p = 0.0;
            for (std::size_t m = 1; m < n; ++m) {
                const long k = fft::mode_of_bin(m, n);
                if (n % 2 == 0 && m == n / 2) continue;  // drop Nyquist of the speed
                const Cd iw(0.0, 2.0 * M_PI * static_cast<double>(k));
                p += ((vh[m] / iw) * (std::polar(1.0, 2.0 * M_PI * k * sigma) - 1.0)).real();
            }
            return lambda * sigma + p;
        };
        auto speed_at = [&](double sigma) { return cur.eval(sigma, 1).norm(); };

        // invert a(sigma) = lambda u by Newton for each target grid point
        const std::size_t m = std::max<std::size_t>(4 * K + 4, 64);
        std::vector<Vector3d> resampled(m);
        double sigma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double target = lambda * static_cast<double>(i) / static_cast<double>(m);
            for (int nw = 0; nw < 60; ++nw) {
                const double f = arc(sigma) - target;
                sigma -= f / speed_at(sigma);
                if (std::fabs(f) < 1e-14 * lambda) break;
            }
            resampled[i] = cur.eval(sigma);
        }
        cur = FourierCurve::from_samples(resampled, K, c.eps());
    }
    return cur;
}

/// uniform rescale about the basepoint X(0) to total length 1, then
/// arclength-reparameterize; the result is the unit-speed unit-length curve
inline FourierCurve rescale_to_unit_length(const FourierCurve& c) {
    const double lambda = compute_length(c);
    if (!(lambda > 0) || !std::isfinite(lambda))
        throw GeometryError("rescale_to_unit_length: degenerate curve");
    const FourierCurve scaled = c.scaled_about(c.eval(0.0), 1.0 / lambda);
    return arclength_reparameterize(scaled);
}

// ---------------------------------------------------------------------------
// Frames

/// Parallel-transport (Bishop) frame samples along the curve, before
/// periodicization; holonomy is the signed angle between the transported
/// normal after one loop and the initial one.
struct BishopFrame {
    std::size_t n = 0;
    std::vector<Vector3d> e_t, e1, e2;  // samples at s_i = i/n
    std::vector<double> kappa1, kappa2; // e_t' . e1, e_t' . e2
    double holonomy = 0.0;              // signed mismatch angle phi
    Vector3d e1_end, e2_end;            // transported pair after one loop
};

namespace detail {

inline Vector3d tangent(const FourierCurve& c, double s) {
    const Vector3d d1 = c.eval(s, 1);
    const double v = d1.norm();
    if (v < 1e-14) throw GeometryError("frame: zero-speed point");
    return d1 / v;
}

inline Vector3d tangent_derivative(const FourierCurve& c, double s) {
    const Vector3d d1 = c.eval(s, 1), d2 = c.eval(s, 2);
    const double v = d1.norm();
    return d2 / v - d1 * (d1.dot(d2)) / (v * v * v);
}

inline Vector3d initial_normal(const FourierCurve& c) {
    const Vector3d t0 = tangent(c, 0.0);
    Vector3d seed = c.eval(0.0, 2);
    seed -= seed.dot(t0) * t0;
    if (seed.norm() < 1e-10) {
        // straight-at-zero fallback: most orthogonal coordinate axis
        int axis = 0;
        for (int d = 1; d < 3; ++d)
            if (std::fabs(t0[d]) < std::fabs(t0[axis])) axis = d;
        seed = Vector3d::Unit(axis) - t0[axis] * t0;
    }
    return seed.normalized();
}

} // namespace detail

/// integrate e1' = -(e1 . e_t') e_t around the loop with fixed-step RK4 and
/// per-step re-orthonormalization
inline BishopFrame bishop_frame(const FourierCurve& c, std::size_t n_steps = 0) {
    const std::size_t n = n_steps ? n_steps
                                  : std::max<std::size_t>(
                                        1024, 16 * static_cast<std::size_t>(c.mode_count()));
    const double h = 1.0 / static_cast<double>(n);
    BishopFrame f;
    f.n = n;
    f.e_t.resize(n);
    f.e1.resize(n);
    f.e2.resize(n);
    f.kappa1.resize(n);
    f.kappa2.resize(n);

    Vector3d e1 = detail::initial_normal(c);
    const Vector3d e1_start = e1;
    const Vector3d t_start = detail::tangent(c, 0.0);
    const Vector3d e2_start = t_start.cross(e1_start);

    auto rhs = [&c](double s, const Vector3d& e) {
        return -(e.dot(detail::tangent_derivative(c, s))) * detail::tangent(c, s);
    };

    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) * h;
        const Vector3d t = detail::tangent(c, s);
        f.e_t[i] = t;
        f.e1[i] = e1;
        f.e2[i] = t.cross(e1);
        const Vector3d dt = detail::tangent_derivative(c, s);
        f.kappa1[i] = dt.dot(f.e1[i]);
        f.kappa2[i] = dt.dot(f.e2[i]);

        const Vector3d k1 = rhs(s, e1);
        const Vector3d k2 = rhs(s + 0.5 * h, e1 + 0.5 * h * k1);
        const Vector3d k3 = rhs(s + 0.5 * h, e1 + 0.5 * h * k2);
        const Vector3d k4 = rhs(s + h, e1 + h * k3);
        e1 += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const Vector3d tn = detail::tangent(c, s + h);
        e1 -= e1.dot(tn) * tn;
        e1.normalize();
    }
    f.holonomy = std::atan2(e1.dot(e2_start), e1.dot(e1_start));
    f.e1_end = e1;
    f.e2_end = detail::tangent(c, 0.0).cross(e1);
    return f;
}

/// Periodic orthonormal frame (e_t, e_n1, e_n2) with coefficients
/// kappa1(s), kappa2(s) and constant kappa3 = -holonomy; keeps a copy of
/// the curve plus normal-vector spectra for evaluation between grid nodes.
class FrameField {
  public:
    FrameField() = default;

    FrameField(const FourierCurve& c, const BishopFrame& b) : curve_(c), n_(b.n) {
        kappa3_ = -b.holonomy;
        e_t = b.e_t;
        e_n1.resize(n_);
        e_n2.resize(n_);
        kappa1.resize(n_);
        kappa2.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double beta = kappa3_ * static_cast<double>(i) / static_cast<double>(n_);
            const double cb = std::cos(beta), sb = std::sin(beta);
            e_n1[i] = cb * b.e1[i] + sb * b.e2[i];
            e_n2[i] = -sb * b.e1[i] + cb * b.e2[i];
            kappa1[i] = cb * b.kappa1[i] + sb * b.kappa2[i];
            kappa2[i] = -sb * b.kappa1[i] + cb * b.kappa2[i];
        }
        n1_spec_ = fft::forward3(e_n1);
    }

    std::size_t grid_size() const { return n_; }
    double kappa3() const { return kappa3_; }
    const FourierCurve& curve() const { return curve_; }

    std::vector<Vector3d> e_t, e_n1, e_n2;
    std::vector<double> kappa1, kappa2;

    struct Triad {
        Vector3d e_t, e_n1, e_n2;
        double kappa1, kappa2;
    };

    /// frame at an arbitrary parameter value: exact tangent from the curve,
    /// trigonometric interpolation of e_n1 re-orthonormalized against it
    Triad eval(double s) const {
        Triad tr;
        tr.e_t = detail::tangent(curve_, s);
        Vector3d n1;
        for (int d = 0; d < 3; ++d) n1[d] = fft::eval_spectrum(n1_spec_[d], s);
        n1 -= n1.dot(tr.e_t) * tr.e_t;
        const double nn = n1.norm();
        if (nn < 1e-8) throw GeometryError("FrameField::eval: interpolated normal degenerate");
        tr.e_n1 = n1 / nn;
        tr.e_n2 = tr.e_t.cross(tr.e_n1);
        const Vector3d dt = detail::tangent_derivative(curve_, s);
        tr.kappa1 = dt.dot(tr.e_n1);
        tr.kappa2 = dt.dot(tr.e_n2);
        return tr;
    }

  private:
    FourierCurve curve_;
    std::size_t n_ = 0;
    double kappa3_ = 0.0;
    std::array<std::vector<Cd>, 3> n1_spec_;
};

inline FrameField periodicized_frame(const FourierCurve& c, std::size_t n_steps = 0) {
    return FrameField(c, bishop_frame(c, n_steps));
}

// ---------------------------------------------------------------------------
// Tubular surface

/// Surface nodes x = X(s) + eps e_r(s, theta), outward normals n = e_r and
/// the area Jacobian J = eps (1 - eps kappa_hat). Grid points sit at
/// s_i = (i + offset_s)/Ns, theta_j = 2 pi (j + offset_theta)/Ntheta.
struct SurfaceGrid {
    std::size_t ns = 0, ntheta = 0;
    double eps = 0.0;
    double offset_s = 0.0, offset_theta = 0.0;
    std::vector<double> s;                  // ns values
    std::vector<double> theta;              // ntheta values
    std::vector<Vector3d> center;           // X(s_i)
    std::vector<Vector3d> tangent;          // e_t(s_i)
    std::vector<Vector3d> node;             // row-major (i, j)
    std::vector<Vector3d> normal;           // e_r(s_i, theta_j)
    std::vector<double> jac;                // J(s_i, theta_j)
    bool heuristic_radius_ok = true;        // eps <= min(1/(2 kappa*), sep/2)/4

    std::size_t idx(std::size_t i, std::size_t j) const { return i * ntheta + j; }
    double ds() const { return 1.0 / static_cast<double>(ns); }
    double dtheta() const { return 2.0 * M_PI / static_cast<double>(ntheta); }
};

inline SurfaceGrid surface_grid(const FrameField& frame, std::size_t ns, std::size_t ntheta,
                                double offset_s = 0.0, double offset_theta = 0.0) {
    const FourierCurve& c = frame.curve();
    const double eps = c.eps();
    if (!(eps > 0)) throw GeometryError("surface_grid: eps must be positive");

    const double kstar = max_curvature(c);
    const double sep = min_separation(c).value;
    if (eps * kstar >= 0.99 || eps >= 0.5 * sep)
        throw GeometryError("surface_grid: eps too large for an embedded tube");

    SurfaceGrid g;
    g.ns = ns;
    g.ntheta = ntheta;
    g.eps = eps;
    g.offset_s = offset_s;
    g.offset_theta = offset_theta;
    g.heuristic_radius_ok = eps <= std::min(0.5 / kstar, 0.5 * sep) / 4.0;
    g.s.resize(ns);
    g.theta.resize(ntheta);
    g.center.resize(ns);
    g.tangent.resize(ns);
    g.node.resize(ns * ntheta);
    g.normal.resize(ns * ntheta);
    g.jac.resize(ns * ntheta);
    for (std::size_t j = 0; j < ntheta; ++j)
        g.theta[j] = 2.0 * M_PI * (static_cast<double>(j) + offset_theta) /
                     static_cast<double>(ntheta);
    for (std::size_t i = 0; i < ns; ++i) {
        g.s[i] = (static_cast<double>(i) + offset_s) / static_cast<double>(ns);
        const auto tr = frame.eval(g.s[i]);
        g.center[i] = c.eval(g.s[i]);
        g.tangent[i] = tr.e_t;
        for (std::size_t j = 0; j < ntheta; ++j) {
            const double ct = std::cos(g.theta[j]), st = std::sin(g.theta[j]);
            const Vector3d er = ct * tr.e_n1 + st * tr.e_n2;
            const double kappa_hat = tr.kappa1 * ct + tr.kappa2 * st;
            g.node[g.idx(i, j)] = g.center[i] + eps * er;
            g.normal[g.idx(i, j)] = er;
            g.jac[g.idx(i, j)] = eps * (1.0 - eps * kappa_hat);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Canned curves used by tests, demos and the CLI

inline FourierCurve make_circle(double radius, double eps, int modes = 8,
                                const Vector3d& center = Vector3d::Zero()) {
    std::vector<Vector3cd> c(static_cast<std::size_t>(2 * modes + 1), Vector3cd::Zero());
    FourierCurve out(modes, std::move(c), eps);
    out.coeff(0) = center.cast<Cd>();
    // radius (cos 2 pi s, sin 2 pi s, 0) = r/2 (1, -i, 0) e^{2 pi i s} + c.c.
    out.coeff(1) = Vector3cd(Cd(radius / 2.0, 0.0), Cd(0.0, -radius / 2.0), Cd(0.0, 0.0));
    out.coeff(-1) = out.coeff(1).conjugate();
    return out;
}

/// planar ellipse (a cos, b sin, 0) sampled and truncated
inline FourierCurve make_ellipse(double a, double b, double eps, int modes = 16) {
    const std::size_t n = 8 * static_cast<std::size_t>(modes);
    std::vector<Vector3d> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        pts[i] = Vector3d(a * std::cos(2.0 * M_PI * s), b * std::sin(2.0 * M_PI * s), 0.0);
    }
    return FourierCurve::from_samples(pts, modes, eps);
}

/// chiral coil (1 + A cos 6 pi s)(cos 2 pi s, sin 2 pi s, 0) + A sin(6 pi s) e_z
inline FourierCurve make_coil(double amplitude, double eps, int modes = 16) {
    const std::size_t n = 8 * static_cast<std::size_t>(modes);
    std::vector<Vector3d> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        const double r = 1.0 + amplitude * std::cos(6.0 * M_PI * s);
        pts[i] = Vector3d(r * std::cos(2.0 * M_PI * s), r * std::sin(2.0 * M_PI * s),
                          amplitude * std::sin(6.0 * M_PI * s));
    }
    return FourierCurve::from_samples(pts, modes, eps);
}

/// circle of unit length with a relative mode-3 perturbation, rescaled to
/// unit length and arclength parameterization
inline FourierCurve make_perturbed_circle(double rel_amplitude, double eps, int modes = 24) {
    const std::size_t n = 8 * static_cast<std::size_t>(modes);
    std::vector<Vector3d> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        const double r = (1.0 + rel_amplitude * std::cos(6.0 * M_PI * s)) / (2.0 * M_PI);
        pts[i] = Vector3d(r * std::cos(2.0 * M_PI * s), r * std::sin(2.0 * M_PI * s),
                          rel_amplitude / (2.0 * M_PI) * std::sin(6.0 * M_PI * s));
    }
    return rescale_to_unit_length(FourierCurve::from_samples(pts, modes, eps));
}

} // namespace slb::geometry
