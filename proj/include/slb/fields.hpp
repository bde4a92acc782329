#pragma once

// Periodic vector fields on the centerline and on the tube surface,
// spectral derivatives, the frame identification map Phi, mean subtraction,
// the theta-mode projection P01, and angle-averaged traction.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "slb/errors.hpp"
#include "slb/fft.hpp"
#include "slb/geometry.hpp"

namespace slb::fields {

using Eigen::Vector3d;
using Cd = std::complex<double>;

// ---------------------------------------------------------------------------
// PeriodicVectorField

/// R^3-valued 1-periodic function sampled at s_i = i/N.
class PeriodicVectorField {
  public:
    PeriodicVectorField() = default;
    explicit PeriodicVectorField(std::size_t n) : values_(n, Vector3d::Zero()) {}
    explicit PeriodicVectorField(std::vector<Vector3d> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    const Vector3d& operator[](std::size_t i) const { return values_[i]; }
    Vector3d& operator[](std::size_t i) { return values_[i]; }
    const std::vector<Vector3d>& values() const { return values_; }

    std::array<std::vector<Cd>, 3> spectrum() const { return fft::forward3(values_); }

    static PeriodicVectorField from_spectrum(const std::array<std::vector<Cd>, 3>& spec) {
        return PeriodicVectorField(fft::inverse3(spec));
    }

    Vector3d mean() const {
        Vector3d m = Vector3d::Zero();
        for (const auto& v : values_) m += v;
        return m / static_cast<double>(values_.size());
    }

    double max_norm() const {
        double w = 0.0;
        for (const auto& v : values_) w = std::max(w, v.norm());
        return w;
    }

    /// trigonometric interpolation at arbitrary s
    Vector3d eval(double s) const {
        const auto spec = spectrum();
        Vector3d out;
        for (int d = 0; d < 3; ++d) out[d] = fft::eval_spectrum(spec[d], s);
        return out;
    }

    PeriodicVectorField& operator+=(const PeriodicVectorField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < size(); ++i) values_[i] += o[i];
        return *this;
    }
    PeriodicVectorField& operator-=(const PeriodicVectorField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < size(); ++i) values_[i] -= o[i];
        return *this;
    }
    PeriodicVectorField& operator*=(double a) {
        for (auto& v : values_) v *= a;
        return *this;
    }

    void require_same_grid(const PeriodicVectorField& o) const {
        if (o.size() != size()) throw GridMismatchError("PeriodicVectorField: grid mismatch");
    }

  private:
    std::vector<Vector3d> values_;
};

inline PeriodicVectorField operator+(PeriodicVectorField a, const PeriodicVectorField& b) {
    return a += b;
}
inline PeriodicVectorField operator-(PeriodicVectorField a, const PeriodicVectorField& b) {
    return a -= b;
}
inline PeriodicVectorField operator*(double s, PeriodicVectorField a) { return a *= s; }

/// multiplier (2 pi i k)^order; the Nyquist mode of even grids is zeroed for
/// odd orders (it has no well-defined odd derivative on the real grid)
inline PeriodicVectorField spectral_derivative(const PeriodicVectorField& f, int order) {
    if (order < 1 || order > 4) throw DomainError("spectral_derivative: order must be 1..4");
    auto spec = f.spectrum();
    const std::size_t n = f.size();
    for (int d = 0; d < 3; ++d) {
        for (std::size_t m = 0; m < n; ++m) {
            const long k = fft::mode_of_bin(m, n);
            if (n % 2 == 0 && m == n / 2 && order % 2 == 1) {
                spec[d][m] = 0.0;
                continue;
            }
            spec[d][m] *= std::pow(Cd(0.0, 2.0 * M_PI * static_cast<double>(k)), order);
        }
    }
    return PeriodicVectorField::from_spectrum(spec);
}

// ---------------------------------------------------------------------------
// Frame identification map Phi

/// samples of the frame triads on the field grid, cached once per grid size
struct FrameOnGrid {
    std::vector<Vector3d> e_t, e_n1, e_n2;

    FrameOnGrid() = default;
    FrameOnGrid(const geometry::FrameField& frame, std::size_t n) {
        e_t.resize(n);
        e_n1.resize(n);
        e_n2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto tr = frame.eval(static_cast<double>(i) / static_cast<double>(n));
            e_t[i] = tr.e_t;
            e_n1[i] = tr.e_n1;
            e_n2[i] = tr.e_n2;
        }
    }
    std::size_t size() const { return e_t.size(); }
};

/// Phi g = (g.e_z) e_t + (g.e_x) e_n1 + (g.e_y) e_n2
inline PeriodicVectorField phi_forward(const FrameOnGrid& fr, const PeriodicVectorField& g) {
    if (fr.size() != g.size()) throw GridMismatchError("phi_forward: grid mismatch");
    PeriodicVectorField out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = g[i][2] * fr.e_t[i] + g[i][0] * fr.e_n1[i] + g[i][1] * fr.e_n2[i];
    return out;
}

/// Phi^{-1} h = (h.e_t) e_z + (h.e_n1) e_x + (h.e_n2) e_y
inline PeriodicVectorField phi_inverse(const FrameOnGrid& fr, const PeriodicVectorField& h) {
    if (fr.size() != h.size()) throw GridMismatchError("phi_inverse: grid mismatch");
    PeriodicVectorField out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        out[i] = Vector3d(h[i].dot(fr.e_n1[i]), h[i].dot(fr.e_n2[i]), h[i].dot(fr.e_t[i]));
    return out;
}

struct PhiMeanSplit {
    PeriodicVectorField zero_mean;  // h_0^Phi
    Vector3d mean;                  // s-mean of Phi^{-1} h
};

/// h = h_0^Phi + Phi[mean]; Phi^{-1} h_0^Phi is mean-zero in s
inline PhiMeanSplit subtract_phi_mean(const FrameOnGrid& fr, const PeriodicVectorField& h) {
    const PeriodicVectorField straight = phi_inverse(fr, h);
    const Vector3d m = straight.mean();
    PeriodicVectorField mean_field(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) mean_field[i] = m;
    return {h - phi_forward(fr, mean_field), m};
}

// ---------------------------------------------------------------------------
// SurfaceField

/// R^3-valued function on the (s, theta) surface grid, row-major (i, j).
/// Components may carry either Cartesian values or local-cylindrical
/// (e_r, e_theta, e_t) coordinates; operations state which they expect.
class SurfaceField {
  public:
    SurfaceField() = default;
    SurfaceField(std::size_t ns, std::size_t ntheta)
        : ns_(ns), ntheta_(ntheta), values_(ns * ntheta, Vector3d::Zero()) {}

    std::size_t ns() const { return ns_; }
    std::size_t ntheta() const { return ntheta_; }
    std::size_t size() const { return values_.size(); }
    const Vector3d& at(std::size_t i, std::size_t j) const { return values_[i * ntheta_ + j]; }
    Vector3d& at(std::size_t i, std::size_t j) { return values_[i * ntheta_ + j]; }
    const Vector3d& operator[](std::size_t f) const { return values_[f]; }
    Vector3d& operator[](std::size_t f) { return values_[f]; }

    double max_norm() const {
        double w = 0.0;
        for (const auto& v : values_) w = std::max(w, v.norm());
        return w;
    }

    SurfaceField& operator+=(const SurfaceField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    SurfaceField& operator-=(const SurfaceField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    SurfaceField& operator*=(double a) {
        for (auto& v : values_) v *= a;
        return *this;
    }

    void require_same_grid(const SurfaceField& o) const {
        if (o.ns_ != ns_ || o.ntheta_ != ntheta_)
            throw GridMismatchError("SurfaceField: grid mismatch");
    }

  private:
    std::size_t ns_ = 0, ntheta_ = 0;
    std::vector<Vector3d> values_;
};

inline SurfaceField operator-(SurfaceField a, const SurfaceField& b) { return a -= b; }
inline SurfaceField operator+(SurfaceField a, const SurfaceField& b) { return a += b; }
inline SurfaceField operator*(double s, SurfaceField a) { return a *= s; }

/// projection onto theta zero- and one-modes of a field given in
/// (e_r, e_theta, e_t) components: keeps g_0^z, g_0^r and the cos/sin
/// one-modes of all three components (no g_0^theta)
inline SurfaceField project_p01(const SurfaceField& w) {
    const std::size_t ns = w.ns(), nt = w.ntheta();
    if (nt < 4) throw DomainError("project_p01: need at least 4 theta nodes");
    SurfaceField out(ns, nt);
    for (std::size_t i = 0; i < ns; ++i) {
        Vector3d a0 = Vector3d::Zero(), ac = Vector3d::Zero(), as = Vector3d::Zero();
        for (std::size_t j = 0; j < nt; ++j) {
            const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(nt);
            a0 += w.at(i, j);
            ac += w.at(i, j) * std::cos(th);
            as += w.at(i, j) * std::sin(th);
        }
        a0 /= static_cast<double>(nt);
        ac *= 2.0 / static_cast<double>(nt);
        as *= 2.0 / static_cast<double>(nt);
        a0[1] = 0.0;  // the theta-component keeps no zero mode
        for (std::size_t j = 0; j < nt; ++j) {
            const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(nt);
            out.at(i, j) = a0 + ac * std::cos(th) + as * std::sin(th);
        }
    }
    return out;
}

/// f(s_i) = sum_j w(s_i, theta_j) J(s_i, theta_j) dtheta  (trapezoid in theta)
inline PeriodicVectorField angle_average_traction(const SurfaceField& w,
                                                  const geometry::SurfaceGrid& grid) {
    if (w.ns() != grid.ns || w.ntheta() != grid.ntheta)
        throw GridMismatchError("angle_average_traction: field does not match grid");
    PeriodicVectorField f(grid.ns);
    for (std::size_t i = 0; i < grid.ns; ++i) {
        Vector3d acc = Vector3d::Zero();
        for (std::size_t j = 0; j < grid.ntheta; ++j)
            acc += w.at(i, j) * grid.jac[grid.idx(i, j)];
        f[i] = acc * grid.dtheta();
    }
    return f;
}

/// lift a theta-independent centerline field onto the surface grid
inline SurfaceField lift_to_surface(const PeriodicVectorField& v,
                                    const geometry::SurfaceGrid& grid) {
    if (v.size() != grid.ns) throw GridMismatchError("lift_to_surface: grid mismatch");
    SurfaceField w(grid.ns, grid.ntheta);
    for (std::size_t i = 0; i < grid.ns; ++i)
        for (std::size_t j = 0; j < grid.ntheta; ++j) w.at(i, j) = v[i];
    return w;
}

/// 2-d trigonometric interpolation of a surface field onto another grid's
/// (s, theta) nodes; both directions band-limited
inline SurfaceField resample_surface_field(const SurfaceField& w, double offset_s,
                                           double offset_theta) {
    const std::size_t ns = w.ns(), nt = w.ntheta();
    // FFT in s for each (theta, component), then in theta
    std::vector<std::vector<Cd>> spec(3 * nt);
    std::vector<double> line(ns);
    for (std::size_t j = 0; j < nt; ++j)
        for (int d = 0; d < 3; ++d) {
            for (std::size_t i = 0; i < ns; ++i) line[i] = w.at(i, j)[d];
            spec[j * 3 + d] = fft::forward(line);
        }
    SurfaceField out(ns, nt);
    std::vector<double> col(nt);
    for (std::size_t i = 0; i < ns; ++i) {
        const double s = (static_cast<double>(i) + offset_s) / static_cast<double>(ns);
        for (int d = 0; d < 3; ++d) {
            for (std::size_t j = 0; j < nt; ++j)
                col[j] = fft::eval_spectrum(spec[j * 3 + d], s);
            const auto cspec = fft::forward(col);
            for (std::size_t j = 0; j < nt; ++j) {
                const double th = (static_cast<double>(j) + offset_theta) /
                                  static_cast<double>(nt);
                out.at(i, j)[d] = fft::eval_spectrum(cspec, th);
            }
        }
    }
    return out;
}

} // namespace slb::fields
