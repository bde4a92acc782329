#pragma once

// Static slender-body boundary value solves: the exact spectral DtN/NtD on
// the straight cylinder, dense first-kind solves on curved closed filaments
// (sources on the primal grid, collocation on the half-staggered grid), the
// completed-double-layer route to the full Neumann data, and the numerical
// decomposition diagnostic.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slb/errors.hpp"
#include "slb/fields.hpp"
#include "slb/geometry.hpp"
#include "slb/layers.hpp"
#include "slb/multipliers.hpp"

namespace slb::bvp {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;
using fields::PeriodicVectorField;
using fields::SurfaceField;
using geometry::SurfaceGrid;
using multipliers::Direction;

inline constexpr std::size_t kMaxDenseNodes = 16384;
inline constexpr double kMeanZeroTol = 1e-12;

// ---------------------------------------------------------------------------
// Straight-cylinder spectral solves

namespace detail {

inline void apply_straight_multipliers(std::array<std::vector<fft::Cd>, 3>& spec, double eps,
                                       bool inverse_map) {
    const std::size_t n = spec[0].size();
    for (std::size_t m = 0; m < n; ++m) {
        if (m == 0) continue;
        const long k = fft::mode_of_bin(m, n);
        if (k == 0) continue;
        const multipliers::SymbolQuery q(eps, k);
        const double mt = multipliers::dtn_eigen_tangential(q);
        const double mn = multipliers::dtn_eigen_normal(q);
        const double ft = inverse_map ? mt : 1.0 / mt;
        const double fn = inverse_map ? mn : 1.0 / mn;
        spec[0][m] *= fn;  // x and y are normal channels on C_eps
        spec[1][m] *= fn;
        spec[2][m] *= ft;  // z is the tangential channel
    }
}

inline void require_mean_zero(const PeriodicVectorField& v, const char* who) {
    if (v.mean().norm() > kMeanZeroTol * (1.0 + v.max_norm()))
        throw ZeroModeError(std::string(who) + ": data must be mean-zero componentwise");
}

} // namespace detail

/// straight slender-body DtN: mode-wise multiplication by m_t^{-1}, m_n^{-1}
inline PeriodicVectorField dtn_straight(double eps, const PeriodicVectorField& v) {
    detail::require_mean_zero(v, "dtn_straight");
    auto spec = v.spectrum();
    detail::apply_straight_multipliers(spec, eps, true);
    return PeriodicVectorField::from_spectrum(spec);
}

/// straight slender-body NtD: reciprocal multipliers
inline PeriodicVectorField ntd_straight(double eps, const PeriodicVectorField& f) {
    detail::require_mean_zero(f, "ntd_straight");
    auto spec = f.spectrum();
    detail::apply_straight_multipliers(spec, eps, false);
    return PeriodicVectorField::from_spectrum(spec);
}

// ---------------------------------------------------------------------------
// Dense curved solves

/// orthogonal projector onto the Nyquist Fourier mode of an even-length grid
inline MatrixXd nyquist_projector(std::size_t n) {
    MatrixXd p = MatrixXd::Zero(n, n);
    if (n % 2 != 0) return p;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) = (((i + j) % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(n);
    return p;
}

/// circulant trigonometric interpolation matrix for a fractional grid shift
inline MatrixXd shift_interpolation_matrix(std::size_t n, double offset_cells) {
    std::vector<double> unit(n, 0.0);
    unit[0] = 1.0;
    auto spec = fft::forward(unit);
    std::vector<double> kernel(n);
    for (std::size_t i = 0; i < n; ++i)
        kernel[i] = fft::eval_spectrum(spec, (static_cast<double>(i) + offset_cells) /
                                                 static_cast<double>(n));
    MatrixXd p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) = kernel[(i + n - j) % n];
    return p;
}

/// Dense blocks of the first-kind system S[w] = (1/2 I - D)[v 1_theta] on the
/// staggered collocation grid, with the rank-structured normal-field
/// regularization of the S block.
class DtnSystem {
  public:
    DtnSystem(const geometry::FrameField& frame, std::size_t ns, std::size_t ntheta,
              layers::QuadratureVariant variant = layers::QuadratureVariant::StraightSubtraction)
        : variant_(variant),
          src_(geometry::surface_grid(frame, ns, ntheta, 0.0, 0.0)),
          tgt_(geometry::surface_grid(frame, ns, ntheta, 0.5, 0.5)) {
        if (ns * ntheta > kMaxDenseNodes)
            throw DomainError("DtnSystem: grid exceeds the dense-solver node cap");
        build();
    }

    const SurfaceGrid& sources() const { return src_; }
    const SurfaceGrid& targets() const { return tgt_; }
    double regularization() const { return eta_; }
    layers::QuadratureVariant variant() const { return variant_; }

    /// velocity at the staggered targets induced by a source density
    const MatrixXd& single_layer_matrix() const { return s_; }

    /// interpolation of a theta-independent centerline field (3 ns values)
    /// to (1/2 I - D) applied at the targets
    const MatrixXd& half_minus_double_matrix() const { return hd_; }

    VectorXd solve_single_layer(const VectorXd& rhs, double* residual = nullptr) const {
        const VectorXd w = lu_.solve(rhs);
        if (residual) *residual = (s_ * w - rhs).norm() / (1.0 + rhs.norm());
        return w;
    }

  private:
    void build() {
        const std::size_t nn = src_.ns * src_.ntheta;
        const std::size_t rows = 3 * nn, cols = 3 * nn;
        const double wq = src_.ds() * src_.dtheta();

        s_.resize(rows, cols);
        layers::parallel_over_targets(nn, [&](std::size_t t) {
            for (std::size_t g = 0; g < nn; ++g) {
                const Eigen::Matrix3d blk =
                    layers::stokeslet(tgt_.node[t], src_.node[g]) * (src_.jac[g] * wq);
                s_.block<3, 3>(3 * t, 3 * g) = blk;
            }
        });

        // interpolation of source densities to target nodes (for the local
        // correction and the jump term)
        const MatrixXd ps = shift_interpolation_matrix(src_.ns, 0.5);
        const MatrixXd pt = shift_interpolation_matrix(src_.ntheta, 0.5);
        interp_.resize(nn, nn);
        for (std::size_t i = 0; i < src_.ns; ++i)
            for (std::size_t j = 0; j < src_.ntheta; ++j)
                for (std::size_t i2 = 0; i2 < src_.ns; ++i2)
                    for (std::size_t j2 = 0; j2 < src_.ntheta; ++j2)
                        interp_(i * src_.ntheta + j, i2 * src_.ntheta + j2) =
                            ps(i, i2) * pt(j, j2);

        if (variant_ == layers::QuadratureVariant::StraightSubtraction) {
            const auto corr = layers::LocalCorrection::for_grids(src_, tgt_);
            for (std::size_t t = 0; t < nn; ++t) {
                const Eigen::Matrix3d b =
                    layers::local_basis(tgt_, t / tgt_.ntheta, t % tgt_.ntheta);
                const Eigen::Matrix3d cs =
                    b * corr.single_diag.asDiagonal() * b.transpose();
                for (std::size_t g = 0; g < nn; ++g)
                    if (interp_(t, g) != 0.0)
                        s_.block<3, 3>(3 * t, 3 * g) += cs * interp_(t, g);
                cd_.push_back(b * corr.double_diag.asDiagonal() * b.transpose());
            }
        }

        // normal-field regularization: eta (n_t x) (n_g J_g)^T, trace-scaled
        eta_ = 1e-8 * s_.trace();
        VectorXd nt(rows), ngj(cols);
        for (std::size_t t = 0; t < nn; ++t) nt.segment<3>(3 * t) = tgt_.normal[t];
        for (std::size_t g = 0; g < nn; ++g)
            ngj.segment<3>(3 * g) = src_.normal[g] * (src_.jac[g] * wq);
        s_ += eta_ * nt * ngj.transpose();

        // The half-cell staggered collocation is blind to Nyquist modes of
        // the density (their potentials vanish at all half-offset nodes), so
        // the unpenalized block is structurally rank deficient. Penalizing
        // those modes pins them to zero without touching the visible ones.
        nyq_penalty_ = 1e-3 * s_.trace();
        const MatrixXd qs = nyquist_projector(src_.ns);
        const MatrixXd qt = nyquist_projector(src_.ntheta);
        for (std::size_t i = 0; i < src_.ns; ++i)
            for (std::size_t i2 = 0; i2 < src_.ns; ++i2)
                for (std::size_t j = 0; j < src_.ntheta; ++j)
                    for (int d = 0; d < 3; ++d)
                        s_(3 * (i * src_.ntheta + j) + d, 3 * (i2 * src_.ntheta + j) + d) +=
                            nyq_penalty_ * qs(i, i2);
        for (std::size_t j = 0; j < src_.ntheta; ++j)
            for (std::size_t j2 = 0; j2 < src_.ntheta; ++j2)
                for (std::size_t i = 0; i < src_.ns; ++i)
                    for (int d = 0; d < 3; ++d)
                        s_(3 * (i * src_.ntheta + j) + d, 3 * (i * src_.ntheta + j2) + d) +=
                            nyq_penalty_ * qt(j, j2);

        // (1/2 I - D) applied to a theta-independent centerline field:
        // (3 nn) x (3 ns) matrix
        hd_.resize(rows, 3 * src_.ns);
        hd_.setZero();
        const MatrixXd ps_line = shift_interpolation_matrix(src_.ns, 0.5);
        layers::parallel_over_targets(nn, [&](std::size_t t) {
            for (std::size_t i2 = 0; i2 < src_.ns; ++i2) {
                Eigen::Matrix3d col = Eigen::Matrix3d::Zero();
                for (std::size_t j2 = 0; j2 < src_.ntheta; ++j2) {
                    const std::size_t g = src_.idx(i2, j2);
                    col -= layers::stresslet(tgt_.node[t], src_.node[g], src_.normal[g]) *
                           (src_.jac[g] * wq);
                }
                hd_.block<3, 3>(3 * t, 3 * i2) = col;
            }
            // + (1/2) v(s_t) and the double-layer local correction, both via
            // the s-line interpolation
            const std::size_t it = t / tgt_.ntheta;
            for (std::size_t i2 = 0; i2 < src_.ns; ++i2) {
                Eigen::Matrix3d jmp = 0.5 * ps_line(it, i2) * Eigen::Matrix3d::Identity();
                if (!cd_.empty()) jmp -= cd_[t] * ps_line(it, i2);
                hd_.block<3, 3>(3 * t, 3 * i2) += jmp;
            }
        });

        lu_.compute(s_);
    }

    layers::QuadratureVariant variant_;
    SurfaceGrid src_, tgt_;
    MatrixXd s_, hd_, interp_;
    std::vector<Eigen::Matrix3d> cd_;
    double eta_ = 0.0;
    double nyq_penalty_ = 0.0;
    Eigen::PartialPivLU<MatrixXd> lu_;
};

struct DtnResult {
    PeriodicVectorField traction;  // f(s) on the primal s grid
    SurfaceField neumann;          // w(s, theta) on the source grid
    double residual = 0.0;
};

/// curved DtN: solve S[w] = (1/2 I - D)[v 1_theta], then angle-average
inline DtnResult dtn_curved(const DtnSystem& sys, const PeriodicVectorField& v) {
    const auto& src = sys.sources();
    if (v.size() != src.ns) throw GridMismatchError("dtn_curved: field grid mismatch");
    VectorXd vv(3 * src.ns);
    for (std::size_t i = 0; i < src.ns; ++i) vv.segment<3>(3 * i) = v[i];
    const VectorXd rhs = sys.half_minus_double_matrix() * vv;
    double res = 0.0;
    const VectorXd w = sys.solve_single_layer(rhs, &res);
    if (!std::isfinite(res) || res > 1e-8)
        throw SolverError("dtn_curved: dense solve residual " + std::to_string(res));
    DtnResult out;
    out.residual = res;
    out.neumann = SurfaceField(src.ns, src.ntheta);
    for (std::size_t g = 0; g < src.ns * src.ntheta; ++g)
        out.neumann[g] = w.segment<3>(3 * static_cast<long>(g));
    out.traction = fields::angle_average_traction(out.neumann, src);
    return out;
}

struct NtdResult {
    PeriodicVectorField velocity;  // v(s), theta-independent by construction
    SurfaceField neumann;
    double residual = 0.0;
    bool least_squares_fallback = false;
};

/// curved NtD: coupled square solve for (w, v) with the angle-average rows
inline NtdResult ntd_curved(const DtnSystem& sys, const PeriodicVectorField& f) {
    const auto& src = sys.sources();
    if (f.size() != src.ns) throw GridMismatchError("ntd_curved: field grid mismatch");
    const std::size_t nn = src.ns * src.ntheta;
    const std::size_t n_w = 3 * nn, n_v = 3 * src.ns;
    MatrixXd m(n_w + n_v, n_w + n_v);
    m.setZero();
    m.topLeftCorner(n_w, n_w) = sys.single_layer_matrix();
    m.topRightCorner(n_w, n_v) = -sys.half_minus_double_matrix();
    // angle-average rows: sum_j w(s_i, theta_j) J dtheta = f(s_i)
    for (std::size_t i = 0; i < src.ns; ++i)
        for (std::size_t j = 0; j < src.ntheta; ++j) {
            const std::size_t g = src.idx(i, j);
            for (int d = 0; d < 3; ++d)
                m(n_w + 3 * i + d, 3 * g + d) = src.jac[g] * src.dtheta();
        }
    VectorXd rhs(n_w + n_v);
    rhs.setZero();
    for (std::size_t i = 0; i < src.ns; ++i) rhs.segment<3>(n_w + 3 * i) = f[i];

    NtdResult out;
    Eigen::PartialPivLU<MatrixXd> lu(m);
    VectorXd sol = lu.solve(rhs);
    double res = (m * sol - rhs).norm() / (1.0 + rhs.norm());
    if (!std::isfinite(res) || res > 1e-8) {
        sol = m.colPivHouseholderQr().solve(rhs);
        res = (m * sol - rhs).norm() / (1.0 + rhs.norm());
        out.least_squares_fallback = true;
    }
    out.residual = res;
    out.neumann = SurfaceField(src.ns, src.ntheta);
    for (std::size_t g = 0; g < nn; ++g)
        out.neumann[g] = sol.segment<3>(3 * static_cast<long>(g));
    out.velocity = PeriodicVectorField(src.ns);
    for (std::size_t i = 0; i < src.ns; ++i)
        out.velocity[i] = sol.segment<3>(n_w + 3 * i);
    return out;
}

// ---------------------------------------------------------------------------
// Completed double layer route

struct CompletedNeumannResult {
    SurfaceField density;  // phi on the source grid
    SurfaceField neumann;  // w = T[phi] at the staggered targets
    double residual = 0.0;
};

/// w = T[(1/2 I + D + V)^{-1} v] for general Dirichlet data sampled at the
/// staggered target nodes; the completion flow removes the rigid-body null
/// space so the second-kind system is solvable
inline CompletedNeumannResult neumann_data_completed_surface(const DtnSystem& sys,
                                                             const SurfaceField& v_targets) {
    const auto& src = sys.sources();
    const auto& tgt = sys.targets();
    if (v_targets.ns() != tgt.ns || v_targets.ntheta() != tgt.ntheta)
        throw GridMismatchError("neumann_data_completed: field grid mismatch");
    const std::size_t nn = src.ns * src.ntheta;
    const double wq = src.ds() * src.dtheta();

    const MatrixXd ps = shift_interpolation_matrix(src.ns, 0.5);
    const MatrixXd pt = shift_interpolation_matrix(src.ntheta, 0.5);
    const auto corr = layers::LocalCorrection::for_grids(src, tgt);

    MatrixXd m(3 * nn, 3 * nn);
    layers::parallel_over_targets(nn, [&](std::size_t t) {
        const Vector3d& x = tgt.node[t];
        Eigen::Matrix3d cdm = Eigen::Matrix3d::Zero();
        if (sys.variant() == layers::QuadratureVariant::StraightSubtraction) {
            const Eigen::Matrix3d b =
                layers::local_basis(tgt, t / tgt.ntheta, t % tgt.ntheta);
            cdm = b * corr.double_diag.asDiagonal() * b.transpose();
        }
        for (std::size_t g = 0; g < nn; ++g) {
            Eigen::Matrix3d blk =
                layers::stresslet(x, src.node[g], src.normal[g]) * (src.jac[g] * wq);
            // completion flow: centerline Stokeslet + rotlet moment arm
            const std::size_t i2 = g / src.ntheta;
            const Vector3d& xc = src.center[i2];
            const Eigen::Matrix3d gk = layers::stokeslet(x, xc);
            const Vector3d arm = src.node[g] - xc;
            const Vector3d rot = layers::rotlet(x, xc);
            Eigen::Matrix3d vk;
            for (int d = 0; d < 3; ++d)
                vk.col(d) = rot.cross(arm.cross(Vector3d::Unit(d))) / (8.0 * M_PI);
            blk += (gk + vk) * (src.jac[g] * wq);
            // jump term (1/2) phi(x_t) and the local double-layer correction,
            // both through the interpolation
            const std::size_t it = t / tgt.ntheta, jt = t % tgt.ntheta;
            const double p = ps(it, i2) * pt(jt, g % src.ntheta);
            blk += p * (0.5 * Eigen::Matrix3d::Identity() + cdm);
            m.block<3, 3>(3 * t, 3 * g) = blk;
        }
    });

    // same Nyquist blindness as the first-kind block: penalize those modes
    const double pen = 1e-3;
    const MatrixXd qs = nyquist_projector(src.ns);
    const MatrixXd qt = nyquist_projector(src.ntheta);
    for (std::size_t i = 0; i < src.ns; ++i)
        for (std::size_t i2 = 0; i2 < src.ns; ++i2)
            for (std::size_t j = 0; j < src.ntheta; ++j)
                for (int d = 0; d < 3; ++d)
                    m(3 * (i * src.ntheta + j) + d, 3 * (i2 * src.ntheta + j) + d) +=
                        pen * qs(i, i2);
    for (std::size_t j = 0; j < src.ntheta; ++j)
        for (std::size_t j2 = 0; j2 < src.ntheta; ++j2)
            for (std::size_t i = 0; i < src.ns; ++i)
                for (int d = 0; d < 3; ++d)
                    m(3 * (i * src.ntheta + j) + d, 3 * (i * src.ntheta + j2) + d) +=
                        pen * qt(j, j2);

    VectorXd rhs(3 * nn);
    for (std::size_t t = 0; t < nn; ++t) rhs.segment<3>(3 * t) = v_targets[t];

    Eigen::PartialPivLU<MatrixXd> lu(m);
    const VectorXd phi = lu.solve(rhs);
    CompletedNeumannResult out;
    out.residual = (m * phi - rhs).norm() / (1.0 + rhs.norm());
    if (!std::isfinite(out.residual) || out.residual > 1e-8)
        throw SolverError("neumann_data_completed: dense solve residual " +
                          std::to_string(out.residual));
    out.density = SurfaceField(src.ns, src.ntheta);
    for (std::size_t g = 0; g < nn; ++g)
        out.density[g] = phi.segment<3>(3 * static_cast<long>(g));
    out.neumann = layers::hypersingular_traction(src, out.density, tgt);
    return out;
}

/// theta-independent Dirichlet data lifted to the surface
inline CompletedNeumannResult neumann_data_completed(const DtnSystem& sys,
                                                     const PeriodicVectorField& v) {
    const auto& src = sys.sources();
    if (v.size() != src.ns)
        throw GridMismatchError("neumann_data_completed: field grid mismatch");
    const SurfaceField vlift = fields::lift_to_surface(v, src);
    return neumann_data_completed_surface(sys, fields::resample_surface_field(vlift, 0.5, 0.5));
}

// ---------------------------------------------------------------------------
// Decomposition diagnostic

struct DecompositionRow {
    double eps;
    double remainder;   // || dtn_curved(v) - Phi dtn_straight Phi^{-1} v_0 ||_inf
    double mean_channel;  // norm of the Phi-mean part of v (reported separately)
    double ratio;       // remainder(previous) / remainder(this), 0 for the first
};

/// sweep over eps at fixed curve shape and Dirichlet data; the remainder
/// should shrink with eps by the DtN decomposition
inline std::vector<DecompositionRow> decomposition_error(
    const geometry::FourierCurve& shape, const std::vector<double>& eps_list,
    const PeriodicVectorField& v, std::size_t ns, std::size_t ntheta) {
    const auto frame = geometry::periodicized_frame(shape);
    const fields::FrameOnGrid fr(frame, v.size());
    const auto split = fields::subtract_phi_mean(fr, v);
    const auto straight_part = fields::phi_inverse(fr, split.zero_mean);

    std::vector<DecompositionRow> rows;
    for (double eps : eps_list) {
        geometry::FourierCurve c = shape;
        c.set_eps(eps);
        const auto frame_eps = geometry::periodicized_frame(c);
        DtnSystem sys(frame_eps, ns, ntheta);
        const auto curved = dtn_curved(sys, v);
        const auto predicted = fields::phi_forward(fr, dtn_straight(eps, straight_part));
        double err = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            err = std::max(err, (curved.traction[i] - predicted[i]).norm());
        DecompositionRow row;
        row.eps = eps;
        row.remainder = err;
        row.mean_channel = split.mean.norm();
        row.ratio = rows.empty() ? 0.0 : rows.back().remainder / err;
        rows.push_back(row);
    }
    return rows;
}

} // namespace slb::bvp
