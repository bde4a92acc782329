#pragma once

// Explicit Fourier symbols on the straight periodic cylinder C_eps:
// DtN/NtD eigenvalues, single/double layer matrix symbols, the
// angle-averaged inverse single layer, the boundary-integral composition
// that recovers the DtN eigenvalues, and semigroup factors.
//
// Every symbol is a function of z = 2 pi eps |k| alone and is evaluated
// through exponentially scaled Bessel values, so nothing overflows for
// z up to several hundred. Q-functions are coded exactly as printed;
// the composition cross-check is the guard against transcription slips.
//
// Complex bookkeeping: couplings that carry a factor of i in the printed
// symbols (m_tB, m_nC, m_nE, Q_tF, Q_nP and the forward entries b, Q_J,
// Q_L) are stored as real values; the i sits where the printed matrix
// places it (see the struct comments).

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "slb/errors.hpp"
#include "slb/specfun.hpp"

namespace slb::multipliers {

enum class Direction { Tangential, Normal };

inline constexpr double kSingularSymbolFloor = 1e-14;

/// One (eps, k) evaluation point; z = 2 pi eps |k|.
struct SymbolQuery {
    double eps;
    long k;

    SymbolQuery(double eps_, long k_) : eps(eps_), k(k_) {
        if (!(eps > 0.0) || eps >= 0.25)
            throw DomainError("SymbolQuery: eps must lie in (0, 1/4)");
    }
    double z() const { return 2.0 * M_PI * eps * static_cast<double>(std::labs(k)); }
    void require_nonzero_mode(const char* who) const {
        if (k == 0) throw ZeroModeError(std::string(who) + ": k = 0 (mean-zero data required)");
    }
};

// ---------------------------------------------------------------------------
// DtN spectrum (direct formulas)

/// m_t^{-1} as a function of z = 2 pi eps |k|:
/// 8 pi^2 eps |k| K1^2 / (2 K0 K1 + 2 pi eps |k| (K0^2 - K1^2)).
inline double dtn_tangential_of_z(double z) {
    const specfun::ScaledBessel b(z);
    return 4.0 * M_PI * z * b.k1e * b.k1e /
           (2.0 * b.k0e * b.k1e + z * (b.k0e * b.k0e - b.k1e * b.k1e));
}

/// m_n^{-1} as a function of z:
/// 4 pi^2 eps |k| (4 K1^2 K2 + 2 pi eps |k| K1 (K1^2 - K0 K2)) /
///                (2 K0 K1 K2 + 2 pi eps |k| (K1^2 (K0 + K2) - 2 K0^2 K2)).
inline double dtn_normal_of_z(double z) {
    const specfun::ScaledBessel b(z);
    const double num = 4.0 * b.k1e * b.k1e * b.k2e + z * b.k1e * (b.k1e * b.k1e - b.k0e * b.k2e);
    const double den = 2.0 * b.k0e * b.k1e * b.k2e +
                       z * (b.k1e * b.k1e * (b.k0e + b.k2e) - 2.0 * b.k0e * b.k0e * b.k2e);
    return 2.0 * M_PI * z * num / den;
}

inline double dtn_eigen_tangential(const SymbolQuery& q) {
    q.require_nonzero_mode("dtn_eigen_tangential");
    return dtn_tangential_of_z(q.z());
}

inline double dtn_eigen_normal(const SymbolQuery& q) {
    q.require_nonzero_mode("dtn_eigen_normal");
    return dtn_normal_of_z(q.z());
}

inline double dtn_eigen(Direction dir, const SymbolQuery& q) {
    return dir == Direction::Tangential ? dtn_eigen_tangential(q) : dtn_eigen_normal(q);
}

inline double ntd_eigen(Direction dir, const SymbolQuery& q) {
    q.require_nonzero_mode("ntd_eigen");
    return 1.0 / dtn_eigen(dir, q);
}

// ---------------------------------------------------------------------------
// Double layer symbols

/// D[e^{2 pi i k s} e_z] = Q_tE e^{2 pi i k s} e_z + i Q_tF e^{2 pi i k s} e_r
struct DoubleLayerTangential {
    double q_tE;
    double q_tF;  // coefficient of +i e_r
};

inline DoubleLayerTangential double_layer_tangential(double z) {
    if (z <= 0) throw DomainError("double_layer_tangential: z must be positive");
    const specfun::ScaledBessel b(z);
    return {z * z * (b.i0k0() - b.i1k1()) - 0.5 * z * (b.i0k1() - b.i1k0()),
            -z * z * (b.i1k0() - b.i0k1()) - z * b.i1k1()};
}

/// D[e^{2 pi i k s} e_x] = (Q_nN cos@ e_r - Q_nO sin@ e_th + i Q_nP cos@ e_z) e^{2 pi i k s}
struct DoubleLayerNormal {
    double q_nN;
    double q_nO;
    double q_nP;  // coefficient of +i cos@ e_z
};

inline DoubleLayerNormal double_layer_normal(double z) {
    if (z <= 0) throw DomainError("double_layer_normal: z must be positive");
    const specfun::ScaledBessel b(z);
    return {z * z * (b.i1k1() - b.i0k0()) + 1.5 * z * (b.i1k0() - b.i0k1()) + 2.0 * b.i1k1(),
            -0.5 * z * (b.i1k0() - b.i0k1()) - 2.0 * b.i1k1(),
            z * z * (b.i0k1() - b.i1k0()) - z * b.i1k1()};
}

// ---------------------------------------------------------------------------
// Forward single layer symbols (eps times these matrices)

/// S on (e_z, e_r) zero modes: eps * [[a, i b], [-i b, c]].
struct SlForwardTangential {
    double a, b, c;
};

inline SlForwardTangential single_layer_forward_tangential(const SymbolQuery& q) {
    q.require_nonzero_mode("single_layer_forward_tangential");
    const double z = q.z();
    const specfun::ScaledBessel bb(z);
    const double w = 0.5 * z;  // pi eps |k|
    return {bb.i0k0() + w * (bb.i1k0() - bb.i0k1()),
            w * (bb.i0k0() - bb.i1k1()),
            bb.i1k1() + w * (bb.i1k0() - bb.i0k1())};
}

/// S on (cos@ e_r, sin@ e_th, cos@ e_z):
/// eps * [[Q_H, Q_I, -i Q_J], [Q_I, Q_K, -i Q_L], [i Q_J, i Q_L, Q_M]].
struct SlForwardNormal {
    double q_H, q_I, q_J, q_K, q_L, q_M;
};

inline SlForwardNormal single_layer_forward_normal(const SymbolQuery& q) {
    q.require_nonzero_mode("single_layer_forward_normal");
    const double z = q.z();
    const specfun::ScaledBessel b(z);
    const double d10 = b.i1k0() - b.i0k1();
    const double p11 = b.i1k1();
    SlForwardNormal m;
    m.q_H = -1.5 / z * d10 - 3.0 / (z * z) * p11 - 0.5 * z * d10 + (b.i0k0() - p11);
    m.q_I = -1.5 / z * d10 - 3.0 / (z * z) * p11 + 0.5 * (b.i0k0() - p11);
    m.q_J = 0.5 * z * (p11 - b.i0k0()) + 0.5 * d10 + p11 / z;
    m.q_K = -(1.5 / z * d10 + 3.0 / (z * z) * p11 - b.i0k0());
    m.q_L = 0.5 * d10 + p11 / z;
    m.q_M = -0.5 * z * d10;
    return m;
}

// ---------------------------------------------------------------------------
// Inverse single layer symbols (eps^{-1} times these)

/// S^{-1} on (e_z, e_r): eps^{-1} (m_tA e_z(x)e_z + i m_tB (e_r(x)e_z - e_z(x)e_r)
///                                + m_tC e_r(x)e_r), i.e. matrix
/// [[m_tA, -i m_tB], [i m_tB, m_tC]].
struct SlInverseTangential {
    double m_tA, m_tB, m_tC;
    double q_tD;  // denominator, reported for diagnostics
};

inline SlInverseTangential single_layer_inverse_tangential_of_z(double z) {
    if (z <= 0) throw DomainError("single_layer_inverse_tangential: z must be positive");
    const specfun::ScaledBessel b(z);
    using specfun::RatioKind;
    const double r10 = specfun::ratio(RatioKind::I1I0, z);
    const double r01 = specfun::ratio(RatioKind::I0I1, z);
    const double s10 = specfun::ratio(RatioKind::K1K0, z);
    const double s01 = specfun::ratio(RatioKind::K0K1, z);
    const double q_tA = (1.0 + 0.5 * z * (s01 - r01)) / b.i0k0();
    const double q_tB = 0.5 * z * (1.0 / b.i1k1() - 1.0 / b.i0k0());
    const double q_tC = (1.0 + 0.5 * z * (r10 - s10)) / b.i1k1();
    const double q_tD = (1.0 + 0.5 * z * (r10 - r01)) * (1.0 + 0.5 * z * (s01 - s10));
    if (std::fabs(q_tD) < kSingularSymbolFloor)
        throw SingularSymbolError("single_layer_inverse_tangential: |Q_tD| below floor");
    return {q_tA / q_tD, q_tB / q_tD, q_tC / q_tD, q_tD};
}

inline SlInverseTangential single_layer_inverse_tangential(const SymbolQuery& q) {
    q.require_nonzero_mode("single_layer_inverse_tangential");
    return single_layer_inverse_tangential_of_z(q.z());
}

/// S^{-1} on (e_r, e_th, e_z) one-mode structure: eps^{-1} times
/// [[m_nA, m_nB, i m_nC], [m_nB, m_nD, -i m_nE], [-i m_nC, i m_nE, m_nF]].
struct SlInverseNormal {
    double m_nA, m_nB, m_nC, m_nD, m_nE, m_nF;
    double q_nG;
};

inline SlInverseNormal single_layer_inverse_normal_of_z(double z) {
    if (z <= 0) throw DomainError("single_layer_inverse_normal: z must be positive");
    const specfun::ScaledBessel b(z);
    using specfun::RatioKind;
    const double r10 = specfun::ratio(RatioKind::I1I0, z);
    const double r01 = specfun::ratio(RatioKind::I0I1, z);
    const double s10 = specfun::ratio(RatioKind::K1K0, z);
    const double s01 = specfun::ratio(RatioKind::K0K1, z);
    const double p11 = b.i1k1();
    const double z2 = z * z;

    const double q_nA =
        (4.0 + 4.0 / z2 * r10 * s10 + 2.0 / z * (s10 - r10) - 2.0 * z * (r01 - s01) -
         2.0 * (r01 * s10 + r10 * s01)) / p11;
    const double q_nB =
        (2.0 * s10 * (r01 - r10) + 2.0 * (r10 * s01 - 1.0) + 2.0 / z * (r10 - s10) -
         4.0 / z2 * r10 * s10) / p11;
    const double q_nC =
        2.0 * (2.0 / z * r10 * s10 + 2.0 * (r01 - s01) + (r10 - s10) + z * r01 * s01 - z -
               4.0 / z) / p11;
    const double q_nD =
        (4.0 / z2 * r10 * s10 + 2.0 / z * (s10 - r10) +
         2.0 * (2.0 * r10 * s10 - r10 * s01 - r01 * s10) +
         z2 * (r01 - r10) * (s01 - s10)) / p11;
    const double q_nE =
        (4.0 / z * r10 * s10 - 4.0 / z + 2.0 * (r01 - s01) + z * (r01 - r10) * (s01 - s10)) /
        p11;
    const double q_nF =
        (12.0 / z2 + 6.0 / z * (s01 - r01 + s10 - r10) -
         3.0 * (r01 * (s01 + s10) + r10 * s01) + (r10 * s10 + 8.0) + 2.0 * z * (s01 - r01)) /
        p11;
    const double q_nG = (2.0 / z + (1.0 - z * r01) * (r01 - r10)) *
                        (2.0 / z - (1.0 + z * s01) * (s01 - s10));
    if (std::fabs(q_nG) < kSingularSymbolFloor)
        throw SingularSymbolError("single_layer_inverse_normal: |Q_nG| below floor");
    return {q_nA / q_nG, q_nB / q_nG, q_nC / q_nG, q_nD / q_nG, q_nE / q_nG, q_nF / q_nG, q_nG};
}

inline SlInverseNormal single_layer_inverse_normal(const SymbolQuery& q) {
    q.require_nonzero_mode("single_layer_inverse_normal");
    return single_layer_inverse_normal_of_z(q.z());
}

// ---------------------------------------------------------------------------
// Angle-averaged inverse single layer (Corollary multipliers)

/// A_eps[F_z] = pi (m_z^z f_z + m_r^z f_r) e^{2 pi i k s} e_z with
/// m_z^z = 2 m_tA and m_r^z = -2 i m_tB (value stores the real factor of -2 m_tB,
/// the i sits in front); m_th^z = 0 identically.
struct AngleAveragedTangential {
    double m_zz;      // m_z^z
    double m_rz_im;   // m_r^z = i * m_rz_im  (printed value -2 i m_tB)
    double m_thz;     // m_th^z, identically zero
};

inline AngleAveragedTangential angle_averaged_tangential_of_z(double z) {
    const auto inv = single_layer_inverse_tangential_of_z(z);
    return {2.0 * inv.m_tA, -2.0 * inv.m_tB, 0.0};
}

inline AngleAveragedTangential angle_averaged_tangential(const SymbolQuery& q) {
    q.require_nonzero_mode("angle_averaged_tangential");
    return angle_averaged_tangential_of_z(q.z());
}

/// A_eps[F_x] = pi (m_r^x f_r + m_th^x f_th + m_z^x f_z) e^{2 pi i k s} e_x with
/// m_z^x = i (m_nC + m_nE) (value stores the real factor).
struct AngleAveragedNormal {
    double m_rx;     // m_nA - m_nB
    double m_thx;    // m_nB - m_nD
    double m_zx_im;  // m_z^x = i * m_zx_im = i (m_nC + m_nE)
};

inline AngleAveragedNormal angle_averaged_normal_of_z(double z) {
    const auto inv = single_layer_inverse_normal_of_z(z);
    return {inv.m_nA - inv.m_nB, inv.m_nB - inv.m_nD, inv.m_nC + inv.m_nE};
}

inline AngleAveragedNormal angle_averaged_normal(const SymbolQuery& q) {
    q.require_nonzero_mode("angle_averaged_normal");
    return angle_averaged_normal_of_z(q.z());
}

// ---------------------------------------------------------------------------
// Boundary-integral composition A_eps [(1/2 I - D)[.]]: recovers the DtN
// eigenvalues of the direct formulas. The 1/2 I - D shift is applied
// explicitly to the printed double layer symbols before angle averaging.

inline double dtn_via_boundary_integral_tangential_of_z(double z) {
    const auto dl = double_layer_tangential(z);
    const auto inv = single_layer_inverse_tangential_of_z(z);
    // (1/2 I - D)[e_z mode] has coefficients f_z = 1/2 - Q_tE, f_r = -i Q_tF;
    // the i factors combine to a real result.
    return 2.0 * M_PI * (inv.m_tA * (0.5 - dl.q_tE) - inv.m_tB * dl.q_tF);
}

inline double dtn_via_boundary_integral_normal_of_z(double z) {
    const auto dl = double_layer_normal(z);
    const auto av = angle_averaged_normal_of_z(z);
    // (1/2 I - D)[e_x mode]: f_r = 1/2 - Q_nN, f_th = -(1/2 - Q_nO), f_z = -i Q_nP
    return M_PI * (av.m_rx * (0.5 - dl.q_nN) - av.m_thx * (0.5 - dl.q_nO) +
                   av.m_zx_im * dl.q_nP);
}

inline double dtn_via_boundary_integral(Direction dir, const SymbolQuery& q) {
    q.require_nonzero_mode("dtn_via_boundary_integral");
    return dir == Direction::Tangential ? dtn_via_boundary_integral_tangential_of_z(q.z())
                                        : dtn_via_boundary_integral_normal_of_z(q.z());
}

// ---------------------------------------------------------------------------
// Semigroup factor of the exponential integrator

/// exp(-tau (2 pi k)^4 m(k)) with m the NtD eigenvalue; 1 at tau = 0 or k = 0.
inline double semigroup_factor(Direction dir, const SymbolQuery& q, double tau) {
    if (tau < 0) throw DomainError("semigroup_factor: tau must be nonnegative");
    if (q.k == 0 || tau == 0.0) return 1.0;
    const double om = 2.0 * M_PI * static_cast<double>(q.k);
    const double om4 = om * om * om * om;
    return std::exp(-tau * om4 * ntd_eigen(dir, q));
}

// ---------------------------------------------------------------------------
// Tabulation

struct MultiplierTable {
    std::string family;
    double eps = 0.0;
    long kmax = 0;
    std::vector<double> values;  // index 0..2*kmax <-> k = -kmax..kmax
    std::string zero_mode_convention;

    double at(long k) const { return values[static_cast<std::size_t>(k + kmax)]; }
};

/// Families: dtn_t, dtn_n, ntd_t, ntd_n, bi_t, bi_n. The k = 0 entry uses the
/// nearest-mode convention (value at |k| = 1), recorded in the table.
inline MultiplierTable build_table(const std::string& family, double eps, long kmax) {
    if (kmax < 1) throw DomainError("build_table: kmax must be >= 1");
    auto eval = [&family](const SymbolQuery& q) -> double {
        if (family == "dtn_t") return dtn_eigen_tangential(q);
        if (family == "dtn_n") return dtn_eigen_normal(q);
        if (family == "ntd_t") return ntd_eigen(Direction::Tangential, q);
        if (family == "ntd_n") return ntd_eigen(Direction::Normal, q);
        if (family == "bi_t") return dtn_via_boundary_integral(Direction::Tangential, q);
        if (family == "bi_n") return dtn_via_boundary_integral(Direction::Normal, q);
        throw DomainError("build_table: unknown family " + family);
    };
    MultiplierTable t;
    t.family = family;
    t.eps = eps;
    t.kmax = kmax;
    t.zero_mode_convention = "nearest-mode (k=0 entry carries the |k|=1 value)";
    t.values.resize(static_cast<std::size_t>(2 * kmax + 1));
    for (long k = -kmax; k <= kmax; ++k) {
        const long keff = (k == 0) ? 1 : k;
        t.values[static_cast<std::size_t>(k + kmax)] = eval(SymbolQuery(eps, keff));
    }
    return t;
}

} // namespace slb::multipliers
