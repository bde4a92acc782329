#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "frozen_values.hpp"
#include "slb/multipliers.hpp"

using namespace slb::multipliers;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> zs(n);
    for (int i = 0; i < n; ++i)
        zs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return zs;
}

Eigen::Matrix2cd forward_t_matrix(const SymbolQuery& q) {
    const auto f = single_layer_forward_tangential(q);
    const std::complex<double> im(0.0, 1.0);
    Eigen::Matrix2cd m;
    m << f.a, im * f.b, -im * f.b, f.c;
    return m;
}

Eigen::Matrix2cd inverse_t_matrix(const SymbolQuery& q) {
    const auto v = single_layer_inverse_tangential(q);
    const std::complex<double> im(0.0, 1.0);
    Eigen::Matrix2cd m;
    m << v.m_tA, -im * v.m_tB, im * v.m_tB, v.m_tC;
    return m;
}

Eigen::Matrix3cd forward_n_matrix(const SymbolQuery& q) {
    const auto f = single_layer_forward_normal(q);
    const std::complex<double> im(0.0, 1.0);
    Eigen::Matrix3cd m;
    m << f.q_H, f.q_I, -im * f.q_J,
         f.q_I, f.q_K, -im * f.q_L,
         im * f.q_J, im * f.q_L, f.q_M;
    return m;
}

Eigen::Matrix3cd inverse_n_matrix(const SymbolQuery& q) {
    const auto v = single_layer_inverse_normal(q);
    const std::complex<double> im(0.0, 1.0);
    Eigen::Matrix3cd m;
    m << v.m_nA, v.m_nB, im * v.m_nC,
         v.m_nB, v.m_nD, -im * v.m_nE,
         -im * v.m_nC, im * v.m_nE, v.m_nF;
    return m;
}

} // namespace

TEST_CASE("symbols match the high-precision oracle") {
    for (const auto& row : slb::testref::kSymbolRef) {
        const double z = row[0];
        INFO("z = " << z);
        CHECK_THAT(dtn_tangential_of_z(z), WithinRel(row[1], 1e-12));
        CHECK_THAT(dtn_normal_of_z(z), WithinRel(row[2], 1e-12));
        // printed Q combinations cancel near-equal I.K products at large z,
        // so the double evaluation carries an absolute floor of a few 1e-15
        const auto dt = double_layer_tangential(z);
        CHECK_THAT(dt.q_tE, WithinRel(row[3], 1e-12) || WithinAbs(row[3], 1e-13));
        CHECK_THAT(dt.q_tF, WithinRel(row[4], 1e-12) || WithinAbs(row[4], 1e-13));
        const auto it = single_layer_inverse_tangential_of_z(z);
        CHECK_THAT(it.m_tA, WithinRel(row[5], 1e-11));
        CHECK_THAT(it.m_tB, WithinRel(row[6], 1e-11));
        CHECK_THAT(it.m_tC, WithinRel(row[7], 1e-11));
        const auto dn = double_layer_normal(z);
        CHECK_THAT(dn.q_nN, WithinRel(row[8], 1e-12) || WithinAbs(row[8], 1e-13));
        CHECK_THAT(dn.q_nO, WithinRel(row[9], 1e-12) || WithinAbs(row[9], 1e-13));
        CHECK_THAT(dn.q_nP, WithinRel(row[10], 1e-12) || WithinAbs(row[10], 1e-13));
        // the 4/z^2 terms in the Q_n family amplify rounding near z ~ 0.01
        const auto in = single_layer_inverse_normal_of_z(z);
        CHECK_THAT(in.m_nA, WithinRel(row[11], 5e-10));
        CHECK_THAT(in.m_nB, WithinRel(row[12], 5e-10));
        CHECK_THAT(in.m_nC, WithinRel(row[13], 5e-10) || WithinAbs(row[13], 1e-12));
        CHECK_THAT(in.m_nD, WithinRel(row[14], 5e-10));
        CHECK_THAT(in.m_nE, WithinRel(row[15], 5e-10) || WithinAbs(row[15], 1e-12));
        CHECK_THAT(in.m_nF, WithinRel(row[16], 5e-10));
        CHECK_THAT(dtn_via_boundary_integral_tangential_of_z(z), WithinRel(row[17], 1e-11));
        CHECK_THAT(dtn_via_boundary_integral_normal_of_z(z), WithinRel(row[18], 1e-10));
    }
}

TEST_CASE("forward matrices match the oracle") {
    for (const auto& row : slb::testref::kForwardRef) {
        const double z = row[0];
        INFO("z = " << z);
        SymbolQuery q(z / (2.0 * M_PI * 7.0), 7);
        const auto ft = single_layer_forward_tangential(q);
        CHECK_THAT(ft.a, WithinRel(row[1], 1e-12));
        CHECK_THAT(ft.b, WithinRel(row[2], 1e-12));
        CHECK_THAT(ft.c, WithinRel(row[3], 1e-12));
        const auto fn = single_layer_forward_normal(q);
        CHECK_THAT(fn.q_H, WithinRel(row[4], 1e-11) || WithinAbs(row[4], 1e-13));
        CHECK_THAT(fn.q_I, WithinRel(row[5], 1e-11) || WithinAbs(row[5], 1e-13));
        CHECK_THAT(fn.q_J, WithinRel(row[6], 1e-11) || WithinAbs(row[6], 1e-13));
        CHECK_THAT(fn.q_K, WithinRel(row[7], 1e-11) || WithinAbs(row[7], 1e-13));
        CHECK_THAT(fn.q_L, WithinRel(row[8], 1e-11) || WithinAbs(row[8], 1e-13));
        CHECK_THAT(fn.q_M, WithinRel(row[9], 1e-11) || WithinAbs(row[9], 1e-13));
    }
}

TEST_CASE("composition identity recovers the DtN eigenvalues") {
    for (double z : log_spaced(0.01, 10.0, 50)) {
        INFO("z = " << z);
        const double mt = dtn_tangential_of_z(z);
        const double mn = dtn_normal_of_z(z);
        CHECK(std::fabs(dtn_via_boundary_integral_tangential_of_z(z) - mt) / mt <= 1e-10);
        CHECK(std::fabs(dtn_via_boundary_integral_normal_of_z(z) - mn) / mn <= 1e-10);
    }
}

TEST_CASE("composition is sensitive to symbol sign slips") {
    // a sign flip on Q_tF moves the composition far outside the identity band
    const double z = 1.0;
    const auto dl = double_layer_tangential(z);
    const auto inv = single_layer_inverse_tangential_of_z(z);
    const double good = 2.0 * M_PI * (inv.m_tA * (0.5 - dl.q_tE) - inv.m_tB * dl.q_tF);
    const double flipped = 2.0 * M_PI * (inv.m_tA * (0.5 - dl.q_tE) + inv.m_tB * dl.q_tF);
    const double mt = dtn_tangential_of_z(z);
    CHECK(std::fabs(good - mt) / mt <= 1e-10);
    CHECK(std::fabs(flipped - mt) / mt > 1e-3);
}

TEST_CASE("forward times inverse is the identity") {
    for (double z : log_spaced(0.01, 10.0, 50)) {
        INFO("z = " << z);
        SymbolQuery q(z / (2.0 * M_PI * 41.0), 41);
        CHECK((forward_t_matrix(q) * inverse_t_matrix(q) - Eigen::Matrix2cd::Identity())
                  .cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((forward_n_matrix(q) * inverse_n_matrix(q) - Eigen::Matrix3cd::Identity())
                  .cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("forward tangential matrix is Hermitian positive definite") {
    for (double z : {0.05, 0.3, 1.0, 4.0}) {
        SymbolQuery q(z / (2.0 * M_PI * 5.0), 5);
        const auto m = forward_t_matrix(q);
        CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
        CHECK(es.eigenvalues().minCoeff() > 0.0);

        const auto n = forward_n_matrix(q);
        CHECK((n - n.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("eigenvalues are positive and even in k") {
    for (double eps : {0.1, 0.01, 0.001}) {
        for (long k : {1L, 2L, 5L, 17L, 100L}) {
            SymbolQuery qp(eps, k), qm(eps, -k);
            CHECK(dtn_eigen_tangential(qp) > 0.0);
            CHECK(dtn_eigen_normal(qp) > 0.0);
            CHECK(dtn_eigen_tangential(qp) == dtn_eigen_tangential(qm));
            CHECK(dtn_eigen_normal(qp) == dtn_eigen_normal(qm));
            CHECK(ntd_eigen(Direction::Tangential, qp) ==
                  1.0 / dtn_eigen_tangential(qp));
        }
    }
}

TEST_CASE("zero mode is rejected") {
    SymbolQuery q(0.01, 0);
    CHECK_THROWS_AS(dtn_eigen_tangential(q), slb::ZeroModeError);
    CHECK_THROWS_AS(dtn_eigen_normal(q), slb::ZeroModeError);
    CHECK_THROWS_AS(ntd_eigen(Direction::Normal, q), slb::ZeroModeError);
    CHECK_THROWS_AS(single_layer_forward_tangential(q), slb::ZeroModeError);
    CHECK_THROWS_AS(dtn_via_boundary_integral(Direction::Tangential, q), slb::ZeroModeError);
    CHECK_THROWS_AS(SymbolQuery(0.3, 1), slb::DomainError);
}

TEST_CASE("high-mode growth and decay slopes") {
    // log m^{-1} vs log |k| slope -> 1 in the region 2 pi eps |k| in [4, 64];
    // NtD decays with slope -1 there
    const double eps = 0.01;
    const long klo = static_cast<long>(std::ceil(4.0 / (2.0 * M_PI * eps)));
    const long khi = static_cast<long>(std::floor(64.0 / (2.0 * M_PI * eps)));
    auto slope = [&](auto f) {
        const double f1 = f(SymbolQuery(eps, klo)), f2 = f(SymbolQuery(eps, khi));
        return std::log(f2 / f1) /
               std::log(static_cast<double>(khi) / static_cast<double>(klo));
    };
    CHECK_THAT(slope([](const SymbolQuery& q) { return dtn_eigen_tangential(q); }),
               WithinAbs(1.0, 0.05));
    CHECK_THAT(slope([](const SymbolQuery& q) { return dtn_eigen_normal(q); }),
               WithinAbs(1.0, 0.05));
    CHECK_THAT(slope([](const SymbolQuery& q) { return ntd_eigen(Direction::Tangential, q); }),
               WithinAbs(-1.0, 0.05));
    CHECK_THAT(slope([](const SymbolQuery& q) { return ntd_eigen(Direction::Normal, q); }),
               WithinAbs(-1.0, 0.05));
}

TEST_CASE("low-mode |log eps| scaling of the normal eigenvalue") {
    // m_n^{-1}(1) |log eps| stays within fixed brackets as eps -> 0
    double lo = 1e300, hi = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const double v = dtn_eigen_normal(SymbolQuery(eps, 1)) * std::fabs(std::log(eps));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo > 1.0);
    CHECK(hi < 100.0);
    CHECK(hi / lo < 4.0);
}

TEST_CASE("small-z growth of m_tA and m_tB follows the multiplier bounds") {
    // m_tA stays O(1) as z -> 0 while m_tB grows like 1/z (the 1-mode
    // coupling bound eps^{-1} |xi|^{-1} in z form); swept on a log grid
    for (double z : {1.0, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3}) {
        const auto inv = single_layer_inverse_tangential_of_z(z);
        CHECK(std::fabs(inv.m_tA) < 10.0);
        CHECK(std::fabs(inv.m_tB) * z < 10.0);
        CHECK(std::fabs(inv.m_tB) * z > 1.0);
    }
}

TEST_CASE("angle-averaged multipliers are consistent with the inverse symbols") {
    for (double z : {0.2, 1.0, 5.0}) {
        SymbolQuery q(z / (2.0 * M_PI * 8.0), 8);
        const auto avt = angle_averaged_tangential(q);
        const auto inv = single_layer_inverse_tangential(q);
        CHECK(avt.m_zz == 2.0 * inv.m_tA);
        CHECK(avt.m_rz_im == -2.0 * inv.m_tB);
        CHECK(avt.m_thz == 0.0);
        const auto avn = angle_averaged_normal(q);
        const auto invn = single_layer_inverse_normal(q);
        CHECK(avn.m_rx == invn.m_nA - invn.m_nB);
        CHECK(avn.m_thx == invn.m_nB - invn.m_nD);
        CHECK(avn.m_zx_im == invn.m_nC + invn.m_nE);
    }
}

TEST_CASE("semigroup factor") {
    SymbolQuery q(0.05, 3);
    CHECK(semigroup_factor(Direction::Normal, q, 0.0) == 1.0);
    CHECK(semigroup_factor(Direction::Normal, SymbolQuery(0.05, 0), 0.7) == 1.0);
    CHECK_THROWS_AS(semigroup_factor(Direction::Normal, q, -1.0), slb::DomainError);

    // monotone in tau and in |k|
    double prev = 1.0;
    for (double tau : {1e-6, 1e-5, 1e-4, 1e-3}) {
        const double f = semigroup_factor(Direction::Normal, q, tau);
        CHECK(f < prev);
        CHECK(f > 0.0);
        prev = f;
    }
    prev = 1.0;
    for (long k : {1L, 2L, 4L, 8L, 16L}) {
        const double f = semigroup_factor(Direction::Tangential, SymbolQuery(0.05, k), 1e-6);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("semigroup decay-rate regimes") {
    // effective rate -log(factor)/tau ~ eps^{-1} |k|^3 for |k| >= 1/(2 pi eps)
    // and ~ |log eps| k^4 below; verified as log-log slopes in k
    const double eps = 1e-3;
    auto rate = [&](long k, double tau) {
        return -std::log(semigroup_factor(Direction::Tangential, SymbolQuery(eps, k), tau)) /
               tau;
    };
    const long kc = static_cast<long>(1.0 / (2.0 * M_PI * eps));
    // high regime (tau chosen so the factor stays inside (1e-300, 1))
    {
        const long k1 = 4 * kc, k2 = 32 * kc;
        const double slope = std::log(rate(k2, 1e-15) / rate(k1, 1e-15)) /
                             std::log(static_cast<double>(k2) / static_cast<double>(k1));
        CHECK_THAT(slope, WithinAbs(3.0, 0.2));
        CHECK(slope < 3.4);
    }
    // low regime
    {
        const long k1 = 2, k2 = 16;
        // the |log(eps k)| drift of m_t shifts the pure k^4 fit downward
        const double slope = std::log(rate(k2, 1e-8) / rate(k1, 1e-8)) /
                             std::log(static_cast<double>(k2) / static_cast<double>(k1));
        CHECK_THAT(slope, WithinAbs(4.0, 0.5));
        CHECK(slope > 3.5);
    }
}

TEST_CASE("tables") {
    const auto t = build_table("dtn_t", 0.01, 16);
    CHECK(t.values.size() == 33);
    CHECK(t.at(5) == t.at(-5));
    CHECK(t.at(0) == t.at(1));  // nearest-mode zero-mode convention
    CHECK(t.at(7) == dtn_eigen_tangential(SymbolQuery(0.01, 7)));
    CHECK_THROWS_AS(build_table("dtn_t", 0.01, 0), slb::DomainError);
    CHECK_THROWS_AS(build_table("nope", 0.01, 4), slb::DomainError);
}
