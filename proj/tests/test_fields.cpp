#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "slb/fields.hpp"

using namespace slb::fields;
using slb::geometry::FourierCurve;
using slb::geometry::make_circle;
using slb::geometry::periodicized_frame;
using Catch::Matchers::WithinAbs;
using Eigen::Vector3d;

namespace {

PeriodicVectorField sine_field(std::size_t n, int mode, int component) {
    PeriodicVectorField f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        f[i][component] = std::sin(2.0 * M_PI * mode * s);
    }
    return f;
}

PeriodicVectorField random_band_limited(unsigned seed, std::size_t n, int kmax) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    PeriodicVectorField f(n);
    for (int k = 1; k <= kmax; ++k)
        for (int d = 0; d < 3; ++d) {
            const double a = g(rng), b = g(rng);
            for (std::size_t i = 0; i < n; ++i) {
                const double s = static_cast<double>(i) / static_cast<double>(n);
                f[i][d] += a * std::cos(2.0 * M_PI * k * s) + b * std::sin(2.0 * M_PI * k * s);
            }
        }
    return f;
}

} // namespace

TEST_CASE("grid-spectral round trip") {
    const auto f = random_band_limited(1, 64, 20);
    const auto back = PeriodicVectorField::from_spectrum(f.spectrum());
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK((f[i] - back[i]).norm() <= 1e-12 * (1.0 + f[i].norm()));
}

TEST_CASE("spectral derivative") {
    const std::size_t n = 64;
    // sin(2 pi s) e_x differentiates four times to (2 pi)^4 itself
    const auto f = sine_field(n, 1, 0);
    // rounding in the transform is amplified by (2 pi k)^4 across the band,
    // so the comparison floor is eps (pi n)^4
    const auto d4 = spectral_derivative(f, 4);
    const double w4 = std::pow(2.0 * M_PI, 4);
    for (std::size_t i = 0; i < n; ++i)
        CHECK_THAT(d4[i][0], WithinAbs(w4 * f[i][0], 1e-6));

    // the mean of any derivative vanishes identically
    const auto g = random_band_limited(2, n, 10);
    for (int order = 1; order <= 4; ++order) {
        CHECK(spectral_derivative(g, order).mean().norm() <= 1e-8);
    }

    // first derivative against finite differences
    const auto d1 = spectral_derivative(g, 1);
    const double h = 1e-5;
    for (double s : {0.12, 0.57, 0.93}) {
        const Vector3d fd = (g.eval(s + h) - g.eval(s - h)) / (2.0 * h);
        CHECK((d1.eval(s) - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
    }

    CHECK_THROWS_AS(spectral_derivative(g, 0), slb::DomainError);
    CHECK_THROWS_AS(spectral_derivative(g, 5), slb::DomainError);
}

TEST_CASE("Phi is a pointwise isometry with straight-frame identity") {
    const std::size_t n = 64;
    const auto frame = periodicized_frame(make_circle(1.0 / (2.0 * M_PI), 0.05));
    const FrameOnGrid fr(frame, n);

    const auto g = random_band_limited(3, n, 12);
    const auto h = phi_forward(fr, g);
    // pointwise norms preserved
    for (std::size_t i = 0; i < n; ++i)
        CHECK_THAT(h[i].norm(), WithinAbs(g[i].norm(), 1e-13));
    // round trip
    const auto back = phi_inverse(fr, h);
    for (std::size_t i = 0; i < n; ++i) CHECK((back[i] - g[i]).norm() <= 1e-13);

    // straight frame: e_t = e_z, e_n1 = e_x, e_n2 = e_y makes Phi the identity
    FrameOnGrid straight;
    straight.e_t.assign(n, Vector3d::UnitZ());
    straight.e_n1.assign(n, Vector3d::UnitX());
    straight.e_n2.assign(n, Vector3d::UnitY());
    const auto hs = phi_forward(straight, g);
    for (std::size_t i = 0; i < n; ++i) CHECK((hs[i] - g[i]).norm() == 0.0);

    PeriodicVectorField wrong(n / 2);
    CHECK_THROWS_AS(phi_forward(fr, wrong), slb::GridMismatchError);
}

TEST_CASE("subtract_phi_mean") {
    const std::size_t n = 64;
    const auto frame = periodicized_frame(make_circle(1.0 / (2.0 * M_PI), 0.05));
    const FrameOnGrid fr(frame, n);

    // constant Cartesian field on the straight frame vanishes entirely
    FrameOnGrid straight;
    straight.e_t.assign(n, Vector3d::UnitZ());
    straight.e_n1.assign(n, Vector3d::UnitX());
    straight.e_n2.assign(n, Vector3d::UnitY());
    PeriodicVectorField c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = Vector3d(0.3, -1.2, 0.5);
    const auto sp = subtract_phi_mean(straight, c);
    CHECK(sp.zero_mean.max_norm() <= 1e-14);

    // general case: the straight-frame mean of the remainder vanishes
    const auto h = random_band_limited(5, n, 10);
    const auto split = subtract_phi_mean(fr, h);
    CHECK(phi_inverse(fr, split.zero_mean).mean().norm() <= 1e-14);
    // reassembly
    PeriodicVectorField mean_field(n);
    for (std::size_t i = 0; i < n; ++i) mean_field[i] = split.mean;
    const auto re = split.zero_mean + phi_forward(fr, mean_field);
    for (std::size_t i = 0; i < n; ++i) CHECK((re[i] - h[i]).norm() <= 1e-13);

    // circle radial field (2 pi)^4 X: the frame projection is a constant
    // e_x channel, removed entirely by the subtraction
    const auto circle = make_circle(1.0 / (2.0 * M_PI), 0.05);
    PeriodicVectorField radial(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        radial[i] = std::pow(2.0 * M_PI, 4) * circle.eval(s);
    }
    const auto rsplit = subtract_phi_mean(fr, radial);
    CHECK(rsplit.zero_mean.max_norm() <= 1e-8 * radial.max_norm());
}

TEST_CASE("Phi commutator bound") {
    // |d/ds(Phi g) - Phi(d/ds g)| <= (2 kappa* + |kappa3|) |g| on sampled fields
    const auto curve = slb::geometry::rescale_to_unit_length(
        slb::geometry::make_coil(0.3, 0.01, 48));
    const auto frame = periodicized_frame(curve);
    const std::size_t n = 256;
    const FrameOnGrid fr(frame, n);
    const double bound =
        2.0 * slb::geometry::max_curvature(curve) + std::fabs(frame.kappa3());
    for (unsigned seed : {7u, 8u}) {
        const auto g = random_band_limited(seed, n, 6);
        const auto lhs = spectral_derivative(phi_forward(fr, g), 1);
        const auto rhs = phi_forward(fr, spectral_derivative(g, 1));
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, (lhs[i] - rhs[i]).norm());
        CHECK(worst <= bound * g.max_norm() * (1.0 + 1e-8));
    }
}

TEST_CASE("P01 projection") {
    const std::size_t ns = 8, nt = 16;

    // pure two-mode field is annihilated
    SurfaceField two(ns, nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            two.at(i, j)[0] = std::cos(2.0 * 2.0 * M_PI * j / nt);
    CHECK(project_p01(two).max_norm() <= 1e-13);

    // theta-independent tangential field is unchanged
    SurfaceField g0(ns, nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            g0.at(i, j)[2] = std::sin(2.0 * M_PI * i / ns);
    const auto pg0 = project_p01(g0);
    for (std::size_t f = 0; f < g0.size(); ++f) CHECK((pg0[f] - g0[f]).norm() <= 1e-13);

    // the theta zero-mode of the theta component is dropped
    SurfaceField gth(ns, nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) gth.at(i, j)[1] = 1.0;
    CHECK(project_p01(gth).max_norm() <= 1e-14);

    // idempotence on a mixed field
    std::mt19937 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SurfaceField w(ns, nt);
    for (std::size_t f = 0; f < w.size(); ++f)
        w[f] = Vector3d(gauss(rng), gauss(rng), gauss(rng));
    const auto p1 = project_p01(w);
    const auto p2 = project_p01(p1);
    for (std::size_t f = 0; f < w.size(); ++f) CHECK((p2[f] - p1[f]).norm() <= 1e-13);

    // orthogonal projection in the discrete theta inner product:
    // <P w, v> = <w, P v>
    SurfaceField v(ns, nt);
    for (std::size_t f = 0; f < v.size(); ++f)
        v[f] = Vector3d(gauss(rng), gauss(rng), gauss(rng));
    const auto pv = project_p01(v);
    double left = 0.0, right = 0.0;
    for (std::size_t f = 0; f < v.size(); ++f) {
        left += p1[f].dot(v[f]);
        right += w[f].dot(pv[f]);
    }
    CHECK_THAT(left, WithinAbs(right, 1e-10));
}

TEST_CASE("angle-averaged traction") {
    const auto circle = make_circle(1.0 / (2.0 * M_PI), 0.05);
    const auto frame = periodicized_frame(circle);
    const auto grid = slb::geometry::surface_grid(frame, 16, 16);

    // constant w integrates the Jacobian: f = 2 pi eps c on any closed tube
    SurfaceField w(16, 16);
    const Vector3d cvec(0.2, -0.4, 1.0);
    for (std::size_t f = 0; f < w.size(); ++f) w[f] = cvec;
    const auto fint = angle_average_traction(w, grid);
    for (std::size_t i = 0; i < fint.size(); ++i)
        CHECK((fint[i] - 2.0 * M_PI * 0.05 * cvec).norm() <= 1e-10);

    // w = cos(theta) e_x weighted by J = eps(1 - eps kappa_hat): the plain
    // cos integral vanishes and the kappa_hat cross term leaves -eps^2 pi kappa1
    SurfaceField wc(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j)
            wc.at(i, j)[0] = std::cos(grid.theta[j]);
    const auto fc = angle_average_traction(wc, grid);
    for (std::size_t i = 0; i < 16; ++i) {
        const auto tr = frame.eval(grid.s[i]);
        const double expected = -0.05 * 0.05 * M_PI * tr.kappa1;
        CHECK_THAT(fc[i][0], WithinAbs(expected, 1e-10));
    }

    SurfaceField bad(8, 16);
    CHECK_THROWS_AS(angle_average_traction(bad, grid), slb::GridMismatchError);
}

TEST_CASE("surface field resampling is exact on band-limited data") {
    const std::size_t ns = 16, nt = 8;
    SurfaceField w(ns, nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double s = static_cast<double>(i) / ns;
            const double th = 2.0 * M_PI * static_cast<double>(j) / nt;
            w.at(i, j) = Vector3d(std::sin(2.0 * M_PI * s) * std::cos(th),
                                  std::cos(4.0 * M_PI * s), std::sin(th));
        }
    const auto r = resample_surface_field(w, 0.5, 0.5);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double s = (static_cast<double>(i) + 0.5) / ns;
            const double th = 2.0 * M_PI * (static_cast<double>(j) + 0.5) / nt;
            const Vector3d want(std::sin(2.0 * M_PI * s) * std::cos(th),
                                std::cos(4.0 * M_PI * s), std::sin(th));
            CHECK((r.at(i, j) - want).norm() <= 1e-12);
        }
}
