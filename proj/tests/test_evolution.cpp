#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "slb/evolution.hpp"

using namespace slb;
using namespace slb::evolution;
using geometry::FourierCurve;
using geometry::make_circle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using Eigen::Vector3d;

namespace {

FourierCurve unit_circle(double eps, int modes = 8) {
    return make_circle(1.0 / (2.0 * M_PI), eps, modes);
}

FourierCurve perturbed_circle(double eps, unsigned seed = 7) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    FourierCurve c = make_circle(1.0 / (2.0 * M_PI), eps, 24);
    for (int k = 2; k <= 5; ++k) {
        Eigen::Vector3cd ck;
        for (int d = 0; d < 3; ++d)
            ck[d] = std::complex<double>(g(rng), g(rng)) * (2e-4 / (k * k));
        c.coeff(k) = ck;
        c.coeff(-k) = ck.conjugate();
    }
    return geometry::rescale_to_unit_length(c);
}

} // namespace

TEST_CASE("oracle basics") {
    CHECK(circle_reduction_oracle(0.2, 0.05, 0.0) == 0.2);
    const double r1 = circle_reduction_oracle(0.2, 0.05, 1e-4);
    const double r2 = circle_reduction_oracle(0.2, 0.05, 2e-4);
    CHECK_THAT(0.2 - r2, WithinRel(2.0 * (0.2 - r1), 1e-12));  // linear in t
    CHECK_THROWS_AS(circle_reduction_oracle(-1.0, 0.05, 0.0), DomainError);
}

TEST_CASE("circle stays circular and follows the radius law") {
    const double eps = 0.05;
    SchemeConfig cfg;
    cfg.dt = 5e-6;
    cfg.steps = 50;
    const auto traj = evolve(unit_circle(eps), cfg);
    REQUIRE(traj.abort == AbortReason::None);
    REQUIRE(traj.states.size() == 51);

    // all modes |k| >= 2 stay tiny
    const auto& last = traj.states.back().curve;
    for (int k = 2; k <= last.mode_count(); ++k)
        CHECK(last.coeff(k).norm() <= 1e-10);

    // radius slope matches the closed-form law within 1%
    const double r0 = traj.states.front().diag.effective_radius;
    const double rT = traj.states.back().diag.effective_radius;
    const double t = traj.states.back().t;
    const double slope = (rT - r0) / t;
    const double oracle_slope = (circle_reduction_oracle(r0, eps, t) - r0) / t;
    CHECK_THAT(slope, WithinRel(oracle_slope, 0.01));

    // separation over lambda is invariant on the circle family
    const double ratio0 =
        traj.states.front().diag.separation / traj.states.front().diag.lambda;
    for (const auto& st : traj.states)
        CHECK_THAT(st.diag.separation / st.diag.lambda, WithinAbs(ratio0, 1e-6));

    // lambda decreases monotonically
    for (std::size_t i = 1; i < traj.states.size(); ++i)
        CHECK(traj.states[i].lambda < traj.states[i - 1].lambda);
}

TEST_CASE("cartesian variant matches the radius law on the circle") {
    const double eps = 0.05;
    SchemeConfig cfg;
    cfg.variant = Variant::Cartesian;
    cfg.dt = 5e-6;
    cfg.steps = 40;
    const auto traj = evolve(unit_circle(eps), cfg);
    REQUIRE(traj.abort == AbortReason::None);
    const double r0 = traj.states.front().diag.effective_radius;
    const double rT = traj.states.back().diag.effective_radius;
    const double t = traj.states.back().t;
    const double slope = (rT - r0) / t;
    const double oracle_slope = (circle_reduction_oracle(r0, eps, t) - r0) / t;
    CHECK_THAT(slope, WithinRel(oracle_slope, 0.01));
}

TEST_CASE("semigroup property of the mode factors") {
    // two half-steps equal one step exactly on resolved modes
    for (double eps : {0.05, 0.01})
        for (long k : {1L, 3L, 17L})
            for (double tau : {1e-7, 1e-5, 1e-3}) {
                const multipliers::SymbolQuery q(eps, k);
                for (auto dir : {Direction::Tangential, Direction::Normal}) {
                    const double half = multipliers::semigroup_factor(dir, q, tau / 2.0);
                    const double full = multipliers::semigroup_factor(dir, q, tau);
                    CHECK_THAT(half * half, WithinAbs(full, 1e-12));
                }
            }
}

TEST_CASE("main part dissipates the weighted spectral energy") {
    SchemeConfig cfg;
    cfg.dt = 1e-6;
    EvolutionState state;
    state.curve = perturbed_circle(0.05);
    for (int step = 0; step < 50; ++step) {
        const auto rep = main_part_step(state, cfg);
        REQUIRE(rep.abort == AbortReason::None);
        CHECK(rep.energy_after <= rep.energy_before * (1.0 + 1e-13));
    }
}

TEST_CASE("bending energy of the rescaled curve decreases") {
    SchemeConfig cfg;
    cfg.dt = 2e-6;
    cfg.steps = 40;
    const auto traj = evolve(perturbed_circle(0.05), cfg);
    REQUIRE(traj.abort == AbortReason::None);
    double prev = 1e300;
    for (const auto& st : traj.states) {
        const auto unit = geometry::rescale_to_unit_length(st.curve);
        const double e = bending_energy(unit);
        CHECK(e <= prev * (1.0 + 1e-10));
        prev = e;
    }
}

TEST_CASE("frame-spectral variant commutes with rigid rotations") {
    Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(0.7, Vector3d(1.0, 2.0, 0.5).normalized())).toRotationMatrix();
    SchemeConfig cfg;
    cfg.dt = 2e-6;
    cfg.steps = 10;
    const auto base = perturbed_circle(0.05);
    const auto t1 = evolve(base, cfg);
    const auto t2 = evolve(base.rotated(rot), cfg);
    REQUIRE(t1.abort == AbortReason::None);
    REQUIRE(t2.abort == AbortReason::None);
    const auto& c1 = t1.states.back().curve;
    const auto& c2 = t2.states.back().curve;
    for (double s : {0.0, 0.21, 0.63, 0.88})
        CHECK((rot * c1.eval(s) - c2.eval(s)).norm() <= 1e-8);
}

TEST_CASE("dt refinement is first order or better") {
    const auto base = perturbed_circle(0.05);
    auto run = [&](double dt, long steps) {
        SchemeConfig cfg;
        cfg.dt = dt;
        cfg.steps = steps;
        return evolve(base, cfg).states.back().curve;
    };
    const auto c1 = run(4e-6, 10);
    const auto c2 = run(2e-6, 20);
    const auto c3 = run(1e-6, 40);
    double d12 = 0.0, d23 = 0.0;
    for (double s : {0.1, 0.4, 0.75}) {
        d12 = std::max(d12, (c1.eval(s) - c2.eval(s)).norm());
        d23 = std::max(d23, (c2.eval(s) - c3.eval(s)).norm());
    }
    CHECK(d23 <= 0.75 * d12);  // at least first order
}

TEST_CASE("resolution refinement changes resolved trajectories at the floor") {
    const double eps = 0.05;
    SchemeConfig cfg;
    cfg.dt = 5e-6;
    cfg.steps = 10;
    const auto t1 = evolve(unit_circle(eps, 8), cfg);
    const auto t2 = evolve(unit_circle(eps, 16), cfg);
    for (double s : {0.0, 0.37})
        CHECK((t1.states.back().curve.eval(s) - t2.states.back().curve.eval(s)).norm() <=
              1e-10);
}

TEST_CASE("aborts") {
    // stretched curve: lambda out of the admissible ball
    auto big = make_circle(1.0, 0.05, 8);  // length 2 pi
    {
        // bypass the arclength pre-check by constructing the state directly
        EvolutionState st;
        st.curve = big;
        SchemeConfig cfg;
        const auto rep = main_part_step(st, cfg);
        CHECK(rep.abort == AbortReason::LambdaOutOfRange);
    }
    // the evolve entry point rejects non-unit-speed initial data
    SchemeConfig cfg;
    CHECK_THROWS_AS(evolve(big, cfg), DomainError);

    // separation abort triggers on a tight floor
    SchemeConfig tight;
    tight.dt = 5e-6;
    tight.steps = 30;
    tight.separation_floor = 0.63;  // just below the unit circle's 2/pi
    const auto traj = evolve(unit_circle(0.05), tight);
    CHECK(traj.abort == AbortReason::SelfIntersection);
    CHECK(traj.aborted_at_step >= 0);
}

TEST_CASE("correction force shrinks with eps and stays finite") {
    SchemeConfig cfg;
    cfg.bvp_ns = 32;
    cfg.bvp_ntheta = 8;
    double prev = 1e300;
    for (double eps : {0.04, 0.02}) {
        EvolutionState st;
        st.curve = perturbed_circle(eps);
        const auto delta = correction_force(st, cfg);
        CHECK(std::isfinite(delta.max_norm()));
        CHECK(delta.max_norm() < prev);
        prev = delta.max_norm();
    }
}

TEST_CASE("deterministic reruns") {
    SchemeConfig cfg;
    cfg.dt = 2e-6;
    cfg.steps = 5;
    const auto a = evolve(perturbed_circle(0.05), cfg);
    const auto b = evolve(perturbed_circle(0.05), cfg);
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        CHECK(a.states[i].lambda == b.states[i].lambda);
        CHECK(a.states[i].diag.bending_energy == b.states[i].diag.bending_energy);
    }
}
