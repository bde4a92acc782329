// Shrinks a circle under the main-part integrator and compares the measured
// radius against the closed-form reduction law.

#include <cstdio>

#include "slb/evolution.hpp"

int main() {
    using namespace slb;
    const double eps = 0.05;
    evolution::SchemeConfig cfg;
    cfg.dt = 5e-6;
    cfg.steps = 40;
    const auto traj =
        evolution::evolve(geometry::make_circle(1.0 / (2.0 * M_PI), eps), cfg);
    const double r0 = traj.states.front().diag.effective_radius;
    std::printf("%10s %12s %12s\n", "t", "R(t)", "oracle");
    for (std::size_t i = 0; i < traj.states.size(); i += 8) {
        const auto& st = traj.states[i];
        std::printf("%10.2e %12.8f %12.8f\n", st.t, st.diag.effective_radius,
                    evolution::circle_reduction_oracle(r0, eps, st.t));
    }
    return 0;
}
