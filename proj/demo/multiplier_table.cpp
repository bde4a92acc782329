// Prints the straight-cylinder DtN eigenvalues next to their
// boundary-integral composition for a small range of modes.

#include <cstdio>

#include "slb/multipliers.hpp"

int main() {
    using namespace slb::multipliers;
    const double eps = 0.01;
    std::printf("%4s %10s %14s %14s %14s %14s\n", "k", "z", "m_t_inv", "bi_t", "m_n_inv",
                "bi_n");
    for (long k : {1L, 2L, 4L, 8L, 16L, 32L, 64L}) {
        const SymbolQuery q(eps, k);
        std::printf("%4ld %10.4f %14.8f %14.8f %14.8f %14.8f\n", k, q.z(),
                    dtn_eigen_tangential(q), dtn_via_boundary_integral(Direction::Tangential, q),
                    dtn_eigen_normal(q), dtn_via_boundary_integral(Direction::Normal, q));
    }
    return 0;
}
