// Wall-clock comparison of the reference integrator against the blocked
// OpenMP kernel on representative scattering runs. Build and run:
//   cmake --build build --target bench_dynamics && ./build/bench_dynamics

#include <chrono>
#include <cstdio>
#include <cmath>

#include <omp.h>

#include "mqi/dynamics.hpp"
#include "mqi/scattering.hpp"

namespace {

double time_run(mqi::Exec exec, const mqi::SystemParams& p, const mqi::WavePacket& wp,
                const mqi::KGrid& grid, double dt, double t_end, double& p_reflect) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = mqi::simulate(p, wp, grid, dt, t_end, exec);
    const auto t1 = std::chrono::steady_clock::now();
    p_reflect = res.p_reflect;
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());
    std::printf("%-28s %10s %10s %8s %12s\n", "case", "ref [s]", "blocked[s]",
                "speedup", "|dP_reflect|");

    struct Case {
        const char* name;
        double beta;
        double delta;
        int n_modes;
    };
    const Case cases[] = {
        {"beta=10 resonant n=1024", 10.0, 0.0, 1024},
        {"beta=50 resonant n=2048", 50.0, 0.0, 2048},
        {"beta=50 detuned  n=2048", 50.0, 50.0, 2048},
    };

    for (const auto& c : cases) {
        const auto p = mqi::SystemParams::symmetric(c.beta, 1.0);
        const auto wp = mqi::WavePacket::standard(c.delta, 0.1 * p.gamma_f);
        auto grid = mqi::default_grid(p, wp);
        grid = mqi::KGrid(c.n_modes, grid.k_half_width);
        const double dt = mqi::default_dt(grid);
        const double t_end = mqi::default_t_end(p, wp);

        double pr_ref = 0.0, pr_par = 0.0;
        const double ts = time_run(mqi::Exec::reference, p, wp, grid, dt, t_end, pr_ref);
        const double tp = time_run(mqi::Exec::parallel, p, wp, grid, dt, t_end, pr_par);
        std::printf("%-28s %10.3f %10.3f %8.2fx %12.3e\n", c.name, ts, tp, ts / tp,
                    std::fabs(pr_ref - pr_par));
    }
    return 0;
}
