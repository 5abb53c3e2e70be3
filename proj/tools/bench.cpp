// bench — serial vs OpenMP timings for the circle-sampling kernel and the
// grid ratio scan.

#include <chrono>
#include <cstdio>
#include <vector>

#include "maxprod/analysis.hpp"
#include "maxprod/kernels.hpp"

using namespace maxprod;
using clk = std::chrono::steady_clock;

namespace {

double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

} // namespace

int main() {
    Weight w = Weight::pow(1.0);
    auto cert = certify_doubling(w);
    auto c = build_sequence(w, cert, dd(5.0), 20);
    Product f0 = Product::from_construction(c, 0);

    std::printf("threads: %d\n\n", max_threads());
    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "parallel[s]", "speedup");

    for (double eps : {1e-4, 1e-8}) {
        Radius r = Radius::from_eps(eps);
        PreparedCircle pc = prepare_circle(f0, r, 1e-9);
        std::int64_t den = coprime_denominator(f0, r, 1 << 17, 1e-9);
        pc.prepare_angles(den);
        std::vector<double> buf(std::size_t(den), 0.0);

        sample_circle_serial(pc, den, buf); // warm up caches and the OMP pool
        sample_circle_parallel(pc, den, buf);
        auto t0 = clk::now();
        for (int rep = 0; rep < 5; ++rep) sample_circle_serial(pc, den, buf);
        auto t1 = clk::now();
        for (int rep = 0; rep < 5; ++rep) sample_circle_parallel(pc, den, buf);
        auto t2 = clk::now();
        double ts = seconds(t0, t1) / 5.0, tp = seconds(t1, t2) / 5.0;
        char name[64];
        std::snprintf(name, sizeof name, "circle samples, den=%lld eps=%g", (long long)den, eps);
        std::printf("%-34s %10.4f %10.4f %8.2f\n", name, ts, tp, ts / tp);
    }

    // end-to-end ratio scan (decade grid, both products)
    {
        Product f1 = Product::from_construction(c, 1);
        GridSpec gs;
        gs.decades = 6;
        gs.angles = 2048;
        gs.keep_samples = false;
        gs.with_means = false;
        gs.with_tn = false;

        auto t0 = clk::now();
        auto rep = verify_theorem(c, f0, f1, w, gs);
        auto t1 = clk::now();
        std::printf("\nR1 grid scan (decades=6, angles=2048): %.3f s, inf=%.4g sup=%.4g\n",
                    seconds(t0, t1), rep.r1.inf, rep.r1.sup);
    }
    return 0;
}
