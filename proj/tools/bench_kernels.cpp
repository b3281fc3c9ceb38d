// Benchmark: OpenMP kernels against the serial reference, verifying that the
// fixed block tree makes them bit-identical.

#include <chrono>
#include <cstdio>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "singtrace/families.hpp"
#include "singtrace/kernels.hpp"
#include "singtrace/marcinkiewicz.hpp"

using clock_type = std::chrono::steady_clock;

static double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int main() {
    using namespace singtrace;
    constexpr std::int64_t n = 100'000'000;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif

    const auto inv_square = [](std::int64_t i) {
        const double x = static_cast<double>(i);
        return 1.0 / (x * x);
    };

    auto t0 = clock_type::now();
    const double serial = kernels::blocked_sum_serial(1, n + 1, inv_square);
    const double t_serial = seconds_since(t0);

    t0 = clock_type::now();
    const double parallel = kernels::blocked_sum(1, n + 1, inv_square);
    const double t_parallel = seconds_since(t0);

    std::printf("sum 1/i^2, i<=%lld\n", static_cast<long long>(n));
    std::printf("  serial   %.6f s  -> %.17g\n", t_serial, serial);
    std::printf("  parallel %.6f s  -> %.17g\n", t_parallel, parallel);
    std::printf("  speedup  %.2fx, bitwise %s\n", t_serial / t_parallel,
                serial == parallel ? "identical" : "DIFFERENT");

    t0 = clock_type::now();
    const auto mm_s = kernels::blocked_minmax_serial(1, n / 10 + 1, [](std::int64_t i) {
        return std::sin(static_cast<double>(i) * 1e-3);
    });
    const double t_mm_s = seconds_since(t0);
    t0 = clock_type::now();
    const auto mm_p = kernels::blocked_minmax(1, n / 10 + 1, [](std::int64_t i) {
        return std::sin(static_cast<double>(i) * 1e-3);
    });
    const double t_mm_p = seconds_since(t0);
    std::printf("minmax sin(i/1000), i<=%lld\n", static_cast<long long>(n / 10));
    std::printf("  serial   %.6f s\n  parallel %.6f s  speedup %.2fx, bitwise %s\n", t_mm_s,
                t_mm_p, t_mm_s / t_mm_p,
                (mm_s.mn == mm_p.mn && mm_s.mx == mm_p.mx) ? "identical" : "DIFFERENT");

    // end-to-end: weighted-mean sweep over the harmonic family
    SingularValueData x = families::harmonic();
    const PsiFunction psi = psi_log1p();
    t0 = clock_type::now();
    double sink = 0.0;
    for (double t : log_grid(1.0, 1e7, 64)) sink += weighted_mean(x, psi, t);
    std::printf("phi sweep to 1e7 (64/decade): %.3f s (checksum %.12g)\n", seconds_since(t0),
                sink);
    return (serial == parallel && mm_s.mn == mm_p.mn && mm_s.mx == mm_p.mx) ? 0 : 1;
}
