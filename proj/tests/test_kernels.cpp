#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "singtrace/extrapolate.hpp"
#include "singtrace/kernels.hpp"
#include "singtrace/quadrature.hpp"
#include "singtrace/rng.hpp"

using namespace singtrace;

TEST_CASE("compensated sum beats naive accumulation") {
    // sum of 1/i^2 to 1e7 against the zeta(2) tail formula
    const std::int64_t n = 10'000'000;
    const double s = kernels::blocked_sum(1, n + 1, [](std::int64_t i) {
        const double x = static_cast<double>(i);
        return 1.0 / (x * x);
    });
    const double exact = 1.6449340668482264 - 1.0 / static_cast<double>(n) +
                         0.5 / (static_cast<double>(n) * static_cast<double>(n));
    CHECK(std::abs(s - exact) < 1e-13);
}

TEST_CASE("parallel and serial reductions are bitwise identical") {
    const std::int64_t n = 1'000'000;
    const auto f = [](std::int64_t i) {
        const double x = static_cast<double>(i);
        return std::sin(x * 0.001) / (1.0 + x * 1e-4);
    };
    CHECK(kernels::blocked_sum(1, n + 1, f) == kernels::blocked_sum_serial(1, n + 1, f));
    const auto a = kernels::blocked_minmax(1, n + 1, f);
    const auto b = kernels::blocked_minmax_serial(1, n + 1, f);
    CHECK(a.mn == b.mn);
    CHECK(a.mx == b.mx);
    CHECK(a.argmin == b.argmin);
    CHECK(a.argmax == b.argmax);
}

TEST_CASE("checkpoint extension resumes exactly") {
    const auto f = [](std::int64_t i) { return 1.0 / static_cast<double>(i); };
    kernels::KahanAcc direct;
    for (std::int64_t i = 1; i <= 100000; ++i) direct.add(f(i));
    kernels::KahanAcc part = kernels::blocked_extend({}, 1, 50001, f);
    part = kernels::blocked_extend(part, 50001, 100001, f);
    kernels::KahanAcc whole = kernels::blocked_extend({}, 1, 100001, f);
    CHECK(part.value() == whole.value());
}

TEST_CASE("quadrature hits analytic integrals") {
    auto r = quad::integrate([](double t) { return std::sin(t); }, 0.0, 3.141592653589793);
    CHECK(std::abs(r.value - 2.0) < 1e-12);
    r = quad::integrate([](double t) { return std::exp(-t * t); }, -8.0, 8.0);
    CHECK(std::abs(r.value - 1.7724538509055160) < 1e-12);
    // integrable log-scale oscillation
    r = quad::integrate([](double t) { return std::sin(std::log1p(t)); }, 0.0, 1000.0, 1e-12,
                        1e-11);
    const double L = std::log(1001.0);
    const double exact = (1001.0 / 2.0) * (std::sin(L) - std::cos(L)) + 0.5;
    CHECK(std::abs(r.value - exact) < 1e-8 * std::abs(exact));
}

TEST_CASE("richardson removes geometric error terms") {
    // f(h) = 3 + 2h + h^2 at h = .8, .4, .2, .1
    std::vector<double> f;
    for (double h : {0.8, 0.4, 0.2, 0.1}) f.push_back(3.0 + 2.0 * h + h * h);
    const auto r = richardson_geometric(f, 2.0);
    CHECK(r.usable);
    CHECK(std::abs(r.value - 3.0) < 1e-12);
}

TEST_CASE("drift fit recovers the limit of A + B/u") {
    std::vector<double> u, y;
    for (double t = 10.0; t < 1000.0; t *= 1.3) {
        u.push_back(t);
        y.push_back(0.7 + 5.0 / t);
    }
    const auto fit = fit_drift(u, y);
    CHECK(fit.ok);
    CHECK(std::abs(fit.limit - 0.7) < 1e-10);
    CHECK(fit.residual_spread < 1e-10);
}

TEST_CASE("rng is deterministic and uniform-ish") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(7);
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) mean += c.uniform();
    mean /= 100000.0;
    CHECK(std::abs(mean - 0.5) < 0.01);
}
