#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "singtrace/convergence.hpp"
#include "singtrace/quadrature.hpp"
#include "singtrace/rng.hpp"

using namespace singtrace;

namespace {
constexpr double kPi = 3.141592653589793;

// closed-form antiderivative of sin(log(1+t))
double sinlog_integral(double mu) {
    const double L = std::log1p(mu);
    return ((1.0 + mu) / 2.0) * (std::sin(L) - std::cos(L)) + 0.5;
}
}  // namespace

TEST_CASE("cesaro transform of a constant is the constant") {
    BoundedFunction one([](double) { return 1.0; }, 1.0);
    for (double mu : {0.5, 3.0, 1e3, 1e6}) CHECK(cesaro_transform(one, mu) ==
                                                 doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cesaro transform of sin(log(1+t)) matches the closed form") {
    BoundedFunction g([](double t) { return std::sin(std::log1p(t)); }, 1.0);
    for (double mu : {10.0, 123.0, 5678.0, 1e5}) {
        const double exact = sinlog_integral(mu) / mu;
        CHECK(cesaro_transform(g, mu) == doctest::Approx(exact).epsilon(1e-8));
    }
    // oscillation structure: (sin log mu - cos log mu)/2 with liminf/limsup
    // -sqrt2/2 and +sqrt2/2
    const double at_peak = std::exp(3.0 * kPi / 4.0 + 2.0 * kPi) - 1.0;
    CHECK(cesaro_transform(g, at_peak) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(2e-3));
}

TEST_CASE("cesaro transform of vanishing functions vanishes") {
    BoundedFunction g([](double t) { return 1.0 / (1.0 + t); }, 1.0);
    CHECK(std::abs(cesaro_transform(g, 1e6)) < 2e-5);
}

TEST_CASE("cesaro band: convergent function collapses to its limit") {
    BoundedFunction g([](double t) { return 0.6 + 1.0 / (1.0 + t); }, 1.6);
    CesaroBand b = cesaro_band(g, 1e6);
    CHECK(b.collapsed);
    CHECK(b.stabilized);
    CHECK(std::abs(b.fit_limit - 0.6) < 1e-3);
    CHECK(std::abs(b.lo - 0.6) < 1e-2);
    CHECK(std::abs(b.hi - 0.6) < 1e-2);
}

TEST_CASE("cesaro band of sin(log(1+t)) is [-sqrt2/2, +sqrt2/2]") {
    BoundedFunction g([](double t) { return std::sin(std::log1p(t)); }, 1.0);
    CesaroBand b = cesaro_band(g, 1e6);
    CHECK(!b.collapsed);
    CHECK(b.lo == doctest::Approx(-0.7071).epsilon(0.05));
    CHECK(b.hi == doctest::Approx(0.7071).epsilon(0.05));
    CHECK(b.width() == doctest::Approx(1.414).epsilon(0.05));
}

TEST_CASE("cesaro band of a compactly supported bump is [0, 0]") {
    BoundedFunction bump([](double t) { return t < 100.0 ? std::exp(-t / 30.0) : 0.0; }, 1.0);
    CesaroBand b = cesaro_band(bump, 1e7);
    CHECK(std::abs(b.lo) < 1e-3);
    CHECK(std::abs(b.hi) < 1e-3);
    CHECK(b.collapsed);
}

TEST_CASE("almost convergence: constants are F with their own limit") {
    BoundedSequence c([](std::int64_t) { return 0.7; }, 0.7);
    ConvergenceVerdict v = almost_convergence_test(c, 100000, 1e-2);
    CHECK(v.cls == ConvClass::F_almost_convergent);
    CHECK(*v.limit == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("almost convergence: (-1)^n is F with limit 0") {
    BoundedSequence alt([](std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }, 1.0);
    ConvergenceVerdict v = almost_convergence_test(alt, 100000, 1e-2);
    CHECK(v.cls == ConvClass::F_almost_convergent);
    CHECK(std::abs(*v.limit) < 1e-3);
    // oracle: window means are 0 for even length, +-1/n for odd
}

TEST_CASE("almost convergence: sin(log n) is not certified") {
    BoundedSequence slow([](std::int64_t n) { return std::sin(std::log(double(n))); }, 1.0);
    ConvergenceVerdict v = almost_convergence_test(slow, 1000000, 1e-2);
    CHECK(v.cls == ConvClass::undetermined);
    CHECK(v.band.width() > 1e-2);  // nonzero Cesaro band
}

TEST_CASE("tauberian derivative bound: non-decreasing gives a tiny H") {
    BoundedFunction up([](double t) { return 1.0 - 1.0 / (1.0 + t); }, 1.0,
                       Smoothness::differentiable,
                       [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); });
    const auto H = tauberian_derivative_bound(up, 1e5);
    REQUIRE(H.has_value());
    CHECK(*H < 1e-6);
}

TEST_CASE("tauberian derivative bound: sin(log(1+t)) certifies H ~ 1") {
    // t g' = t cos(log(1+t))/(1+t), infimum -1 approached where cos = -1
    BoundedFunction g([](double t) { return std::sin(std::log1p(t)); }, 1.0,
                      Smoothness::differentiable,
                      [](double t) { return std::cos(std::log1p(t)) / (1.0 + t); });
    const auto H = tauberian_derivative_bound(g, 1e6);
    REQUIRE(H.has_value());
    CHECK(*H == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("tauberian derivative bound: sin(t) is unbounded below") {
    BoundedFunction g([](double t) { return std::sin(t); }, 1.0, Smoothness::differentiable,
                      [](double t) { return std::cos(t); });
    CHECK(!tauberian_derivative_bound(g, 1e5).has_value());
}

TEST_CASE("M_k transform of a constant is the constant") {
    BoundedFunction one([](double) { return 1.0; }, 1.0);
    for (const auto& k : {kappa_identity(), kappa_expm1(), kappa_pow(2.0)})
        for (double lam : {0.5, 3.0, 10.0})
            CHECK(m_k_transform(one, k, lam) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("M_k rejects origin-shifted kappa") {
    BoundedFunction one([](double) { return 1.0; }, 1.0);
    CHECK_THROWS_AS(m_k_transform(one, kappa_exp(), 2.0), InvalidInput);
}

TEST_CASE("M_k change-of-variables identity at 1e-9") {
    // M_k(g)(lambda) = C(g o k^{-1})(k(lambda)); a narrower-band example with
    // slow oscillation under k = log-type reparameterization
    BoundedFunction g([](double t) { return 1.0 + 0.5 * std::sin(std::log1p(t)); }, 1.5);
    const KappaFunction k = kappa_expm1();
    for (double lam : {1.0, 4.0, 9.0}) {
        const double lhs = m_k_transform(g, k, lam);
        const double kl = k(lam);
        const double rhs =
            quad::integrate([&](double u) { return g(k.inverse(u)); }, 0.0, kl, 1e-14 * kl,
                            1e-12, 20000)
                .value /
            kl;
        CHECK(std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-6) < 1e-9);
    }
}

TEST_CASE("classify: plain convergence wins") {
    BoundedFunction g([](double t) { return 0.30 + std::exp(-0.01 * t); }, 1.31);
    ConvergenceVerdict v = classify(g, 1e5, 1e-2);
    CHECK(v.cls == ConvClass::S_convergent);
    CHECK(*v.limit == doctest::Approx(0.30).epsilon(1e-2));
}

TEST_CASE("classify: p-extension of (-1)^n is F but not S") {
    BoundedSequence alt([](std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }, 1.0);
    BoundedFunction g = piecewise_linear_extension(alt);
    ConvergenceVerdict v = classify(g, 1e5, 1e-2);
    CHECK(v.cls == ConvClass::F_almost_convergent);
    CHECK(std::abs(v.limit.value_or(99.0)) < 1e-2);
}

TEST_CASE("classify: sin(log(1+t)) is not even Cesaro convergent") {
    BoundedFunction g([](double t) { return std::sin(std::log1p(t)); }, 1.0);
    ConvergenceVerdict v = classify(g, 1e6, 1e-2);
    CHECK(v.cls == ConvClass::undetermined);
    CHECK(v.band.width() == doctest::Approx(1.414).epsilon(0.06));
}

TEST_CASE("verdict chain: S implies the F and C evidence in the verdict") {
    // with aligned windows the weaker tests pass whenever the stronger does
    BoundedFunction g([](double t) { return -0.2 + 2.0 / (2.0 + t); }, 1.2);
    ConvergenceVerdict v = classify(g, 1e5, 1e-2);
    CHECK(v.cls == ConvClass::S_convergent);
    CHECK(v.band.collapsed);
    CHECK(std::abs(v.band.fit_limit - -0.2) < 1e-2);
}

TEST_CASE("restarted means: sequence/function consistency") {
    // discrete partial means of a convergent sequence equal the function-side
    // restarted means of its extension in the limit
    BoundedSequence s([](std::int64_t n) { return 1.0 / std::sqrt(double(n)); }, 1.0);
    ConvergenceVerdict v = classify(s, 100000, 1e-2);
    CHECK(v.cls == ConvClass::S_convergent);
    CHECK(std::abs(*v.limit) < 1e-2);
}
