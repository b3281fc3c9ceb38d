#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "singtrace/families.hpp"
#include "singtrace/marcinkiewicz.hpp"

using namespace singtrace;

namespace {
// independent prefix-sum oracle for the harmonic family
double harmonic_phi_oracle(double t, double psi_of_t) {
    double sum = 0.0;
    const double fl = std::floor(t);
    for (double n = 1.0; n <= fl; n += 1.0) sum += 1.0 / n;
    sum += (t - fl) / (fl + 1.0);
    return sum / psi_of_t;
}
}  // namespace

TEST_CASE("psi catalogue passes its own audits and round-trips") {
    for (const auto& psi : {psi_identity(), psi_log1p(), psi_pow(0.5), psi_logpow(0.5),
                            psi_logpow(2.0), psi_loglog()}) {
        for (double t : {0.1, 2.0, 31.0, 1e4, 1e8}) {
            CHECK(psi.inverse(psi(t)) == doctest::Approx(t).epsilon(1e-9));
            const double h = 1e-6 * std::max(1.0, t);
            const double fd = (psi(t + h) - psi(t - h)) / (2.0 * h);
            CHECK(fd == doctest::Approx(psi.derivative(t)).epsilon(1e-4));
        }
    }
}

TEST_CASE("kappa catalogue audits, shifted entries flagged") {
    CHECK(!kappa_identity().origin_shifted());
    CHECK(!kappa_expm1().origin_shifted());
    CHECK(kappa_exp().origin_shifted());
    CHECK(kappa_pow2t().origin_shifted());
    const KappaFunction inv = kappa_psi_inverse(psi_log1p());
    CHECK(inv(0.0) == 0.0);
    CHECK(inv(3.0) == doctest::Approx(std::expm1(3.0)).epsilon(1e-12));
}

TEST_CASE("weighted mean of the harmonic family against the prefix oracle") {
    SingularValueData h = families::harmonic();
    const PsiFunction psi = psi_log1p();
    // t = 3: H_3 / log 4
    const double expect3 = (11.0 / 6.0) / std::log(4.0);
    CHECK(weighted_mean(h, psi, 3.0) == doctest::Approx(expect3).epsilon(1e-14));
    CHECK(expect3 == doctest::Approx(1.32247).epsilon(1e-4));
    for (double t : {1.0, 7.5, 100.0, 12345.6}) {
        CHECK(weighted_mean(h, psi, t) ==
              doctest::Approx(harmonic_phi_oracle(t, psi(t))).epsilon(1e-12));
    }
}

TEST_CASE("weighted mean of zero data is zero; psi(0) rejected") {
    SingularValueData z = SingularValueData::from_steps({{0.0, 1.0}}, "zero");
    CHECK(weighted_mean(z, psi_log1p(), 5.0) == 0.0);
    CHECK_THROWS_AS(weighted_mean(z, psi_log1p(), 0.0), InvalidInput);
}

TEST_CASE("finite-rank weighted mean: exact integral min(t, rank)") {
    // s_n = 1 for n <= 5: phi(100) = 5/log(101)
    SingularValueData f = families::finite_rank(5, 1.0);
    CHECK(weighted_mean(f, psi_log1p(), 100.0) ==
          doctest::Approx(5.0 / std::log(101.0)).epsilon(1e-14));
    CHECK(5.0 / std::log(101.0) == doctest::Approx(1.0836).epsilon(1e-4));
}

TEST_CASE("marcinkiewicz norm of the harmonic family: 1/log 2 at t = 1") {
    SingularValueData h = families::harmonic();
    const NormReport n = marcinkiewicz_norm(h, psi_log1p(), 1e7);
    CHECK(n.value == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-6));
    CHECK(n.attained_at == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(n.tail == TailFlag::attained);
}

TEST_CASE("norm of zero data is zero") {
    SingularValueData z = SingularValueData::from_steps({{0.0, 1.0}}, "zero");
    CHECK(marcinkiewicz_norm(z, psi_log1p(), 1e4).value == 0.0);
}

TEST_CASE("constant sequence is not in M(log(1+t))") {
    SingularValueData c = families::constant(1.0);
    CHECK_THROWS_AS(marcinkiewicz_norm(c, psi_log1p(), 1e5), NotInSpace);
    try {
        marcinkiewicz_norm(c, psi_log1p(), 1e5);
    } catch (const NotInSpace& e) {
        CHECK(e.witness_t > 1e4);  // witness reported
    }
}

TEST_CASE("riesz seminorm: harmonic tends to 1") {
    // oracle: H_t/log(1+t) = 1 + gamma/log t + o(1/log t)
    SingularValueData h = families::harmonic();
    const RieszReport r = riesz_seminorm(h, psi_log1p(), 1e7);
    CHECK(std::abs(r.estimate - 1.0) < 0.04);
    CHECK(r.stabilized);
    CHECK(r.band_lo <= r.estimate);
    CHECK(r.estimate <= r.band_hi);
    // band upper edge is the global sup = the norm
    CHECK(r.band_hi == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("riesz seminorm: finite rank decays toward 0") {
    SingularValueData f = families::finite_rank(2, 0.1);
    const RieszReport r = riesz_seminorm(f, psi_log1p(), 1e7);
    CHECK(r.estimate < 0.05);
    CHECK(r.stabilized);
}

TEST_CASE("riesz seminorm: log oscillator limsup 3/2") {
    // oracle: limsup (1 + 0.5 sin(log log t)) log t / log(1+t) = 3/2,
    // approached at log log t = pi/2 (mod 2pi), i.e. near t = 123
    SingularValueData osc = families::log_oscillator();
    const RieszReport r = riesz_seminorm(osc, psi_log1p(), 1e7);
    CHECK(std::abs(r.estimate - 1.5) < 0.05);
    CHECK(!r.stabilized);  // oscillation period exceeds every window
    CHECK(r.diagnostics.find("widened") != std::string::npos);
}

TEST_CASE("kappa-weighted profile: identity kappa equals plain means") {
    SingularValueData h = families::harmonic();
    const PsiFunction psi = psi_log1p();
    WeightedMeanProfile prof =
        kappa_weighted_mean_profile(h, psi, kappa_identity(), 1e4, 16);
    for (const auto& [t, v] : prof.samples)
        CHECK(v == doctest::Approx(weighted_mean(h, psi, t)).epsilon(1e-12));
    CHECK(!prof.horizon_clamped);
}

TEST_CASE("kappa-weighted profile: exp reparameterization and the clamp") {
    SingularValueData h = families::harmonic();
    const PsiFunction psi = psi_log1p();
    // phi(x)(e^10 - 1) ~ (10 + gamma)/10
    WeightedMeanProfile prof = kappa_weighted_mean_profile(h, psi, kappa_expm1(), 10.0, 16);
    const auto& [t_last, v_last] = prof.samples.back();
    CHECK(t_last == 10.0);
    CHECK(v_last == doctest::Approx((10.0 + 0.5772156649) / 10.0).epsilon(2e-3));
    CHECK(v_last == doctest::Approx(1.0577).epsilon(2e-3));

    WeightedMeanProfile clamped =
        kappa_weighted_mean_profile(h, psi, kappa_expm1(), 1e5, 8);
    CHECK(clamped.horizon_clamped);
    CHECK(clamped.horizon <= 700.0);
}

TEST_CASE("bounded kappa perturbations converge to the same profile") {
    // bounded-difference reparameterizations induce the same
    // functional; the profile gap closes as t grows
    SingularValueData h = families::harmonic();
    const PsiFunction psi = psi_log1p();
    const auto phi = [&](double kt) { return weighted_mean(h, psi, kt); };
    double prev_gap = 1e300;
    for (double t : {2.0, 4.0, 8.0, 16.0}) {
        const double gap = std::abs(phi(std::exp(t)) - phi(std::expm1(t)));
        CHECK(gap < prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);
    // and inequality (1.1) bounds the gap at every t
    const double norm = marcinkiewicz_norm(h, psi, 1e4).value;
    for (double t : {1.0, 2.0, 5.0, 12.0}) {
        const double k1 = std::expm1(t), k2 = std::exp(t);
        const double gap = phi(k2) - phi(k1);
        CHECK(gap <= norm * std::log(k2 / k1) + 1e-12);
        CHECK(gap >= -norm * std::log(psi(k2) / psi(k1)) - 1e-12);
    }
}

TEST_CASE("profile samples stay within [0, norm]") {
    SingularValueData h = families::harmonic(0.8);
    const PsiFunction psi = psi_log1p();
    const double norm = marcinkiewicz_norm(h, psi, 1e5).value;
    WeightedMeanProfile prof = kappa_weighted_mean_profile(h, psi, kappa_identity(), 1e5, 24);
    for (const auto& [t, v] : prof.samples) {
        CHECK(v >= 0.0);
        CHECK(v <= norm * (1.0 + 1e-12));
    }
}
