#include "singtrace/growth.hpp"

#include <algorithm>
#include <cmath>

#include "singtrace/extrapolate.hpp"

namespace singtrace {

const char* to_string(RestrictedVerdict v) {
    switch (v) {
        case RestrictedVerdict::pass_strong: return "pass_strong";
        case RestrictedVerdict::pass_F: return "pass_F";
        case RestrictedVerdict::fail: return "fail";
        case RestrictedVerdict::undetermined: return "undetermined";
    }
    return "undetermined";
}

const char* to_string(DichotomyVerdict v) {
    switch (v) {
        case DichotomyVerdict::pass: return "pass";
        case DichotomyVerdict::fail: return "fail";
        case DichotomyVerdict::undetermined: return "undetermined";
    }
    return "undetermined";
}

RestrictedVerdict restricted_growth_check(const KappaFunction& kappa, const PsiFunction& psi,
                                          std::int64_t horizon_n, std::string* diag) {
    if (horizon_n < 1000) throw InvalidInput("restricted_growth_check needs horizon >= 1e3");
    auto n_max = horizon_n;
    if (static_cast<double>(n_max) + 1.0 > kappa.t_max()) {
        n_max = static_cast<std::int64_t>(kappa.t_max()) - 1;
        if (diag)
            *diag += "kappa overflows past n=" + std::to_string(n_max) + ", horizon clamped; ";
    }
    const auto ratio = [&](double n) { return psi(kappa(n)) / psi(kappa(n + 1.0)); };

    // plain limit of r_n on a trailing geometric ladder
    std::vector<double> u, y;
    for (double t : log_grid(std::max(2.0, static_cast<double>(n_max) / 10.0),
                             static_cast<double>(n_max), 24)) {
        const double n = std::round(t);
        if (!u.empty() && u.back() == n) continue;
        u.push_back(n);
        y.push_back(ratio(n));
    }
    const LimitEvidence strong = limit_evidence(u, y, 1e-2);
    if (strong.converged && std::abs(strong.limit - 1.0) <= 1e-2)
        return RestrictedVerdict::pass_strong;

    // Cesaro band of r_n: a fitted limit away from 1 is a fail witness
    std::vector<double> cu, cy;
    {
        double acc = 0.0;
        double done = 0.0;
        for (double t : log_grid(std::max(2.0, static_cast<double>(n_max) / 1000.0),
                                 static_cast<double>(n_max), 16)) {
            const double n = std::round(t);
            if (n <= done) continue;
            for (double i = done + 1.0; i <= n; i += 1.0) acc += ratio(i);
            done = n;
            cu.push_back(n);
            cy.push_back(acc / n);
        }
    }
    const LimitEvidence cesaro = limit_evidence(cu, cy, 1e-2);
    if (cesaro.converged && std::abs(cesaro.limit - 1.0) > 3e-2) return RestrictedVerdict::fail;

    // F-evidence via the uniform window test on r_n (only reachable when the
    // ladder is long enough to window)
    if (n_max >= 1000) {
        BoundedSequence r([&ratio](std::int64_t n) { return ratio(static_cast<double>(n)); },
                          /*bound=*/10.0, "r_n");
        const ConvergenceVerdict f = almost_convergence_test(r, n_max, 1e-2);
        if (f.cls == ConvClass::F_almost_convergent && f.limit &&
            std::abs(*f.limit - 1.0) <= 1e-2)
            return RestrictedVerdict::pass_F;
        if (f.cls != ConvClass::undetermined && f.limit && std::abs(*f.limit - 1.0) > 3e-2)
            return RestrictedVerdict::fail;
    }
    if (strong.converged && std::abs(strong.limit - 1.0) > 3e-2) return RestrictedVerdict::fail;
    return RestrictedVerdict::undetermined;
}

std::optional<double> dominated_growth_check(const KappaFunction& kappa, const PsiFunction& psi,
                                             double horizon) {
    const double t_hi = std::min(horizon, kappa.t_max());
    const auto product = [&](double t) {
        const double kt = kappa(t);
        const double f = psi(kt);
        if (!(f > 0.0)) return 0.0;
        return t * psi.derivative(kt) * kappa.derivative(t) / f;
    };
    const auto sup_over = [&](double lo, double hi) {
        double s = 0.0;
        for (double t : log_grid(lo, hi, 64)) s = std::max(s, product(t));
        return s;
    };
    const double s_full = sup_over(1e-3, t_hi);
    const double s_early = sup_over(1e-3, t_hi / 10.0);
    if (s_full > 1.3 * s_early + 1e-12) return std::nullopt;  // still growing: unbounded
    return s_full * 1.1 + 1e-12;
}

std::optional<double> exponential_increase_check(const KappaFunction& kappa, double horizon) {
    const double t_hi = std::min(horizon, kappa.t_max() - 2.0);
    // needed(t) = kappa^{-1}(2 kappa(t)) - t, the shift that doubles kappa
    const auto needed = [&](double t) {
        const double k2 = 2.0 * kappa(t);
        return kappa.inverse(k2) - t;
    };
    const auto sup_over = [&](double lo, double hi) {
        double s = 0.0;
        for (double t : log_grid(lo, hi, 48)) s = std::max(s, needed(t));
        return s;
    };
    const double s_full = sup_over(1e-3, t_hi);
    const double s_early = sup_over(1e-3, t_hi / 10.0);
    if (s_full > 1.3 * s_early + 1e-12) return std::nullopt;  // shift grows with t
    return s_full * 1.1 + 1e-12;
}

GrowthVerdict classify_kappa(const KappaFunction& kappa, const PsiFunction& psi,
                             double horizon) {
    GrowthVerdict v;
    v.horizon = horizon;
    const auto n = static_cast<std::int64_t>(std::min(horizon, 1e7));
    v.restricted = restricted_growth_check(kappa, psi, std::max<std::int64_t>(n, 1000),
                                           &v.diagnostics);
    v.dominated_C = dominated_growth_check(kappa, psi, horizon);
    v.exponential_C = exponential_increase_check(kappa, horizon);
    if (v.dominated_C && v.restricted == RestrictedVerdict::fail) {
        // D(psi) c R(psi); a contradiction means the evidence is unreliable
        v.restricted = RestrictedVerdict::undetermined;
        v.diagnostics += "dominated pass contradicts restricted fail, verdict withheld; ";
    }
    return v;
}

PsiDichotomies psi_dichotomies(const PsiFunction& psi, double horizon) {
    if (!(horizon >= 1e6)) throw InvalidInput("psi_dichotomies needs horizon >= 1e6");
    PsiDichotomies out;
    out.horizon = horizon;
    const auto d = [&psi](double t) { return psi(2.0 * t) / psi(t) - 1.0; };

    double trail_min = 1e300, trail_max = 0.0;
    for (double t : log_grid(horizon / 100.0, horizon, 48)) {
        const double v = d(t);
        trail_min = std::min(trail_min, v);
        trail_max = std::max(trail_max, v);
    }

    // C-fit: log d against log psi over the top two decades
    std::vector<double> xs, ys;
    for (double t : log_grid(horizon / 100.0, horizon, 24)) {
        const double dv = d(t);
        const double pv = psi(t);
        if (dv > 0.0 && pv > 0.0) {
            xs.push_back(std::log(pv));
            ys.push_back(std::log(dv));
        }
    }
    const LogLogFit fit = fit_linear(xs, ys);
    out.fit_r2 = fit.r2;
    const bool decays = fit.ok && fit.slope < -0.01 && fit.r2 >= 0.99;
    if (decays) out.fitted_C = -1.0 / fit.slope;

    out.A = (trail_min <= 0.02 || decays) ? DichotomyVerdict::pass : DichotomyVerdict::fail;
    const double osc = (trail_max > 0.0) ? (trail_max - trail_min) / trail_max : 0.0;
    out.B = (out.A == DichotomyVerdict::pass && osc < 0.5) ? DichotomyVerdict::pass
                                                           : DichotomyVerdict::fail;
    out.C = decays ? DichotomyVerdict::pass : DichotomyVerdict::fail;

    if (out.A == DichotomyVerdict::pass) {
        out.consequences += "R_exp(psi) non-empty";
        out.consequences += (out.B == DichotomyVerdict::pass)
                                ? "; SR_exp(psi) non-empty (witness beta(t)=2^t)"
                                : " (existence guaranteed, witness not constructed)";
    }
    if (out.C == DichotomyVerdict::pass) out.consequences += "; D_exp(psi) non-empty";
    return out;
}

}  // namespace singtrace
