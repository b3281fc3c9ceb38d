#include "singtrace/dixmier.hpp"

#include <algorithm>
#include <cmath>

#include "singtrace/extrapolate.hpp"
#include "singtrace/kernels.hpp"
#include "singtrace/quadrature.hpp"

namespace singtrace {

namespace {

constexpr double kPeriodRatio = 535.4916555247647;   // e^{2 pi}
constexpr double kHalfDecadeU = 1.151292546497023;   // log sqrt(10)
constexpr double kTwoOverSqrtPi = 1.1283791670955126;

/// phi(x)(e^u - 1) with the two evaluation regimes. For psi = log(1+t) the
/// denominator is exactly u.
struct ExpSide {
    const SingularValueData* x;
    bool log_scale;
    double U;  // u-horizon

    double phi(double u) const {
        if (u <= 1e-12) u = 1e-12;
        if (log_scale) {
            // v = log(e^u - 1) = u + log(1 - e^{-u})
            const double v = (u > 36.0) ? u : u + std::log1p(-std::exp(-u));
            return x->prefix_integral_logt(v) / u;
        }
        return x->prefix_integral(std::expm1(u)) / u;
    }

    // u phi'(u) = mu_t (t+1) - phi(u) with t = e^u - 1 (valid a.e.)
    double u_phi_prime(double u) const {
        if (u <= 1e-12) u = 1e-12;
        double t_mu;
        if (log_scale) {
            const double v = (u > 36.0) ? u : u + std::log1p(-std::exp(-u));
            t_mu = x->t_mu_logt(v);
        } else {
            t_mu = 0.0;
            const double t = std::expm1(u);
            if (t > 0.0) t_mu = t * x->mu(t);
        }
        const double factor = 1.0 / (-std::expm1(-u));  // (t+1)/t
        return t_mu * factor - phi(u);
    }
};

// Cumulative restarted means with the integral taken in w = log u, which is
// where the log-scale regime's oscillations are band-limited.
MeanSeries restarted_means_logspace(const ExpSide& side, double u0,
                                    const std::vector<double>& mu_grid, double scale) {
    MeanSeries out;
    out.restart_u0 = u0;
    out.mu = mu_grid;
    out.c.resize(mu_grid.size());
    const std::size_t n = mu_grid.size();
    std::vector<double> seg(n);
    const auto integrand = [&side](double w) {
        const double u = std::exp(w);
        return side.phi(u) * u;
    };
    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < ni; ++i) {
        const double a = (i == 0) ? std::log(u0) : std::log(mu_grid[static_cast<std::size_t>(i - 1)]);
        const double b = std::log(mu_grid[static_cast<std::size_t>(i)]);
        const double du = mu_grid[static_cast<std::size_t>(i)] -
                          ((i == 0) ? u0 : mu_grid[static_cast<std::size_t>(i - 1)]);
        const double abs_tol = 1e-9 * std::max(1.0, scale) * std::max(du, 1e-6);
        seg[static_cast<std::size_t>(i)] = quad::integrate(integrand, a, b, abs_tol, 1e-8).value;
    }
    kernels::KahanAcc acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(seg[i]);
        out.c[i] = acc.value() / (out.mu[i] - u0);
    }
    return out;
}

MeanSeries restarted_means_linear(const ExpSide& side, double u0,
                                  const std::vector<double>& mu_grid, double scale) {
    const auto f = [&side](double u) { return side.phi(u); };
    return restarted_means(f, u0, mu_grid, scale);
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 1) / static_cast<double>(n);
    g.back() = hi;
    return g;
}

struct BandResult {
    CesaroBand band;
    LimitEvidence evidence;
};

BandResult band_at(const ExpSide& side, double tol, double scale) {
    BandResult out;
    MeanSeries ms;
    if (side.log_scale) {
        const double u0 = std::max(1e-3, side.U / (kPeriodRatio * kPeriodRatio));
        ms = restarted_means_logspace(side, u0, log_grid(side.U / kPeriodRatio, side.U, 48),
                                      scale);
    } else {
        const double u0 = std::max(1e-3, side.U - kHalfDecadeU);
        ms = restarted_means_linear(side, u0, linear_grid(u0, side.U, 48), scale);
    }
    out.band.horizon = side.U;
    out.band.lo = *std::min_element(ms.c.begin(), ms.c.end());
    out.band.hi = *std::max_element(ms.c.begin(), ms.c.end());
    // restarted means of a 1/u drift follow log(mu/u0)/(mu-u0) exactly
    std::vector<double> basis(ms.mu.size());
    for (std::size_t i = 0; i < ms.mu.size(); ++i)
        basis[i] = std::log(ms.mu[i] / ms.restart_u0) / (ms.mu[i] - ms.restart_u0);
    out.evidence = limit_evidence_basis(basis, ms.c, tol);
    out.band.collapsed = out.evidence.converged;
    out.band.fit_limit = out.evidence.limit;
    return out;
}

struct RieszResult {
    double estimate = 0.0;
    double global = 0.0;
    bool stabilized = false;
};

// sup of phi_exp with the same trailing-window stabilization cascade as
// riesz_seminorm, in the regime's own window geometry.
RieszResult riesz_of(const ExpSide& side) {
    RieszResult out;
    std::vector<double> edges;  // window boundaries, trailing first
    // sequence data lives on a short u-range where secondary decay bends the
    // 1/u model; four windows keep the fit honest there. The log-scale regime
    // has room for six.
    const int depth = side.log_scale ? 6 : 4;
    if (side.log_scale) {
        double e = side.U;
        for (int k = 0; k <= depth; ++k) {
            edges.push_back(e);
            e /= 3.1622776601683795;
        }
    } else {
        double e = side.U;
        for (int k = 0; k <= depth; ++k) {
            edges.push_back(e);
            e = std::max(e - kHalfDecadeU, 1e-2);
        }
    }
    std::vector<double> sups, us;
    double global = 0.0;
    for (int k = 0; k < depth; ++k) {
        const double hi = edges[static_cast<std::size_t>(k)];
        const double lo = edges[static_cast<std::size_t>(k + 1)];
        if (!(hi > lo)) break;
        const auto grid = side.log_scale ? log_grid(lo, hi, 48) : linear_grid(lo, hi, 48);
        double s = 0.0;
        for (double u : grid) s = std::max(s, side.phi(u));
        sups.push_back(s);
        us.push_back(lo);
        global = std::max(global, s);
    }
    // global sup down to the band floor (where oscillating data keeps its peaks)
    {
        const double floor_u = side.log_scale
                                   ? std::max(1e-2, side.U / (kPeriodRatio * kPeriodRatio))
                                   : std::max(1e-2, side.U / 100.0);
        for (double u : log_grid(floor_u, side.U, 48)) global = std::max(global, side.phi(u));
    }
    out.global = global;
    const DriftFit fit = fit_drift(us, sups);
    if (fit.ok && sups.size() >= 3 &&
        fit.residual_spread <= 1e-2 * std::max(1.0, std::abs(fit.limit))) {
        out.estimate = sups[0];
        out.stabilized = true;
    } else {
        out.estimate = global;
        out.stabilized = false;
    }
    return out;
}

struct TauberianResult {
    LimitEvidence evidence;
    double raw = 0.0;
};

TauberianResult tauberian_of(const ExpSide& side, double tol) {
    TauberianResult out;
    std::vector<double> u, y;
    const auto grid = side.log_scale
                          ? log_grid(side.U / 10.0, side.U, 24)
                          : linear_grid(std::max(1e-2, side.U - 2.0 * kHalfDecadeU), side.U, 48);
    for (double uu : grid) {
        u.push_back(uu);
        y.push_back(side.phi(uu));
    }
    out.evidence = limit_evidence(u, y, tol);
    out.raw = side.phi(side.U);
    return out;
}

std::optional<double> certify_H(const ExpSide& side) {
    const double lo = 1e-2;
    double mn = 0.0;
    for (double u : log_grid(lo, side.U, 48)) mn = std::min(mn, side.u_phi_prime(u));
    double H = std::max(0.0, -mn) * 1.1 + 1e-9;
    // discrete shadow: n(phi(n) - phi(n-1)) > -2H
    for (double t : log_grid(2.0, side.U, 8)) {
        const double n = std::round(t);
        const double d = n * (side.phi(n) - side.phi(n - 1.0));
        if (d < -2.0 * H) H = -d / 2.0 * 1.1;
    }
    if (!std::isfinite(H)) return std::nullopt;
    return H;
}

double mu_over_t_bound(const SingularValueData& x, double horizon) {
    // mu_t <= 2 log2 ||x|| / t from the Marcinkiewicz norm; probe the norm on
    // a modest horizon, it only feeds tail certificates
    const double h = std::max(std::min(horizon, 1e4), 1e3);
    const NormReport n = marcinkiewicz_norm(x, psi_log1p(), h);
    return 2.0 * 0.6931471805599453 * n.value;
}

}  // namespace

CrossCheck zeta_residue(const SingularValueData& x, const std::vector<double>& s_ladder,
                        double direct_terms) {
    CrossCheck out;
    if (s_ladder.size() < 2) {
        out.note = "ladder too short";
        return out;
    }
    for (std::size_t i = 0; i + 1 < s_ladder.size(); ++i)
        if (!(s_ladder[i] > s_ladder[i + 1] && s_ladder[i + 1] > 1.0))
            throw InvalidInput("zeta ladder must decrease strictly toward 1");

    const double K = mu_over_t_bound(x, 1e4);
    constexpr double eps_rel = 5e-7;
    std::vector<double> rungs;
    std::string dropped;

    for (double s : s_ladder) {
        double total = 0.0;
        bool ok = true;
        if (x.has_terms()) {
            const double support = x.finite_support().value_or(
                std::numeric_limits<double>::infinity());
            const double N = std::min(direct_terms, support);
            const auto Ni = static_cast<std::int64_t>(N);
            total = kernels::blocked_sum(1, Ni + 1, [&x, s](std::int64_t i) {
                const double v = x.term(static_cast<double>(i));
                return v > 0.0 ? std::pow(v, s) : 0.0;
            });
            if (!std::isfinite(support)) {
                // tail as the continuum comparison integral with the
                // Euler-Maclaurin half-term correction
                if (K <= 0.0) {
                    // all-zero data: nothing out there
                } else {
                    const double W =
                        (s * std::log(std::max(K, 1e-3)) +
                         std::log(1.0 / (eps_rel * (s - 1.0) * std::max(total, 1e-12)))) /
                        (s - 1.0);
                    if (W > 5e4) {
                        ok = false;
                        dropped += "s=" + std::to_string(s) + " tail bound unreachable; ";
                    } else {
                        const double w_lo = std::log(N);
                        double tail = 0.0;
                        double w = w_lo;
                        const double w_hi = std::max(W, w_lo + 1.0);
                        while (w < w_hi) {
                            const double w2 = std::min(w + 2.0, w_hi);
                            tail += quad::integrate(
                                        [&x, s](double ww) {
                                            const double v = x.term(std::exp(ww));
                                            return v > 0.0 ? std::pow(v, s) * std::exp(ww)
                                                           : 0.0;
                                        },
                                        w, w2, 1e-12 * std::max(total, 1.0), 1e-9)
                                        .value;
                            w = w2;
                        }
                        const double fN = std::pow(std::max(x.term(N), 0.0), s);
                        total += tail - 0.5 * fN;
                    }
                }
            }
        } else {
            // analytic: zeta(s) = int_0^inf mu_t^s dt, in log scale past t = 1
            total = quad::integrate([&x, s](double t) { return std::pow(x.mu(t), s); }, 0.0,
                                    1.0, 1e-12, 1e-10)
                        .value;
            const double W = (s * std::log(std::max(K, 1e-3)) +
                              std::log(1.0 / (eps_rel * (s - 1.0)))) /
                             (s - 1.0);
            double w = 0.0;
            const double w_hi = std::max(W, 2.0);
            while (w < w_hi) {
                const double w2 = std::min(w + 2.0, w_hi);
                total += quad::integrate(
                             [&x, s](double ww) {
                                 const double tmu = x.t_mu_logt(ww);
                                 if (!(tmu > 0.0)) return 0.0;
                                 // (mu_t)^s e^w = (t mu)^s e^{w(1-s)}
                                 return std::pow(tmu, s) * std::exp(ww * (1.0 - s));
                             },
                             w, w2, 1e-12 * std::max(total, 1.0), 1e-9)
                             .value;
                w = w2;
            }
        }
        if (ok) rungs.push_back((s - 1.0) * total);
    }

    if (rungs.size() < 3) {
        out.note = "fewer than 3 usable rungs; " + dropped;
        return out;
    }
    const double ratio = (s_ladder[0] - 1.0) / (s_ladder[1] - 1.0);
    const ExtrapResult ex = richardson_geometric(rungs, ratio);
    out.value = ex.value;
    out.lo = ex.lo;
    out.hi = ex.hi;
    out.usable = true;
    out.note = dropped;
    return out;
}

CrossCheck heat_kernel_estimate(const SingularValueData& x,
                                const std::vector<double>& eps_ladder) {
    CrossCheck out;
    if (eps_ladder.size() < 3) {
        out.note = "ladder too short";
        return out;
    }
    for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i)
        if (!(eps_ladder[i] > eps_ladder[i + 1] && eps_ladder[i + 1] > 0.0))
            throw InvalidInput("heat ladder must decrease strictly toward 0");

    const auto sum_at = [&x](double eps, bool literal_convention) {
        if (x.has_terms()) {
            // cutoff: terms die once eps/s_n >= 9.3 (exp(-86)); monotone cert
            std::int64_t n_hi = 1;
            const double support =
                x.finite_support().value_or(std::numeric_limits<double>::infinity());
            while (static_cast<double>(n_hi) < std::min(support, 2.0e8)) {
                const double v = x.term(static_cast<double>(n_hi));
                if (!(v > eps / 9.3)) break;
                n_hi *= 2;
            }
            const auto N = static_cast<std::int64_t>(
                std::min(static_cast<double>(n_hi) * 2.0, std::min(support + 1.0, 4.0e8)));
            return kernels::blocked_sum(1, N + 1, [&x, eps, literal_convention](std::int64_t i) {
                const double v = x.term(static_cast<double>(i));
                if (!(v > 0.0)) return 0.0;
                const double q = literal_convention ? 1.0 / (eps * v) : eps / v;
                return std::exp(-q * q);
            });
        }
        // analytic: integral form, log scale past t = 1
        double total =
            quad::integrate(
                [&x, eps, literal_convention](double t) {
                    const double m = x.mu(t);
                    if (!(m > 0.0)) return 0.0;
                    const double q = literal_convention ? 1.0 / (eps * m) : eps / m;
                    return std::exp(-q * q);
                },
                0.0, 1.0, 1e-13, 1e-10)
                .value;
        double w = 0.0;
        double last = 1.0;
        while (w < 700.0 && last > 1e-14 * std::max(total, 1.0)) {
            const double w2 = w + 2.0;
            last = quad::integrate(
                       [&x, eps, literal_convention](double ww) {
                           const double tmu = x.t_mu_logt(ww);
                           if (!(tmu > 0.0)) return 0.0;
                           const double m = tmu * std::exp(-ww);
                           const double q = literal_convention ? 1.0 / (eps * m) : eps / m;
                           return std::exp(-q * q) * std::exp(ww);
                       },
                       w, w2, 1e-13 * std::max(total, 1.0), 1e-10)
                       .value;
            total += last;
            w = w2;
        }
        return total;
    };

    std::vector<double> rungs;
    for (double eps : eps_ladder) rungs.push_back(kTwoOverSqrtPi * eps * sum_at(eps, false));
    const double ratio = eps_ladder[0] / eps_ladder[1];
    const ExtrapResult ex = richardson_geometric(rungs, ratio);
    out.value = ex.value;
    out.lo = ex.lo;
    out.hi = ex.hi;
    out.usable = true;

    // both-conventions diagnostic: the literal exponent of the identity
    const double literal = kTwoOverSqrtPi * eps_ladder[0] * sum_at(eps_ladder[0], true);
    out.note = "literal-exponent value at eps=" + std::to_string(eps_ladder[0]) + ": " +
               std::to_string(literal);
    if (std::abs(out.value) < 1e-12 && std::abs(literal) < 1e-12)
        out.note += " (both conventions degenerate)";
    return out;
}

TraceReport trace_analyze(const SingularValueData& x, double horizon, const TraceOptions& opts) {
    if (!(horizon >= 1e3)) throw InvalidInput("trace_analyze needs horizon >= 1e3");
    TraceReport rep;
    rep.input_id = x.id();
    rep.horizon = horizon;

    // membership gate: finite Marcinkiewicz norm at the horizon
    const PsiFunction psi = psi_log1p();
    const NormReport norm = marcinkiewicz_norm(x, psi, horizon);
    rep.norm = norm.value;

    ExpSide side;
    side.x = &x;
    side.log_scale = x.supports_log_scale();
    side.U = side.log_scale ? horizon : std::log1p(horizon);
    rep.exp_horizon_clamped = !side.log_scale;
    if (rep.exp_horizon_clamped)
        rep.diagnostics += "exp reparameterization clamped to u <= log(1+horizon) = " +
                           std::to_string(side.U) + "; ";

    // (a) Tauberian side: plain limit of phi
    const TauberianResult tau = tauberian_of(side, opts.tol);
    rep.tauberian.cls =
        tau.evidence.converged ? ConvClass::S_convergent : ConvClass::undetermined;
    if (tau.evidence.converged) rep.tauberian.limit = tau.evidence.limit;
    rep.tauberian.diagnostics = "residual " + std::to_string(tau.evidence.residual) +
                                ", window disagreement " +
                                std::to_string(tau.evidence.disagreement);
    rep.trace_raw = tau.raw;
    rep.trace_extrapolated = tau.evidence.limit;

    // (b) Cesaro side of phi∘exp
    const BandResult band = band_at(side, opts.tol, norm.value);
    CesaroBand b = band.band;
    {
        ExpSide side10 = side;
        side10.U = side.log_scale ? side.U / 10.0 : std::log1p(horizon / 10.0);
        const BandResult b10 = band_at(side10, opts.tol, norm.value);
        b.stabilized = b10.band.lo <= b.lo + 1e-2 * std::max(1.0, std::abs(b.lo)) &&
                       b10.band.hi >= b.hi - 1e-2 * std::max(1.0, std::abs(b.hi));
    }
    rep.measurable.cls =
        band.band.collapsed ? ConvClass::C_cesaro_convergent : ConvClass::undetermined;
    if (band.band.collapsed) rep.measurable.limit = band.band.fit_limit;
    rep.measurable.band = b;
    rep.measurable.diagnostics = "mean residual " + std::to_string(band.evidence.residual) +
                                 ", halves disagreement " +
                                 std::to_string(band.evidence.disagreement);

    // (c) verdict and trace value
    rep.is_measurable = band.band.collapsed;
    const RieszResult rz = riesz_of(side);
    rep.riesz = rz.estimate;
    rep.tauberian_H = certify_H(side);
    rep.measurable.tauberian_H = rep.tauberian_H;
    rep.tauberian.tauberian_H = rep.tauberian_H;

    if (rep.is_measurable && tau.evidence.converged) {
        rep.trace_value = tau.evidence.limit;
        // all attainable traces coincide with the limit; the reported band is
        // the hull of the raw band and the limit estimate
        b.lo = std::min(b.lo, *rep.trace_value);
        b.hi = std::max(b.hi, *rep.trace_value);
    }
    rep.trace_band = b;
    rep.measurable.band = b;

    // cross-checks
    if (opts.with_zeta && (x.has_terms() || side.log_scale)) {
        rep.zeta_residue = zeta_residue(x, opts.s_ladder, opts.zeta_direct_terms);
        if (rep.trace_value && rep.zeta_residue->usable)
            rep.consistency["zeta_minus_trace"] = rep.zeta_residue->value - *rep.trace_value;
    }
    if (opts.with_heat && (x.has_terms() || side.log_scale)) {
        rep.heat_kernel = heat_kernel_estimate(x, opts.eps_ladder);
        if (rep.trace_value && rep.heat_kernel->usable)
            rep.consistency["heat_minus_trace"] = rep.heat_kernel->value - *rep.trace_value;
    }
    rep.consistency["riesz_minus_band_hi"] = rep.riesz - rep.trace_band.hi;
    if (rep.tauberian_H) {
        const double H58 = std::max(1.0, *rep.tauberian_H);
        rep.consistency["tauberian_lower"] = rep.riesz / (std::exp(1.0) * H58);
    }
    return rep;
}

TraceBandBounds trace_band_bounds(const SingularValueData& x, double horizon) {
    TraceOptions opts;
    opts.with_zeta = false;
    opts.with_heat = false;
    const TraceReport rep = trace_analyze(x, horizon, opts);
    TraceBandBounds out;
    out.band = rep.trace_band;
    out.riesz_upper = rep.riesz;
    if (rep.tauberian_H) {
        const double H58 = std::max(1.0, *rep.tauberian_H);
        out.tauberian_lower = rep.riesz / (std::exp(1.0) * H58);
    } else {
        out.diagnostics = "no certified H, Tauberian lower bound absent";
    }
    return out;
}

NormingCheck norming_identity_check(const SingularValueData& x, double horizon) {
    TraceOptions opts;
    opts.with_zeta = false;
    opts.with_heat = false;
    const TraceReport rep = trace_analyze(x, horizon, opts);
    NormingCheck out;
    out.riesz = rep.riesz;
    out.sup_band_hi = rep.trace_band.hi;
    out.delta = rep.riesz - rep.trace_band.hi;
    const double H58 = std::max(1.0, rep.tauberian_H.value_or(1.0));
    out.cdix_lower = rep.riesz / (std::exp(1.0) * H58);
    out.holds = out.delta >= -1e-2 && out.cdix_lower <= out.sup_band_hi + 1e-2;
    return out;
}

}  // namespace singtrace
