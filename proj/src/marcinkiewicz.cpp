#include "singtrace/marcinkiewicz.hpp"

#include <algorithm>
#include <cmath>

#include "singtrace/extrapolate.hpp"
#include "singtrace/rng.hpp"

namespace singtrace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw InvalidInput("log_grid needs 0 < lo < hi");
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = decades / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::pow(10.0, step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

// ----------------------------------------------------------------- gauges

PsiFunction::PsiFunction(std::function<double(double)> eval,
                         std::function<double(double)> derivative,
                         std::function<double(double)> inverse, std::string name)
    : eval_(std::move(eval)),
      deriv_(std::move(derivative)),
      inverse_(std::move(inverse)),
      name_(std::move(name)) {
    audit();
}

void PsiFunction::audit() const {
    if (!(eval_(1e-8) < 0.5))
        throw InvalidInput(name_ + ": psi(1e-8) not small, psi(0+) -> 0 fails");
    if (!(eval_(1e12) > 2.5))
        throw InvalidInput(name_ + ": psi(1e12) not large, psi -> inf fails");
    Rng rng(0x5150u);
    double prev = 0.0;
    for (double t : log_grid(1e-6, 1e10, 8)) {
        const double v = eval_(t);
        if (!(v >= prev)) throw InvalidInput(name_ + ": psi not monotone at t=" + std::to_string(t));
        prev = v;
        const double round = inverse_(v);
        if (std::abs(round - t) > 1e-9 * std::max(1.0, std::abs(t)))
            throw InvalidInput(name_ + ": inverse(psi(t)) != t at t=" + std::to_string(t));
    }
    for (int i = 0; i < 1000; ++i) {
        const double a = std::pow(10.0, rng.uniform(-6.0, 10.0));
        const double b = std::pow(10.0, rng.uniform(-6.0, 10.0));
        const double mid = eval_(0.5 * (a + b));
        const double chord = 0.5 * (eval_(a) + eval_(b));
        if (mid < chord - 1e-9 * std::max(1.0, std::abs(chord)))
            throw InvalidInput(name_ + ": concavity violated");
    }
}

KappaFunction::KappaFunction(std::function<double(double)> eval,
                             std::function<double(double)> derivative,
                             std::function<double(double)> inverse, std::string name,
                             double t_max, bool origin_shifted)
    : eval_(std::move(eval)),
      deriv_(std::move(derivative)),
      inverse_(std::move(inverse)),
      name_(std::move(name)),
      t_max_(t_max),
      origin_shifted_(origin_shifted) {
    audit();
}

void KappaFunction::audit() const {
    if (!origin_shifted_ && std::abs(eval_(0.0)) > 1e-12)
        throw InvalidInput(name_ + ": kappa(0) != 0");
    if (!(eval_(std::min(t_max_, 1e8)) > 1e2)) throw InvalidInput(name_ + ": kappa not unbounded");
    const double probe_hi = std::min(t_max_, 600.0);
    double prev = eval_(0.0);
    for (double t : log_grid(1e-6, probe_hi, 8)) {
        const double v = eval_(t);
        if (!(v > prev)) throw InvalidInput(name_ + ": kappa not strictly increasing");
        prev = v;
        if (!(deriv_(t) > 0.0)) throw InvalidInput(name_ + ": kappa derivative not positive");
        const double round = inverse_(v);
        if (std::abs(round - t) > 1e-9 * std::max(1.0, std::abs(t)))
            throw InvalidInput(name_ + ": inverse(kappa(t)) != t at t=" + std::to_string(t));
    }
}

PsiFunction psi_identity() {
    return PsiFunction([](double t) { return t; }, [](double) { return 1.0; },
                       [](double y) { return y; }, "identity");
}

PsiFunction psi_log1p() {
    return PsiFunction([](double t) { return std::log1p(t); },
                       [](double t) { return 1.0 / (1.0 + t); },
                       [](double y) { return std::expm1(y); }, "log1p");
}

PsiFunction psi_pow(double a) {
    if (!(a > 0.0 && a < 1.0)) throw InvalidInput("psi_pow needs 0 < alpha < 1");
    return PsiFunction([a](double t) { return std::pow(t, a); },
                       [a](double t) { return a * std::pow(t, a - 1.0); },
                       [a](double y) { return std::pow(y, 1.0 / a); },
                       "pow(" + std::to_string(a) + ")");
}

PsiFunction psi_logpow(double a) {
    if (!(a > 0.0)) throw InvalidInput("psi_logpow needs alpha > 0");
    if (a <= 1.0) {
        return PsiFunction([a](double t) { return std::pow(std::log1p(t), a); },
                           [a](double t) {
                               const double l = std::log1p(t);
                               return a * std::pow(l, a - 1.0) / (1.0 + t);
                           },
                           [a](double y) { return std::expm1(std::pow(y, 1.0 / a)); },
                           "logpow(" + std::to_string(a) + ")");
    }
    // (log(1+t))^a is convex near 0 for a > 1; splice to a linear ramp below
    // t0 with matching slope so the gauge stays concave (the large-t behavior
    // is all that matters for the dichotomies). t0 solves log(1+t) = a t/(1+t).
    double lo = 1e-6, hi = 1e12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::log1p(mid) < a * mid / (1.0 + mid) ? lo : hi) = mid;
    }
    const double t0 = 0.5 * (lo + hi);
    const double y0 = std::pow(std::log1p(t0), a);
    const double slope = y0 / t0;
    return PsiFunction(
        [a, t0, slope](double t) {
            return t <= t0 ? slope * t : std::pow(std::log1p(t), a);
        },
        [a, t0, slope](double t) {
            if (t <= t0) return slope;
            const double l = std::log1p(t);
            return a * std::pow(l, a - 1.0) / (1.0 + t);
        },
        [a, t0, slope, y0](double y) {
            return y <= y0 ? y / slope : std::expm1(std::pow(y, 1.0 / a));
        },
        "logpow(" + std::to_string(a) + ")");
}

PsiFunction psi_loglog() {
    return PsiFunction([](double t) { return std::log1p(std::log1p(t)); },
                       [](double t) { return 1.0 / ((1.0 + t) * (1.0 + std::log1p(t))); },
                       [](double y) { return std::expm1(std::expm1(y)); }, "loglog");
}

KappaFunction kappa_identity() {
    return KappaFunction([](double t) { return t; }, [](double) { return 1.0; },
                         [](double y) { return y; }, "identity");
}

KappaFunction kappa_exp() {
    return KappaFunction([](double t) { return std::exp(t); },
                         [](double t) { return std::exp(t); },
                         [](double y) { return std::log(y); }, "exp", 700.0,
                         /*origin_shifted=*/true);
}

KappaFunction kappa_expm1() {
    return KappaFunction([](double t) { return std::expm1(t); },
                         [](double t) { return std::exp(t); },
                         [](double y) { return std::log1p(y); }, "expm1", 700.0);
}

KappaFunction kappa_pow2t() {
    constexpr double ln2 = 0.6931471805599453;
    return KappaFunction([](double t) { return std::exp2(t); },
                         [ln2 = ln2](double t) { return ln2 * std::exp2(t); },
                         [ln2 = ln2](double y) { return std::log2(y); }, "pow2t", 1000.0,
                         /*origin_shifted=*/true);
}

KappaFunction kappa_pow(double p) {
    if (!(p > 0.0)) throw InvalidInput("kappa_pow needs p > 0");
    return KappaFunction([p](double t) { return std::pow(t, p); },
                         [p](double t) { return p * std::pow(t, p - 1.0); },
                         [p](double y) { return std::pow(y, 1.0 / p); },
                         "pow(" + std::to_string(p) + ")");
}

KappaFunction kappa_psi_inverse(const PsiFunction& psi) {
    // psi^{-1} is strictly increasing, unbounded and fixes 0; its t_max keeps
    // psi^{-1}(t) representable (log1p inverse = expm1 overflows past ~700).
    const double t_max = (psi.name() == "log1p" || psi.name() == "loglog") ? 700.0
                         : psi.name().rfind("logpow", 0) == 0              ? 80.0
                                                                           : 1e300;
    PsiFunction p = psi;
    return KappaFunction([p](double t) { return p.inverse(t); },
                         [p](double t) { return 1.0 / p.derivative(p.inverse(t)); },
                         [p](double y) { return p(y); }, "inv(" + psi.name() + ")", t_max);
}

// ---------------------------------------------------------- weighted means

double weighted_mean(const SingularValueData& x, const PsiFunction& psi, double t) {
    if (!(t > 0.0)) throw InvalidInput("weighted_mean needs t > 0 (psi(0) = 0)");
    const double denom = psi(t);
    if (!(denom > 0.0)) throw InvalidInput("psi(t) = 0 at t=" + std::to_string(t));
    return x.prefix_integral(t) / denom;
}

namespace {

// Golden-section refinement of a sampled maximum; f evaluated O(40) times.
template <class F>
std::pair<double, double> golden_max(const F& f, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double lo = a, hi = b;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 48 && hi - lo > 1e-12 * (std::abs(hi) + 1.0); ++it) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    return (fc >= fd) ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

NormReport marcinkiewicz_norm(const SingularValueData& x, const PsiFunction& psi,
                              double horizon) {
    if (!(horizon >= 1e3)) throw InvalidInput("marcinkiewicz_norm needs horizon >= 1e3");
    const auto phi = [&](double t) { return weighted_mean(x, psi, t); };
    const auto grid = log_grid(1e-3, horizon, 64);
    const std::int64_t n = static_cast<std::int64_t>(grid.size());
    std::vector<double> vals(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] = phi(grid[static_cast<std::size_t>(i)]);

    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] > vals[best]) best = i;

    // divergence check: phi still growing decade over decade means x is not
    // in M(psi) as far as this horizon can see
    const double end = vals.back();
    const double two_decades_in = phi(horizon / 100.0);
    if (end > 1.5 * two_decades_in && end > 2.0 * vals.front() && best + 1 == vals.size())
        throw NotInSpace(x.id() + " not in M(" + psi.name() + "): phi diverges", horizon);

    const double lo = grid[best > 0 ? best - 1 : 0];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    auto [arg, val] = golden_max(phi, lo, hi);
    if (vals[best] >= val) {
        arg = grid[best];
        val = vals[best];
    }
    NormReport r;
    r.value = val;
    r.attained_at = arg;
    r.tail = (phi(horizon) > phi(horizon / 3.1622776601683795))
                 ? TailFlag::increasing_at_horizon
                 : TailFlag::attained;
    return r;
}

RieszReport riesz_seminorm(const SingularValueData& x, const PsiFunction& psi, double horizon) {
    if (!(horizon >= 1e3)) throw InvalidInput("riesz_seminorm needs horizon >= 1e3");
    const auto phi = [&](double t) { return weighted_mean(x, psi, t); };
    constexpr double half_decade = 3.1622776601683795;

    // Window sups, trailing first; each window sampled inclusive of its edges.
    std::vector<double> sups;
    double hi = horizon;
    double global = 0.0;
    while (hi > 2e-3) {
        const double lo = std::max(hi / half_decade, 1e-3);
        const auto g = log_grid(lo, hi, 64);
        const std::int64_t n = static_cast<std::int64_t>(g.size());
        std::vector<double> v(g.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] = phi(g[static_cast<std::size_t>(i)]);
        const double s = *std::max_element(v.begin(), v.end());
        sups.push_back(s);
        global = std::max(global, s);
        hi = lo;
        if (hi <= 1e-3) break;
    }

    RieszReport r;
    r.horizon_used = horizon;
    r.band_hi = global;

    // Stabilization: the trailing window sups must follow a 1/log-t drift
    // (the leading finite-horizon bias of phi for every shipped psi). A clean
    // fit means the sup sequence has settled; large residuals mean the
    // oscillation period exceeds the window and only the global sup is an
    // honest limsup estimate.
    const std::size_t depth = std::min<std::size_t>(sups.size(), 6);
    if (depth >= 3) {
        std::vector<double> u(depth), s(depth);
        double edge = horizon;
        for (std::size_t k = 0; k < depth; ++k) {
            edge /= half_decade;
            u[k] = std::log(edge);  // window left edge in log scale
            s[k] = sups[k];
        }
        const DriftFit fit = fit_drift(u, s);
        if (fit.ok && fit.residual_spread <= 1e-2 * std::max(1.0, std::abs(fit.limit))) {
            r.estimate = sups[0];
            r.band_lo = sups[0];
            r.stabilized = true;
            return r;
        }
    }
    r.estimate = global;
    r.band_lo = global;
    r.stabilized = false;
    r.diagnostics = "widened band: trailing window sups did not stabilize (oscillation "
                    "period exceeds window)";
    return r;
}

WeightedMeanProfile kappa_weighted_mean_profile(const SingularValueData& x,
                                                const PsiFunction& psi,
                                                const KappaFunction& kappa, double horizon,
                                                int grid_per_decade) {
    if (!(horizon > 0.0)) throw InvalidInput("profile horizon must be > 0");
    WeightedMeanProfile prof;
    prof.psi_name = psi.name();
    prof.kappa_name = kappa.name();
    double h = horizon;
    if (h > kappa.t_max()) {
        h = kappa.t_max();
        prof.horizon_clamped = true;
        prof.diagnostics = "horizon clamped to " + std::to_string(h) +
                           ": kappa overflows floating range beyond";
    }
    if (!x.supports_log_scale()) {
        // sequence/step data: phi(kappa(t)) walks a prefix of ~kappa(t) terms
        const double budget = 1e8;
        if (kappa(h) > budget) {
            h = kappa.inverse(budget);
            prof.horizon_clamped = true;
            prof.diagnostics += "horizon clamped to " + std::to_string(h) +
                                ": kappa exceeds the prefix budget of the data beyond";
        }
    }
    prof.horizon = h;
    const auto grid = log_grid(std::min(1e-2, h / 2.0), h, grid_per_decade);
    prof.samples.resize(grid.size());
    const std::int64_t n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = grid[static_cast<std::size_t>(i)];
        const double kt = kappa(t);
        prof.samples[static_cast<std::size_t>(i)] = {
            t, kt > 0.0 ? weighted_mean(x, psi, kt) : 0.0};
    }
    return prof;
}

}  // namespace singtrace
