#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace singtrace {

struct ExtrapResult {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int levels = 0;
    bool usable = false;
};

/// Richardson extrapolation for f(h_k) with h_k = h_0 * ratio^{-k}, assuming
/// f(h) = A + c1 h + c2 h^2 + ... . Returns the deepest diagonal entry with a
/// residual-based band (spread of the last corrections).
inline ExtrapResult richardson_geometric(std::span<const double> f, double ratio) {
    ExtrapResult out;
    const std::size_t n = f.size();
    if (n < 2) return out;
    std::vector<double> row(f.begin(), f.end());
    double last = row.back();
    double correction = 0.0;
    int level = 0;
    double pw = ratio;
    while (row.size() >= 2) {
        std::vector<double> next(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            next[i] = (pw * row[i + 1] - row[i]) / (pw - 1.0);
        correction = std::abs(next.back() - last);
        last = next.back();
        row = std::move(next);
        pw *= ratio;
        ++level;
        if (level >= 3) break;  // 3-point Richardson per the ladder contract
    }
    out.value = last;
    const double band = std::max(correction, 1e-15 * std::abs(last));
    out.lo = last - band;
    out.hi = last + band;
    out.levels = level;
    out.usable = n >= 3;
    return out;
}

struct DriftFit {
    double limit = 0.0;      // fitted A in  y = A + B/u
    double slope = 0.0;      // fitted B
    double residual_spread = 0.0;  // max - min of residuals
    bool ok = false;
};

/// Least-squares fit of y = A + B/u. The 1/u drift model is the leading
/// finite-horizon bias of every log-gauge mean in this library
/// (H_N/log N = 1 + gamma/log N + ...), so A estimates the limit at infinity.
inline DriftFit fit_drift(std::span<const double> u, std::span<const double> y) {
    DriftFit out;
    const std::size_t n = u.size();
    if (n < 3 || y.size() != n) return out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 1.0 / u[i];
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double den = static_cast<double>(n) * sxx - sx * sx;
    if (den == 0.0 || !std::isfinite(den)) return out;
    out.slope = (static_cast<double>(n) * sxy - sx * sy) / den;
    out.limit = (sy - out.slope * sx) / static_cast<double>(n);
    double rmin = 0.0, rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (out.limit + out.slope / u[i]);
        if (i == 0) { rmin = rmax = r; }
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    out.residual_spread = rmax - rmin;
    out.ok = std::isfinite(out.limit) && std::isfinite(out.residual_spread);
    return out;
}

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool ok = false;
};

/// Ordinary least squares of y against x (used on log-log data for the
/// doubling-ratio exponent fit).
inline LogLogFit fit_linear(std::span<const double> x, std::span<const double> y) {
    LogLogFit out;
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) return out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    const double den = nn * sxx - sx * sx;
    if (den == 0.0) return out;
    out.slope = (nn * sxy - sx * sy) / den;
    out.intercept = (sy - out.slope * sx) / nn;
    const double sstot = syy - sy * sy / nn;
    double ssres = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (out.intercept + out.slope * x[i]);
        ssres += r * r;
    }
    out.r2 = (sstot > 0.0) ? 1.0 - ssres / sstot : 1.0;
    out.ok = std::isfinite(out.slope);
    return out;
}

}  // namespace singtrace
