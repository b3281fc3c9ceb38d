#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace singtrace::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    long evaluations = 0;
    bool converged = true;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double a, double b)
        : std::runtime_error(what), interval_lo(a), interval_hi(b) {}
    double interval_lo, interval_hi;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kNodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline constexpr double kGauss[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
inline constexpr double kKronrod[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

template <class F>
void g7k15(const F& f, double a, double b, double& k15, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double g7 = kGauss[0] * f0;
    double k = kKronrod[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kNodes[i];
        const double fi = f(c + dx) + f(c - dx);
        g7 += kGauss[i] * fi;
        k += kKronrod[i] * fi;
    }
    g7 *= h;
    k *= h;
    k15 = k;
    const double diff = std::abs(k - g7);
    // Kronrod error model: (200|K-G|)^{3/2} when that sharpens the estimate.
    const double scaled = 200.0 * diff;
    err = (scaled < 1.0) ? scaled * std::sqrt(scaled) : scaled;
    if (!std::isfinite(err)) err = scaled;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
/// Stops when the summed interval error <= max(abs_tol, rel_tol * |result|).
/// Deterministic: the stack discipline and splitting are value-driven only.
template <class F>
QuadResult integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-10, int max_intervals = 4000) {
    QuadResult out;
    if (a == b) return out;
    struct Seg { double a, b, val, err; };
    std::vector<Seg> stack;
    double v, e;
    detail::g7k15(f, a, b, v, e);
    out.evaluations += 15;
    stack.push_back({a, b, v, e});
    double total = v, toterr = e;

    int splits = 0;
    while (toterr > std::max(abs_tol, rel_tol * std::abs(total))) {
        // split the worst segment
        std::size_t worst = 0;
        for (std::size_t i = 1; i < stack.size(); ++i)
            if (stack[i].err > stack[worst].err) worst = i;
        Seg s = stack[worst];
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
        const double mid = 0.5 * (s.a + s.b);
        if (mid <= s.a || mid >= s.b) {  // interval exhausted at double resolution
            stack.push_back(s);
            break;
        }
        double v1, e1, v2, e2;
        detail::g7k15(f, s.a, mid, v1, e1);
        detail::g7k15(f, mid, s.b, v2, e2);
        out.evaluations += 30;
        stack.push_back({s.a, mid, v1, e1});
        stack.push_back({mid, s.b, v2, e2});
        total += v1 + v2 - s.val;
        toterr += e1 + e2 - s.err;
        if (++splits > max_intervals) {
            out.converged = false;
            break;
        }
    }
    // Re-sum in interval order for a schedule-independent result.
    std::sort(stack.begin(), stack.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    double acc = 0.0, c = 0.0, errsum = 0.0;
    for (const auto& s : stack) {
        const double y = s.val - c;
        const double t = acc + y;
        c = (t - acc) - y;
        acc = t;
        errsum += s.err;
    }
    out.value = acc;
    out.error = errsum;
    return out;
}

/// Integrate f over [a, b] or raise QuadratureError when the tolerance could
/// not be met.
template <class F>
double integrate_or_throw(const F& f, double a, double b, double abs_tol = 1e-12,
                          double rel_tol = 1e-10) {
    QuadResult r = integrate(f, a, b, abs_tol, rel_tol);
    if (!r.converged)
        throw QuadratureError("quadrature did not converge", a, b);
    return r.value;
}

}  // namespace singtrace::quad
