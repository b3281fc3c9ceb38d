#pragma once

#ifdef __FAST_MATH__
#error "fast math would defeat compensated summation"
#endif

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace singtrace::kernels {

/// Neumaier-compensated accumulator. State (sum, carry) is a value type so a
/// partially accumulated prefix can be checkpointed and resumed bit-exactly.
struct KahanAcc {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

inline constexpr std::int64_t kBlock = 8192;

namespace detail {

// Sum f(i) for i in [lo, hi) sequentially with compensation.
template <class F>
KahanAcc run_block(std::int64_t lo, std::int64_t hi, const F& f) {
    KahanAcc a;
    for (std::int64_t i = lo; i < hi; ++i) a.add(f(i));
    return a;
}

inline std::int64_t block_count(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return 0;
    const std::int64_t first = lo / kBlock;
    const std::int64_t last = (hi - 1) / kBlock;
    return last - first + 1;
}

inline void block_bounds(std::int64_t lo, std::int64_t hi, std::int64_t b,
                         std::int64_t& blo, std::int64_t& bhi) {
    const std::int64_t first = lo / kBlock;
    blo = (first + b) * kBlock;
    bhi = blo + kBlock;
    if (blo < lo) blo = lo;
    if (bhi > hi) bhi = hi;
}

}  // namespace detail

/// Deterministic parallel sum of f(i), i in [lo, hi). Blocks are aligned to
/// absolute index multiples of kBlock and combined in index order, so the
/// result is identical for any thread count (including the serial variant).
template <class F>
double blocked_sum(std::int64_t lo, std::int64_t hi, const F& f) {
    const std::int64_t nb = detail::block_count(lo, hi);
    if (nb == 0) return 0.0;
    if (nb == 1) return detail::run_block(lo, hi, f).value();
    std::vector<KahanAcc> part(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
        std::int64_t blo, bhi;
        detail::block_bounds(lo, hi, b, blo, bhi);
        part[static_cast<std::size_t>(b)] = detail::run_block(blo, bhi, f);
    }
    KahanAcc total;
    for (const auto& p : part) {
        total.add(p.sum);
        total.add(p.carry);
    }
    return total.value();
}

/// Serial reference with the identical block tree; used by tests and the
/// kernel benchmark.
template <class F>
double blocked_sum_serial(std::int64_t lo, std::int64_t hi, const F& f) {
    const std::int64_t nb = detail::block_count(lo, hi);
    if (nb == 0) return 0.0;
    if (nb == 1) return detail::run_block(lo, hi, f).value();
    std::vector<KahanAcc> part(static_cast<std::size_t>(nb));
    for (std::int64_t b = 0; b < nb; ++b) {
        std::int64_t blo, bhi;
        detail::block_bounds(lo, hi, b, blo, bhi);
        part[static_cast<std::size_t>(b)] = detail::run_block(blo, bhi, f);
    }
    KahanAcc total;
    for (const auto& p : part) {
        total.add(p.sum);
        total.add(p.carry);
    }
    return total.value();
}

/// Resume a checkpointed compensated prefix over [lo, hi) on top of `state`.
/// Same block decomposition as blocked_sum, parallel inner blocks.
template <class F>
KahanAcc blocked_extend(KahanAcc state, std::int64_t lo, std::int64_t hi, const F& f) {
    const std::int64_t nb = detail::block_count(lo, hi);
    if (nb == 0) return state;
    std::vector<KahanAcc> part(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static) if (nb > 4)
    for (std::int64_t b = 0; b < nb; ++b) {
        std::int64_t blo, bhi;
        detail::block_bounds(lo, hi, b, blo, bhi);
        part[static_cast<std::size_t>(b)] = detail::run_block(blo, bhi, f);
    }
    for (const auto& p : part) {
        state.add(p.sum);
        state.add(p.carry);
    }
    return state;
}

struct MinMax {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    std::int64_t argmin = -1;
    std::int64_t argmax = -1;

    void take(double v, std::int64_t i) {
        if (v < mn) { mn = v; argmin = i; }
        if (v > mx) { mx = v; argmax = i; }
    }
    // Merged in block order, so strict < keeps the first-seen extremum.
    void merge(const MinMax& o) {
        if (o.argmin >= 0 && (argmin < 0 || o.mn < mn)) { mn = o.mn; argmin = o.argmin; }
        if (o.argmax >= 0 && (argmax < 0 || o.mx > mx)) { mx = o.mx; argmax = o.argmax; }
    }
};

/// Parallel min/max of f(i) over [lo, hi); merge order fixed (block order),
/// ties resolved toward the smaller index.
template <class F>
MinMax blocked_minmax(std::int64_t lo, std::int64_t hi, const F& f) {
    const std::int64_t nb = detail::block_count(lo, hi);
    MinMax total;
    if (nb == 0) return total;
    std::vector<MinMax> part(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static) if (nb > 1)
    for (std::int64_t b = 0; b < nb; ++b) {
        std::int64_t blo, bhi;
        detail::block_bounds(lo, hi, b, blo, bhi);
        MinMax m;
        for (std::int64_t i = blo; i < bhi; ++i) m.take(f(i), i);
        part[static_cast<std::size_t>(b)] = m;
    }
    for (const auto& p : part) total.merge(p);
    return total;
}

template <class F>
MinMax blocked_minmax_serial(std::int64_t lo, std::int64_t hi, const F& f) {
    const std::int64_t nb = detail::block_count(lo, hi);
    MinMax total;
    if (nb == 0) return total;
    for (std::int64_t b = 0; b < nb; ++b) {
        std::int64_t blo, bhi;
        detail::block_bounds(lo, hi, b, blo, bhi);
        MinMax m;
        for (std::int64_t i = blo; i < bhi; ++i) m.take(f(i), i);
        total.merge(m);
    }
    return total;
}

}  // namespace singtrace::kernels
