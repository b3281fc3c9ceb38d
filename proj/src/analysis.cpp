#include "singtrace/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "singtrace/quadrature.hpp"

namespace singtrace {

namespace {
constexpr double kBoundSlack = 1.0 + 1e-12;
}

// ---------------------------------------------------------------- sequences

BoundedSequence::BoundedSequence(std::function<double(std::int64_t)> terms,
                                 double declared_bound, std::string name)
    : terms_(std::move(terms)), bound_(declared_bound), name_(std::move(name)) {
    if (!(bound_ >= 0.0)) throw InvalidInput("declared_bound must be >= 0");
}

double BoundedSequence::at(std::int64_t n) const {
    if (n < 1) throw InvalidInput("sequence index must be >= 1");
    const double v = terms_(n);
    if (!(std::abs(v) <= bound_ * kBoundSlack))
        throw InvalidInput("sequence term exceeds declared bound at n=" + std::to_string(n));
    return v;
}

BoundedSequence BoundedSequence::translate(std::int64_t k) const {
    auto f = terms_;
    return BoundedSequence([f, k](std::int64_t n) { return f(n + k); }, bound_, name_);
}

// ---------------------------------------------------------------- functions

BoundedFunction::BoundedFunction(std::function<double(double)> eval, double declared_bound,
                                 Smoothness smoothness, std::function<double(double)> derivative,
                                 std::string name)
    : eval_(std::move(eval)),
      bound_(declared_bound),
      smoothness_(smoothness),
      derivative_(std::move(derivative)),
      name_(std::move(name)) {
    if (!(bound_ >= 0.0)) throw InvalidInput("declared_bound must be >= 0");
}

double BoundedFunction::operator()(double t) const {
    if (t < 0.0) throw InvalidInput("function argument must be >= 0");
    const double v = eval_(t);
    if (!(std::abs(v) <= bound_ * kBoundSlack + 1e-300))
        throw InvalidInput("function value exceeds declared bound at t=" + std::to_string(t));
    return v;
}

double BoundedFunction::derivative(double t) const {
    if (!derivative_) throw InvalidInput("derivative not available");
    return derivative_(t);
}

BoundedFunction BoundedFunction::translate(double s) const {
    auto f = eval_;
    auto d = derivative_;
    return BoundedFunction([f, s](double t) { return f(t + s); }, bound_, smoothness_,
                           d ? std::function<double(double)>([d, s](double t) { return d(t + s); })
                             : nullptr,
                           name_);
}

double BoundedFunction::derivative_audit(double t, double h) const {
    const double fd = (eval_(t + h) - eval_(t)) / h;
    return std::abs(fd - derivative(t));
}

// ---------------------------------------------------- singular value data

SingularValueData SingularValueData::from_sequence(std::function<double(double)> s,
                                                   std::string id) {
    SingularValueData x;
    x.rep_ = Rep::sequence;
    x.id_ = std::move(id);
    x.terms_ = std::move(s);
    x.prefix_ = std::make_shared<PrefixEngine>();
    // probe audit: non-negative and non-increasing along a geometric ladder
    double prev = x.term(1.0);
    for (double n = 1.0; n <= 65536.0; n *= 4.0) {
        const double a = x.term(std::floor(n));
        const double b = x.term(std::floor(n) + 1.0);
        if (b > a * (1.0 + 1e-12) + 1e-300 || a > prev * (1.0 + 1e-12) + 1e-300)
            throw InvalidInput(x.id_ + ": sequence not non-increasing near n=" +
                               std::to_string(n));
        prev = b;
    }
    return x;
}

SingularValueData SingularValueData::from_steps(std::vector<StepPiece> pieces, std::string id) {
    for (const auto& p : pieces) {
        if (!(p.measure > 0.0)) throw InvalidInput("step piece with non-positive measure");
        if (!(p.value >= 0.0)) throw InvalidInput("step piece with negative value");
        if (!std::isfinite(p.measure) && p.value > 0.0)
            throw InvalidInput("infinite measure with non-vanishing value is not in M(psi)");
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const StepPiece& x, const StepPiece& y) { return x.value > y.value; });
    std::vector<StepPiece> merged;
    for (const auto& p : pieces) {
        if (!merged.empty() && merged.back().value == p.value)
            merged.back().measure += p.measure;
        else
            merged.push_back(p);
    }
    SingularValueData x;
    x.rep_ = Rep::step_function;
    x.id_ = std::move(id);
    x.pieces_ = std::move(merged);
    double support = 0.0;
    for (const auto& p : x.pieces_)
        if (p.value > 0.0) support += p.measure;
    x.finite_support_ = support;
    return x;
}

SingularValueData SingularValueData::from_analytic(AnalyticMu a, std::string id) {
    if (!a.mu || !a.partial_integral)
        throw InvalidInput("analytic representation needs mu and partial_integral");
    SingularValueData x;
    x.rep_ = Rep::analytic;
    x.id_ = std::move(id);
    x.analytic_ = std::move(a);
    return x;
}

bool SingularValueData::has_terms() const { return rep_ != Rep::analytic; }

double SingularValueData::term(double n) const {
    switch (rep_) {
        case Rep::sequence: {
            const double v = terms_(n);
            if (!(v >= 0.0)) throw InvalidInput(id_ + ": negative singular value at n=" +
                                                std::to_string(n));
            return v;
        }
        case Rep::step_function: {
            double acc = 0.0;
            for (const auto& p : pieces_) {
                acc += p.measure;
                if (n <= acc) return p.value;
            }
            return 0.0;
        }
        case Rep::analytic:
            throw InvalidInput("analytic data has no term view");
    }
    return 0.0;
}

std::optional<double> SingularValueData::finite_support() const { return finite_support_; }

double SingularValueData::mu(double t) const {
    if (t < 0.0) throw InvalidInput("mu argument must be >= 0");
    switch (rep_) {
        case Rep::sequence:
            return term(std::max(1.0, std::ceil(t)));
        case Rep::step_function: {
            double acc = 0.0;
            for (const auto& p : pieces_) {
                acc += p.measure;
                if (t < acc) return p.value;
            }
            return 0.0;
        }
        case Rep::analytic: {
            const double v = analytic_.mu(t);
            if (!(v >= 0.0)) throw InvalidInput(id_ + ": negative mu at t=" + std::to_string(t));
            return v;
        }
    }
    return 0.0;
}

namespace {
constexpr double kLadderRatio = 1.18920711500272107;  // 2^{1/4}

std::int64_t ladder_next(std::int64_t v) {
    return std::max(v + 1, static_cast<std::int64_t>(std::floor(static_cast<double>(v) *
                                                                kLadderRatio)));
}
}  // namespace

kernels::KahanAcc SingularValueData::checkpoint_le(std::int64_t n, std::int64_t* base) const {
    // Ladder values and checkpoint states are built strictly in order, so
    // every checkpoint is a pure function of its ladder index.
    std::lock_guard<std::mutex> lock(prefix_->m);
    auto& lad = prefix_->ladder;
    auto& cp = prefix_->checkpoints;
    const auto f = [this](std::int64_t i) { return term(static_cast<double>(i)); };
    if (lad.empty()) {
        lad.push_back(1);
        kernels::KahanAcc a;
        a.add(term(1.0));
        cp.push_back(a);
    }
    for (std::int64_t next = ladder_next(lad.back()); next <= n; next = ladder_next(lad.back())) {
        cp.push_back(kernels::blocked_extend(cp.back(), lad.back() + 1, next + 1, f));
        lad.push_back(next);
    }
    const auto it = std::upper_bound(lad.begin(), lad.end(), n);
    const auto idx = static_cast<std::size_t>(it - lad.begin()) - 1;
    *base = lad[idx];
    return cp[idx];
}

double SingularValueData::sequence_prefix(double t) const {
    if (t <= 0.0) return 0.0;
    if (t > 2e9)
        throw NumericDiagnostic(id_ + ": prefix integral beyond 2e9 terms; use a closed form");
    const double fl = std::floor(t);
    const auto n = static_cast<std::int64_t>(fl);
    kernels::KahanAcc acc;
    if (n >= 1) {
        std::int64_t base = 0;
        acc = checkpoint_le(n, &base);
        const auto f = [this](std::int64_t i) { return term(static_cast<double>(i)); };
        acc = kernels::blocked_extend(acc, base + 1, n + 1, f);
    }
    const double frac = t - fl;
    if (frac > 0.0) acc.add(frac * term(fl + 1.0));
    return acc.value();
}

double SingularValueData::prefix_integral(double t) const {
    if (t < 0.0) throw InvalidInput("prefix integral argument must be >= 0");
    if (t == 0.0) return 0.0;
    switch (rep_) {
        case Rep::sequence:
            return sequence_prefix(t);
        case Rep::step_function: {
            double acc = 0.0, covered = 0.0;
            for (const auto& p : pieces_) {
                if (t <= covered) break;
                const double w = std::min(p.measure, t - covered);
                acc += w * p.value;
                covered += p.measure;
            }
            return acc;
        }
        case Rep::analytic:
            return analytic_.partial_integral(t);
    }
    return 0.0;
}

bool SingularValueData::supports_log_scale() const {
    return rep_ == Rep::analytic && static_cast<bool>(analytic_.partial_integral_logt);
}

double SingularValueData::prefix_integral_logt(double v) const {
    if (supports_log_scale()) return analytic_.partial_integral_logt(v);
    if (v > 700.0)
        throw NumericDiagnostic(id_ + ": exp horizon overflow, data has no log-scale form");
    return prefix_integral(std::exp(v));
}

double SingularValueData::t_mu_logt(double v) const {
    if (rep_ == Rep::analytic && analytic_.t_mu_logt) return analytic_.t_mu_logt(v);
    if (v > 700.0)
        throw NumericDiagnostic(id_ + ": exp overflow in t*mu, data has no log-scale form");
    const double t = std::exp(v);
    return t * mu(t);
}

SingularValueData SingularValueData::scaled(double lambda) const {
    if (!(lambda > 0.0)) throw InvalidInput("scale factor must be > 0");
    SingularValueData x;
    x.rep_ = rep_;
    x.id_ = id_ + "*" + std::to_string(lambda);
    x.finite_support_ = finite_support_;
    switch (rep_) {
        case Rep::sequence: {
            auto f = terms_;
            x.terms_ = [f, lambda](double n) { return lambda * f(n); };
            x.prefix_ = std::make_shared<PrefixEngine>();
            break;
        }
        case Rep::step_function: {
            x.pieces_ = pieces_;
            for (auto& p : x.pieces_) p.value *= lambda;
            break;
        }
        case Rep::analytic: {
            AnalyticMu a;
            auto src = analytic_;
            a.mu = [src, lambda](double t) { return lambda * src.mu(t); };
            a.partial_integral = [src, lambda](double t) {
                return lambda * src.partial_integral(t);
            };
            if (src.partial_integral_logt)
                a.partial_integral_logt = [src, lambda](double v) {
                    return lambda * src.partial_integral_logt(v);
                };
            if (src.t_mu_logt)
                a.t_mu_logt = [src, lambda](double v) { return lambda * src.t_mu_logt(v); };
            x.analytic_ = std::move(a);
            break;
        }
    }
    return x;
}

SingularValueData SingularValueData::direct_sum(const SingularValueData& a,
                                                const SingularValueData& b) {
    if (!a.has_terms() || !b.has_terms())
        throw InvalidInput("direct_sum needs term-level data on both sides");
    // Lazy two-stream merge would re-walk both prefixes per access; the traces
    // only need moderate horizons, so materialize on demand in chunks instead.
    auto ta = [a](double n) { return a.term(n); };
    auto tb = [b](double n) { return b.term(n); };
    struct MergeState {
        std::vector<double> merged;
        double ia = 1.0, ib = 1.0;
        std::mutex m;
    };
    auto st = std::make_shared<MergeState>();
    auto merged_term = [st, ta, tb](double n) -> double {
        std::lock_guard<std::mutex> lock(st->m);
        const auto need = static_cast<std::size_t>(n);
        while (st->merged.size() < need) {
            const double va = ta(st->ia);
            const double vb = tb(st->ib);
            if (va >= vb) {
                st->merged.push_back(va);
                st->ia += 1.0;
            } else {
                st->merged.push_back(vb);
                st->ib += 1.0;
            }
        }
        return st->merged[need - 1];
    };
    return from_sequence(merged_term, a.id() + "(+)" + b.id());
}

// ------------------------------------------------------------- operations

SingularValueData decreasing_rearrangement(std::vector<StepPiece> pieces) {
    return SingularValueData::from_steps(std::move(pieces), "rearranged");
}

BoundedFunction piecewise_linear_extension(const BoundedSequence& alpha) {
    const double b = alpha.bound();
    auto eval = [alpha](double t) -> double {
        if (t < 0.0) throw InvalidInput("p(alpha) argument must be >= 0");
        const double fl = std::floor(t);
        const auto n = static_cast<std::int64_t>(fl);
        const double an = (n == 0) ? 0.0 : alpha.at(n);  // a_0 = 0 by definition
        const double an1 = alpha.at(n + 1);
        return an + (an1 - an) * (t - fl);
    };
    return BoundedFunction(eval, b, Smoothness::piecewise_differentiable, nullptr,
                           "p(" + alpha.name() + ")");
}

BoundedSequence restrict_to_integers(const BoundedFunction& g) {
    return BoundedSequence(
        [g](std::int64_t n) { return g(static_cast<double>(n)); }, g.bound(),
        "r_N(" + g.name() + ")");
}

BoundedSequence integer_averages(const BoundedFunction& g) {
    const double tol = 1e-9 * std::max(g.bound(), 1e-300);
    return BoundedSequence(
        [g, tol](std::int64_t n) {
            const double a = static_cast<double>(n - 1);
            const double b = static_cast<double>(n);
            auto r = quad::integrate([&g](double t) { return g(t); }, a, b, tol, 1e-12);
            if (!r.converged)
                throw NumericDiagnostic("integer_averages: quadrature failed on [" +
                                        std::to_string(a) + "," + std::to_string(b) + "]");
            return r.value;
        },
        g.bound(), "E_N(" + g.name() + ")");
}

}  // namespace singtrace
