#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "singtrace/errors.hpp"
#include "singtrace/kernels.hpp"

namespace singtrace {

/// Element of l^infinity(N), indices n >= 1, lazy. The declared bound is a
/// hypothesis, not an inferred fact; violations on access are hard errors.
class BoundedSequence {
  public:
    BoundedSequence(std::function<double(std::int64_t)> terms, double declared_bound,
                    std::string name = "");

    double at(std::int64_t n) const;  // checks |a_n| <= declared_bound
    double bound() const { return bound_; }
    const std::string& name() const { return name_; }

    /// T_k alpha = {a_{n+k}}
    BoundedSequence translate(std::int64_t k) const;

  private:
    std::function<double(std::int64_t)> terms_;
    double bound_;
    std::string name_;
};

enum class Smoothness { continuous, piecewise_differentiable, differentiable };

/// Element of C_b([0, inf)), lazy, with an optional derivative rule.
class BoundedFunction {
  public:
    BoundedFunction(std::function<double(double)> eval, double declared_bound,
                    Smoothness smoothness = Smoothness::continuous,
                    std::function<double(double)> derivative = nullptr,
                    std::string name = "");

    double operator()(double t) const;  // checks |g(t)| <= declared_bound
    double bound() const { return bound_; }
    Smoothness smoothness() const { return smoothness_; }
    bool has_derivative() const { return static_cast<bool>(derivative_); }
    double derivative(double t) const;
    const std::string& name() const { return name_; }

    BoundedFunction translate(double s) const;  // T_s g = g(. + s)

    /// Finite-difference audit of the supplied derivative at t: returns the
    /// discrepancy |(g(t+h)-g(t))/h - g'(t)|, which should be O(h).
    double derivative_audit(double t, double h) const;

  private:
    std::function<double(double)> eval_;
    double bound_;
    Smoothness smoothness_;
    std::function<double(double)> derivative_;
    std::string name_;
};

struct StepPiece {
    double value;    // >= 0
    double measure;  // > 0
};

/// Closed-form singular-value function: mu(t) plus the partial integral
/// F(t) = int_0^t mu, both optionally evaluable against v = log t so the
/// exp-reparameterized pipeline can reach t = e^u for u up to ~1e7.
struct AnalyticMu {
    std::function<double(double)> mu;                 // t -> mu_t, non-increasing
    std::function<double(double)> partial_integral;   // t -> int_0^t mu
    std::function<double(double)> partial_integral_logt;  // v -> int_0^{e^v} mu (optional)
    std::function<double(double)> t_mu_logt;              // v -> e^v mu_{e^v} (optional)
};

/// The operator surrogate: a non-negative non-increasing sequence {s_n}, a
/// finite step function, or a closed-form mu_t. mu_t for the sequence form is
/// the right-continuous step mu_t = s_ceil(t), which makes
/// int_0^N mu = sum_{n<=N} s_n exact.
class SingularValueData {
  public:
    enum class Rep { sequence, step_function, analytic };

    static SingularValueData from_sequence(std::function<double(double)> s,
                                           std::string id = "sequence");
    static SingularValueData from_steps(std::vector<StepPiece> pieces,
                                        std::string id = "steps");
    static SingularValueData from_analytic(AnalyticMu a, std::string id = "analytic");

    Rep rep() const { return rep_; }
    const std::string& id() const { return id_; }

    double mu(double t) const;               // monotonicity-checked on access
    double prefix_integral(double t) const;  // int_0^t mu_s ds
    /// int_0^{e^v} mu_s ds, stable for huge v when the data supports log-scale
    /// evaluation (closed forms); otherwise requires e^v representable.
    double prefix_integral_logt(double v) const;
    bool supports_log_scale() const;

    /// e^v * mu_{e^v}, stable for huge v on log-scale data.
    double t_mu_logt(double v) const;

    /// Sequence view (sequence and step data only): s_n at a real index; used
    /// by the zeta/heat ladders which walk far beyond any prefix horizon.
    bool has_terms() const;
    double term(double n) const;

    /// Largest index with a nonzero term if the data is finitely supported.
    std::optional<double> finite_support() const;

    SingularValueData scaled(double lambda) const;

    /// Concatenate-and-rearrange: merged non-increasing union of both term
    /// streams (sequence/step data only).
    static SingularValueData direct_sum(const SingularValueData& a,
                                        const SingularValueData& b);

  private:
    SingularValueData() = default;

    Rep rep_ = Rep::sequence;
    std::string id_;
    std::function<double(double)> terms_;  // sequence rep
    std::vector<StepPiece> pieces_;        // step rep, sorted by value desc
    AnalyticMu analytic_;                  // analytic rep
    std::optional<double> finite_support_;

    // Prefix-sum engine for the sequence rep: compensated checkpoints along a
    // fixed geometric ladder (ratio 2^{1/4}, so every power of 2 is one),
    // extended deterministically; the value of prefix(n) depends on n only,
    // never on query history.
    struct PrefixEngine {
        std::vector<std::int64_t> ladder;
        std::vector<kernels::KahanAcc> checkpoints;  // checkpoints[i] = prefix(ladder[i])
        std::mutex m;
    };
    std::shared_ptr<PrefixEngine> prefix_;

    double sequence_prefix(double t) const;
    kernels::KahanAcc checkpoint_le(std::int64_t n, std::int64_t* base) const;
};

/// x* as a sorted step function via the distribution-function definition.
SingularValueData decreasing_rearrangement(std::vector<StepPiece> pieces);

/// p: l^inf -> C_b, linear interpolation through (n, a_n) with a_0 = 0.
BoundedFunction piecewise_linear_extension(const BoundedSequence& alpha);

/// r_N: g -> {g(n)}
BoundedSequence restrict_to_integers(const BoundedFunction& g);

/// E_N: g -> {int_{n-1}^n g}, quadrature error < 1e-9 * bound per interval.
BoundedSequence integer_averages(const BoundedFunction& g);

}  // namespace singtrace
