#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "singtrace/analysis.hpp"

namespace singtrace {

/// Concave gauge psi in Omega_inf: psi(0+) = 0, psi(inf) = inf, with closed
/// derivative and inverse. Construction audits concavity, monotonicity, the
/// limits at 1e-8 / 1e12 and the inverse round-trip (rel 1e-9).
class PsiFunction {
  public:
    PsiFunction(std::function<double(double)> eval, std::function<double(double)> derivative,
                std::function<double(double)> inverse, std::string name);

    double operator()(double t) const { return eval_(t); }
    double derivative(double t) const { return deriv_(t); }
    double inverse(double y) const { return inverse_(y); }
    const std::string& name() const { return name_; }

  private:
    void audit() const;
    std::function<double(double)> eval_, deriv_, inverse_;
    std::string name_;
};

/// Strictly increasing, invertible, differentiable, unbounded
/// reparameterization. kappa(0) = 0 unless the entry is an origin-shifted
/// equivalence-class representative (exp, 2^t), which the growth classifiers
/// accept but M_k rejects. t_max guards floating overflow (e.g. 700 for exp).
class KappaFunction {
  public:
    KappaFunction(std::function<double(double)> eval, std::function<double(double)> derivative,
                  std::function<double(double)> inverse, std::string name,
                  double t_max = std::numeric_limits<double>::infinity(),
                  bool origin_shifted = false);

    double operator()(double t) const { return eval_(t); }
    double derivative(double t) const { return deriv_(t); }
    double inverse(double y) const { return inverse_(y); }
    const std::string& name() const { return name_; }
    double t_max() const { return t_max_; }
    bool origin_shifted() const { return origin_shifted_; }

  private:
    void audit() const;
    std::function<double(double)> eval_, deriv_, inverse_;
    std::string name_;
    double t_max_;
    bool origin_shifted_;
};

// Shipped catalogue (the Omega_inf list plus the reparameterizations the
// trace pipeline and growth classifiers need).
PsiFunction psi_identity();
PsiFunction psi_log1p();
PsiFunction psi_pow(double alpha);     // t^alpha, 0 < alpha < 1
PsiFunction psi_logpow(double alpha);  // (log(1+t))^alpha, alpha > 0
PsiFunction psi_loglog();              // log(1+log(1+t))

KappaFunction kappa_identity();
KappaFunction kappa_exp();     // e^t, origin-shifted
KappaFunction kappa_expm1();   // e^t - 1
KappaFunction kappa_pow2t();   // 2^t, origin-shifted
KappaFunction kappa_pow(double p);  // t^p, p > 0
KappaFunction kappa_psi_inverse(const PsiFunction& psi);

/// phi(x)(t) = (1/psi(t)) int_0^t x*(s) ds, t > 0.
double weighted_mean(const SingularValueData& x, const PsiFunction& psi, double t);

enum class TailFlag { attained, increasing_at_horizon };

struct NormReport {
    double value = 0.0;
    double attained_at = 0.0;
    TailFlag tail = TailFlag::attained;
};

/// sup_t phi(x)(t) over a log grid refined near local maxima; throws
/// NotInSpace when phi keeps growing through the horizon.
NormReport marcinkiewicz_norm(const SingularValueData& x, const PsiFunction& psi,
                              double horizon);

struct RieszReport {
    double estimate = 0.0;
    double band_lo = 0.0;  // sup over the final trailing window
    double band_hi = 0.0;  // sup over all sampled t <= horizon
    double horizon_used = 0.0;
    bool stabilized = false;
    std::string diagnostics;
};

/// limsup_t phi(x)(t) at finite horizon: trailing half-decade window sups with
/// a two-window stabilization cascade; when no window pair stabilizes the
/// estimate widens to the global sup (the oscillation-exceeds-window path).
RieszReport riesz_seminorm(const SingularValueData& x, const PsiFunction& psi, double horizon);

struct WeightedMeanProfile {
    std::vector<std::pair<double, double>> samples;  // (t, phi_kappa(x)(t))
    double horizon = 0.0;
    std::string psi_name, kappa_name;
    bool horizon_clamped = false;
    std::string diagnostics;
};

/// Samples phi(x)(kappa(t)) on a log-spaced grid; clamps when kappa(horizon)
/// overflows the floating range and says so.
WeightedMeanProfile kappa_weighted_mean_profile(const SingularValueData& x,
                                                const PsiFunction& psi,
                                                const KappaFunction& kappa, double horizon,
                                                int grid_per_decade = 64);

/// Log-spaced grid helper, both endpoints included, deterministic.
std::vector<double> log_grid(double lo, double hi, int per_decade);

}  // namespace singtrace
