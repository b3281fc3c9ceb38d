#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singtrace/analysis.hpp"
#include "singtrace/marcinkiewicz.hpp"

namespace singtrace {

/// Finite-horizon estimate of liminf/limsup of a Cesaro transform.
struct CesaroBand {
    double lo = 0.0;
    double hi = 0.0;
    double horizon = 0.0;
    bool stabilized = false;  // band at horizon/10 contains this one (tol 1e-2)
    bool collapsed = false;   // drift-fit residual of the means below tolerance
    double fit_limit = 0.0;   // extrapolated limit of the means

    double width() const { return hi - lo; }
};

enum class ConvClass { S_convergent, F_almost_convergent, C_cesaro_convergent, undetermined };

const char* to_string(ConvClass c);

struct ConvergenceVerdict {
    ConvClass cls = ConvClass::undetermined;
    std::optional<double> limit;
    CesaroBand band;
    std::optional<double> tauberian_H;
    std::string diagnostics;
};

/// C(g)(mu) = (1/mu) int_0^mu g.
double cesaro_transform(const BoundedFunction& g, double mu);

/// Restarted Cesaro means: c_i = (int_{u0}^{mu_i} f) / (mu_i - u0) for an
/// increasing grid, computed by cumulative segment quadrature. The restart
/// point u0 suppresses transients; Banach limits cannot see them anyway.
struct MeanSeries {
    std::vector<double> mu;
    std::vector<double> c;
    double restart_u0 = 0.0;
};
/// tol_factor scales the per-segment absolute tolerance (relative to
/// value_scale * segment length); unit-period sawtooth integrands (extensions
/// of alternating sequences) cap out the split budget, so callers that only
/// need band-grade accuracy pass a loose factor and a small budget.
MeanSeries restarted_means(const std::function<double(double)>& f, double u0,
                           std::vector<double> mu_grid, double value_scale,
                           double tol_factor = 1e-11, int max_intervals = 4000);

/// Convergence-at-infinity evidence from samples (u_i, y_i), trailing region:
/// least-squares drift fit y = A + B/u, converged when the residual spread is
/// below tol and the fitted limits of the two halves agree within tol.
struct LimitEvidence {
    bool converged = false;
    double limit = 0.0;
    double residual = 0.0;
    double disagreement = 0.0;
};
LimitEvidence limit_evidence(std::span<const double> u, std::span<const double> y, double tol);

/// Same machinery with an explicit drift basis b_i (b -> 0 at infinity):
/// fits y = A + B b and judges convergence on residuals and half agreement.
/// Restarted means of a 1/u drift follow log(mu/u0)/(mu-u0), not 1/mu, so the
/// band analysis passes that basis in.
LimitEvidence limit_evidence_basis(std::span<const double> basis, std::span<const double> y,
                                   double tol);

/// Inner band of attainable generalized-limit values: min/max of restarted means over
/// [horizon/535.5, horizon] (one full period of log-scale oscillation),
/// restart at horizon/2e5.
CesaroBand cesaro_band(const BoundedFunction& g, double horizon, double tol = 1e-2);

/// Lorentz uniform-window test: b_n(p) = (1/n) sum_{i<n} a_{p+i} must be flat
/// in p for large n. Evidence, never proof.
ConvergenceVerdict almost_convergence_test(const BoundedSequence& alpha,
                                           std::int64_t horizon_n, double tol);

/// Smallest H (with 10% slack) such that t g'(t) > -H on the sampled grid;
/// absent when the product keeps falling through the horizon. Also certifies
/// the discrete shadow n(g(n) - g(n-1)) > -2H.
std::optional<double> tauberian_derivative_bound(const BoundedFunction& g, double horizon);

/// M_k(g)(lambda) = (1/k(lambda)) int_0^lambda g dk. Requires k(0) = 0.
double m_k_transform(const BoundedFunction& g, const KappaFunction& k, double lambda);

/// Strongest passing class among S (plain limit), F (uniform windows),
/// C (Cesaro), with undetermined as a valid outcome.
ConvergenceVerdict classify(const BoundedFunction& g, double horizon, double tol);
ConvergenceVerdict classify(const BoundedSequence& alpha, std::int64_t horizon_n, double tol);

}  // namespace singtrace
