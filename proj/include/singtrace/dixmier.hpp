#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "singtrace/convergence.hpp"

namespace singtrace {

struct CrossCheck {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool usable = false;
    std::string note;
};

struct TraceOptions {
    bool with_zeta = true;
    bool with_heat = true;
    double tol = 1e-2;
    double zeta_direct_terms = 1e6;  // direct-summation budget per rung
    std::vector<double> s_ladder = {1.4, 1.2, 1.1, 1.05};
    std::vector<double> eps_ladder = {0.1, 0.05, 0.025, 0.0125};
};

/// Everything the trace pipeline knows about one operator surrogate at one
/// horizon. psi = log(1+t) and kappa = e^t - 1 are fixed here; other gauges
/// stay available through the marcinkiewicz/convergence modules.
struct TraceReport {
    std::string input_id;
    double horizon = 0.0;
    bool exp_horizon_clamped = false;  // sequence data: u capped at log(1+horizon)

    ConvergenceVerdict measurable;  // Cesaro side of phi∘exp
    ConvergenceVerdict tauberian;   // plain limit of phi
    bool is_measurable = false;

    std::optional<double> trace_value;  // extrapolated Tauberian limit
    double trace_raw = 0.0;             // phi at the horizon
    double trace_extrapolated = 0.0;
    CesaroBand trace_band;

    double riesz = 0.0;  // rho_1 estimate
    double norm = 0.0;   // Marcinkiewicz norm at the horizon
    std::optional<double> tauberian_H;

    std::optional<CrossCheck> zeta_residue;
    std::optional<CrossCheck> heat_kernel;
    std::map<std::string, double> consistency;
    std::string diagnostics;
};

TraceReport trace_analyze(const SingularValueData& x, double horizon,
                          const TraceOptions& opts = {});

struct TraceBandBounds {
    CesaroBand band;
    double riesz_upper = 0.0;
    std::optional<double> tauberian_lower;  // (e H)^{-1} rho_1 when H certified
    std::string diagnostics;
};

TraceBandBounds trace_band_bounds(const SingularValueData& x, double horizon);

/// (s-1) sum_n s_n^s along the ladder, Richardson-extrapolated to s -> 1+.
CrossCheck zeta_residue(const SingularValueData& x, const std::vector<double>& s_ladder,
                        double direct_terms = 1e6);

/// 2 Gamma(1/2)^{-1} eps tau(exp(-(eps/s_n)^2)) along the ladder,
/// extrapolated to eps -> 0+. The literal exponent of the identity degenerates
/// to 0 and is evaluated in the diagnostic (see note field).
CrossCheck heat_kernel_estimate(const SingularValueData& x,
                                const std::vector<double>& eps_ladder);

struct NormingCheck {
    double riesz = 0.0;
    double sup_band_hi = 0.0;
    double delta = 0.0;  // riesz - sup_band_hi, should be >= -tol
    double cdix_lower = 0.0;  // (e H)^{-1} riesz, should be <= sup_band_hi + tol
    bool holds = false;
};

NormingCheck norming_identity_check(const SingularValueData& x, double horizon);

}  // namespace singtrace
