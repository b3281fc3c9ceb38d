#pragma once

#include <optional>
#include <string>

#include "singtrace/convergence.hpp"
#include "singtrace/marcinkiewicz.hpp"

namespace singtrace {

enum class RestrictedVerdict { pass_strong, pass_F, fail, undetermined };

const char* to_string(RestrictedVerdict v);

struct GrowthVerdict {
    RestrictedVerdict restricted = RestrictedVerdict::undetermined;
    std::optional<double> dominated_C;    // C_dom, re-verifiable with 10% slack
    std::optional<double> exponential_C;  // C_exp, re-verifiable with 10% slack
    double horizon = 0.0;
    std::string diagnostics;
};

/// r_n = psi(kappa(n))/psi(kappa(n+1)): pass_strong when the plain limit is 1,
/// pass_F when only the uniform-Cesaro evidence accepts r_n -> 1, fail when
/// the Cesaro band of r_n excludes 1.
RestrictedVerdict restricted_growth_check(const KappaFunction& kappa, const PsiFunction& psi,
                                          std::int64_t horizon_n, std::string* diag = nullptr);

/// sup over the grid of t (psi∘kappa)'(t) / (psi∘kappa)(t), plus 10% slack;
/// absent when the product keeps growing through the horizon.
std::optional<double> dominated_growth_check(const KappaFunction& kappa, const PsiFunction& psi,
                                             double horizon);

/// Least C (plus 10% slack) with kappa(t + C) > 2 kappa(t) for all grid t;
/// absent when the required shift grows with t.
std::optional<double> exponential_increase_check(const KappaFunction& kappa, double horizon);

/// All three classifiers on one (kappa, psi) pair.
GrowthVerdict classify_kappa(const KappaFunction& kappa, const PsiFunction& psi,
                             double horizon);

enum class DichotomyVerdict { pass, fail, undetermined };

const char* to_string(DichotomyVerdict v);

struct PsiDichotomies {
    DichotomyVerdict A = DichotomyVerdict::undetermined;  // liminf psi(2t)/psi(t) = 1
    DichotomyVerdict B = DichotomyVerdict::undetermined;  // lim psi(2t)/psi(t) = 1
    DichotomyVerdict C = DichotomyVerdict::undetermined;  // ratio-1 = O(psi^{-1/C})
    std::optional<double> fitted_C;
    double fit_r2 = 0.0;
    double horizon = 0.0;
    std::string consequences;  // which of R_exp / SR_exp / D_exp are non-empty
};

/// The doubling dichotomies: d(t) = psi(2t)/psi(t) - 1 on a log grid; the
/// C-fit regresses log d against log psi over the top two decades (R^2 >= .99).
PsiDichotomies psi_dichotomies(const PsiFunction& psi, double horizon);

}  // namespace singtrace
