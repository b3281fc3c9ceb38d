#pragma once

#include <map>
#include <string>
#include <vector>

#include "singtrace/analysis.hpp"
#include "singtrace/marcinkiewicz.hpp"

namespace singtrace::families {

/// s_n = scale / n
SingularValueData harmonic(double scale = 1.0);

/// s_n = value for n <= rank, 0 after
SingularValueData finite_rank(std::int64_t rank, double value = 1.0);

/// s_n = n^{-alpha}
SingularValueData power(double alpha);

/// s_n = rho^n, 0 < rho < 1
SingularValueData geometric(double rho);

/// s_n = scale (not in M(log(1+t)); the divergence witness)
SingularValueData constant(double scale = 1.0);

/// s_n = scale/n + value 1_{n<=rank} (transient on top of harmonic)
SingularValueData harmonic_plus_bump(double scale, std::int64_t rank, double value);

/// The non-measurable witness: int_0^t mu = scale (1 + amp sin(log log t + phase)) log t
/// for t >= e^2, spliced to linear near 0. mu stays non-negative and
/// non-increasing for amp <= 0.47 (any phase) or amp <= 0.5 at phase 0.
SingularValueData log_oscillator(double amp = 0.5, double phase = 0.0, double scale = 1.0);

/// mu_t = scale/(1+t); phi is exactly constant, the cleanest measurable
/// closed form (trace = scale).
SingularValueData inv_linear(double scale = 1.0);

/// Registry lookups for the CLI; throws InvalidInput for unknown names.
SingularValueData make_family(const std::string& name,
                              const std::map<std::string, double>& params);
PsiFunction make_psi(const std::string& name, const std::map<std::string, double>& params);
KappaFunction make_kappa(const std::string& name, const std::map<std::string, double>& params);

std::vector<std::string> family_names();
std::vector<std::string> psi_names();
std::vector<std::string> kappa_names();

}  // namespace singtrace::families
