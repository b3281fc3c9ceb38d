#include "singtrace/families.hpp"

#include <cmath>

namespace singtrace::families {

SingularValueData harmonic(double scale) {
    if (!(scale > 0.0)) throw InvalidInput("harmonic scale must be > 0");
    return SingularValueData::from_sequence([scale](double n) { return scale / n; },
                                            "harmonic(" + std::to_string(scale) + ")");
}

SingularValueData finite_rank(std::int64_t rank, double value) {
    if (rank < 1 || !(value > 0.0)) throw InvalidInput("finite_rank needs rank >= 1, value > 0");
    return SingularValueData::from_steps({{value, static_cast<double>(rank)}},
                                         "finite_rank(" + std::to_string(rank) + "," +
                                             std::to_string(value) + ")");
}

SingularValueData power(double alpha) {
    if (!(alpha > 0.0)) throw InvalidInput("power alpha must be > 0");
    return SingularValueData::from_sequence([alpha](double n) { return std::pow(n, -alpha); },
                                            "power(" + std::to_string(alpha) + ")");
}

SingularValueData geometric(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidInput("geometric needs 0 < rho < 1");
    const double lr = std::log(rho);
    return SingularValueData::from_sequence([lr](double n) { return std::exp(n * lr); },
                                            "geometric(" + std::to_string(rho) + ")");
}

SingularValueData constant(double scale) {
    if (!(scale > 0.0)) throw InvalidInput("constant scale must be > 0");
    return SingularValueData::from_sequence([scale](double) { return scale; },
                                            "constant(" + std::to_string(scale) + ")");
}

SingularValueData harmonic_plus_bump(double scale, std::int64_t rank, double value) {
    if (!(scale > 0.0) || rank < 1 || !(value >= 0.0))
        throw InvalidInput("harmonic_plus_bump parameters out of range");
    const double r = static_cast<double>(rank);
    return SingularValueData::from_sequence(
        [scale, r, value](double n) { return scale / n + (n <= r ? value : 0.0); },
        "harmonic_plus_bump(" + std::to_string(scale) + "," + std::to_string(rank) + "," +
            std::to_string(value) + ")");
}

SingularValueData log_oscillator(double amp, double phase, double scale) {
    const bool safe = (amp > 0.0) && (amp <= 0.47 || (amp <= 0.5 && phase == 0.0));
    if (!safe)
        throw InvalidInput("log_oscillator amplitude must be <= 0.47 (<= 0.5 at phase 0) "
                           "to keep mu non-increasing");
    if (!(scale > 0.0)) throw InvalidInput("log_oscillator scale must be > 0");
    const double v0 = 2.0;  // splice at t = e^2
    // F(t) = scale (1 + amp sin(log log t + phase)) log t above the splice
    const auto big_F_logt = [amp, phase, scale, v0](double v) {
        return scale * (1.0 + amp * std::sin(std::log(v) + phase)) * v;
    };
    const double f0 = big_F_logt(v0);
    const double c = f0 / std::exp(v0);  // linear ramp slope below the splice

    AnalyticMu a;
    a.partial_integral_logt = [big_F_logt, c, v0](double v) {
        if (v >= v0) return big_F_logt(v);
        return c * std::exp(v);
    };
    a.partial_integral = [big_F_logt, c, v0](double t) {
        if (t <= 0.0) return 0.0;
        const double v = std::log(t);
        if (v >= v0) return big_F_logt(v);
        return c * t;
    };
    // t mu_t = scale (1 + amp (sin + cos)(log log t + phase)) above the splice
    a.t_mu_logt = [amp, phase, scale, c, v0](double v) {
        if (v >= v0) {
            const double w = std::log(v) + phase;
            return scale * (1.0 + amp * (std::sin(w) + std::cos(w)));
        }
        return c * std::exp(v);
    };
    a.mu = [amp, phase, scale, c, v0](double t) {
        if (t <= 0.0) return c;
        const double v = std::log(t);
        if (v < v0) return c;
        const double w = std::log(v) + phase;
        return scale * (1.0 + amp * (std::sin(w) + std::cos(w))) / t;
    };
    return SingularValueData::from_analytic(
        a, "log_oscillator(" + std::to_string(amp) + "," + std::to_string(phase) + "," +
               std::to_string(scale) + ")");
}

SingularValueData inv_linear(double scale) {
    if (!(scale > 0.0)) throw InvalidInput("inv_linear scale must be > 0");
    AnalyticMu a;
    a.mu = [scale](double t) { return scale / (1.0 + t); };
    a.partial_integral = [scale](double t) { return scale * std::log1p(t); };
    a.partial_integral_logt = [scale](double v) {
        // log(1 + e^v) = v + log(1 + e^{-v})
        if (v > 36.0) return scale * (v + std::exp(-v));
        return scale * std::log1p(std::exp(v));
    };
    a.t_mu_logt = [scale](double v) {
        if (v > 36.0) return scale;
        return scale / (1.0 + std::exp(-v));
    };
    return SingularValueData::from_analytic(a, "inv_linear(" + std::to_string(scale) + ")");
}

namespace {
double param(const std::map<std::string, double>& p, const std::string& key, double dflt) {
    const auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}
}  // namespace

SingularValueData make_family(const std::string& name,
                              const std::map<std::string, double>& p) {
    if (name == "harmonic") return harmonic(param(p, "scale", 1.0));
    if (name == "finite_rank")
        return finite_rank(static_cast<std::int64_t>(param(p, "rank", 5.0)),
                           param(p, "value", 1.0));
    if (name == "power") return power(param(p, "alpha", 1.5));
    if (name == "geometric") return geometric(param(p, "rho", 0.5));
    if (name == "constant") return constant(param(p, "scale", 1.0));
    if (name == "harmonic_plus_bump")
        return harmonic_plus_bump(param(p, "scale", 1.0),
                                  static_cast<std::int64_t>(param(p, "rank", 10.0)),
                                  param(p, "value", 1.0));
    if (name == "log_oscillator")
        return log_oscillator(param(p, "amp", 0.5), param(p, "phase", 0.0),
                              param(p, "scale", 1.0));
    if (name == "inv_linear") return inv_linear(param(p, "scale", 1.0));
    throw InvalidInput("unknown family: " + name);
}

PsiFunction make_psi(const std::string& name, const std::map<std::string, double>& p) {
    if (name == "identity") return psi_identity();
    if (name == "log1p") return psi_log1p();
    if (name == "pow") return psi_pow(param(p, "alpha", 0.5));
    if (name == "logpow") return psi_logpow(param(p, "alpha", 0.5));
    if (name == "loglog") return psi_loglog();
    throw InvalidInput("unknown psi: " + name);
}

KappaFunction make_kappa(const std::string& name, const std::map<std::string, double>& p) {
    if (name == "identity") return kappa_identity();
    if (name == "exp") return kappa_exp();
    if (name == "expm1") return kappa_expm1();
    if (name == "pow2t") return kappa_pow2t();
    if (name == "pow") return kappa_pow(param(p, "p", 2.0));
    if (name == "psi_inverse") {
        std::map<std::string, double> q = p;
        const double which = param(p, "psi", 1.0);
        // psi selector: 0 identity, 1 log1p, 2 pow, 3 logpow, 4 loglog
        const char* names[] = {"identity", "log1p", "pow", "logpow", "loglog"};
        const int idx = std::max(0, std::min(4, static_cast<int>(which)));
        return kappa_psi_inverse(make_psi(names[idx], q));
    }
    throw InvalidInput("unknown kappa: " + name);
}

std::vector<std::string> family_names() {
    return {"harmonic", "finite_rank",        "power",         "geometric",
            "constant", "harmonic_plus_bump", "log_oscillator", "inv_linear"};
}
std::vector<std::string> psi_names() { return {"identity", "log1p", "pow", "logpow", "loglog"}; }
std::vector<std::string> kappa_names() {
    return {"identity", "exp", "expm1", "pow2t", "pow", "psi_inverse"};
}

}  // namespace singtrace::families
