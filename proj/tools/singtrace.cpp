#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "singtrace/dixmier.hpp"
#include "singtrace/families.hpp"
#include "singtrace/growth.hpp"
#include "singtrace/io.hpp"
#include "singtrace/verify.hpp"
#include "singtrace/version.hpp"

namespace {

using singtrace::io::InputKind;
using singtrace::io::InputSpec;

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw singtrace::InvalidInput("--param expects key=value, got '" + kv + "'");
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

void apply_thread_cap(int flag_threads) {
#ifdef _OPENMP
    int cap = flag_threads;
    if (const char* env = std::getenv("SINGTRACE_THREADS")) {
        const int e = std::atoi(env);
        if (e > 0) cap = (cap > 0) ? std::min(cap, e) : e;
    }
    if (cap > 0) omp_set_num_threads(cap);
#else
    (void)flag_threads;
#endif
}

void emit(const nlohmann::json& envelope, const std::string& format) {
    if (format == "text")
        std::cout << singtrace::io::render_text(envelope);
    else
        std::cout << envelope.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"singtrace: Dixmier-trace analysis of singular-value data"};
    app.set_version_flag("--version", singtrace::kToolVersion);
    app.fallthrough();

    double horizon = 1e6;
    double tol = 1e-2;
    std::string format = "json";
    std::uint64_t seed = 42;
    bool strict = false, timing = false, quick = false;
    int threads = 0;
    app.add_option("--horizon", horizon, "analysis horizon")->capture_default_str();
    app.add_option("--tol", tol, "convergence tolerance")->capture_default_str();
    app.add_option("--format", format, "json|text")->capture_default_str();
    app.add_option("--seed", seed, "corpus seed")->capture_default_str();
    app.add_flag("--strict", strict, "promote numeric diagnostics to exit 3");
    app.add_flag("--timing", timing, "include wall time in the report envelope");
    app.add_option("--threads", threads, "cap worker threads (also SINGTRACE_THREADS)");

    std::string family, input_path, input_kind = "csv";
    std::vector<std::string> params;
    std::string psi_name = "log1p", kappa_name = "exp";

    auto* analyze = app.add_subcommand("analyze", "full trace report for one input");
    analyze->add_option("--family", family, "named family");
    analyze->add_option("--param", params, "family parameter key=value")->take_all();
    analyze->add_option("--input", input_path, "input file");
    analyze->add_option("--kind", input_kind, "csv|json|steps")->capture_default_str();

    auto* classify_kappa = app.add_subcommand("classify-kappa", "growth classifiers for kappa");
    classify_kappa->add_option("--kappa", kappa_name, "kappa name")->capture_default_str();
    classify_kappa->add_option("--psi", psi_name, "psi name")->capture_default_str();
    classify_kappa->add_option("--param", params, "parameter key=value")->take_all();

    auto* band = app.add_subcommand("band", "Cesaro band of a sequence or closed form");
    band->add_option("--family", family, "named family");
    band->add_option("--param", params, "family parameter key=value")->take_all();
    band->add_option("--input", input_path, "input file");
    band->add_option("--kind", input_kind, "csv|json|steps")->capture_default_str();

    auto* psi_check = app.add_subcommand("psi-check", "doubling dichotomies for psi");
    psi_check->add_option("--psi", psi_name, "psi name")->capture_default_str();
    psi_check->add_option("--param", params, "parameter key=value")->take_all();

    auto* verify = app.add_subcommand("verify", "run the full property corpus");
    verify->add_flag("--quick", quick, "trimmed corpus sizes");

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);
    apply_thread_cap(threads);

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        InputSpec spec;
        spec.horizon = horizon;
        spec.tolerances["tol"] = tol;
        if (!family.empty()) {
            spec.kind = InputKind::named_family;
            spec.family_name = family;
            spec.family_params = parse_params(params);
        } else if (!input_path.empty()) {
            spec.path = input_path;
            spec.kind = (input_kind == "json")    ? InputKind::json_sequence
                        : (input_kind == "steps") ? InputKind::step_function
                                                  : InputKind::csv_sequence;
        }

        if (*analyze) {
            singtrace::SingularValueData x = singtrace::io::ingest(spec);
            singtrace::TraceOptions opts;
            opts.tol = tol;
            const singtrace::TraceReport rep = singtrace::trace_analyze(x, horizon, opts);
            nlohmann::json results = singtrace::io::to_json(rep);
            results["type"] = "trace_report";
            emit(singtrace::io::make_envelope(
                     spec, results, timing ? std::optional<double>(elapsed()) : std::nullopt),
                 format);
            std::cerr << "wall time " << elapsed() << " s\n";
            if (strict && !rep.trace_band.stabilized) return 3;
            return 0;
        }
        if (*classify_kappa) {
            const auto p = parse_params(params);
            const auto kappa = singtrace::families::make_kappa(kappa_name, p);
            const auto psi = singtrace::families::make_psi(psi_name, p);
            const singtrace::GrowthVerdict v = singtrace::classify_kappa(kappa, psi, horizon);
            nlohmann::json results = singtrace::io::to_json(v);
            results["type"] = "growth_verdict";
            results["kappa"] = kappa.name();
            results["psi"] = psi.name();
            spec.kind = InputKind::named_family;
            spec.family_name = kappa.name() + "|" + psi.name();
            emit(singtrace::io::make_envelope(
                     spec, results, timing ? std::optional<double>(elapsed()) : std::nullopt),
                 format);
            std::cerr << "wall time " << elapsed() << " s\n";
            return 0;
        }
        if (*band) {
            singtrace::SingularValueData x = singtrace::io::ingest(spec);
            nlohmann::json results;
            if (x.has_terms()) {
                singtrace::BoundedSequence s(
                    [&x](std::int64_t n) { return x.term(static_cast<double>(n)); },
                    x.term(1.0) * 1.000001 + 1e-12);
                const auto v = singtrace::classify(
                    s, static_cast<std::int64_t>(std::max(1e3, horizon)), tol);
                results = singtrace::io::to_json(v);
                results["type"] = "convergence_verdict";
            } else {
                const auto bounds = singtrace::trace_band_bounds(x, horizon);
                results = nlohmann::json{{"band", singtrace::io::to_json(bounds.band)},
                                         {"riesz_upper", bounds.riesz_upper},
                                         {"diagnostics", bounds.diagnostics}};
                results["tauberian_lower"] = bounds.tauberian_lower
                                                 ? nlohmann::json(*bounds.tauberian_lower)
                                                 : nlohmann::json(nullptr);
                results["type"] = "trace_band_bounds";
            }
            emit(singtrace::io::make_envelope(
                     spec, results, timing ? std::optional<double>(elapsed()) : std::nullopt),
                 format);
            std::cerr << "wall time " << elapsed() << " s\n";
            return 0;
        }
        if (*psi_check) {
            const auto psi = singtrace::families::make_psi(psi_name, parse_params(params));
            const auto v = singtrace::psi_dichotomies(psi, std::max(horizon, 1e6));
            nlohmann::json results = singtrace::io::to_json(v);
            results["type"] = "psi_dichotomies";
            results["psi"] = psi.name();
            spec.kind = InputKind::named_family;
            spec.family_name = psi.name();
            emit(singtrace::io::make_envelope(
                     spec, results, timing ? std::optional<double>(elapsed()) : std::nullopt),
                 format);
            std::cerr << "wall time " << elapsed() << " s\n";
            return 0;
        }
        if (*verify) {
            const singtrace::VerifySummary sum = singtrace::run_verify(seed, quick);
            nlohmann::json props = nlohmann::json::array();
            for (const auto& r : sum.results) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
                if (!r.pass) std::cout << ": " << r.detail;
                std::cout << '\n';
                props.push_back(nlohmann::json{
                    {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
            }
            nlohmann::json results{{"type", "verify_summary"},
                                   {"failures", sum.failures},
                                   {"properties", props},
                                   {"seed", seed}};
            spec.kind = InputKind::named_family;
            spec.family_name = "verify";
            emit(singtrace::io::make_envelope(
                     spec, results, timing ? std::optional<double>(elapsed()) : std::nullopt),
                 format);
            std::cerr << "wall time " << elapsed() << " s\n";
            return sum.failures == 0 ? 0 : 1;
        }
    } catch (const singtrace::InvalidInput& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const singtrace::NotInSpace& e) {
        std::cerr << "not in space: " << e.what() << " (witness t=" << e.witness_t << ")\n";
        return 2;
    } catch (const singtrace::NumericDiagnostic& e) {
        std::cerr << "numeric diagnostic: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
