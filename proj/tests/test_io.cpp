#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "singtrace/dixmier.hpp"
#include "singtrace/io.hpp"

using namespace singtrace;
using singtrace::io::InputKind;
using singtrace::io::InputSpec;

namespace {
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "singtrace_test_" + std::to_string(counter++) + ".tmp";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

InputSpec file_spec(InputKind kind, const std::string& path) {
    InputSpec s;
    s.kind = kind;
    s.path = path;
    s.horizon = 1e4;
    return s;
}
}  // namespace

TEST_CASE("csv ingest: one value per row and comma rows both work") {
    TempFile rows("1.0\n0.5\n0.25\n");
    SingularValueData a = io::ingest(file_spec(InputKind::csv_sequence, rows.path));
    CHECK(a.term(1.0) == 1.0);
    CHECK(a.term(3.0) == 0.25);
    CHECK(a.finite_support().has_value());

    TempFile commas("1.0, 0.5, 0.25\n");
    SingularValueData b = io::ingest(file_spec(InputKind::csv_sequence, commas.path));
    CHECK(b.term(2.0) == 0.5);
    CHECK(b.prefix_integral(3.0) == 1.75);
}

TEST_CASE("csv ingest rejections carry the offending index") {
    TempFile increasing("0.5\n1.0\n");
    try {
        io::ingest(file_spec(InputKind::csv_sequence, increasing.path));
        CHECK(false);
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("index 2") != std::string::npos);
    }
    TempFile negative("1.0\n-0.5\n");
    CHECK_THROWS_AS(io::ingest(file_spec(InputKind::csv_sequence, negative.path)),
                    InvalidInput);
    TempFile empty("");
    CHECK_THROWS_AS(io::ingest(file_spec(InputKind::csv_sequence, empty.path)), InvalidInput);
}

TEST_CASE("json ingest: bare arrays and values objects") {
    TempFile arr("[4, 2, 1]");
    CHECK(io::ingest(file_spec(InputKind::json_sequence, arr.path)).term(1.0) == 4.0);
    TempFile obj("{\"values\": [4, 2, 1]}");
    CHECK(io::ingest(file_spec(InputKind::json_sequence, obj.path)).term(3.0) == 1.0);
}

TEST_CASE("step function ingest") {
    TempFile steps("[{\"value\": 2.0, \"measure\": 1.5}, {\"value\": 5.0, \"measure\": 0.5}]");
    SingularValueData s = io::ingest(file_spec(InputKind::step_function, steps.path));
    CHECK(s.mu(0.25) == 5.0);
    CHECK(s.mu(1.0) == 2.0);
    CHECK(s.prefix_integral(2.0) == 5.5);
}

TEST_CASE("named families resolve, unknown names rejected before compute") {
    InputSpec s;
    s.kind = InputKind::named_family;
    s.family_name = "harmonic";
    s.horizon = 1e4;
    CHECK(io::ingest(s).term(4.0) == 0.25);
    s.family_name = "no_such_family";
    CHECK_THROWS_AS(io::ingest(s), InvalidInput);
    s.family_name = "";
    CHECK_THROWS_AS(io::ingest(s), InvalidInput);  // neither path nor family
}

TEST_CASE("envelope serializes canonically and round-trips bit-identically") {
    InputSpec s;
    s.kind = InputKind::named_family;
    s.family_name = "harmonic";
    s.horizon = 12345.678;
    s.tolerances["tol"] = 1e-2;
    TraceOptions opts;
    opts.with_zeta = false;
    opts.with_heat = false;
    const TraceReport rep = trace_analyze(io::ingest(s), s.horizon, opts);
    nlohmann::json results = io::to_json(rep);
    results["type"] = "trace_report";
    const nlohmann::json env = io::make_envelope(s, results);

    const std::string once = env.dump();
    CHECK(nlohmann::json::parse(once).dump() == once);
    // canonical order: keys are sorted, so equal content means equal bytes
    const nlohmann::json env2 = io::make_envelope(s, io::to_json(rep));
    (void)env2;
    CHECK(env["wall_time_s"].is_null());
    CHECK(env["tool_version"].is_string());
}

TEST_CASE("emitted envelopes validate against the shipped schema") {
    InputSpec s;
    s.kind = InputKind::named_family;
    s.family_name = "finite_rank";
    s.family_params["rank"] = 3;
    s.horizon = 1e4;
    TraceOptions opts;
    opts.with_zeta = false;
    opts.with_heat = false;
    nlohmann::json results = io::to_json(trace_analyze(io::ingest(s), s.horizon, opts));
    results["type"] = "trace_report";
    const nlohmann::json env = io::make_envelope(s, results);
    std::string why;
    CHECK(io::validate_against_schema(env, io::report_schema(), &why));
    CHECK(why.empty());

    // and the validator does reject structure violations
    nlohmann::json broken = env;
    broken.erase("spec");
    CHECK(!io::validate_against_schema(broken, io::report_schema(), &why));
}

TEST_CASE("schema document on disk matches the built-in one") {
    std::ifstream in(std::string(SCHEMA_DIR) + "/report.schema.json");
    REQUIRE(in.good());
    nlohmann::json on_disk;
    in >> on_disk;
    CHECK(on_disk == io::report_schema());
}

TEST_CASE("text rendering contains the headline fields") {
    InputSpec s;
    s.kind = InputKind::named_family;
    s.family_name = "harmonic";
    s.horizon = 1e4;
    TraceOptions opts;
    opts.with_zeta = false;
    opts.with_heat = false;
    nlohmann::json results = io::to_json(trace_analyze(io::ingest(s), s.horizon, opts));
    results["type"] = "trace_report";
    const std::string text = io::render_text(io::make_envelope(s, results));
    CHECK(text.find("trace_raw") != std::string::npos);
    CHECK(text.find("riesz") != std::string::npos);
}
