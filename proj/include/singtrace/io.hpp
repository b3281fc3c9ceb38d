#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "singtrace/convergence.hpp"
#include "singtrace/dixmier.hpp"
#include "singtrace/growth.hpp"

namespace singtrace::io {

enum class InputKind { csv_sequence, json_sequence, step_function, named_family };

struct InputSpec {
    InputKind kind = InputKind::named_family;
    std::string family_name;
    std::map<std::string, double> family_params;
    std::string path;
    double horizon = 1e6;
    std::map<std::string, double> tolerances;

    void validate() const;  // exactly one of path / family present, etc.
};

/// Validated domain object from a file or the shipped catalogue. Sequence
/// files are finite and land in the exact step representation; monotonicity
/// violations are rejected with the first offending index.
SingularValueData ingest(const InputSpec& spec);

// serializers (canonical: nlohmann::json objects order keys alphabetically,
// floats print shortest-round-trip)
nlohmann::json to_json(const CesaroBand& b);
nlohmann::json to_json(const ConvergenceVerdict& v);
nlohmann::json to_json(const GrowthVerdict& v);
nlohmann::json to_json(const PsiDichotomies& v);
nlohmann::json to_json(const TraceReport& r);
nlohmann::json to_json(const InputSpec& s);

/// Full envelope; wall_time_s stays null unless the caller opts in, because
/// reports must be byte-identical run to run.
nlohmann::json make_envelope(const InputSpec& spec, nlohmann::json results,
                             std::optional<double> wall_time_s = std::nullopt);

/// Minimal structural validation against the shipped JSON schema document
/// (type / required / properties / enum / items).
bool validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                             std::string* why = nullptr);

/// The schema document shipped in-repo (docs/report.schema.json mirrors it).
nlohmann::json report_schema();

std::string render_text(const nlohmann::json& envelope);

}  // namespace singtrace::io
