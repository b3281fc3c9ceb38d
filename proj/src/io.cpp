#include "singtrace/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "singtrace/families.hpp"
#include "singtrace/version.hpp"

namespace singtrace::io {

using nlohmann::json;

void InputSpec::validate() const {
    const bool has_family = !family_name.empty();
    const bool has_path = !path.empty();
    if (kind == InputKind::named_family) {
        if (!has_family || has_path)
            throw InvalidInput("named_family input needs a family name and no path");
    } else {
        if (!has_path || has_family)
            throw InvalidInput("file input needs a path and no family name");
    }
    if (!(horizon > 0.0)) throw InvalidInput("horizon must be > 0");
}

namespace {

std::vector<double> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    std::vector<double> vals;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            // trim
            const auto b = cell.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            const auto e = cell.find_last_not_of(" \t\r");
            cell = cell.substr(b, e - b + 1);
            if (cell.empty()) continue;
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InvalidInput("not a number at line " + std::to_string(lineno) + ": '" +
                                   cell + "'");
            }
        }
    }
    if (vals.empty()) throw InvalidInput("empty input file " + path);
    return vals;
}

std::vector<double> parse_json_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw InvalidInput("bad JSON in " + path + ": " + e.what());
    }
    const json* arr = nullptr;
    if (doc.is_array()) arr = &doc;
    else if (doc.is_object() && doc.contains("values") && doc["values"].is_array())
        arr = &doc["values"];
    else
        throw InvalidInput(path + ": expected an array or {\"values\": [...]}");
    std::vector<double> vals;
    for (const auto& v : *arr) {
        if (!v.is_number()) throw InvalidInput(path + ": non-numeric entry");
        vals.push_back(v.get<double>());
    }
    if (vals.empty()) throw InvalidInput("empty sequence in " + path);
    return vals;
}

SingularValueData sequence_from_values(std::vector<double> vals, const std::string& id) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(vals[i] >= 0.0))
            throw InvalidInput("negative value at index " + std::to_string(i + 1));
        if (i > 0 && vals[i] > vals[i - 1])
            throw InvalidInput("not non-increasing at index " + std::to_string(i + 1));
    }
    std::vector<StepPiece> pieces;
    for (double v : vals)
        if (v > 0.0) pieces.push_back({v, 1.0});
    if (pieces.empty()) pieces.push_back({0.0, 1.0});
    return SingularValueData::from_steps(std::move(pieces), id);
}

}  // namespace

SingularValueData ingest(const InputSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case InputKind::named_family:
            return families::make_family(spec.family_name, spec.family_params);
        case InputKind::csv_sequence:
            return sequence_from_values(parse_csv(spec.path), spec.path);
        case InputKind::json_sequence:
            return sequence_from_values(parse_json_sequence(spec.path), spec.path);
        case InputKind::step_function: {
            std::ifstream in(spec.path);
            if (!in) throw InvalidInput("cannot open " + spec.path);
            json doc;
            try {
                in >> doc;
            } catch (const std::exception& e) {
                throw InvalidInput("bad JSON in " + spec.path + ": " + e.what());
            }
            if (!doc.is_array()) throw InvalidInput(spec.path + ": expected an array of pieces");
            std::vector<StepPiece> pieces;
            for (const auto& item : doc) {
                if (!item.is_object() || !item.contains("value") || !item.contains("measure"))
                    throw InvalidInput(spec.path + ": each piece needs value and measure");
                pieces.push_back({item["value"].get<double>(), item["measure"].get<double>()});
            }
            return SingularValueData::from_steps(std::move(pieces), spec.path);
        }
    }
    throw InvalidInput("unknown input kind");
}

json to_json(const CesaroBand& b) {
    return json{{"lo", b.lo},
                {"hi", b.hi},
                {"width", b.width()},
                {"horizon", b.horizon},
                {"stabilized", b.stabilized},
                {"collapsed", b.collapsed},
                {"fit_limit", b.fit_limit}};
}

json to_json(const ConvergenceVerdict& v) {
    json j{{"class", to_string(v.cls)},
           {"band", to_json(v.band)},
           {"diagnostics", v.diagnostics}};
    j["limit"] = v.limit ? json(*v.limit) : json(nullptr);
    j["tauberian_H"] = v.tauberian_H ? json(*v.tauberian_H) : json(nullptr);
    return j;
}

json to_json(const GrowthVerdict& v) {
    json j{{"restricted", to_string(v.restricted)},
           {"horizon", v.horizon},
           {"diagnostics", v.diagnostics}};
    j["dominated_C"] = v.dominated_C ? json(*v.dominated_C) : json(nullptr);
    j["exponential_C"] = v.exponential_C ? json(*v.exponential_C) : json(nullptr);
    return j;
}

json to_json(const PsiDichotomies& v) {
    json j{{"A", to_string(v.A)},
           {"B", to_string(v.B)},
           {"C", to_string(v.C)},
           {"fit_r2", v.fit_r2},
           {"horizon", v.horizon},
           {"consequences", v.consequences}};
    j["fitted_C"] = v.fitted_C ? json(*v.fitted_C) : json(nullptr);
    return j;
}

json to_json(const TraceReport& r) {
    json j{{"input_id", r.input_id},
           {"horizon", r.horizon},
           {"exp_horizon_clamped", r.exp_horizon_clamped},
           {"measurable", r.is_measurable},
           {"measurable_verdict", to_json(r.measurable)},
           {"tauberian_verdict", to_json(r.tauberian)},
           {"trace_raw", r.trace_raw},
           {"trace_extrapolated", r.trace_extrapolated},
           {"trace_band", to_json(r.trace_band)},
           {"riesz", r.riesz},
           {"norm", r.norm},
           {"diagnostics", r.diagnostics}};
    j["trace_value"] = r.trace_value ? json(*r.trace_value) : json(nullptr);
    j["tauberian_H"] = r.tauberian_H ? json(*r.tauberian_H) : json(nullptr);
    const auto cross = [](const std::optional<CrossCheck>& c) {
        if (!c) return json(nullptr);
        return json{{"value", c->value},
                    {"lo", c->lo},
                    {"hi", c->hi},
                    {"usable", c->usable},
                    {"note", c->note}};
    };
    j["zeta_residue"] = cross(r.zeta_residue);
    j["heat_kernel"] = cross(r.heat_kernel);
    j["consistency"] = json(r.consistency);
    return j;
}

json to_json(const InputSpec& s) {
    const char* kind = "named_family";
    switch (s.kind) {
        case InputKind::csv_sequence: kind = "csv_sequence"; break;
        case InputKind::json_sequence: kind = "json_sequence"; break;
        case InputKind::step_function: kind = "step_function"; break;
        case InputKind::named_family: kind = "named_family"; break;
    }
    json j{{"kind", kind}, {"horizon", s.horizon}, {"tolerances", json(s.tolerances)}};
    if (!s.family_name.empty())
        j["family"] = json{{"name", s.family_name}, {"params", json(s.family_params)}};
    else
        j["family"] = json(nullptr);
    j["path"] = s.path.empty() ? json(nullptr) : json(s.path);
    return j;
}

json make_envelope(const InputSpec& spec, json results, std::optional<double> wall_time_s) {
    json j{{"tool_version", kToolVersion},
           {"spec", to_json(spec)},
           {"results", std::move(results)}};
    j["wall_time_s"] = wall_time_s ? json(*wall_time_s) : json(nullptr);
    return j;
}

bool validate_against_schema(const json& doc, const json& schema, std::string* why) {
    const auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (schema.contains("type")) {
        const auto matches = [&doc](const std::string& t) {
            return (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                   (t == "string" && doc.is_string()) || (t == "number" && doc.is_number()) ||
                   (t == "boolean" && doc.is_boolean()) || (t == "null" && doc.is_null());
        };
        if (schema["type"].is_array()) {  // union, e.g. ["number", "null"]
            bool any = false;
            for (const auto& tt : schema["type"]) any = any || matches(tt.get<std::string>());
            if (!any) return fail("type union mismatch");
        } else if (!matches(schema["type"].get<std::string>())) {
            return fail("expected type " + schema["type"].get<std::string>());
        }
    }
    if (schema.contains("enum")) {
        bool any = false;
        for (const auto& v : schema["enum"]) any = any || v == doc;
        if (!any) return fail("value not in enum");
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& k : schema["required"])
                if (!doc.contains(k.get<std::string>()))
                    return fail("missing required key " + k.get<std::string>());
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (doc.contains(it.key()))
                    if (!validate_against_schema(doc.at(it.key()), it.value(), why)) return false;
    }
    if (doc.is_array() && schema.contains("items"))
        for (const auto& item : doc)
            if (!validate_against_schema(item, schema["items"], why)) return false;
    return true;
}

json report_schema() {
    static const char* text = R"SCHEMA(
{
  "type": "object",
  "required": ["tool_version", "spec", "results", "wall_time_s"],
  "properties": {
    "tool_version": {"type": "string"},
    "wall_time_s": {"type": ["number", "null"]},
    "spec": {
      "type": "object",
      "required": ["kind", "horizon", "family", "path", "tolerances"],
      "properties": {
        "kind": {"enum": ["csv_sequence", "json_sequence", "step_function", "named_family"]},
        "horizon": {"type": "number"},
        "tolerances": {"type": "object"},
        "path": {"type": ["string", "null"]},
        "family": {
          "type": ["object", "null"],
          "required": ["name", "params"],
          "properties": {"name": {"type": "string"}, "params": {"type": "object"}}
        }
      }
    },
    "results": {"type": "object", "required": ["type"]}
  }
}
)SCHEMA";
    return json::parse(text);
}

namespace {
void render_value(std::ostringstream& out, const std::string& key, const json& v, int indent) {
    for (int i = 0; i < indent; ++i) out << ' ';
    out << key << ": ";
    if (v.is_object()) {
        out << '\n';
        for (auto it = v.begin(); it != v.end(); ++it)
            render_value(out, it.key(), it.value(), indent + 2);
    } else {
        out << v.dump() << '\n';
    }
}
}  // namespace

std::string render_text(const json& envelope) {
    std::ostringstream out;
    for (auto it = envelope.begin(); it != envelope.end(); ++it)
        render_value(out, it.key(), it.value(), 0);
    return out.str();
}

}  // namespace singtrace::io
