#include "fracground/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "fracground/spectral.hpp"

namespace fracground {

std::string format_double(double v) {
    if (!std::isfinite(v)) throw DomainError("format_double: value is not finite");
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
    if (!out) throw InputError("write failed: " + path);
}

void write_field_csv(const std::string& path, const Field& u) {
    std::string text = "x,value\n";
    text.reserve(text.size() + u.values.size() * 48);
    for (int m = 0; m < u.size(); ++m) {
        text += format_double(u.grid.node(m));
        text += ',';
        text += format_double(u.values[static_cast<size_t>(m)]);
        text += '\n';
    }
    write_text_file(path, text);
}

Field read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open profile CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty profile CSV: " + path);
    if (line == "x,value\r") line.pop_back();
    if (line != "x,value") throw InputError("profile CSV must start with the header 'x,value': " + path);
    std::vector<double> xs, vs;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InputError("profile CSV line " + std::to_string(lineno) + " has no comma: " + path);
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw InputError("profile CSV line " + std::to_string(lineno) + " is not numeric: " + path);
        }
    }
    const auto n = static_cast<int>(xs.size());
    if (n < 8 || n % 2 != 0) throw InputError("profile CSV must hold an even node count of at least 8: " + path);
    const double L = -xs.front();
    GridSpec grid;
    try {
        grid = GridSpec(L, n);
    } catch (const DomainError& e) {
        throw InputError(std::string("profile CSV does not describe a valid grid: ") + e.what());
    }
    const double tol = 1e-9 * std::max(1.0, L);
    for (int m = 0; m < n; ++m) {
        if (std::abs(xs[static_cast<size_t>(m)] - grid.node(m)) > tol)
            throw InputError("profile CSV nodes are not the uniform grid on [-L, L): " + path);
    }
    return Field(grid, std::move(vs));
}

// --- deterministic JSON ----------------------------------------------------------

struct Json::Impl {
    enum class Kind { null, boolean, number, integer, string, array, object } kind = Kind::null;
    bool b = false;
    double num = 0.0;
    long long inum = 0;
    std::string str;
    std::vector<Json> arr;
    std::vector<std::pair<std::string, Json>> obj;

    static void dump(const Impl* impl, int indent, int depth, std::string& out);
};

Json Json::null() {
    Json j;
    j.impl_ = std::make_shared<Impl>();
    return j;
}
Json Json::boolean(bool b) {
    Json j = null();
    j.impl_->kind = Impl::Kind::boolean;
    j.impl_->b = b;
    return j;
}
Json Json::number(double v) {
    Json j = null();
    j.impl_->kind = Impl::Kind::number;
    j.impl_->num = v;
    return j;
}
Json Json::integer(long long v) {
    Json j = null();
    j.impl_->kind = Impl::Kind::integer;
    j.impl_->inum = v;
    return j;
}
Json Json::string(std::string s) {
    Json j = null();
    j.impl_->kind = Impl::Kind::string;
    j.impl_->str = std::move(s);
    return j;
}
Json Json::array() {
    Json j = null();
    j.impl_->kind = Impl::Kind::array;
    return j;
}
Json Json::object() {
    Json j = null();
    j.impl_->kind = Impl::Kind::object;
    return j;
}

Json& Json::push(Json v) {
    if (impl_->kind != Impl::Kind::array) throw DomainError("Json::push: not an array");
    impl_->arr.push_back(std::move(v));
    return *this;
}

Json& Json::set(const std::string& key, Json v) {
    if (impl_->kind != Impl::Kind::object) throw DomainError("Json::set: not an object");
    for (auto& kv : impl_->obj) {
        if (kv.first == key) {
            kv.second = std::move(v);
            return *this;
        }
    }
    impl_->obj.emplace_back(key, std::move(v));
    return *this;
}

namespace {

void escape_into(const std::string& s, std::string& out) {
    out += '"';
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

}  // namespace

std::string Json::dump(int indent) const {
    std::string out;
    Impl::dump(impl_.get(), indent, 0, out);
    out += '\n';
    return out;
}

void Json::Impl::dump(const Impl* impl, int indent, int depth, std::string& out) {
    using Kind = Json::Impl::Kind;
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string closing_pad(static_cast<size_t>(indent) * depth, ' ');
    switch (impl->kind) {
        case Kind::null: out += "null"; return;
        case Kind::boolean: out += impl->b ? "true" : "false"; return;
        case Kind::number: out += format_double(impl->num); return;
        case Kind::integer: out += std::to_string(impl->inum); return;
        case Kind::string: escape_into(impl->str, out); return;
        case Kind::array: {
            if (impl->arr.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (size_t i = 0; i < impl->arr.size(); ++i) {
                out += pad;
                dump(impl->arr[i].impl_.get(), indent, depth + 1, out);
                if (i + 1 < impl->arr.size()) out += ',';
                out += '\n';
            }
            out += closing_pad + "]";
            return;
        }
        case Kind::object: {
            if (impl->obj.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            for (size_t i = 0; i < impl->obj.size(); ++i) {
                out += pad;
                escape_into(impl->obj[i].first, out);
                out += ": ";
                dump(impl->obj[i].second.impl_.get(), indent, depth + 1, out);
                if (i + 1 < impl->obj.size()) out += ',';
                out += '\n';
            }
            out += closing_pad + "}";
            return;
        }
    }
}

// --- schema validation -------------------------------------------------------------

#include "schemas_data.inc"

const std::string& embedded_schema(const std::string& name) {
    static const std::map<std::string, std::string>* table = [] {
        auto* m = new std::map<std::string, std::string>();
        for (const auto& [n, text] : kEmbeddedSchemas) (*m)[n] = text;
        return m;
    }();
    const auto it = table->find(name);
    if (it == table->end()) throw DomainError("embedded_schema: unknown schema '" + name + "'");
    return it->second;
}

std::vector<std::string> embedded_schema_names() {
    std::vector<std::string> names;
    for (const auto& [n, text] : kEmbeddedSchemas) names.emplace_back(n);
    return names;
}

namespace {

using njson = nlohmann::json;

bool is_integral_number(const njson& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return true;
    if (v.is_number_float()) {
        const double d = v.get<double>();
        return std::isfinite(d) && d == std::floor(d);
    }
    return false;
}

bool type_matches(const njson& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "number") return v.is_number();
    if (t == "integer") return is_integral_number(v);
    if (t == "null") return v.is_null();
    return false;
}

void fail(ValidationResult& res, const std::string& path, const std::string& message) {
    if (!res.ok) return;
    res.ok = false;
    res.path = path.empty() ? "$" : path;
    res.message = message;
}

void validate_node(const njson& doc, const njson& schema, const std::string& path, ValidationResult& res) {
    if (!res.ok) return;
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(doc, t.get<std::string>());
        } else if (t.is_array()) {
            for (const auto& tt : t) ok = ok || type_matches(doc, tt.get<std::string>());
        }
        if (!ok) return fail(res, path, "value does not match the required type");
    }
    if (schema.contains("const")) {
        if (doc != schema["const"]) return fail(res, path, "value does not equal the required constant");
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"]) ok = ok || doc == e;
        if (!ok) return fail(res, path, "value is not one of the allowed alternatives");
    }
    if (doc.is_number()) {
        const double v = doc.get<double>();
        if (schema.contains("minimum") && !(v >= schema["minimum"].get<double>()))
            return fail(res, path, "value is below the minimum");
        if (schema.contains("exclusiveMinimum") && !(v > schema["exclusiveMinimum"].get<double>()))
            return fail(res, path, "value is not above the exclusive minimum");
        if (schema.contains("maximum") && !(v <= schema["maximum"].get<double>()))
            return fail(res, path, "value is above the maximum");
        if (schema.contains("exclusiveMaximum") && !(v < schema["exclusiveMaximum"].get<double>()))
            return fail(res, path, "value is not below the exclusive maximum");
    }
    if (doc.is_object()) {
        if (schema.contains("required")) {
            for (const auto& r : schema["required"]) {
                if (!doc.contains(r.get<std::string>()))
                    return fail(res, path, "missing required member '" + r.get<std::string>() + "'");
            }
        }
        const njson props = schema.value("properties", njson::object());
        for (const auto& [key, sub] : doc.items()) {
            const std::string child = path + "." + key;
            if (props.contains(key)) {
                validate_node(sub, props[key], child, res);
                if (!res.ok) return;
            } else if (schema.contains("additionalProperties") &&
                       schema["additionalProperties"].is_boolean() &&
                       !schema["additionalProperties"].get<bool>()) {
                return fail(res, child, "unknown member");
            }
        }
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<size_t>())
            return fail(res, path, "array is too short");
        if (schema.contains("items")) {
            for (size_t i = 0; i < doc.size(); ++i) {
                validate_node(doc[i], schema["items"], path + "[" + std::to_string(i) + "]", res);
                if (!res.ok) return;
            }
        }
    }
}

njson parse_or_throw(const std::string& text, const char* what) {
    try {
        return njson::parse(text);
    } catch (const njson::parse_error& e) {
        throw InputError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

}  // namespace

ValidationResult validate_against_schema(const std::string& doc_json, const std::string& schema_json) {
    const njson doc = parse_or_throw(doc_json, "document");
    const njson schema = parse_or_throw(schema_json, "schema");
    ValidationResult res;
    validate_node(doc, schema, "$", res);
    return res;
}

// --- typed config parsing ------------------------------------------------------------

SolveConfigFile parse_solve_config_text(const std::string& json_text) {
    const ValidationResult vr = validate_against_schema(json_text, embedded_schema("solve_config"));
    if (!vr.ok) throw InputError("solve config rejected at " + vr.path + ": " + vr.message);
    const njson doc = parse_or_throw(json_text, "solve config");

    SolveConfigFile out;
    const njson& pr = doc["problem"];
    out.problem = ProblemSpec(pr["sigma"].get<double>(), pr["c"].get<double>(), pr["p"].get<double>(),
                              pr["q"].get<double>(), variant_from_string(pr["variant"].get<std::string>()));
    const njson& gr = doc["grid"];
    out.grid = GridSpec(gr["L"].get<double>(), gr["N"].get<int>());
    if (doc.contains("solver")) {
        const njson& sv = doc["solver"];
        if (sv.contains("max_iter")) out.solver.max_iter = sv["max_iter"].get<int>();
        if (sv.contains("grad_tol")) out.solver.grad_tol = sv["grad_tol"].get<double>();
        if (sv.contains("step")) out.solver.step = sv["step"].get<double>();
        if (sv.contains("recenter_every")) out.solver.recenter_every = sv["recenter_every"].get<int>();
        if (sv.contains("initial_profile"))
            out.solver.initial_profile = initial_profile_from_string(sv["initial_profile"].get<std::string>());
        if (sv.contains("init_amplitude")) out.solver.init_amplitude = sv["init_amplitude"].get<double>();
        if (sv.contains("init_width")) out.solver.init_width = sv["init_width"].get<double>();
        if (sv.contains("seed")) out.solver.seed = sv["seed"].get<std::uint64_t>();
        if (sv.contains("init_file")) out.solver.init_file = sv["init_file"].get<std::string>();
    }
    out.solver.validate();
    if (doc.contains("method")) out.method = doc["method"].get<std::string>();
    return out;
}

// --- report emission -----------------------------------------------------------------

Json problem_spec_to_json(const ProblemSpec& spec) {
    Json j = Json::object();
    j.set("variant", Json::string(to_string(spec.variant)));
    j.set("sigma", Json::number(spec.sigma));
    j.set("c", Json::number(spec.c));
    j.set("p", Json::number(spec.p));
    j.set("q", Json::number(spec.q));
    return j;
}

Json grid_spec_to_json(const GridSpec& grid) {
    Json j = Json::object();
    j.set("L", Json::number(grid.L));
    j.set("N", Json::integer(grid.N));
    return j;
}

Json solver_config_to_json(const SolverConfig& config) {
    Json j = Json::object();
    j.set("max_iter", Json::integer(config.max_iter));
    j.set("grad_tol", Json::number(config.grad_tol));
    j.set("step", Json::number(config.step));
    j.set("recenter_every", Json::integer(config.recenter_every));
    j.set("initial_profile", Json::string(to_string(config.initial_profile)));
    j.set("init_amplitude", Json::number(config.init_amplitude));
    j.set("init_width", Json::number(config.init_width));
    j.set("seed", Json::integer(static_cast<long long>(config.seed)));
    if (!config.init_file.empty()) j.set("init_file", Json::string(config.init_file));
    return j;
}

namespace {

Json results_to_json(const GroundStateReport& report) {
    Json r = Json::object();
    r.set("action", Json::number(report.action));
    r.set("nehari_value", Json::number(report.nehari_value));
    r.set("pohozaev", Json::number(report.pohozaev));
    r.set("el_residual", Json::number(report.el_residual));
    if (report.multiplier) r.set("multiplier", Json::number(*report.multiplier));
    if (report.j3_value) r.set("j3_value", Json::number(*report.j3_value));
    r.set("d_estimate", Json::number(report.d_estimate));
    r.set("iterations", Json::integer(report.iterations));
    r.set("converged", Json::boolean(report.converged));
    r.set("halvings", Json::integer(report.halvings));
    r.set("l2_norm", Json::number(l2_norm(report.profile)));
    r.set("hsc_norm", Json::number(hsc_norm(report.profile, report.spec.sigma, report.spec.c)));
    return r;
}

}  // namespace

Json ground_state_report_to_json(const GroundStateReport& report, const GridSpec& grid,
                                 const SolverConfig& config, const std::string& method,
                                 const std::string& profile_csv) {
    Json j = Json::object();
    j.set("kind", Json::string("ground_state_report"));
    j.set("problem", problem_spec_to_json(report.spec));
    j.set("grid", grid_spec_to_json(grid));
    j.set("solver", solver_config_to_json(config));
    j.set("method", Json::string(method));
    j.set("results", results_to_json(report));
    j.set("profile_csv", Json::string(profile_csv));
    return j;
}

Json classification_report_to_json(const ClassificationReport& report, const GridSpec& grid,
                                   const std::string& positive_csv, const std::string& negative_csv) {
    Json j = Json::object();
    j.set("kind", Json::string("classification_report"));
    j.set("p", Json::integer(report.p));
    j.set("q", Json::integer(report.q));
    j.set("c", Json::number(report.c));
    j.set("case_label", Json::string(report.case_label));
    j.set("grid", grid_spec_to_json(grid));
    if (report.case_label == "even_even") j.set("threshold_c0", Json::number(c_zero(report.p, report.q).c0));
    j.set("d_estimate", Json::number(report.d_estimate));
    j.set("d1_estimate", Json::number(report.d1_estimate));
    if (report.a_estimate) j.set("a_estimate", Json::number(*report.a_estimate));
    auto branch_json = [&](const GroundStateReport& rep, const std::string& csv) {
        Json b = Json::object();
        b.set("problem", problem_spec_to_json(rep.spec));
        b.set("results", results_to_json(rep));
        b.set("profile_csv", Json::string(csv));
        return b;
    };
    if (report.positive_solution) j.set("positive_solution", branch_json(*report.positive_solution, positive_csv));
    if (report.negative_solution) j.set("negative_solution", branch_json(*report.negative_solution, negative_csv));
    Json verdicts = Json::array();
    for (const Verdict& v : report.verdicts) {
        Json vj = Json::object();
        vj.set("name", Json::string(v.name));
        vj.set("status", Json::string(to_string(v.status)));
        vj.set("lhs", Json::number(v.lhs));
        vj.set("rhs", Json::number(v.rhs));
        vj.set("margin", Json::number(v.margin));
        if (!v.note.empty()) vj.set("note", Json::string(v.note));
        verdicts.push(std::move(vj));
    }
    j.set("verdicts", std::move(verdicts));
    return j;
}

Json sp4_audit_to_json(const ProblemSpec& spec, const GridSpec& grid, const Sp4AuditReport& audit) {
    Json j = Json::object();
    j.set("kind", Json::string("sp4_triviality_audit"));
    j.set("problem", problem_spec_to_json(spec));
    j.set("grid", grid_spec_to_json(grid));
    j.set("trials", Json::integer(audit.trials));
    j.set("coercivity_constant", Json::number(audit.coercivity_constant));
    j.set("min_ratio", Json::number(audit.min_ratio));
    j.set("coercivity_ok", Json::boolean(audit.coercivity_ok));
    j.set("collapse_runs", Json::integer(audit.collapse_runs));
    j.set("worst_final_mass_ratio", Json::number(audit.worst_final_mass_ratio));
    j.set("collapse_ok", Json::boolean(audit.collapse_ok));
    j.set("passed", Json::boolean(audit.passed));
    return j;
}

Json level_audit_to_json(const LevelAuditReport& audit) {
    Json j = Json::object();
    j.set("trials", Json::integer(audit.trials));
    j.set("action_value", Json::number(audit.action_value));
    j.set("min_margin", Json::number(audit.min_margin));
    j.set("perturbation_margin", Json::number(audit.perturbation_margin));
    j.set("i_consistency", Json::number(audit.i_consistency));
    j.set("passed", Json::boolean(audit.passed));
    return j;
}

Json positivity_check_to_json(const PositivityCheckReport& check) {
    Json j = Json::object();
    j.set("lambda1", Json::number(check.lambda1));
    j.set("l2_error", Json::number(check.l2_error));
    j.set("max_error", Json::number(check.max_error));
    j.set("min_value", Json::number(check.min_value));
    j.set("strictly_positive", Json::boolean(check.strictly_positive));
    j.set("passed", Json::boolean(check.passed));
    return j;
}

GroundStateReport read_ground_state_report(const std::string& report_json_path) {
    const std::string text = read_text_file(report_json_path);
    const ValidationResult vr = validate_against_schema(text, embedded_schema("ground_state_report"));
    if (!vr.ok) throw InputError("report rejected at " + vr.path + ": " + vr.message);
    const njson doc = parse_or_throw(text, "report");

    GroundStateReport rep;
    const njson& pr = doc["problem"];
    rep.spec = ProblemSpec(pr["sigma"].get<double>(), pr["c"].get<double>(), pr["p"].get<double>(),
                           pr["q"].get<double>(), variant_from_string(pr["variant"].get<std::string>()));
    const njson& rs = doc["results"];
    rep.action = rs["action"].get<double>();
    rep.nehari_value = rs["nehari_value"].get<double>();
    rep.pohozaev = rs["pohozaev"].get<double>();
    rep.el_residual = rs["el_residual"].get<double>();
    if (rs.contains("multiplier")) rep.multiplier = rs["multiplier"].get<double>();
    if (rs.contains("j3_value")) rep.j3_value = rs["j3_value"].get<double>();
    rep.d_estimate = rs["d_estimate"].get<double>();
    rep.iterations = rs["iterations"].get<int>();
    rep.converged = rs["converged"].get<bool>();
    rep.halvings = rs["halvings"].get<int>();

    const auto dir = std::filesystem::path(report_json_path).parent_path();
    const std::string csv = doc["profile_csv"].get<std::string>();
    rep.profile = read_field_csv((dir / csv).string());
    const GridSpec grid(doc["grid"]["L"].get<double>(), doc["grid"]["N"].get<int>());
    if (!(rep.profile.grid == grid))
        throw InputError("report grid does not match the profile CSV: " + report_json_path);
    return rep;
}

}  // namespace fracground
