#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fracground/solvers.hpp"
#include "fracground/verify.hpp"

namespace fracground {

// Shortest representation that round-trips a double (printf %.17g semantics with
// a trailing-digit trim), used everywhere a number is serialized so that repeated
// runs emit byte-identical files.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Profile CSV: header "x,value", one node per row.
void write_field_csv(const std::string& path, const Field& u);
Field read_field_csv(const std::string& path);

// Minimal ordered JSON value for deterministic emission: objects keep insertion
// order, numbers print via format_double, output has a stable layout.
class Json {
  public:
    static Json null();
    static Json boolean(bool b);
    static Json number(double v);
    static Json integer(long long v);
    static Json string(std::string s);
    static Json array();
    static Json object();

    Json& push(Json v);                        // array append
    Json& set(const std::string& key, Json v); // object insert/overwrite
    std::string dump(int indent = 2) const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

// Full solve input: problem + grid + solver settings + method selector
// ("auto", "nehari", "pohozaev", "petviashvili").
struct SolveConfigFile {
    ProblemSpec problem;
    GridSpec grid;
    SolverConfig solver;
    std::string method = "auto";
};

// Parses and schema-validates a solve configuration document.
SolveConfigFile parse_solve_config_text(const std::string& json_text);

struct ValidationResult {
    bool ok = true;
    std::string path;
    std::string message;
};

// Validates a JSON document against a schema written in the supported subset
// (type/enum/const/required/properties/additionalProperties/minimum/
// exclusiveMinimum/maximum/items/minItems).
ValidationResult validate_against_schema(const std::string& doc_json, const std::string& schema_json);

// Embedded copies of the documents under schemas/ (kept byte-identical by a test).
const std::string& embedded_schema(const std::string& name);
std::vector<std::string> embedded_schema_names();

Json problem_spec_to_json(const ProblemSpec& spec);
Json grid_spec_to_json(const GridSpec& grid);
Json solver_config_to_json(const SolverConfig& config);

// report.json payload for a solve run; profile_csv is the sibling file name.
Json ground_state_report_to_json(const GroundStateReport& report, const GridSpec& grid,
                                 const SolverConfig& config, const std::string& method,
                                 const std::string& profile_csv);

// classification.json payload; csv names for the branches that exist.
Json classification_report_to_json(const ClassificationReport& report, const GridSpec& grid,
                                   const std::string& positive_csv, const std::string& negative_csv);

Json sp4_audit_to_json(const ProblemSpec& spec, const GridSpec& grid, const Sp4AuditReport& audit);
Json level_audit_to_json(const LevelAuditReport& audit);
Json positivity_check_to_json(const PositivityCheckReport& check);

// Reads back a solve report: the scalar fields plus the profile loaded from the
// CSV referenced next to the report file.
GroundStateReport read_ground_state_report(const std::string& report_json_path);

}  // namespace fracground
