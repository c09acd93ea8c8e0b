#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rkg/graph_store.hpp"
#include "rkg/prefix_map.hpp"

namespace rkg {

inline constexpr std::string_view kDefaultBaseIri = "https://w3id.org/ontobio#";

/// Well-known prefixes every command starts from: the default prefix
/// bound to `base_iri` plus rdf, rdfs, owl, xsd, foaf, schema, dcterms,
/// and opencare.
PrefixMap standard_prefixes(const std::string& base_iri = std::string(kDefaultBaseIri));

/// Exit codes: 0 success, 1 validation/consistency failure,
/// 2 usage/parse error, 3 I/O error.
struct CommandResult {
    int code = 0;
    std::string summary;
};

struct BuildOptions {
    std::string rules_path;
    std::string schema_path;  // optional; property kinds for unqualified facts
    std::vector<std::pair<std::string, std::string>> sheets;  // name -> csv path
    std::string base_iri{kDefaultBaseIri};
    std::string out_path;
    std::string provenance_path;  // defaults to out_path + ".prov.jsonl"
    bool quiet = false;
};

struct QueryOptions {
    std::vector<std::string> data_paths;
    std::string schema_path;  // required with `reason`
    std::string query_path;   // exclusive with query_text
    std::string query_text;
    bool reason = false;
    std::string format{"table"};  // table | json
    bool quiet = false;
};

struct ValidateOptions {
    std::vector<std::string> data_paths;
    std::string schema_path;
    bool reason = true;
    bool json = false;
    bool quiet = false;
};

struct ReasonOptions {
    std::vector<std::string> data_paths;
    std::string schema_path;
    std::string out_path;           // empty = stdout
    std::string inferred_log_path;  // optional JSON-lines of inferred triples
    bool asserted_only = false;     // write the input set instead of the closure
    bool json = false;              // stats as JSON instead of text
    bool quiet = false;
};

struct StatsOptions {
    std::vector<std::string> data_paths;
    std::string schema_path;
    bool reason = false;
    bool json = false;
};

struct ExportOptions {
    std::vector<std::string> data_paths;
    std::string schema_path;  // only needed with `reason`
    std::string format{"turtle"};  // turtle | ntriples
    std::string out_path;          // empty = stdout
    bool reason = false;
};

struct ServeOptions {
    std::vector<std::string> data_paths;
    std::string schema_path;
    int port = 3030;
    std::string host{"127.0.0.1"};
    bool reason = true;
    std::size_t max_query_bytes = 262144;
    long timeout_ms = 5000;
};

CommandResult cmd_build(const BuildOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_query(const QueryOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_reason(const ReasonOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_export(const ExportOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);

/// Full argv interface used by the `rkg` binary. Honors the PORT and
/// RKG_BASE environment overrides.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rkg
