#include "rkg/commands.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rkg/endpoint.hpp"
#include "rkg/errors.hpp"
#include "rkg/inference.hpp"
#include "rkg/query.hpp"
#include "rkg/schema.hpp"
#include "rkg/sheetmap.hpp"
#include "rkg/turtle.hpp"

namespace rkg {

namespace {

bool ends_with(const std::string& text, const std::string& suffix) {
    return text.size() >= suffix.size() &&
           text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

GraphStore load_dataset(const std::string& schema_path,
                        const std::vector<std::string>& data_paths) {
    GraphStore store;
    if (!schema_path.empty()) load_turtle_file(store, schema_path);
    for (const std::string& path : data_paths) {
        if (ends_with(path, ".nt")) {
            load_ntriples_file(store, path);
        } else {
            load_turtle_file(store, path);
        }
    }
    return store;
}

CommandResult usage_error(std::ostream& err, const std::string& message) {
    err << "error: " << message << "\n";
    return {2, message};
}

/// Shared error funnel: parse problems exit 2, unreadable files exit 3.
template <typename Fn>
CommandResult guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return {2, e.what()};
    } catch (const ResolveError& e) {
        err << "error: " << e.what() << "\n";
        return {2, e.what()};
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return {2, e.what()};
    } catch (const SheetError& e) {
        err << "error: " << e.what() << "\n";
        return {2, e.what()};
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return {3, e.what()};
    } catch (const std::exception& e) {
        // malformed IRIs, bad ports, and similar argument problems
        err << "error: " << e.what() << "\n";
        return {2, e.what()};
    }
}

}  // namespace

PrefixMap standard_prefixes(const std::string& base_iri) {
    PrefixMap pm;
    pm.declare("", base_iri);
    pm.declare("rdf", std::string(vocab::kRdfNs));
    pm.declare("rdfs", std::string(vocab::kRdfsNs));
    pm.declare("owl", std::string(vocab::kOwlNs));
    pm.declare("xsd", std::string(vocab::kXsdNs));
    pm.declare("foaf", "http://xmlns.com/foaf/0.1/");
    pm.declare("schema", "https://schema.org/");
    pm.declare("dcterms", "http://purl.org/dc/terms/");
    pm.declare("opencare", "https://w3id.org/ontobio/opencare#");
    return pm;
}

CommandResult cmd_build(const BuildOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        RuleSet rules = parse_rules(read_file(options.rules_path));

        std::map<std::string, std::string> csvs;
        for (const auto& [name, path] : options.sheets) csvs[name] = read_file(path);
        Workbook wb = load_workbook(csvs);

        PrefixMap pm = standard_prefixes(options.base_iri);
        // without a schema, unqualified facts fall back to plain literals
        GraphStore schema_store;
        if (!options.schema_path.empty()) load_turtle_file(schema_store, options.schema_path);
        SchemaIndex schema = extract_schema(schema_store);

        ApplyResult result = apply_rules(rules, wb, pm, schema);

        write_file(options.out_path, serialize_turtle(result.graph));
        std::string prov_path = options.provenance_path.empty()
                                    ? options.out_path + ".prov.jsonl"
                                    : options.provenance_path;
        write_file(prov_path, result.log.to_jsonl());

        std::ostringstream summary;
        summary << "built " << result.graph.size() << " triples from " << rules.rules.size()
                << " rule(s) over " << csvs.size() << " sheet(s)";
        if (!options.quiet) out << summary.str() << "\n";
        return {0, summary.str()};
    });
}

CommandResult cmd_query(const QueryOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        if (options.query_path.empty() == options.query_text.empty())
            return usage_error(err, "provide exactly one of a query file or --query text");
        if (options.format != "table" && options.format != "json")
            return usage_error(err, "--format must be table or json");
        if (options.reason && options.schema_path.empty())
            return usage_error(err, "--reason needs --schema");

        std::string query_text = options.query_text.empty() ? read_file(options.query_path)
                                                            : options.query_text;
        QueryAST ast = parse_query(query_text);

        GraphStore store = load_dataset(options.schema_path, options.data_paths);
        if (options.reason) {
            SchemaIndex schema = extract_schema(store);
            materialize(store, schema);
        }
        SolutionTable table = evaluate(ast, store);
        if (options.format == "json") {
            out << to_results_json(table) << "\n";
        } else {
            out << to_text_table(table);
        }
        std::string summary = std::to_string(table.rows.size()) + " solution(s)";
        return {0, summary};
    });
}

CommandResult cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        GraphStore store = load_dataset(options.schema_path, options.data_paths);
        SchemaIndex schema = extract_schema(store);
        if (options.reason) materialize(store, schema);
        ViolationReport report = validate(store, schema);
        if (options.json) {
            out << report_json(report) << "\n";
        } else if (!options.quiet || report.has_errors()) {
            out << report_text(report);
        }
        std::string summary = std::to_string(report.error_count()) + " error(s), " +
                              std::to_string(report.warning_count()) + " warning(s)";
        return {report.has_errors() ? 1 : 0, summary};
    });
}

CommandResult cmd_reason(const ReasonOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        GraphStore store = load_dataset(options.schema_path, options.data_paths);
        GraphStore asserted = store;
        SchemaIndex schema = extract_schema(store);
        std::vector<std::pair<Triple, std::string>> inferred;
        InferenceStats stats = materialize(store, schema, &inferred);

        const GraphStore& to_write = options.asserted_only ? asserted : store;
        if (options.out_path.empty()) {
            out << serialize_turtle(to_write);
        } else {
            write_file(options.out_path, serialize_turtle(to_write));
        }
        if (!options.inferred_log_path.empty()) {
            std::ostringstream log;
            for (const auto& [t, rule] : inferred) {
                log << "{\"rule\":\"" << rule << "\",\"triple\":\""
                    << escape_literal(to_ntriples(t)) << "\"}\n";
            }
            write_file(options.inferred_log_path, log.str());
        }
        if (!options.quiet) {
            if (options.json) {
                err << stats_json(stats) << "\n";
            } else {
                err << stats_text(stats);
            }
        }
        return {0, std::to_string(stats.inferred_triples) + " inferred triple(s)"};
    });
}

CommandResult cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        GraphStore store = load_dataset(options.schema_path, options.data_paths);
        SchemaIndex schema = extract_schema(store);
        if (options.reason) materialize(store, schema);
        Metrics m = compute_metrics(schema, store);
        if (options.json) {
            out << metrics_json(m) << "\n";
        } else {
            out << metrics_table(m);
        }
        return {0, "ok"};
    });
}

CommandResult cmd_export(const ExportOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        if (options.format != "turtle" && options.format != "ntriples")
            return usage_error(err, "--format must be turtle or ntriples");
        if (options.reason && options.schema_path.empty())
            return usage_error(err, "--reason needs --schema");
        GraphStore store = load_dataset(options.schema_path, options.data_paths);
        if (options.reason) {
            SchemaIndex schema = extract_schema(store);
            materialize(store, schema);
        }
        std::string text =
            options.format == "turtle" ? serialize_turtle(store) : serialize_ntriples(store);
        if (options.out_path.empty()) {
            out << text;
        } else {
            write_file(options.out_path, text);
        }
        return {0, std::to_string(store.size()) + " triple(s)"};
    });
}

CommandResult cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        ServiceConfig config;
        config.port = options.port;
        config.host = options.host;
        config.schema_path = options.schema_path;
        config.data_paths = options.data_paths;
        config.reason_on_load = options.reason;
        config.max_query_bytes = options.max_query_bytes;
        config.request_timeout = std::chrono::milliseconds(options.timeout_ms);

        Endpoint endpoint(std::move(config));
        int port = endpoint.start();  // binds before anything is promised
        out << "serving " << endpoint.store().size() << " triples on http://" << options.host
            << ":" << port << "/sparql\n";
        out.flush();
        endpoint.wait();
        return {0, "stopped"};
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Faceted biographical knowledge-graph engine"};
    app.require_subcommand(1);

    std::string base_iri{kDefaultBaseIri};
    if (const char* env = std::getenv("RKG_BASE")) base_iri = env;
    bool quiet = false;
    app.add_option("--base", base_iri, "Base namespace for the default prefix");
    app.add_flag("--quiet", quiet, "Suppress informational output");

    // build
    auto* build = app.add_subcommand("build", "Generate a graph from CSV sheets and mapping rules");
    BuildOptions build_opts;
    std::vector<std::string> sheet_specs;
    build->add_option("--rules", build_opts.rules_path, "Mapping rule file")->required();
    build->add_option("--schema", build_opts.schema_path, "Turtle schema for property kinds");
    build->add_option("--sheet", sheet_specs, "Sheet binding NAME=CSV-PATH")->required();
    build->add_option("--out", build_opts.out_path, "Output Turtle path")->required();
    build->add_option("--prov", build_opts.provenance_path, "Provenance JSON-lines path");

    // query
    auto* query = app.add_subcommand("query", "Evaluate a query against Turtle datasets");
    QueryOptions query_opts;
    query->add_option("queryfile", query_opts.query_path, "Query file (.rq)");
    query->add_option("--query", query_opts.query_text, "Inline query text");
    query->add_option("--data", query_opts.data_paths, "Turtle data file (repeatable)");
    query->add_option("--schema", query_opts.schema_path, "Turtle schema file");
    query->add_flag("--reason", query_opts.reason, "Materialize inferences before evaluating");
    query->add_option("--format", query_opts.format, "Output format: table or json");

    // validate
    auto* validate = app.add_subcommand("validate", "Check instance data against the schema");
    ValidateOptions validate_opts;
    validate->add_option("--data", validate_opts.data_paths, "Turtle data file (repeatable)");
    validate->add_option("--schema", validate_opts.schema_path, "Turtle schema file")->required();
    bool no_reason_validate = false;
    validate->add_flag("--no-reason", no_reason_validate, "Validate asserted data only");
    validate->add_flag("--json", validate_opts.json, "Report as JSON");

    // reason
    auto* reason = app.add_subcommand("reason", "Materialize inferences and write the closure");
    ReasonOptions reason_opts;
    reason->add_option("--data", reason_opts.data_paths, "Turtle data file (repeatable)");
    reason->add_option("--schema", reason_opts.schema_path, "Turtle schema file")->required();
    reason->add_option("--out", reason_opts.out_path, "Output Turtle path (default stdout)");
    reason->add_option("--inferred-log", reason_opts.inferred_log_path,
                       "JSON-lines log of inferred triples");
    reason->add_flag("--asserted-only", reason_opts.asserted_only,
                     "Write the asserted set, excluding inferred triples");
    reason->add_flag("--json", reason_opts.json, "Inference stats as JSON");

    // stats
    auto* stats = app.add_subcommand("stats", "Print dataset metrics");
    StatsOptions stats_opts;
    stats->add_option("--data", stats_opts.data_paths, "Turtle data file (repeatable)");
    stats->add_option("--schema", stats_opts.schema_path, "Turtle schema file");
    stats->add_flag("--reason", stats_opts.reason, "Materialize before counting");
    stats->add_flag("--json", stats_opts.json, "Metrics as JSON");

    // export
    auto* exp = app.add_subcommand("export", "Serialize datasets as Turtle or N-Triples");
    ExportOptions export_opts;
    exp->add_option("--data", export_opts.data_paths, "Turtle data file (repeatable)");
    exp->add_option("--schema", export_opts.schema_path, "Turtle schema file");
    exp->add_option("--format", export_opts.format, "turtle or ntriples");
    exp->add_option("--out", export_opts.out_path, "Output path (default stdout)");
    exp->add_flag("--reason", export_opts.reason, "Materialize before exporting");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP query endpoint");
    ServeOptions serve_opts;
    serve->add_option("--data", serve_opts.data_paths, "Turtle data file (repeatable)");
    serve->add_option("--schema", serve_opts.schema_path, "Turtle schema file");
    serve->add_option("--port", serve_opts.port, "TCP port (PORT env overrides)");
    serve->add_option("--host", serve_opts.host, "Bind address");
    bool no_reason_serve = false;
    serve->add_flag("--no-reason", no_reason_serve, "Serve asserted data only");
    serve->add_option("--max-query-bytes", serve_opts.max_query_bytes, "Maximum query length");
    serve->add_option("--timeout-ms", serve_opts.timeout_ms, "Per-request evaluation deadline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (build->parsed()) {
        for (const std::string& binding : sheet_specs) {
            auto eq = binding.find('=');
            if (eq == std::string::npos) {
                err << "usage error: --sheet expects NAME=CSV-PATH\n";
                return 2;
            }
            build_opts.sheets.emplace_back(binding.substr(0, eq), binding.substr(eq + 1));
        }
        build_opts.base_iri = base_iri;
        build_opts.quiet = quiet;
        return cmd_build(build_opts, out, err).code;
    }
    if (query->parsed()) {
        query_opts.quiet = quiet;
        return cmd_query(query_opts, out, err).code;
    }
    if (validate->parsed()) {
        validate_opts.reason = !no_reason_validate;
        validate_opts.quiet = quiet;
        return cmd_validate(validate_opts, out, err).code;
    }
    if (reason->parsed()) {
        reason_opts.quiet = quiet;
        return cmd_reason(reason_opts, out, err).code;
    }
    if (stats->parsed()) {
        return cmd_stats(stats_opts, out, err).code;
    }
    if (exp->parsed()) {
        return cmd_export(export_opts, out, err).code;
    }
    if (serve->parsed()) {
        serve_opts.reason = !no_reason_serve;
        if (const char* env = std::getenv("PORT")) serve_opts.port = std::atoi(env);
        return cmd_serve(serve_opts, out, err).code;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace rkg
