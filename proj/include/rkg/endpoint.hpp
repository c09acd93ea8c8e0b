#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "rkg/graph_store.hpp"
#include "rkg/schema.hpp"

namespace rkg {

struct ServiceConfig {
    int port = 3030;
    std::string host = "127.0.0.1";
    std::string schema_path;                // optional; empty = none
    std::vector<std::string> data_paths;
    bool reason_on_load = true;
    std::size_t max_query_bytes = 262144;
    std::chrono::milliseconds request_timeout{5000};
};

struct HttpAnswer {
    int status = 200;
    std::string content_type;
    std::string body;
};

/// Pure request handler behind GET/POST /sparql: parses and evaluates
/// `query` against an immutable store. 200 with results JSON, 400 on a
/// parse error or oversized query, 408 on timeout.
HttpAnswer answer_sparql(const GraphStore& store, const std::string& query,
                         std::size_t max_query_bytes, std::chrono::milliseconds timeout);

/// SPARQL-protocol-subset endpoint. Loads (and optionally materializes)
/// the dataset strictly before the listener opens; every request runs
/// read-only against the immutable store.
///
/// Routes: GET /sparql?query=..., POST /sparql (application/sparql-query),
/// GET /stats, GET /health; anything else is 404.
class Endpoint {
public:
    explicit Endpoint(ServiceConfig config);
    ~Endpoint();

    Endpoint(const Endpoint&) = delete;
    Endpoint& operator=(const Endpoint&) = delete;

    /// Binds and serves on a background thread; returns the bound port
    /// (useful with config.port = 0 for an ephemeral port). Throws
    /// IoError when binding fails.
    int start();
    void stop();

    /// Blocks until the listener thread exits (pair with start()).
    void wait();

    /// Blocking serve for the CLI. Throws IoError when binding fails.
    void run();

    int port() const;
    const GraphStore& store() const;
    const Metrics& metrics() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rkg
