#include "rkg/endpoint.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>

#include "rkg/errors.hpp"
#include "rkg/inference.hpp"
#include "rkg/query.hpp"
#include "rkg/turtle.hpp"

namespace rkg {

HttpAnswer answer_sparql(const GraphStore& store, const std::string& query,
                         std::size_t max_query_bytes, std::chrono::milliseconds timeout) {
    if (query.empty()) {
        return {400, "text/plain", "missing query parameter\n"};
    }
    if (query.size() > max_query_bytes) {
        return {400, "text/plain", "query exceeds the configured maximum length\n"};
    }
    QueryAST ast;
    try {
        ast = parse_query(query);
    } catch (const ParseError& e) {
        return {400, "text/plain", std::string("query parse error: ") + e.what() + "\n"};
    }
    EvalOptions options;
    options.deadline = std::chrono::steady_clock::now() + timeout;
    try {
        SolutionTable table = evaluate(ast, store, options);
        return {200, "application/sparql-results+json", to_results_json(table)};
    } catch (const EvalTimeout&) {
        return {408, "text/plain", "query evaluation timed out\n"};
    }
}

struct Endpoint::Impl {
    ServiceConfig config;
    GraphStore store;
    Metrics metrics;
    httplib::Server server;
    std::thread thread;
    int bound_port = 0;
    std::atomic<bool> running{false};

    explicit Impl(ServiceConfig cfg) : config(std::move(cfg)) {
        if (config.port < 0 || config.port > 65535)
            throw std::invalid_argument("port out of range: " + std::to_string(config.port));
        if (config.request_timeout.count() <= 0)
            throw std::invalid_argument("request timeout must be positive");
        // address reuse only; a second bind on a busy port must fail
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
                       reinterpret_cast<const void*>(&yes), sizeof(yes));
        });
        if (!config.schema_path.empty()) load_turtle_file(store, config.schema_path);
        for (const std::string& path : config.data_paths) load_turtle_file(store, path);
        SchemaIndex schema = extract_schema(store);
        if (config.reason_on_load) materialize(store, schema);
        metrics = compute_metrics(schema, store);
        wire_routes();
    }

    void wire_routes() {
        server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("ok", "text/plain");
        });
        server.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(metrics_json(metrics), "application/json");
        });
        server.Get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            answer(req.get_param_value("query"), res);
        });
        server.Post("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            if (req.get_header_value("Content-Type").rfind("application/sparql-query", 0) == 0) {
                answer(req.body, res);
            } else if (req.has_param("query")) {  // form-encoded fallback
                answer(req.get_param_value("query"), res);
            } else {
                res.status = 400;
                res.set_content("expected application/sparql-query body\n", "text/plain");
            }
        });
    }

    void answer(const std::string& query, httplib::Response& res) {
        HttpAnswer a = answer_sparql(store, query, config.max_query_bytes,
                                     config.request_timeout);
        res.status = a.status;
        res.set_content(a.body, a.content_type);
    }

    int bind() {
        if (config.port == 0) {
            bound_port = server.bind_to_any_port(config.host);
            if (bound_port <= 0) throw IoError("cannot bind to an ephemeral port");
        } else {
            if (!server.bind_to_port(config.host, config.port))
                throw IoError("cannot bind to port " + std::to_string(config.port));
            bound_port = config.port;
        }
        return bound_port;
    }
};

Endpoint::Endpoint(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Endpoint::~Endpoint() { stop(); }

int Endpoint::start() {
    int port = impl_->bind();
    impl_->running = true;
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void Endpoint::stop() {
    if (!impl_) return;
    if (impl_->running.exchange(false)) {
        impl_->server.stop();
        if (impl_->thread.joinable()) impl_->thread.join();
    }
}

void Endpoint::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

void Endpoint::run() {
    impl_->bind();
    impl_->server.listen_after_bind();
}

int Endpoint::port() const { return impl_->bound_port; }
const GraphStore& Endpoint::store() const { return impl_->store; }
const Metrics& Endpoint::metrics() const { return impl_->metrics; }

}  // namespace rkg
