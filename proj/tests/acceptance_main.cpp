// Acceptance suite: one line per criterion, PASS or FAIL, exit 0 only
// when everything passes. Expected values are frozen from the published
// result tables; the independent oracles live in oracles.cpp.

#include <chrono>
#include <cctype>
#include <cstdio>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "oracles.hpp"
#include "rkg/commands.hpp"
#include "rkg/endpoint.hpp"
#include "rkg/inference.hpp"
#include "rkg/query.hpp"
#include "rkg/schema.hpp"
#include "rkg/sheetmap.hpp"
#include "rkg/turtle.hpp"

using namespace rkg;

namespace {

const std::string seed_dir = std::string(RKG_SOURCE_DIR) + "/seed";
const std::string golden_dir = std::string(RKG_SOURCE_DIR) + "/tests/golden";

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("%s  %d. %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

template <typename Fn>
void criterion(int number, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(number, name, false, std::string("exception: ") + e.what());
    }
}


std::string url_encode(const std::string& text) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 15];
        }
    }
    return out;
}

GraphStore load_seed() {
    GraphStore store;
    load_turtle_file(store, seed_dir + "/ontobio-seed.ttl");
    load_turtle_file(store, seed_dir + "/rkg-seed.ttl");
    return store;
}

// one retry absorbs transient connect failures under load bursts
template <typename Fn>
auto with_retry(Fn&& fn) -> decltype(fn()) {
    auto res = fn();
    if (!res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        res = fn();
    }
    return res;
}

// --- criterion 1: the education competency question --------------------

void education_question() {
    GraphStore store = load_seed();
    SchemaIndex schema = extract_schema(store);
    materialize(store, schema);
    QueryAST query = parse_query(read_file(seed_dir + "/queries/cq3.rq"));

    auto t0 = std::chrono::steady_clock::now();
    SolutionTable table = evaluate(query, store);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool pass = table.rows.size() == 7;
    const std::vector<std::string> years = {"1909", "1913", "1916", "1917",
                                            "1925", "1948", "1964"};
    const std::vector<std::string> degrees = {"Matriculation",
                                              "B.A. in Mathematics",
                                              "M.A. in Mathematics",
                                              "Licentiate in Teaching",
                                              "Honours Certificate in Librarianship",
                                              "Honoris causa",
                                              "Honoris causa"};
    const std::set<std::string> unbound_subject_years = {"1909", "1948", "1964"};
    std::string detail;
    if (pass) {
        for (std::size_t i = 0; i < 7; ++i) {
            const auto& row = table.rows[i];
            if (!row[1] || as_literal(*row[1]).lexical != years[i]) pass = false;
            if (!row[2] || as_literal(*row[2]).lexical != degrees[i]) pass = false;
            bool subject_unbound = !row[4].has_value();
            bool expect_unbound =
                row[1] && unbound_subject_years.count(as_literal(*row[1]).lexical) > 0;
            if (subject_unbound != expect_unbound) pass = false;
        }
        if (seconds >= 1.0) {
            pass = false;
            detail = "slow: " + std::to_string(seconds) + "s";
        }
    } else {
        detail = "rows=" + std::to_string(table.rows.size());
    }
    report(1, "education question: 7 rows, year order, degrees, unbound subjects", pass, detail);
}

// --- criterion 2: the health competency question ------------------------

void health_question() {
    GraphStore store = load_seed();
    SchemaIndex schema = extract_schema(store);
    materialize(store, schema);
    QueryAST query = parse_query(read_file(seed_dir + "/queries/cq5.rq"));

    auto t0 = std::chrono::steady_clock::now();
    SolutionTable table = evaluate(query, store);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    SolutionTable expected = oracle::naive_evaluate(query, store);

    bool pass = oracle::row_bag(table) == oracle::row_bag(expected);
    bool partitioned = true;
    std::set<std::string> diagnoses;
    bool torn_calf = false;
    for (const auto& row : table.rows) {
        bool symptom_branch = row[1].has_value();
        bool diagnosis_branch = row[3].has_value();
        if (symptom_branch == diagnosis_branch) partitioned = false;
        if (diagnosis_branch) diagnoses.insert(as_iri(*row[3]).value);
        if (row[5] && as_literal(*row[5]).lexical.rfind(
                          "Sudden collapse due to a torn calf muscle", 0) == 0)
            torn_calf = true;
    }
    const std::set<std::string> expected_diagnoses = {
        "https://w3id.org/ontobio#InfectedWound", "https://w3id.org/ontobio#MuscleTear",
        "https://w3id.org/ontobio#Sunburn", "https://w3id.org/ontobio#Bronchitis"};
    pass = pass && partitioned && torn_calf && diagnoses == expected_diagnoses &&
           seconds < 1.0;
    report(2, "health question: branch partition, diagnosis set, oracle row count", pass,
           "rows=" + std::to_string(table.rows.size()));
}

// --- criterion 3: inference ----------------------------------------------

void inference_example() {
    GraphStore store = load_seed();
    SchemaIndex schema = extract_schema(store);
    materialize(store, schema);

    auto types = types_of(store, Iri("https://w3id.org/ontobio#SRRanganathan"));
    bool pass = types.count(Iri("http://xmlns.com/foaf/0.1/Person")) == 1 &&
                types.count(Iri("http://xmlns.com/foaf/0.1/Agent")) == 1;
    InferenceStats again = materialize(store, schema);
    pass = pass && again.inferred_triples == 0;
    report(3, "inference: person is inferred an agent; rerun adds nothing", pass,
           "rerun inferred=" + std::to_string(again.inferred_triples));
}

// --- criterion 4: consistency and targeted violations --------------------

void consistency_checks() {
    GraphStore store = load_seed();
    SchemaIndex schema = extract_schema(store);
    materialize(store, schema);

    ViolationReport clean = validate(store, schema);
    bool pass = clean.error_count() == 0;

    GraphStore clash = store;
    load_turtle(clash,
                "@prefix : <https://w3id.org/ontobio#> .\n"
                "@prefix foaf: <http://xmlns.com/foaf/0.1/> .\n"
                ":SRRanganathan a foaf:Organization .\n");
    ViolationReport vclash = validate(clash, schema);
    std::size_t disjoint_errors = 0;
    for (const Violation& v : vclash.violations) {
        if (v.kind == ViolationKind::DisjointnessClash) ++disjoint_errors;
        // the injected type also collides with several declared Person
        // domains; those extra entries must all be domain mismatches
        if (v.kind != ViolationKind::DisjointnessClash &&
            v.kind != ViolationKind::DomainMismatch)
            pass = false;
    }
    pass = pass && disjoint_errors == 1;

    GraphStore literal_object = store;
    load_turtle(literal_object,
                "@prefix : <https://w3id.org/ontobio#> .\n"
                "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
                ":SRRanganathan :hasDegree \"1909\"^^xsd:string .\n");
    ViolationReport vrange = validate(literal_object, schema);
    std::size_t range_errors = 0;
    for (const Violation& v : vrange.violations) {
        if (v.kind == ViolationKind::RangeMismatch) ++range_errors;
    }
    pass = pass && range_errors == 1 && vrange.error_count() == clean.error_count() + 1;

    ConsistencyReport consistency = check_consistency(store, schema);
    pass = pass && consistency.consistent;

    report(4, "consistency: clean seed; injected violations each yield one entry", pass);
}

// --- criterion 5: mapping golden file ------------------------------------

void mapping_golden() {
    RuleSet rules = parse_rules(read_file(seed_dir + "/rules/bibliography.rules"));
    Workbook wb = load_workbook(
        {{"Books List", read_file(seed_dir + "/sheets/books.csv")},
         {"Articles List", read_file(seed_dir + "/sheets/articles.csv")}});
    GraphStore schema_store;
    load_turtle_file(schema_store, seed_dir + "/ontobio-seed.ttl");
    ApplyResult result =
        apply_rules(rules, wb, standard_prefixes(), extract_schema(schema_store));

    std::set<std::string> got;
    for (const Triple& t : result.graph.triples()) got.insert(to_ntriples(t));
    std::set<std::string> golden;
    for (const Triple& t : parse_ntriples(read_file(golden_dir + "/bibliography.nt")))
        golden.insert(to_ntriples(t));
    bool pass = got == golden;

    // generated-individual count against the independent cell-name oracle
    auto books = parse_csv(read_file(seed_dir + "/sheets/books.csv"));
    auto articles = parse_csv(read_file(seed_dir + "/sheets/articles.csv"));
    std::vector<std::string> book_cells, article_cells, journal_cells;
    for (std::size_t r = 3; r <= books.size(); ++r)
        book_cells.push_back(books[r - 1].size() > 1 ? books[r - 1][1] : "");
    for (std::size_t r = 2; r <= articles.size(); ++r) {
        article_cells.push_back(articles[r - 1].empty() ? "" : articles[r - 1][0]);
        journal_cells.push_back(articles[r - 1].size() > 2 ? articles[r - 1][2] : "");
    }
    std::size_t expected_individuals = oracle::distinct_cell_names(book_cells) +
                                       oracle::distinct_cell_names(article_cells) +
                                       oracle::distinct_cell_names(journal_cells);
    std::set<std::string> generated;
    for (const ProvenanceEntry& e : result.log.entries) {
        for (const Triple& t : e.triples) generated.insert(to_ntriples(t.subject));
    }
    pass = pass && generated.size() == expected_individuals;
    report(5, "mapping: golden triple set and individual-count oracle", pass,
           "triples=" + std::to_string(got.size()) +
               " individuals=" + std::to_string(generated.size()));
}

// --- criterion 6: round-trips and byte stability ---------------------------

void round_trips() {
    GraphStore store = load_seed();
    std::set<std::string> original;
    for (const Triple& t : store.triples()) original.insert(to_ntriples(t));

    std::string turtle1 = serialize_turtle(store);
    std::string turtle2 = serialize_turtle(store);
    GraphStore from_turtle_store;
    load_turtle(from_turtle_store, turtle1);
    std::set<std::string> via_turtle;
    for (const Triple& t : from_turtle_store.triples()) via_turtle.insert(to_ntriples(t));

    std::string nt1 = serialize_ntriples(store);
    std::string nt2 = serialize_ntriples(store);
    GraphStore from_nt_store;
    load_ntriples(from_nt_store, nt1);
    std::set<std::string> via_nt;
    for (const Triple& t : from_nt_store.triples()) via_nt.insert(to_ntriples(t));

    bool pass = turtle1 == turtle2 && nt1 == nt2 && via_turtle == original && via_nt == original;
    report(6, "round-trips: turtle and n-triples re-parse equal; output byte-stable", pass);
}

// --- criterion 7: the three oracle-equivalence families ---------------------

void oracle_match() {
    oracle::Rng rng(101);
    const std::string ont = "https://w3id.org/ontobio#";
    std::size_t cases = 0;
    bool pass = true;
    for (int round = 0; round < 70 && pass; ++round) {
        GraphStore store;
        std::vector<Term> subjects, predicates, objects;
        for (int i = 0; i < 5; ++i) {
            subjects.push_back(Term{Iri(ont + "s" + std::to_string(i))});
            predicates.push_back(Term{Iri(ont + "p" + std::to_string(i))});
        }
        subjects.push_back(Term{BlankNode{"b"}});
        objects = subjects;
        objects.push_back(Term{Literal::plain("v")});
        objects.push_back(Term{Literal::tagged("v", "en")});
        int n = 1 + static_cast<int>(rng.below(45));
        for (int i = 0; i < n; ++i) {
            store.add(Triple{subjects[rng.below(subjects.size())],
                             predicates[rng.below(predicates.size())],
                             objects[rng.below(objects.size())]});
        }
        std::vector<Triple> all = store.triples();
        auto pick = [&](const std::vector<Term>& pool) -> std::optional<Term> {
            if (rng.chance(40)) return std::nullopt;
            return pool[rng.below(pool.size())];
        };
        for (int q = 0; q < 16; ++q) {
            auto s = pick(subjects);
            auto p = pick(predicates);
            auto o = pick(objects);
            std::multiset<std::string> got, want;
            for (const Triple& t : store.match(s, p, o)) got.insert(to_ntriples(t));
            for (const Triple& t : oracle::scan_match(all, s, p, o)) want.insert(to_ntriples(t));
            if (got != want) pass = false;
            ++cases;
        }
    }
    report(7, "oracle (a): index match equals linear scan on " + std::to_string(cases) + " cases",
           pass && cases >= 1000);
}

void oracle_materialize() {
    oracle::Rng rng(202);
    const std::string ont = "https://w3id.org/ontobio#";
    const Term type{Iri(std::string(vocab::kRdfType))};
    const Term sub_class{Iri(std::string(vocab::kRdfsSubClassOf))};
    const Term sub_prop{Iri(std::string(vocab::kRdfsSubPropertyOf))};
    const Term domain{Iri(std::string(vocab::kRdfsDomain))};
    const Term range{Iri(std::string(vocab::kRdfsRange))};
    const Term inverse{Iri(std::string(vocab::kOwlInverseOf))};
    const Term owl_class{Iri(std::string(vocab::kOwlClass))};
    const Term obj_prop{Iri(std::string(vocab::kOwlObjectProperty))};
    const Term data_prop{Iri(std::string(vocab::kOwlDatatypeProperty))};

    std::size_t cases = 0;
    bool pass = true;
    for (int round = 0; round < 1000 && pass; ++round) {
        GraphStore store;
        int classes = 2 + static_cast<int>(rng.below(19));  // up to 20 classes
        int props = 1 + static_cast<int>(rng.below(4));
        int inds = 2 + static_cast<int>(rng.below(7));
        auto cls = [&](std::size_t i) { return Term{Iri(ont + "C" + std::to_string(i))}; };
        auto prp = [&](std::size_t i) { return Term{Iri(ont + "p" + std::to_string(i))}; };
        auto ind = [&](std::size_t i) { return Term{Iri(ont + "i" + std::to_string(i))}; };

        for (int i = 0; i < classes; ++i) {
            if (rng.chance(70))
                store.add(Triple{cls(static_cast<std::size_t>(i)), type, owl_class});
            for (int j = i + 1; j < classes; ++j) {
                if (rng.chance(10))
                    store.add(Triple{cls(static_cast<std::size_t>(i)), sub_class,
                                     cls(static_cast<std::size_t>(j))});
            }
        }
        std::vector<bool> object_kind(static_cast<std::size_t>(props));
        for (int i = 0; i < props; ++i) {
            object_kind[static_cast<std::size_t>(i)] = rng.chance(75);
            store.add(Triple{prp(static_cast<std::size_t>(i)), type,
                             object_kind[static_cast<std::size_t>(i)] ? obj_prop : data_prop});
            for (int j = i + 1; j < props; ++j) {
                if (rng.chance(20))
                    store.add(Triple{prp(static_cast<std::size_t>(i)), sub_prop,
                                     prp(static_cast<std::size_t>(j))});
            }
            if (rng.chance(40))
                store.add(Triple{prp(static_cast<std::size_t>(i)), domain,
                                 cls(rng.below(static_cast<std::size_t>(classes)))});
            if (object_kind[static_cast<std::size_t>(i)] && rng.chance(40))
                store.add(Triple{prp(static_cast<std::size_t>(i)), range,
                                 cls(rng.below(static_cast<std::size_t>(classes)))});
        }
        std::set<int> paired;
        for (int i = 0; i < props; ++i) {
            if (!object_kind[static_cast<std::size_t>(i)] || paired.count(i)) continue;
            if (!rng.chance(30)) continue;
            int j = static_cast<int>(rng.below(static_cast<std::size_t>(props)));
            if (j == i || paired.count(j) || !object_kind[static_cast<std::size_t>(j)]) continue;
            store.add(
                Triple{prp(static_cast<std::size_t>(i)), inverse, prp(static_cast<std::size_t>(j))});
            paired.insert(i);
            paired.insert(j);
        }
        int facts = static_cast<int>(rng.below(40));
        for (int f = 0; f < facts; ++f) {
            switch (rng.below(3)) {
                case 0:
                    store.add(Triple{ind(rng.below(static_cast<std::size_t>(inds))), type,
                                     cls(rng.below(static_cast<std::size_t>(classes)))});
                    break;
                case 1:
                    store.add(Triple{ind(rng.below(static_cast<std::size_t>(inds))),
                                     prp(rng.below(static_cast<std::size_t>(props))),
                                     ind(rng.below(static_cast<std::size_t>(inds)))});
                    break;
                default:
                    store.add(Triple{ind(rng.below(static_cast<std::size_t>(inds))),
                                     prp(rng.below(static_cast<std::size_t>(props))),
                                     Term{Literal::plain("v" + std::to_string(rng.below(4)))}});
            }
        }

        SchemaIndex schema = extract_schema(store);
        std::set<std::string> expected = oracle::naive_closure(store);
        GraphStore materialized = store;
        materialize(materialized, schema);
        std::set<std::string> got;
        for (const Triple& t : materialized.triples()) got.insert(to_ntriples(t));
        if (got != expected) pass = false;
        ++cases;
    }
    report(7, "oracle (b): materialization equals naive fixpoint on " + std::to_string(cases) +
                  " cases",
           pass && cases >= 1000);
}

void oracle_query() {
    oracle::Rng rng(303);
    const std::string ont = "https://w3id.org/ontobio#";
    std::size_t cases = 0;
    bool pass = true;
    for (int round = 0; round < 1100 && pass; ++round) {
        GraphStore store;
        int n = static_cast<int>(rng.below(60));
        for (int i = 0; i < n; ++i) {
            store.add(Triple{Term{Iri(ont + "s" + std::to_string(rng.below(5)))},
                             Term{Iri(ont + "p" + std::to_string(rng.below(3)))},
                             rng.chance(35)
                                 ? Term{Literal::plain(std::to_string(rng.below(12)))}
                                 : Term{Iri(ont + "s" + std::to_string(rng.below(5)))}});
        }
        std::string q = "PREFIX : <https://w3id.org/ontobio#>\nSELECT ";
        if (rng.chance(25)) q += "DISTINCT ";
        q += rng.chance(50) ? "*" : "?a ?b ?c";
        q += " WHERE { ";
        auto pattern = [&](int hint) {
            std::string s = rng.chance(60) ? ("?" + std::string(1, char('a' + hint % 3)))
                                           : (":s" + std::to_string(rng.below(5)));
            std::string p = rng.chance(75)
                                ? (":p" + std::to_string(rng.below(3)))
                                : ("?" + std::string(1, char('a' + (hint + 1) % 3)));
            std::string o = rng.chance(55)
                                ? ("?" + std::string(1, char('a' + (hint + 2) % 3)))
                                : rng.chance(50) ? ("\"" + std::to_string(rng.below(12)) + "\"")
                                                 : (":s" + std::to_string(rng.below(5)));
            return s + " " + p + " " + o + " . ";
        };
        switch (rng.below(4)) {
            case 0: q += pattern(0) + pattern(1); break;
            case 1: q += pattern(0) + "OPTIONAL { " + pattern(1) + "} "; break;
            case 2: q += "{ " + pattern(0) + "} UNION { " + pattern(1) + "} " + pattern(2); break;
            default: q += pattern(0) + "FILTER(?a != ?b) ";
        }
        q += "}";
        if (rng.chance(30)) q += " ORDER BY ?a";

        QueryAST ast = parse_query(q);
        SolutionTable got = evaluate(ast, store);
        SolutionTable want = oracle::naive_evaluate(ast, store);
        if (oracle::row_bag(got) != oracle::row_bag(want)) pass = false;
        ++cases;
    }
    report(7, "oracle (c): evaluation equals exhaustive/naive evaluation on " +
                  std::to_string(cases) + " cases",
           pass && cases >= 1000);
}

// --- criterion 8: endpoint -----------------------------------------------

void endpoint_checks() {
    ServiceConfig config;
    config.port = 0;
    config.schema_path = seed_dir + "/ontobio-seed.ttl";
    config.data_paths = {seed_dir + "/rkg-seed.ttl"};
    Endpoint endpoint(config);
    int port = endpoint.start();

    std::string query = read_file(seed_dir + "/queries/cq3.rq");
    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/sparql?query=" + url_encode(query));
    bool pass = res && res->status == 200;
    if (pass) {
        nlohmann::json j = nlohmann::json::parse(res->body);
        pass = j.contains("head") && j["head"].contains("vars") && j.contains("results") &&
               j["results"].contains("bindings") && j["results"]["bindings"].size() == 7;
    }

    auto bad = client.Get("/sparql?query=SELECT");
    pass = pass && bad && bad->status == 400;

    std::vector<std::string> bodies(16);
    std::vector<int> statuses(16, 0);
    {
        std::vector<std::thread> threads;
        for (int i = 0; i < 16; ++i) {
            threads.emplace_back([&, i] {
                httplib::Client c2("127.0.0.1", port);
                auto r = with_retry(
                    [&] { return c2.Post("/sparql", query, "application/sparql-query"); });
                if (r) {
                    statuses[static_cast<std::size_t>(i)] = r->status;
                    bodies[static_cast<std::size_t>(i)] = r->body;
                }
            });
        }
        for (std::thread& t : threads) t.join();
    }
    for (int i = 0; i < 16; ++i) {
        if (statuses[static_cast<std::size_t>(i)] != 200 ||
            bodies[static_cast<std::size_t>(i)] != bodies[0])
            pass = false;
    }
    endpoint.stop();
    report(8, "endpoint: 200 with 7 bindings, 400 on malformed, 16 identical concurrent bodies",
           pass);
}

// --- criterion 9: metrics -------------------------------------------------

void metrics_against_oracle() {
    GraphStore store = load_seed();
    SchemaIndex schema = extract_schema(store);
    Metrics m = compute_metrics(schema, store);
    std::string nt = serialize_ntriples(store);

    bool pass = m.class_count == oracle::count_class_declarations(nt) &&
                m.object_property_count ==
                    oracle::count_property_declarations(nt, "ObjectProperty") &&
                m.data_property_count ==
                    oracle::count_property_declarations(nt, "DatatypeProperty") &&
                m.annotation_property_count ==
                    oracle::count_property_declarations(nt, "AnnotationProperty") &&
                m.individual_count == oracle::count_typed_individuals(nt) &&
                m.triple_count == oracle::distinct_statement_lines(nt);

    // the full knowledge graph's published figures are reference values,
    // deliberately not reproduced by this seed
    pass = pass && m.class_count != 198 && m.individual_count != 1809;
    report(9, "metrics: stats equal the independent counting script", pass,
           "classes=" + std::to_string(m.class_count) +
               " individuals=" + std::to_string(m.individual_count));
}

}  // namespace

int main() {
    criterion(1, "education question", education_question);
    criterion(2, "health question", health_question);
    criterion(3, "inference", inference_example);
    criterion(4, "consistency", consistency_checks);
    criterion(5, "mapping golden file", mapping_golden);
    criterion(6, "round-trips", round_trips);
    criterion(7, "oracle equivalence (a)", oracle_match);
    criterion(7, "oracle equivalence (b)", oracle_materialize);
    criterion(7, "oracle equivalence (c)", oracle_query);
    criterion(8, "endpoint", endpoint_checks);
    criterion(9, "metrics", metrics_against_oracle);

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion check(s) failed\n", failures);
    return 1;
}
