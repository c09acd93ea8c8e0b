#include <doctest.h>
#include <sstream>
#include <set>

#include "oracles.hpp"
#include "rkg/errors.hpp"
#include "rkg/turtle.hpp"

using namespace rkg;

namespace {

const std::string kOnt = "https://w3id.org/ontobio#";

std::set<std::string> triple_set(const std::vector<Triple>& ts) {
    std::set<std::string> out;
    for (const Triple& t : ts) out.insert(to_ntriples(t));
    return out;
}

}  // namespace

TEST_CASE("turtle: prefixes, 'a', semicolon and comma lists") {
    const char* doc = R"(
@prefix : <https://w3id.org/ontobio#> .
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
# a comment
:SRRanganathan a foaf:Person ;
    :hasDegree :BA_Ranga, :MA_Ranga .
)";
    ParsedDoc parsed = parse_turtle(doc);
    CHECK(parsed.prefixes.size() == 2);
    REQUIRE(parsed.triples.size() == 3);
    CHECK(to_ntriples(parsed.triples[0].predicate) ==
          "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>");

    // single statement, single triple
    ParsedDoc one = parse_turtle("@prefix foaf: <http://xmlns.com/foaf/0.1/> .\n"
                                 "@prefix : <https://w3id.org/ontobio#> .\n"
                                 ":SRRanganathan a foaf:Person .");
    REQUIRE(one.triples.size() == 1);
}

TEST_CASE("turtle: literals with datatype, language tag, numbers, booleans") {
    const char* doc = R"(
@prefix : <https://w3id.org/ontobio#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
:Book01 :title "Five Laws of Library Science"^^xsd:string ;
    rdfs:label "Five Laws"@en ;
    :pages 449 ;
    :rating 4.5 ;
    :inPrint true .
)";
    ParsedDoc parsed = parse_turtle(doc);
    REQUIRE(parsed.triples.size() == 5);
    const Literal& title = as_literal(parsed.triples[0].object);
    CHECK(title.datatype == vocab::kXsdString);
    const Literal& label = as_literal(parsed.triples[1].object);
    CHECK(label.lang == "en");
    CHECK(as_literal(parsed.triples[2].object).datatype == vocab::kXsdInteger);
    CHECK(as_literal(parsed.triples[3].object).datatype == vocab::kXsdDecimal);
    CHECK(as_literal(parsed.triples[4].object).datatype == vocab::kXsdBoolean);
}

TEST_CASE("turtle: sparql-style PREFIX, blank nodes, escapes") {
    const char* doc = R"(
PREFIX ex: <http://example.org/>
_:b1 ex:says "line\nbreak \"quoted\"" .
_:b1 ex:knows _:b2 .
)";
    ParsedDoc parsed = parse_turtle(doc);
    REQUIRE(parsed.triples.size() == 2);
    CHECK(is_blank(parsed.triples[0].subject));
    CHECK(as_literal(parsed.triples[0].object).lexical == "line\nbreak \"quoted\"");
    CHECK(as_blank(parsed.triples[1].object).label == "b2");
}

TEST_CASE("turtle: empty document") {
    ParsedDoc parsed = parse_turtle("");
    CHECK(parsed.triples.empty());
    CHECK(parsed.prefixes.size() == 0);
    ParsedDoc comment_only = parse_turtle("# nothing here\n");
    CHECK(comment_only.triples.empty());
}

TEST_CASE("turtle: parse errors carry line and column") {
    try {
        parse_turtle("@prefix : <https://w3id.org/ontobio#> .\n:a :b\n  .broken");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 2);
        CHECK(e.col() >= 1);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_turtle(":x :y :z ."), ParseError);         // unknown prefix
    CHECK_THROWS_AS(parse_turtle("<rel> <http://x/p> <http://x/o> ."), ParseError);
    CHECK_THROWS_AS(parse_turtle("@base <http://x/> ."), ParseError);
    CHECK_THROWS_AS(parse_turtle("@prefix x: <http://x#>"), ParseError);  // missing dot
}

TEST_CASE("turtle: serialize is deterministic and round-trips") {
    GraphStore store;
    store.prefixes().declare("", kOnt);
    store.prefixes().declare("foaf", "http://xmlns.com/foaf/0.1/");
    load_turtle(store, R"(
@prefix : <https://w3id.org/ontobio#> .
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
:SRRanganathan a foaf:Person ; :hasDegree :BA_Ranga .
:BA_Ranga :awardYear "1913" ; :oddName :x-y.z .
:weird :value "tab\there"@en .
)");
    std::string first = serialize_turtle(store);
    std::string second = serialize_turtle(store);
    CHECK(first == second);

    GraphStore reparsed;
    load_turtle(reparsed, first);
    CHECK(triple_set(reparsed.triples()) == triple_set(store.triples()));

    // one-triple store: exactly one statement line after the directives
    GraphStore single;
    single.prefixes().declare("", kOnt);
    single.add(Triple{Term{Iri(kOnt + "a")}, Term{Iri(kOnt + "p")}, Term{Iri(kOnt + "b")}});
    std::string text = serialize_turtle(single);
    std::size_t statements = 0;
    std::istringstream lines(text);
    std::string line;
    bool in_preamble = true;
    while (std::getline(lines, line)) {
        if (line.rfind("@prefix", 0) == 0 || line.empty()) continue;
        (void)in_preamble;
        ++statements;
    }
    CHECK(statements == 1);

    // empty store: only prefix directives
    GraphStore empty;
    empty.prefixes().declare("", kOnt);
    std::string empty_text = serialize_turtle(empty);
    CHECK(empty_text == "@prefix : <" + kOnt + "> .\n");
}

TEST_CASE("turtle: round-trip with blank nodes preserves structure") {
    GraphStore store;
    store.prefixes().declare("ex", "http://example.org/");
    load_turtle(store, R"(
@prefix ex: <http://example.org/> .
_:b1 ex:p ex:o .
_:b1 ex:q _:b2 .
)");
    GraphStore back;
    load_turtle(back, serialize_turtle(store));
    CHECK(triple_set(back.triples()) == triple_set(store.triples()));
}

TEST_CASE("ntriples: line-oriented parse and canonical serialize") {
    std::string text =
        "<http://x/a> <http://x/b> <http://x/c> .\n"
        "\n"
        "# comment line\n"
        "<http://x/a> <http://x/d> \"v\"^^<http://www.w3.org/2001/XMLSchema#string> .\n"
        "_:b0 <http://x/b> \"hi\"@en .\n";
    auto triples = parse_ntriples(text);
    REQUIRE(triples.size() == 3);
    CHECK(as_literal(triples[1].object).datatype == vocab::kXsdString);

    GraphStore store;
    for (const Triple& t : triples) store.add(t);
    std::string out = serialize_ntriples(store);
    // canonical: sorted lines, datatype explicit except on lang strings
    CHECK(out.find("\"v\"^^<http://www.w3.org/2001/XMLSchema#string>") != std::string::npos);
    CHECK(out.find("\"hi\"@en .") != std::string::npos);

    auto again = parse_ntriples(out);
    CHECK(triple_set(again) == triple_set(triples));

    // per-line error reporting
    try {
        parse_ntriples("<http://x/a> <http://x/b> <http://x/c> .\n<http://x/a> nonsense\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("ntriples: comments after literals with trailing escapes") {
    auto ts = parse_ntriples(
        "<http://x/a> <http://x/b> \"back\\\\\" . # trailing comment\n"
        "<http://x/a> <http://x/c> \"ha#sh\" . # another\n");
    REQUIRE(ts.size() == 2);
    CHECK(as_literal(ts[0].object).lexical == "back\\");
    CHECK(as_literal(ts[1].object).lexical == "ha#sh");
}

TEST_CASE("ntriples term parser handles canonical forms") {
    CHECK(is_iri(parse_ntriples_term("<http://x/a>")));
    CHECK(is_blank(parse_ntriples_term("_:b7")));
    Term lit = parse_ntriples_term("\"1909\"^^<http://www.w3.org/2001/XMLSchema#string>");
    CHECK(as_literal(lit).lexical == "1909");
    CHECK_THROWS_AS(parse_ntriples_term("not-a-term"), ParseError);
}

TEST_CASE("cross-format: turtle and ntriples describe equal triple sets") {
    GraphStore store;
    load_turtle(store, R"(
@prefix : <https://w3id.org/ontobio#> .
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
:SRRanganathan a foaf:Person ; :awardYear "1936" .
:Sarada a foaf:Person .
)");
    GraphStore from_nt;
    load_ntriples(from_nt, serialize_ntriples(store));
    CHECK(triple_set(from_nt.triples()) == triple_set(store.triples()));
}

TEST_CASE("property: random stores round-trip through both formats") {
    oracle::Rng rng(771177);
    for (int round = 0; round < 40; ++round) {
        GraphStore store;
        store.prefixes().declare("", kOnt);
        store.prefixes().declare("x", "http://example.org/ns#");
        int n = static_cast<int>(rng.below(25));
        for (int i = 0; i < n; ++i) {
            Term s = rng.chance(20) ? Term{BlankNode{"b" + std::to_string(rng.below(4))}}
                                    : Term{Iri(kOnt + "s" + std::to_string(rng.below(6)))};
            Term p{Iri(rng.chance(50) ? kOnt + "p" + std::to_string(rng.below(4))
                                      : "http://example.org/ns#q" + std::to_string(rng.below(3)))};
            Term o;
            switch (rng.below(5)) {
                case 0: o = Term{Literal::plain("plain \"text\" " + std::to_string(rng.below(9)))}; break;
                case 1: o = Term{Literal::tagged("bonjour", "fr")}; break;
                case 2: o = Term{Literal::typed(std::to_string(rng.below(100)),
                                                std::string(vocab::kXsdInteger))}; break;
                case 3: o = Term{BlankNode{"b" + std::to_string(rng.below(4))}}; break;
                default: o = Term{Iri(kOnt + "o" + std::to_string(rng.below(6)))};
            }
            store.add(Triple{s, p, o});
        }

        GraphStore via_turtle;
        load_turtle(via_turtle, serialize_turtle(store));
        REQUIRE(triple_set(via_turtle.triples()) == triple_set(store.triples()));

        GraphStore via_nt;
        load_ntriples(via_nt, serialize_ntriples(store));
        REQUIRE(triple_set(via_nt.triples()) == triple_set(store.triples()));

        // canonical N-Triples doubles as the dedup medium
        REQUIRE(oracle::distinct_statement_lines(serialize_ntriples(store)) == store.size());
    }
}
