#include <doctest.h>

#include <algorithm>

#include "macmin/minimize.hpp"
#include "macmin/oracle.hpp"
#include "macmin/owl.hpp"
#include "support/helpers.hpp"

using namespace macmin;
using namespace testsupport;

TEST_CASE("subclass axioms become ordered terms") {
    OwlDocument doc = parse_owl_functional(
        "SubClassOf(:A ObjectIntersectionOf(:B :C))\n");
    REQUIRE(doc.axioms.size() == 1);
    const Term& t = doc.axioms[0];
    CHECK(t.label() == "SubClassOf");
    CHECK(t.star_begin() == 2);
    CHECK(t.child(0).label() == "A");
    CHECK(t.child(1).label() == "ObjectIntersectionOf");
    CHECK(t.child(1).star_begin() == 0);
    CHECK(t.size() == 5);
    CHECK(doc.skipped_axioms == 0);
}

TEST_CASE("disjoint union is a mixed symbol with one ranked child") {
    OwlDocument doc = parse_owl_functional("DisjointUnion(:A :B :C :D)\n");
    REQUIRE(doc.axioms.size() == 1);
    const Term& t = doc.axioms[0];
    CHECK(t.label() == "DisjointUnion");
    CHECK(t.child_count() == 4);
    CHECK(t.star_begin() == 1);
    CHECK(t.child(0).label() == "A"); // the defined class keeps position 1
    CHECK_FALSE(t.child_is_star(0));
    CHECK(t.child_is_star(1));
}

TEST_CASE("annotation-only documents parse to nothing") {
    OwlDocument doc = parse_owl_functional(
        "Prefix(rdfs:=<http://www.w3.org/2000/01/rdf-schema#>)\n"
        "Ontology(<http://x/y>\n"
        "  AnnotationAssertion(rdfs:label :A \"text\")\n"
        "  AnnotationAssertion(rdfs:label :B \"more\")\n"
        ")\n");
    CHECK(doc.axioms.empty());
    CHECK(doc.skipped_axioms == 2);
}

TEST_CASE("annotations inside kept axioms are discarded") {
    OwlDocument doc = parse_owl_functional(
        "SubClassOf(Annotation(rdfs:comment \"why\") :A :B)\n");
    REQUIRE(doc.axioms.size() == 1);
    CHECK(doc.axioms[0].size() == 3);
}

TEST_CASE("set-valued constructors deduplicate their arguments") {
    OwlDocument doc = parse_owl_functional(
        "SubClassOf(:X ObjectIntersectionOf(:A :A))\n"
        "SubClassOf(:Y ObjectIntersectionOf(:A))\n");
    REQUIRE(doc.axioms.size() == 2);
    CHECK(doc.axioms[0].child(1).child_count() == 1);
    CHECK(doc.axioms[0].child(1) == doc.axioms[1].child(1));
}

TEST_CASE("identical axioms collapse structurally") {
    OwlDocument doc = parse_owl_functional(
        "SubClassOf(:X ObjectIntersectionOf(:A :B))\n"
        "SubClassOf(:X ObjectIntersectionOf(:B :A))\n");
    CHECK(doc.axioms.size() == 2);
    CHECK(axioms_as_language(doc.axioms).count() == 1);
}

TEST_CASE("unsupported constructors: skipped strictly, opaque leniently") {
    std::string text = "SubClassOf(:A ObjectMinCardinality(2 :r :B))\n"
                       "SubClassOf(:C :D)\n";
    OwlDocument strict = parse_owl_functional(text);
    CHECK(strict.axioms.size() == 1);
    CHECK(strict.skipped_axioms == 1);

    OwlDocument lenient = parse_owl_functional(text, OwlParseOptions{true});
    CHECK(lenient.axioms.size() == 2);
    CHECK(lenient.skipped_axioms == 0);
    CHECK(lenient.axioms[0].child(1).label() == "ObjectMinCardinality");
    CHECK(lenient.axioms[0].child(1).child_count() == 3);
}

TEST_CASE("full IRIs map to their local fragments, uniquely") {
    OwlDocument doc = parse_owl_functional(
        "SubClassOf(<http://one.example/ns#Thing> <http://two.example/ns#Thing>)\n");
    REQUIRE(doc.axioms.size() == 1);
    const Term& t = doc.axioms[0];
    CHECK(t.child(0).label() == "Thing");
    CHECK(t.child(1).label() == "Thing_2");
}

TEST_CASE("duplicate definitions are dropped in preparation") {
    OwlDocument doc = parse_owl_functional(
        "EquivalentClasses(:N ObjectIntersectionOf(:A :B))\n"
        "EquivalentClasses(:N ObjectIntersectionOf(:A :C))\n");
    OntologyCorpus corpus = prepare_experiment(doc);
    CHECK(corpus.candidate_defs.count() == 0);
    size_t dup_drops = 0;
    for (const auto& d : corpus.dropped) dup_drops += d.reason == "duplicate-definition";
    CHECK(dup_drops == 2);
    // the axioms stay in the problem-1/2 language
    CHECK(corpus.language_p12.count() == 2);
}

TEST_CASE("cyclic definitions are dropped in preparation") {
    OwlDocument doc = parse_owl_functional(
        "EquivalentClasses(:N ObjectSomeValuesFrom(:r :N2))\n"
        "EquivalentClasses(:N2 ObjectSomeValuesFrom(:r :N))\n"
        "EquivalentClasses(:K ObjectSomeValuesFrom(:r :A))\n");
    OntologyCorpus corpus = prepare_experiment(doc);
    CHECK(corpus.candidate_defs.count() == 1);
    CHECK(corpus.candidate_defs.defines("K"));
    size_t cycle_drops = 0;
    for (const auto& d : corpus.dropped) cycle_drops += d.reason == "cycle";
    CHECK(cycle_drops == 2);
}

TEST_CASE("the bundled mini ontology prepares as expected") {
    OwlDocument doc = parse_owl_functional(read_file(corpora_path("mini.ofn")));
    CHECK(doc.skipped_axioms == 1); // the annotation assertion
    CHECK(doc.axioms.size() == 12);

    OntologyCorpus corpus = prepare_experiment(doc);
    CHECK(corpus.axioms.count() == 11); // one duplicate subclass axiom collapses

    REQUIRE(corpus.candidate_defs.count() == 2);
    CHECK(corpus.candidate_defs.defines("N1"));
    CHECK(corpus.candidate_defs.defines("N2"));

    std::vector<std::string> reasons;
    for (const auto& d : corpus.dropped) reasons.push_back(d.reason);
    CHECK(std::count(reasons.begin(), reasons.end(), "duplicate-definition") == 2);
    CHECK(std::count(reasons.begin(), reasons.end(), "cycle") == 2);
    CHECK(std::count(reasons.begin(), reasons.end(), "unary") == 1);

    // problems 1-2: 11 axioms minus the two definitional ones
    CHECK(corpus.language_p12.count() == 9);
    CHECK_FALSE(corpus.language_p12.contains_macro());
    // problem 3: 11 axioms minus the ComplementOf one
    CHECK(corpus.language_p3.count() == 10);

    // the macro names expand away: SubClassOf(:Y :N1) inflates
    Term y;
    for (const Term& t : corpus.language_p12.terms())
        if (t.label() == "SubClassOf" && t.child(0).label() == "Y") y = t;
    REQUIRE(y.valid());
    CHECK(y.size() == 7); // Y + SomeValuesFrom(r, IntersectionOf(A, B))
}

TEST_CASE("candidate definitions validate and support minimization") {
    OwlDocument doc = parse_owl_functional(read_file(corpora_path("mini.ofn")));
    OntologyCorpus corpus = prepare_experiment(doc);

    MinimizationReport p1 = minimize_p1(corpus.language_p12, corpus.candidate_defs);
    CHECK(is_encoding(p1.encoding.macrofied, p1.encoding.defs, corpus.language_p12));
    CHECK(p1.output_size <= corpus.language_p12.total_size() +
                                corpus.candidate_defs.definitions_size());

    MinimizationReport p3 = minimize_p3(corpus.language_p3, corpus.alphabet_p3);
    CHECK(is_encoding(p3.encoding.macrofied, p3.encoding.defs, corpus.language_p3));
    CHECK(p3.output_size <= corpus.language_p3.total_size());
}

TEST_CASE("ingestion is deterministic") {
    std::string text = read_file(corpora_path("mini.ofn"));
    OwlDocument a = parse_owl_functional(text);
    OwlDocument b = parse_owl_functional(text);
    OntologyCorpus ca = prepare_experiment(a);
    OntologyCorpus cb = prepare_experiment(b);
    CHECK(write_corpus(ca.alphabet_p3, ca.language_p3) ==
          write_corpus(cb.alphabet_p3, cb.language_p3));
    CHECK(write_corpus(ca.alphabet_p12, ca.language_p12) ==
          write_corpus(cb.alphabet_p12, cb.language_p12));
}

TEST_CASE("second sample parses and prepares") {
    OwlDocument doc = parse_owl_functional(read_file(corpora_path("sample2.ofn")));
    CHECK(doc.skipped_axioms == 1); // the property-domain axiom
    OntologyCorpus corpus = prepare_experiment(doc);
    CHECK(corpus.candidate_defs.count() == 1);
    CHECK(corpus.language_p12.count() == 4);
    // the union deduplicated its repeated argument
    for (const Term& t : corpus.axioms.terms())
        if (t.label() == "SubClassOf" && t.child(1).label() == "ObjectAllValuesFrom")
            CHECK(t.child(1).child(1).child_count() == 2);
}

TEST_CASE("empty axiom lists produce empty languages") {
    CHECK(axioms_as_language({}).count() == 0);
    OwlDocument doc = parse_owl_functional("Ontology(<http://empty.example/>)\n");
    CHECK(doc.axioms.empty());
    OntologyCorpus corpus = prepare_experiment(doc);
    CHECK(corpus.language_p12.empty());
    CHECK(corpus.language_p3.empty());
}
