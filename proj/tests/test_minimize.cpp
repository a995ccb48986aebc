#include <doctest.h>

#include <algorithm>

#include "macmin/generate.hpp"
#include "macmin/minimize.hpp"
#include "support/helpers.hpp"

using namespace macmin;
using namespace testsupport;

namespace {

Language expected_macrofication(const Example1& ex) {
    Term m1 = make_macro_leaf("m'");
    Term m2 = make_macro_leaf("m''");
    return Language(
        {make_term(ex.alphabet, "a", {m2}), m2, make_term(ex.alphabet, "a", {m1})});
}

} // namespace

TEST_CASE("problem 1 on the running example") {
    Example1 ex;
    MinimizationReport report = minimize_p1(ex.language, ex.defs);
    CHECK(report.output_size == 16);
    CHECK(report.language_size == 5);
    CHECK(report.definitions_size == 11);
    CHECK(report.encoding.macrofied == expected_macrofication(ex));
    // definitions returned verbatim
    CHECK(report.encoding.defs.rhs("m''") ==
          make_term(ex.alphabet, "b", {make_macro_leaf("m"), ex.t_df}));
    CHECK(report.input_size == 14);
    CHECK(report.term_count == 3);
    CHECK(report.changed_term_count == 3);
    CHECK(report.instantiation_count == 3);
    CHECK(report.macro_count == 3);
    CHECK(report.reduction_percent() == 0); // the encoding grows past the bare language
}

TEST_CASE("problem 1 with no macros is the identity") {
    Example1 ex;
    MinimizationReport report = minimize_p1(ex.language, MacroDefinitions{});
    CHECK(report.output_size == 14);
    CHECK(report.encoding.macrofied == ex.language);
    CHECK(report.changed_term_count == 0);
    CHECK(report.reduction_percent() == 0);
}

TEST_CASE("containing macros take precedence per term") {
    Example1 ex;
    Language two({ex.t_b, ex.t_df});
    MinimizationReport report = minimize_p1(two, ex.defs);
    Language expected({make_macro_leaf("m''"), make_macro_leaf("m'")});
    CHECK(report.encoding.macrofied == expected);
    CHECK(report.language_size == 2);
}

TEST_CASE("problem 1 rejects macrofied input") {
    Example1 ex;
    Language bad({make_macro_leaf("m")});
    CHECK_THROWS_AS(minimize_p1(bad, ex.defs), Error);
}

TEST_CASE("problem 1 equals the level-by-level reference on random instances") {
    for (uint64_t seed = 300; seed < 400; ++seed) {
        GenOptions options;
        options.seed = seed;
        options.term_count = 5;
        options.max_term_size = 12;
        options.macro_count = 4;
        options.allow_unary = (seed % 3 == 0);
        options.reduced = (seed % 5 != 0);
        GeneratedInstance inst = generate_instance(options);
        MacroDefinitions defs = MacroDefinitions::validate(inst.alphabet, inst.macros);

        MinimizationReport report = minimize_p1(inst.language, defs);
        Language reference = reference_minimize_p1(inst.language, defs);
        CHECK(report.encoding.macrofied == reference);
    }
}

TEST_CASE("problem 2 on the running example") {
    Example1 ex;
    MinimizationReport report = minimize_p2(ex.language, ex.defs);
    CHECK(report.output_size == 15);
    CHECK(report.language_size == 5);
    CHECK(report.definitions_size == 10);
    CHECK(report.encoding.macrofied == expected_macrofication(ex));
    CHECK(report.encoding.defs.rhs("m''") ==
          make_term(ex.alphabet, "b", {make_macro_leaf("m"), make_macro_leaf("m'")}));
    CHECK(report.encoding.defs.rhs("m''").size() == 3);
    CHECK(definitions_equivalent(report.encoding.defs, ex.defs));
    // same macro names
    CHECK(report.encoding.defs.names() == ex.defs.names());
}

TEST_CASE("problem 2 requires reduced definitions") {
    Example1 ex;
    MacroDefinitions dup =
        MacroDefinitions::validate(ex.alphabet, {{"m1", ex.t_ce}, {"m2", ex.t_ce}});
    try {
        minimize_p2(ex.language, dup);
        FAIL("expected NotReduced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotReduced);
    }
}

TEST_CASE("problem 2 never beats problem 1 by growing") {
    for (uint64_t seed = 500; seed < 600; ++seed) {
        GenOptions options;
        options.seed = seed;
        options.term_count = 5;
        options.max_term_size = 12;
        options.macro_count = 4;
        GeneratedInstance inst = generate_instance(options);
        MacroDefinitions defs = MacroDefinitions::validate(inst.alphabet, inst.macros);
        if (!is_reduced(defs)) continue;

        MinimizationReport p1 = minimize_p1(inst.language, defs);
        MinimizationReport p2 = minimize_p2(inst.language, defs);
        CHECK(p2.output_size <= p1.output_size);
        CHECK(p2.encoding.macrofied == p1.encoding.macrofied);
    }
}

TEST_CASE("occurrence table with dominance on the running example") {
    Example1 ex;
    DominanceTable table = occurrence_table(ex.language);

    const auto* ce = table.find(ex.t_ce);
    REQUIRE(ce);
    CHECK(ce->count == 2);
    REQUIRE(ce->dominated_by.has_value());
    CHECK(*ce->dominated_by == ex.t_b);

    const auto* df = table.find(ex.t_df);
    REQUIRE(df);
    CHECK(df->count == 3);
    CHECK_FALSE(df->dominated_by.has_value());

    const auto* b = table.find(ex.t_b);
    REQUIRE(b);
    CHECK(b->count == 2);
    CHECK_FALSE(b->dominated_by.has_value());
}

TEST_CASE("occurrence table over an encoding counts right-hand sides") {
    Example1 ex;
    MinimizationReport p2 = minimize_p2(ex.language, ex.defs);
    DominanceTable table = occurrence_table(p2.encoding);
    // m' occurs in a(m') and in b(m, m')
    const auto* m1 = table.find(make_macro_leaf("m'"));
    REQUIRE(m1);
    CHECK(m1->count == 2);
}

TEST_CASE("occurrence table on singleton language") {
    Example1 ex;
    DominanceTable table = occurrence_table(Language({ex.t_ce}));
    for (const auto& entry : table.entries) CHECK(entry.count == 1);
}

TEST_CASE("dominance in one wide unary-chain term") {
    Alphabet sigma;
    sigma.declare("s", SymbolKind::ordered(4));
    for (const char* u : {"x", "y", "a", "b"}) sigma.declare(u, SymbolKind::ordered(1));
    sigma.declare("c", SymbolKind::ordered(0));
    Term c = make_term(sigma, "c", {});
    Term bc = make_term(sigma, "b", {c});
    Term abc = make_term(sigma, "a", {bc});
    Term xs = make_term(sigma, "x", {abc});
    Term ys = make_term(sigma, "y", {abc});
    Language l({make_term(sigma, "s", {xs, xs, ys, ys})});

    DominanceTable table = occurrence_table(l);
    const auto* entry_bc = table.find(bc);
    REQUIRE(entry_bc);
    CHECK(entry_bc->count == 4);
    // a(b(c)) occurs exactly as often, so b(c) is dominated by it
    REQUIRE(entry_bc->dominated_by.has_value());
    CHECK(*entry_bc->dominated_by == abc);

    const auto* entry_abc = table.find(abc);
    REQUIRE(entry_abc);
    CHECK(entry_abc->count == 4);
    CHECK_FALSE(entry_abc->dominated_by.has_value());
}

TEST_CASE("macro selection on the running example") {
    Example1 ex;
    MacroDefinitions selected = select_macros_p3(ex.language, ex.alphabet);
    REQUIRE(selected.count() == 2);
    std::vector<Term> fps;
    for (const std::string& name : selected.names()) fps.push_back(selected.fixed_point(name));
    CHECK(std::count(fps.begin(), fps.end(), ex.t_b) == 1);
    CHECK(std::count(fps.begin(), fps.end(), ex.t_df) == 1);
    CHECK(is_reduced(selected));
    for (const std::string& name : selected.names())
        CHECK(name.rfind("__m", 0) == 0);
}

TEST_CASE("macro selection rejects reachable unary symbols") {
    Alphabet sigma;
    sigma.declare("s", SymbolKind::ordered(4));
    for (const char* u : {"x", "y", "a", "b"}) sigma.declare(u, SymbolKind::ordered(1));
    sigma.declare("c", SymbolKind::ordered(0));
    Term c = make_term(sigma, "c", {});
    Term chain = make_term(sigma, "x", {make_term(sigma, "a", {make_term(sigma, "b", {c})})});
    Term chain_y = make_term(sigma, "y", {make_term(sigma, "a", {make_term(sigma, "b", {c})})});
    Language l({make_term(sigma, "s", {chain, chain, chain_y, chain_y})});
    try {
        select_macros_p3(l, sigma);
        FAIL("expected UnarySymbolsPresent");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnarySymbolsPresent);
        CHECK(std::string(e.what()).find("x") != std::string::npos);
    }

    // an unreachable unary symbol is fine
    Alphabet sigma2;
    sigma2.declare("neg", SymbolKind::ordered(1));
    sigma2.declare("f", SymbolKind::ordered(2));
    sigma2.declare("k", SymbolKind::ordered(0));
    Term k = make_term(sigma2, "k", {});
    Language l2({make_term(sigma2, "f", {k, k})});
    CHECK(select_macros_p3(l2, sigma2).count() == 0);
}

TEST_CASE("selection returns nothing when repetition collapses") {
    Alphabet sigma;
    sigma.declare("f", SymbolKind::ordered(2));
    sigma.declare("a", SymbolKind::ordered(0));
    sigma.declare("b", SymbolKind::ordered(0));
    Term fab = make_term(sigma, "f", {make_term(sigma, "a", {}), make_term(sigma, "b", {})});
    Language l({fab, fab});
    CHECK(l.count() == 1);
    CHECK(select_macros_p3(l, sigma).count() == 0);
}

TEST_CASE("problem 3 on the running example") {
    Example1 ex;
    MinimizationReport report = minimize_p3(ex.language, ex.alphabet);
    CHECK(report.output_size == 12);
    CHECK(report.language_size == 6);
    CHECK(report.definitions_size == 6);
    REQUIRE(report.encoding.defs.count() == 1);
    CHECK(report.encoding.defs.fixed_point(size_t{0}) == ex.t_b);
    CHECK(report.problem == 3);

    // without pruning, the raw selection keeps the d(f) macro
    MinimizeOptions no_prune;
    no_prune.prune = false;
    MinimizationReport raw = minimize_p3(ex.language, ex.alphabet, no_prune);
    CHECK(raw.output_size == 13);
    CHECK(raw.encoding.defs.count() == 2);
}

TEST_CASE("problem 3 identity when nothing repeats") {
    Alphabet sigma;
    sigma.declare("f", SymbolKind::ordered(2));
    sigma.declare("a", SymbolKind::ordered(0));
    sigma.declare("b", SymbolKind::ordered(0));
    Term f = make_term(sigma, "f", {make_term(sigma, "a", {}), make_term(sigma, "b", {})});
    Language l({f});
    MinimizationReport report = minimize_p3(l, sigma);
    CHECK(report.output_size == l.total_size());
    CHECK(report.encoding.defs.count() == 0);
    CHECK(report.reduction_percent() == 0);
    CHECK(report.changed_term_count == 0);
}

TEST_CASE("minimization results are sound and exhaustive") {
    for (uint64_t seed = 700; seed < 760; ++seed) {
        GenOptions options;
        options.seed = seed;
        options.term_count = 4;
        options.max_term_size = 12;
        options.macro_count = 3;
        GeneratedInstance inst = generate_instance(options);
        MacroDefinitions defs = MacroDefinitions::validate(inst.alphabet, inst.macros);

        MinimizationReport p1 = minimize_p1(inst.language, defs);
        CHECK(is_encoding(p1.encoding.macrofied, p1.encoding.defs, inst.language));
        CHECK(exhaustiveness(p1.encoding).macrofication);

        if (is_reduced(defs)) {
            MinimizationReport p2 = minimize_p2(inst.language, defs);
            CHECK(is_encoding(p2.encoding.macrofied, p2.encoding.defs, inst.language));
            Exhaustiveness done = exhaustiveness(p2.encoding);
            CHECK(done.macrofication);
            CHECK(done.expansion);
        }

        MinimizationReport p3 = minimize_p3(inst.language, inst.alphabet);
        CHECK(is_encoding(p3.encoding.macrofied, p3.encoding.defs, inst.language));
        // every selected macro survives with a fixed point of size >= 3
        for (size_t i = 0; i < p3.encoding.defs.count(); ++i)
            CHECK(p3.encoding.defs.fixed_point(i).size() >= 3);
    }
}

TEST_CASE("deterministic output under permutation and worker count") {
    for (uint64_t seed = 800; seed < 815; ++seed) {
        GenOptions options;
        options.seed = seed;
        options.term_count = 6;
        options.max_term_size = 12;
        options.macro_count = 3;
        GeneratedInstance inst = generate_instance(options);
        MacroDefinitions defs = MacroDefinitions::validate(inst.alphabet, inst.macros);
        if (!is_reduced(defs)) continue;

        std::vector<Term> shuffled = inst.language.terms();
        std::reverse(shuffled.begin(), shuffled.end());
        Language permuted(shuffled);

        MinimizeOptions serial;
        serial.jobs = 1;
        MinimizeOptions parallel;
        parallel.jobs = 4;

        MinimizationReport a = minimize_p2(inst.language, defs, serial);
        MinimizationReport b = minimize_p2(permuted, defs, parallel);
        CHECK(write_encoding(inst.alphabet, a.encoding) ==
              write_encoding(inst.alphabet, b.encoding));
    }
}

TEST_CASE("pruning cascades on single-child unordered chains") {
    // the same chain shape as the unary corpus, but with unordered symbols,
    // which pass the ranked-unary gate; pruning walks from the three-macro
    // selection down to the single a(b(c)) definition
    Alphabet sigma;
    sigma.declare("s", SymbolKind::ordered(4));
    for (const char* u : {"x", "y", "a", "b"}) sigma.declare(u, SymbolKind::unordered());
    sigma.declare("c", SymbolKind::ordered(0));
    Term c = make_term(sigma, "c", {});
    Term bc = make_term(sigma, "b", {c});
    Term abc = make_term(sigma, "a", {bc});
    Term xs = make_term(sigma, "x", {abc});
    Term ys = make_term(sigma, "y", {abc});
    Language lang({make_term(sigma, "s", {xs, xs, ys, ys})});

    MacroDefinitions selected = select_macros_p3(lang, sigma);
    CHECK(selected.count() == 3); // a(b(c)) and both wrappers; b(c) is dominated

    MinimizationReport report = minimize_p3(lang, sigma);
    CHECK(report.output_size == 13);
    REQUIRE(report.encoding.defs.count() == 1);
    CHECK(report.encoding.defs.fixed_point(size_t{0}) == abc);

    MinimizeOptions raw;
    raw.prune = false;
    CHECK(minimize_p3(lang, sigma, raw).output_size == 15);
}

TEST_CASE("problem 2 with no macros is the identity") {
    Example1 ex;
    MinimizationReport report = minimize_p2(ex.language, MacroDefinitions{});
    CHECK(report.output_size == 14);
    CHECK(report.encoding.macrofied == ex.language);
    CHECK(report.changed_term_count == 0);
}
