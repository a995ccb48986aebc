#include <doctest.h>

#include <algorithm>

#include "macmin/generate.hpp"
#include "macmin/minimize.hpp"
#include "macmin/oracle.hpp"
#include "support/helpers.hpp"

using namespace macmin;
using namespace testsupport;



TEST_CASE("oracle problem 1 on the running example") {
    Example1 ex;
    OracleResult r = oracle_p1(ex.language, ex.defs);
    CHECK(r.min_size == 16);
    CHECK(is_encoding(r.witness.macrofied, r.witness.defs, ex.language));
    CHECK(r.witness.macrofied.total_size() == 5);
    MinimizationReport direct = minimize_p1(ex.language, ex.defs);
    CHECK(r.witness.macrofied == direct.encoding.macrofied);
}

TEST_CASE("oracle problem 2 on the running example") {
    Example1 ex;
    OracleResult r = oracle_p2(ex.language, ex.defs);
    CHECK(r.min_size == 15);
    CHECK(is_encoding(r.witness.macrofied, r.witness.defs, ex.language));
    CHECK(definitions_equivalent(r.witness.defs, ex.defs));
}

TEST_CASE("oracle problem 3 on the running example") {
    Example1 ex;
    OracleResult r = oracle_p3(ex.language, ex.alphabet);
    CHECK(r.min_size == 12);
    REQUIRE(r.witness.defs.count() == 1);
    CHECK(r.witness.defs.fixed_point(size_t{0}) == ex.t_b);
}

TEST_CASE("oracle with no macros returns the language size") {
    Example1 ex;
    OracleResult p1 = oracle_p1(ex.language, MacroDefinitions{});
    CHECK(p1.min_size == 14);
    OracleResult p2 = oracle_p2(ex.language, MacroDefinitions{});
    CHECK(p2.min_size == 14);

    Alphabet sigma;
    sigma.declare("f", SymbolKind::ordered(2));
    sigma.declare("a", SymbolKind::ordered(0));
    sigma.declare("b", SymbolKind::ordered(0));
    Term f = make_term(sigma, "f", {make_term(sigma, "a", {}), make_term(sigma, "b", {})});
    OracleResult p3 = oracle_p3(Language({f}), sigma);
    CHECK(p3.min_size == 3);
}

TEST_CASE("a one-state budget is exceeded immediately") {
    Example1 ex;
    SearchBudget tiny;
    tiny.max_states = 1;
    try {
        oracle_p1(ex.language, ex.defs, tiny);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetExceeded);
    }
}

TEST_CASE("unary chains: the single-macro family costs 16") {
    UnaryChains u;
    MacroDefinitions family = MacroDefinitions::validate(u.alphabet, {{"m", u.bc}});
    OracleResult r = oracle_p2(u.language, family);
    CHECK(r.min_size == 16);
}

TEST_CASE("unary chains: the free minimum is 13 via a(b(c))") {
    UnaryChains u;
    // hand-built witness: replacing the four a(b(c)) occurrences costs
    // 9 (language) + 4 (one definition) = 13
    MacroDefinitions single = MacroDefinitions::validate(u.alphabet, {{"m", u.abc}});
    MinimizationReport direct = minimize_p2(u.language, single);
    CHECK(direct.output_size == 13);

    OracleResult r = oracle_p3(u.language, u.alphabet);
    CHECK(r.min_size == 13);
    REQUIRE(r.witness.defs.count() == 1);
    CHECK(r.witness.defs.fixed_point(size_t{0}) == u.abc);
    CHECK(is_encoding(r.witness.macrofied, r.witness.defs, u.language));

    // the two-macro family from the chain wrappers stays at 15
    Term xabc = make_term(u.alphabet, "x", {u.abc});
    Term yabc = make_term(u.alphabet, "y", {u.abc});
    MacroDefinitions pair =
        MacroDefinitions::validate(u.alphabet, {{"m3", xabc}, {"m4", yabc}});
    CHECK(minimize_p2(u.language, pair).output_size == 15);
}

TEST_CASE("wrapped chains: the free minimum is 15 via two macros") {
    WrappedChains w;
    OracleResult r = oracle_p3(w.language, w.alphabet);
    CHECK(r.min_size == 15);
    REQUIRE(r.witness.defs.count() == 2);
    std::vector<Term> fps{r.witness.defs.fixed_point(size_t{0}),
                          r.witness.defs.fixed_point(size_t{1})};
    CHECK(std::count(fps.begin(), fps.end(), w.yacd) == 1);
    CHECK(std::count(fps.begin(), fps.end(), w.ybcd) == 1);
}

TEST_CASE("oracle agrees with itself under permutation and relabeling") {
    for (uint64_t seed = 900; seed < 915; ++seed) {
        GenOptions options;
        options.seed = seed;
        options.term_count = 3;
        options.max_term_size = 8;
        options.macro_count = 2;
        GeneratedInstance inst = generate_instance(options);
        MacroDefinitions defs = MacroDefinitions::validate(inst.alphabet, inst.macros);

        std::vector<Term> reversed = inst.language.terms();
        std::reverse(reversed.begin(), reversed.end());
        OracleResult a = oracle_p1(inst.language, defs);
        OracleResult b = oracle_p1(Language(reversed), defs);
        CHECK(a.min_size == b.min_size);

        // consistent bijective relabeling of the alphabet
        Alphabet renamed;
        for (const std::string& name : inst.alphabet.sorted_names())
            renamed.declare("q_" + name, inst.alphabet.kind_of(name));
        struct Renamer {
            const Alphabet& target;
            Term operator()(const Term& t) const {
                std::vector<Term> children;
                for (size_t i = 0; i < t.child_count(); ++i) children.push_back((*this)(t.child(i)));
                if (t.is_macro()) return make_macro_leaf(t.label());
                return make_node("q_" + t.label(), t.star_begin(), std::move(children),
                                 false);
            }
        } rename{renamed};
        std::vector<Term> relabeled;
        for (const Term& t : inst.language.terms()) relabeled.push_back(rename(t));
        std::vector<std::pair<std::string, Term>> redefs;
        for (const auto& [name, rhs] : inst.macros) redefs.emplace_back(name, rename(rhs));
        OracleResult c =
            oracle_p1(Language(relabeled), MacroDefinitions::validate(renamed, redefs));
        CHECK(a.min_size == c.min_size);
    }
}

TEST_CASE("oracle problem 2 never exceeds problem 1") {
    for (uint64_t seed = 950; seed < 975; ++seed) {
        GenOptions options;
        options.seed = seed;
        options.term_count = 3;
        options.max_term_size = 9;
        options.macro_count = 3;
        GeneratedInstance inst = generate_instance(options);
        MacroDefinitions defs = MacroDefinitions::validate(inst.alphabet, inst.macros);
        if (!is_reduced(defs)) continue;
        OracleResult p1 = oracle_p1(inst.language, defs);
        OracleResult p2 = oracle_p2(inst.language, defs);
        CHECK(p2.min_size <= p1.min_size);
    }
}
