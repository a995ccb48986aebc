#ifndef MACMIN_TESTS_HELPERS_HPP
#define MACMIN_TESTS_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "macmin/containment.hpp"
#include "macmin/corpus.hpp"
#include "macmin/macro.hpp"

namespace testsupport {

using namespace macmin;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpora_path(const std::string& name) {
    return std::string(MACMIN_CORPORA_DIR) + "/" + name;
}

inline std::string data_path(const std::string& name) {
    return std::string(MACMIN_TEST_DATA_DIR) + "/" + name;
}

// The running example: L = {a(b(c(e),d(f))), b(c(e),d(f)), a(d(f))} with
// macros m -> c(e), m' -> d(f), m'' -> b(m, d(f)). a..d are unordered, e and
// f constants.
struct Example1 {
    Alphabet alphabet;
    Term t_ce, t_df, t_b, t_ab, t_adf;
    Language language;
    MacroDefinitions defs;

    Example1() {
        alphabet.declare("a", SymbolKind::unordered());
        alphabet.declare("b", SymbolKind::unordered());
        alphabet.declare("c", SymbolKind::unordered());
        alphabet.declare("d", SymbolKind::unordered());
        alphabet.declare("e", SymbolKind::ordered(0));
        alphabet.declare("f", SymbolKind::ordered(0));
        Term e = make_term(alphabet, "e", {});
        Term f = make_term(alphabet, "f", {});
        t_ce = make_term(alphabet, "c", {e});
        t_df = make_term(alphabet, "d", {f});
        t_b = make_term(alphabet, "b", {t_ce, t_df});
        t_ab = make_term(alphabet, "a", {t_b});
        t_adf = make_term(alphabet, "a", {t_df});
        language = Language({t_ab, t_b, t_adf});
        defs = MacroDefinitions::validate(
            alphabet, {{"m", t_ce},
                       {"m'", t_df},
                       {"m''", make_term(alphabet, "b", {make_macro_leaf("m"), t_df})}});
    }
};

// The wide unary-chain language s(x(a(b(c))), x(a(b(c))), y(a(b(c))), y(a(b(c)))).
struct UnaryChains {
    Alphabet alphabet;
    Term bc, abc;
    Language language;

    UnaryChains() {
        alphabet.declare("s", SymbolKind::ordered(4));
        for (const char* u : {"x", "y", "a", "b"}) alphabet.declare(u, SymbolKind::ordered(1));
        alphabet.declare("c", SymbolKind::ordered(0));
        Term c = make_term(alphabet, "c", {});
        bc = make_term(alphabet, "b", {c});
        abc = make_term(alphabet, "a", {bc});
        Term xs = make_term(alphabet, "x", {abc});
        Term ys = make_term(alphabet, "y", {abc});
        language = Language({make_term(alphabet, "s", {xs, xs, ys, ys})});
    }
};

// The wrapped variant x(y(a(c(d))), y(a(c(d))), y(b(c(d))), y(b(c(d)))).
struct WrappedChains {
    Alphabet alphabet;
    Term yacd, ybcd;
    Language language;

    WrappedChains() {
        alphabet.declare("x", SymbolKind::ordered(4));
        for (const char* u : {"y", "a", "b", "c"}) alphabet.declare(u, SymbolKind::ordered(1));
        alphabet.declare("d", SymbolKind::ordered(0));
        Term cd = make_term(alphabet, "c", {make_term(alphabet, "d", {})});
        yacd = make_term(alphabet, "y", {make_term(alphabet, "a", {cd})});
        ybcd = make_term(alphabet, "y", {make_term(alphabet, "b", {cd})});
        language = Language({make_term(alphabet, "x", {yacd, yacd, ybcd, ybcd})});
    }
};

// Label- and edge-preserving isomorphism by brute force: positional children
// match by index, star children by backtracking over all pairings. Used as an
// independent check of canonical equality.
inline bool iso_equal(const Term& a, const Term& b);

inline bool iso_match_stars(const Term& a, const Term& b, size_t i, std::vector<bool>& used) {
    if (i == a.child_count()) return true;
    for (size_t j = b.star_begin(); j < b.child_count(); ++j) {
        if (used[j]) continue;
        if (iso_equal(a.child(i), b.child(j))) {
            used[j] = true;
            if (iso_match_stars(a, b, i + 1, used)) return true;
            used[j] = false;
        }
    }
    return false;
}

inline bool iso_equal(const Term& a, const Term& b) {
    if (a.label() != b.label() || a.is_macro() != b.is_macro()) return false;
    if (a.child_count() != b.child_count() || a.star_begin() != b.star_begin()) return false;
    for (size_t i = 0; i < a.star_begin(); ++i)
        if (!iso_equal(a.child(i), b.child(i))) return false;
    if (a.star_begin() == a.child_count()) return true;
    std::vector<bool> used(b.child_count(), false);
    return iso_match_stars(a, b, a.star_begin(), used);
}

// Deterministic light-weight rng for tests.
struct TestRng {
    uint64_t state;
    explicit TestRng(uint64_t seed) : state(seed * 2654435761u + 1) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

// Rebuilds the term with star-children permuted at every level; the result
// must compare equal to the input if construction canonicalizes correctly.
inline Term shuffled_copy(const Term& t, TestRng& rng) {
    std::vector<Term> children;
    children.reserve(t.child_count());
    for (size_t i = 0; i < t.child_count(); ++i) children.push_back(shuffled_copy(t.child(i), rng));
    for (size_t i = t.child_count(); i > t.star_begin() + 1; --i) {
        size_t j = t.star_begin() + rng.below(i - t.star_begin());
        std::swap(children[i - 1], children[j]);
    }
    return make_node(t.label(), t.star_begin(), std::move(children), t.is_macro());
}

// Reference construction for problem 1: containment diagram levels top-down,
// each macro's fixed point replaced everywhere in the current language.
inline Language reference_minimize_p1(const Language& language, const MacroDefinitions& defs) {
    HasseDiagram diagram = build_hasse(defs);
    std::vector<Term> current = language.terms();
    for (const auto& level : diagram.levels)
        for (uint32_t node : level) {
            const auto& info = diagram.nodes[node];
            Term leaf = make_macro_leaf(info.macros.front());
            for (Term& t : current) t = replace_all(t, info.fixed_point, leaf).term;
        }
    return Language(std::move(current));
}

} // namespace testsupport

#endif
