#ifndef MACMIN_TERM_HPP
#define MACMIN_TERM_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "macmin/alphabet.hpp"

namespace macmin {

/// Immutable node- and edge-labelled unordered tree. Children under an
/// ordered symbol carry positional edge labels 1..n; children of an unordered
/// symbol all carry `*`; a mixed symbol has a ranked prefix 1..m followed by
/// `*` children. The `*` part is kept canonically sorted, so structural
/// equality coincides with label-preserving tree isomorphism.
///
/// Terms share unchanged subtrees; all rewriting produces new values.
class Term {
public:
    Term() = default;

    bool valid() const { return node_ != nullptr; }
    explicit operator bool() const { return valid(); }

    const std::string& label() const { return node_->label; }
    bool is_macro() const { return node_->macro; }
    bool contains_macro() const { return node_->contains_macro; }

    size_t child_count() const { return node_->children.size(); }
    const Term& child(size_t i) const { return node_->children[i]; }
    const std::vector<Term>& children() const { return node_->children; }

    /// Children at index >= star_begin() carry the `*` edge label; the ones
    /// before it carry positional labels 1..star_begin().
    uint32_t star_begin() const { return node_->star_begin; }
    bool child_is_star(size_t i) const { return i >= node_->star_begin; }

    /// Node count of the term tree.
    uint64_t size() const { return node_->size; }
    uint64_t hash() const { return node_->hash; }
    bool is_constant() const { return node_->children.empty(); }

    /// Total order on canonical forms; 0 iff the terms are equal.
    static int compare(const Term& a, const Term& b);

    friend bool operator==(const Term& a, const Term& b) {
        if (a.node_ == b.node_) return true;
        if (!a.node_ || !b.node_) return false;
        if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
        return compare(a, b) == 0;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

private:
    struct Node {
        std::string label;
        std::vector<Term> children;
        uint64_t hash = 0;
        uint64_t size = 1;
        uint32_t star_begin = 0;
        bool macro = false;
        bool contains_macro = false;
    };

    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;

    friend Term make_term(const Alphabet&, const std::string&, std::vector<Term>);
    friend Term make_macro_leaf(const std::string&);
    friend Term make_node(const std::string&, uint32_t, std::vector<Term>, bool);
};

struct TermHash {
    size_t operator()(const Term& t) const { return static_cast<size_t>(t.hash()); }
};

/// Builds a term over the alphabet, validating arity conformance for the
/// symbol's kind and assigning edge labels. Throws UnknownSymbol or
/// ArityMismatch.
Term make_term(const Alphabet& alphabet, const std::string& label, std::vector<Term> children);

/// A macro symbol occurrence (always a constant leaf).
Term make_macro_leaf(const std::string& name);

/// Rebuilds a node whose shape is already known to be valid; the `*` range is
/// re-sorted. Used by rewriting operations.
Term make_node(const std::string& label, uint32_t star_begin, std::vector<Term> children,
               bool label_is_macro);

/// Path of child slots from the root of one concrete term value.
struct Position {
    std::vector<uint32_t> path;

    bool is_root() const { return path.empty(); }
    friend bool operator==(const Position& a, const Position& b) { return a.path == b.path; }
    friend bool operator<(const Position& a, const Position& b) { return a.path < b.path; }
};

/// Collision-free canonical fingerprint; equal strings iff equal terms.
std::string canonical_key(const Term& t);

bool term_eq(const Term& a, const Term& b);

/// Subterm of `host` at `p`. Throws InvalidPosition.
Term subterm_at(const Term& host, const Position& p);

/// All positions p with host|_p = pattern, in depth-first order.
std::vector<Position> subterm_positions(const Term& host, const Term& pattern);

bool is_subterm(const Term& pattern, const Term& host);

/// Returns `host` with the subtree at `p` replaced; the host is unchanged and
/// the edge label at `p` is preserved. Throws InvalidPosition.
Term substitute(const Term& host, const Position& p, const Term& replacement);

/// Replaces every occurrence of `pattern` (occurrences are disjoint) and
/// reports how many were replaced.
struct ReplaceResult {
    Term term;
    uint64_t count = 0;
};
ReplaceResult replace_all(const Term& host, const Term& pattern, const Term& replacement);

/// Finite set of terms under canonical term equality; iteration order is the
/// canonical order, independent of insertion order.
class Language {
public:
    Language() = default;
    explicit Language(std::vector<Term> terms);

    void insert(const Term& t);

    const std::vector<Term>& terms() const { return terms_; }
    bool contains(const Term& t) const;
    size_t count() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    /// Sum of member sizes.
    uint64_t total_size() const;

    bool contains_macro() const;

    friend bool operator==(const Language& a, const Language& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Language& a, const Language& b) { return !(a == b); }

private:
    std::vector<Term> terms_; // canonically sorted, unique
};

/// Occurrence count of every distinct subterm across all members, counting
/// every position (nested occurrences included).
std::unordered_map<Term, uint64_t, TermHash> subterm_occurrences(const Language& language);

/// Distinct subterms of one term.
std::vector<Term> distinct_subterms(const Term& t);

} // namespace macmin

#endif
