#include "macmin/term.hpp"

#include <algorithm>

namespace macmin {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::UndeclaredSymbol: return "UndeclaredSymbol";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::DuplicateSymbolDeclaration: return "DuplicateSymbolDeclaration";
        case ErrorKind::SymbolClash: return "SymbolClash";
        case ErrorKind::UnknownSymbol: return "UnknownSymbol";
        case ErrorKind::CyclicDefinitions: return "CyclicDefinitions";
        case ErrorKind::ConstantExpansion: return "ConstantExpansion";
        case ErrorKind::NotReduced: return "NotReduced";
        case ErrorKind::NotInstantiable: return "NotInstantiable";
        case ErrorKind::UnarySymbolsPresent: return "UnarySymbolsPresent";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::InvalidPosition: return "InvalidPosition";
        case ErrorKind::VerifyMismatch: return "VerifyMismatch";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

int Error::exit_code() const {
    switch (kind_) {
        case ErrorKind::Syntax:
        case ErrorKind::UndeclaredSymbol:
        case ErrorKind::ArityMismatch:
        case ErrorKind::DuplicateSymbolDeclaration: return 2;
        case ErrorKind::SymbolClash:
        case ErrorKind::UnknownSymbol:
        case ErrorKind::CyclicDefinitions:
        case ErrorKind::ConstantExpansion:
        case ErrorKind::NotReduced:
        case ErrorKind::NotInstantiable:
        case ErrorKind::InvalidPosition: return 3;
        case ErrorKind::UnarySymbolsPresent: return 4;
        case ErrorKind::BudgetExceeded: return 5;
        case ErrorKind::VerifyMismatch: return 6;
        case ErrorKind::Config: return 7;
        case ErrorKind::Io: return 1;
    }
    return 1;
}

SymbolKind SymbolKind::mixed(uint32_t ranked_prefix) {
    if (ranked_prefix < 1)
        throw Error(ErrorKind::Config, "mixed symbol needs a ranked prefix of at least 1");
    return {SymbolFamily::Mixed, ranked_prefix};
}

std::string to_string(const SymbolKind& kind) {
    switch (kind.family) {
        case SymbolFamily::Ordered: return "ordered/" + std::to_string(kind.arity);
        case SymbolFamily::Unordered: return "unordered";
        case SymbolFamily::Mixed: return "mixed/" + std::to_string(kind.arity);
    }
    return "?";
}

void Alphabet::declare(const std::string& name, SymbolKind kind) {
    if (name.empty())
        throw Error(ErrorKind::Config, "empty symbol name");
    if (kind.family == SymbolFamily::Mixed && kind.arity < 1)
        throw Error(ErrorKind::Config, "mixed symbol needs a ranked prefix of at least 1");
    auto [it, inserted] = index_.emplace(name, kind);
    (void)it;
    if (!inserted)
        throw Error(ErrorKind::DuplicateSymbolDeclaration, "symbol '" + name + "' declared twice");
}

std::optional<SymbolKind> Alphabet::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SymbolKind Alphabet::kind_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + name + "'");
    return it->second;
}

std::vector<std::string> Alphabet::sorted_names() const {
    std::vector<std::string> names;
    names.reserve(index_.size());
    for (const auto& [name, kind] : index_) names.push_back(name);
    std::sort(names.begin(), names.end());
    return names;
}

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t hash_label(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

int Term::compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (!a.node_) return b.node_ ? -1 : 0;
    if (!b.node_) return 1;
    if (int c = a.node_->label.compare(b.node_->label); c != 0) return c < 0 ? -1 : 1;
    if (a.node_->children.size() != b.node_->children.size())
        return a.node_->children.size() < b.node_->children.size() ? -1 : 1;
    if (a.node_->star_begin != b.node_->star_begin)
        return a.node_->star_begin < b.node_->star_begin ? -1 : 1;
    for (size_t i = 0; i < a.node_->children.size(); ++i)
        if (int c = compare(a.node_->children[i], b.node_->children[i]); c != 0) return c;
    return 0;
}

Term make_node(const std::string& label, uint32_t star_begin, std::vector<Term> children,
               bool label_is_macro) {
    auto node = std::make_shared<Term::Node>();
    node->label = label;
    node->star_begin = star_begin;
    node->macro = label_is_macro;
    if (star_begin < children.size())
        std::sort(children.begin() + star_begin, children.end(),
                  [](const Term& x, const Term& y) { return Term::compare(x, y) < 0; });
    uint64_t h = hash_label(label);
    h = mix64(h ^ (uint64_t(star_begin) << 1) ^ (label_is_macro ? 0x51ULL : 0));
    uint64_t size = 1;
    bool cm = label_is_macro;
    for (const Term& c : children) {
        h = mix64(h ^ c.hash());
        size += c.size();
        cm = cm || c.contains_macro();
    }
    node->hash = h;
    node->size = size;
    node->contains_macro = cm;
    node->children = std::move(children);
    return Term(std::move(node));
}

Term make_term(const Alphabet& alphabet, const std::string& label, std::vector<Term> children) {
    auto kind = alphabet.find(label);
    if (!kind)
        throw Error(ErrorKind::UnknownSymbol, "symbol '" + label + "' is not declared");
    const size_t n = children.size();
    switch (kind->family) {
        case SymbolFamily::Ordered:
            if (n != kind->arity)
                throw Error(ErrorKind::ArityMismatch,
                            "symbol '" + label + "' has arity " + std::to_string(kind->arity) +
                                " but got " + std::to_string(n) + " children");
            return make_node(label, kind->arity, std::move(children), false);
        case SymbolFamily::Unordered:
            if (n < 1)
                throw Error(ErrorKind::ArityMismatch,
                            "unordered symbol '" + label + "' needs at least one child");
            return make_node(label, 0, std::move(children), false);
        case SymbolFamily::Mixed:
            if (n < kind->arity)
                throw Error(ErrorKind::ArityMismatch,
                            "mixed symbol '" + label + "' needs at least " +
                                std::to_string(kind->arity) + " children, got " + std::to_string(n));
            return make_node(label, kind->arity, std::move(children), false);
    }
    throw Error(ErrorKind::UnknownSymbol, "unreachable");
}

Term make_macro_leaf(const std::string& name) {
    return make_node(name, 0, {}, true);
}

namespace {

void canonical_key_rec(const Term& t, std::string& out) {
    out += t.label();
    if (t.child_count() == 0) return;
    out += '/';
    out += std::to_string(t.star_begin());
    out += '(';
    for (size_t i = 0; i < t.child_count(); ++i) {
        if (i) out += ',';
        canonical_key_rec(t.child(i), out);
    }
    out += ')';
}

} // namespace

std::string canonical_key(const Term& t) {
    std::string out;
    out.reserve(t.size() * 4);
    canonical_key_rec(t, out);
    return out;
}

bool term_eq(const Term& a, const Term& b) { return a == b; }

Term subterm_at(const Term& host, const Position& p) {
    Term cur = host;
    for (uint32_t slot : p.path) {
        if (!cur.valid() || slot >= cur.child_count())
            throw Error(ErrorKind::InvalidPosition, "position does not resolve in host term");
        cur = cur.child(slot);
    }
    return cur;
}

namespace {

void positions_rec(const Term& host, const Term& pattern, std::vector<uint32_t>& path,
                   std::vector<Position>& out) {
    if (host.size() < pattern.size()) return;
    if (host == pattern) out.push_back(Position{path});
    for (size_t i = 0; i < host.child_count(); ++i) {
        path.push_back(static_cast<uint32_t>(i));
        positions_rec(host.child(i), pattern, path, out);
        path.pop_back();
    }
}

} // namespace

std::vector<Position> subterm_positions(const Term& host, const Term& pattern) {
    std::vector<Position> out;
    std::vector<uint32_t> path;
    positions_rec(host, pattern, path, out);
    return out;
}

bool is_subterm(const Term& pattern, const Term& host) {
    if (host.size() < pattern.size()) return false;
    if (host == pattern) return true;
    for (size_t i = 0; i < host.child_count(); ++i)
        if (is_subterm(pattern, host.child(i))) return true;
    return false;
}

Term substitute(const Term& host, const Position& p, const Term& replacement) {
    if (!replacement.valid())
        throw Error(ErrorKind::InvalidPosition, "invalid replacement term");
    if (p.is_root()) return replacement;
    uint32_t slot = p.path.front();
    if (slot >= host.child_count())
        throw Error(ErrorKind::InvalidPosition, "position does not resolve in host term");
    Position rest{std::vector<uint32_t>(p.path.begin() + 1, p.path.end())};
    std::vector<Term> children = host.children();
    children[slot] = substitute(children[slot], rest, replacement);
    return make_node(host.label(), host.star_begin(), std::move(children), host.is_macro());
}

ReplaceResult replace_all(const Term& host, const Term& pattern, const Term& replacement) {
    if (host == pattern) return {replacement, 1};
    if (host.size() < pattern.size()) return {host, 0};
    uint64_t count = 0;
    std::vector<Term> children;
    children.reserve(host.child_count());
    for (size_t i = 0; i < host.child_count(); ++i) {
        ReplaceResult r = replace_all(host.child(i), pattern, replacement);
        count += r.count;
        children.push_back(std::move(r.term));
    }
    if (count == 0) return {host, 0};
    return {make_node(host.label(), host.star_begin(), std::move(children), host.is_macro()), count};
}

Language::Language(std::vector<Term> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
    terms_.erase(std::unique(terms_.begin(), terms_.end(),
                             [](const Term& a, const Term& b) { return a == b; }),
                 terms_.end());
}

void Language::insert(const Term& t) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t,
                               [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
    if (it != terms_.end() && *it == t) return;
    terms_.insert(it, t);
}

bool Language::contains(const Term& t) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t,
                               [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
    return it != terms_.end() && *it == t;
}

uint64_t Language::total_size() const {
    uint64_t s = 0;
    for (const Term& t : terms_) s += t.size();
    return s;
}

bool Language::contains_macro() const {
    for (const Term& t : terms_)
        if (t.contains_macro()) return true;
    return false;
}

namespace {

void count_subterms_rec(const Term& t, std::unordered_map<Term, uint64_t, TermHash>& counts) {
    ++counts[t];
    for (size_t i = 0; i < t.child_count(); ++i) count_subterms_rec(t.child(i), counts);
}

} // namespace

std::unordered_map<Term, uint64_t, TermHash> subterm_occurrences(const Language& language) {
    std::unordered_map<Term, uint64_t, TermHash> counts;
    for (const Term& t : language.terms()) count_subterms_rec(t, counts);
    return counts;
}

std::vector<Term> distinct_subterms(const Term& t) {
    std::unordered_map<Term, uint64_t, TermHash> counts;
    count_subterms_rec(t, counts);
    std::vector<Term> out;
    out.reserve(counts.size());
    for (const auto& [term, n] : counts) out.push_back(term);
    std::sort(out.begin(), out.end(),
              [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
    return out;
}

} // namespace macmin
