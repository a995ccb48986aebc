#include "macmin/macro.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace macmin {

namespace {

void collect_macro_uses(const Term& t, std::unordered_set<std::string>& out) {
    if (t.is_macro()) out.insert(t.label());
    for (size_t i = 0; i < t.child_count(); ++i) collect_macro_uses(t.child(i), out);
}

void check_rhs_labels(const Term& t, const Alphabet& alphabet,
                      const std::unordered_map<std::string, size_t>& macro_index) {
    if (t.is_macro()) {
        if (!macro_index.count(t.label()))
            throw Error(ErrorKind::UnknownSymbol,
                        "macro '" + t.label() + "' used but not defined");
        if (t.child_count() != 0)
            throw Error(ErrorKind::ArityMismatch,
                        "macro symbol '" + t.label() + "' must be constant");
    } else {
        if (!alphabet.has(t.label()))
            throw Error(ErrorKind::UnknownSymbol, "symbol '" + t.label() + "' is not declared");
        if (macro_index.count(t.label()))
            throw Error(ErrorKind::SymbolClash,
                        "'" + t.label() + "' is both an alphabet symbol and a macro");
    }
    for (size_t i = 0; i < t.child_count(); ++i)
        check_rhs_labels(t.child(i), alphabet, macro_index);
}

// Rebuilds t with every macro leaf replaced through `image`; unchanged
// subtrees are shared.
Term map_macros(const Term& t, const std::unordered_map<std::string, Term>& image) {
    if (!t.contains_macro()) return t;
    if (t.is_macro()) {
        auto it = image.find(t.label());
        return it == image.end() ? t : it->second;
    }
    std::vector<Term> children;
    children.reserve(t.child_count());
    bool changed = false;
    for (size_t i = 0; i < t.child_count(); ++i) {
        Term c = map_macros(t.child(i), image);
        changed = changed || !(c == t.child(i));
        children.push_back(std::move(c));
    }
    if (!changed) return t;
    return make_node(t.label(), t.star_begin(), std::move(children), false);
}

} // namespace

MacroDefinitions MacroDefinitions::validate(const Alphabet& alphabet,
                                            std::vector<std::pair<std::string, Term>> defs) {
    std::sort(defs.begin(), defs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < defs.size(); ++i)
        if (defs[i].first == defs[i - 1].first)
            throw Error(ErrorKind::DuplicateSymbolDeclaration,
                        "macro '" + defs[i].first + "' defined twice");

    std::unordered_map<std::string, size_t> index;
    for (size_t i = 0; i < defs.size(); ++i) {
        const std::string& name = defs[i].first;
        if (alphabet.has(name))
            throw Error(ErrorKind::SymbolClash,
                        "macro '" + name + "' clashes with an alphabet symbol");
        index.emplace(name, i);
    }

    for (const auto& [name, rhs] : defs) {
        if (!rhs.valid())
            throw Error(ErrorKind::Config, "macro '" + name + "' has no right-hand side");
        if (rhs.size() < 2)
            throw Error(ErrorKind::ConstantExpansion,
                        "macro '" + name + "' expands to the constant '" + rhs.label() + "'");
        check_rhs_labels(rhs, alphabet, index);
    }

    // `uses` edges m -> m' when m' occurs in rhs(m); reject cycles.
    const size_t n = defs.size();
    std::vector<std::vector<size_t>> uses(n);
    for (size_t i = 0; i < n; ++i) {
        std::unordered_set<std::string> used;
        collect_macro_uses(defs[i].second, used);
        for (const std::string& u : used) uses[i].push_back(index.at(u));
        std::sort(uses[i].begin(), uses[i].end());
    }
    std::vector<int> state(n, 0); // 0 unvisited, 1 on stack, 2 done
    std::vector<size_t> depth(n, 0);
    std::vector<size_t> stack, edge_pos;
    for (size_t root = 0; root < n; ++root) {
        if (state[root]) continue;
        stack = {root};
        edge_pos = {0};
        state[root] = 1;
        while (!stack.empty()) {
            size_t v = stack.back();
            if (edge_pos.back() < uses[v].size()) {
                size_t w = uses[v][edge_pos.back()++];
                if (state[w] == 1) {
                    std::string cycle = defs[w].first;
                    for (size_t k = stack.size(); k-- > 0;) {
                        cycle += " -> " + defs[stack[k]].first;
                        if (stack[k] == w) break;
                    }
                    throw Error(ErrorKind::CyclicDefinitions,
                                "cyclic macro definitions: " + cycle);
                }
                if (state[w] == 0) {
                    state[w] = 1;
                    stack.push_back(w);
                    edge_pos.push_back(0);
                }
            } else {
                size_t d = 0;
                for (size_t w : uses[v]) d = std::max(d, depth[w] + 1);
                depth[v] = d;
                state[v] = 2;
                stack.pop_back();
                edge_pos.pop_back();
            }
        }
    }

    MacroDefinitions out;
    out.names_.reserve(n);
    out.rhs_.reserve(n);
    for (auto& [name, rhs] : defs) {
        out.names_.push_back(name);
        out.rhs_.push_back(rhs);
        out.chain_bound_ = std::max(out.chain_bound_, depth[out.names_.size() - 1] + 1);
    }

    // Fixed points bottom-up along the `uses` order.
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return depth[a] < depth[b]; });
    out.fixed_points_.resize(n);
    std::unordered_map<std::string, Term> fp_image;
    for (size_t i : order) {
        Term fp = map_macros(out.rhs_[i], fp_image);
        out.fixed_points_[i] = fp;
        fp_image.emplace(out.names_[i], std::move(fp));
    }
    return out;
}

bool MacroDefinitions::defines(const std::string& name) const {
    return std::binary_search(names_.begin(), names_.end(), name);
}

size_t MacroDefinitions::index_of(const std::string& name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name)
        throw Error(ErrorKind::UnknownSymbol, "macro '" + name + "' is not defined");
    return static_cast<size_t>(it - names_.begin());
}

uint64_t MacroDefinitions::definitions_size() const {
    uint64_t s = 0;
    for (const Term& r : rhs_) s += 1 + r.size();
    return s;
}

MacroDefinitions MacroDefinitions::with_rewritten_rhs(std::vector<Term> new_rhs) const {
    if (new_rhs.size() != rhs_.size())
        throw Error(ErrorKind::Config, "right-hand side count mismatch");
    std::unordered_map<std::string, Term> fp_image;
    for (size_t i = 0; i < names_.size(); ++i) fp_image.emplace(names_[i], fixed_points_[i]);
    for (size_t i = 0; i < new_rhs.size(); ++i) {
        if (new_rhs[i].size() < 2)
            throw Error(ErrorKind::ConstantExpansion,
                        "macro '" + names_[i] + "' rewritten to a constant");
        if (!(map_macros(new_rhs[i], fp_image) == fixed_points_[i]))
            throw Error(ErrorKind::VerifyMismatch,
                        "rewritten right-hand side of '" + names_[i] +
                            "' changes its fixed point");
    }
    MacroDefinitions out;
    out.names_ = names_;
    out.rhs_ = std::move(new_rhs);
    out.fixed_points_ = fixed_points_;
    out.chain_bound_ = std::max<size_t>(chain_bound_, names_.size());
    return out;
}

MacroDefinitions MacroDefinitions::restrict_to(const Alphabet& alphabet,
                                               const std::vector<std::string>& keep) const {
    std::unordered_set<std::string> kept(keep.begin(), keep.end());
    std::unordered_map<std::string, Term> expand_removed;
    for (size_t i = 0; i < names_.size(); ++i)
        if (!kept.count(names_[i])) expand_removed.emplace(names_[i], fixed_points_[i]);
    std::vector<std::pair<std::string, Term>> defs;
    defs.reserve(kept.size());
    for (size_t i = 0; i < names_.size(); ++i)
        if (kept.count(names_[i]))
            defs.emplace_back(names_[i], map_macros(rhs_[i], expand_removed));
    return validate(alphabet, std::move(defs));
}

Term expand_once(const Term& t, const MacroDefinitions& defs) {
    if (!t.contains_macro()) return t;
    if (t.is_macro()) {
        if (defs.defines(t.label())) return defs.rhs(t.label());
        return t;
    }
    std::vector<Term> children;
    children.reserve(t.child_count());
    bool changed = false;
    for (size_t i = 0; i < t.child_count(); ++i) {
        Term c = expand_once(t.child(i), defs);
        changed = changed || !(c == t.child(i));
        children.push_back(std::move(c));
    }
    if (!changed) return t;
    return make_node(t.label(), t.star_begin(), std::move(children), false);
}

Term expand_n(const Term& t, const MacroDefinitions& defs, size_t n) {
    Term cur = t;
    for (size_t i = 0; i < n; ++i) cur = expand_once(cur, defs);
    return cur;
}

Term expand_fixedpoint(const Term& t, const MacroDefinitions& defs) {
    if (!t.contains_macro()) return t;
    if (t.is_macro()) {
        if (defs.defines(t.label())) return defs.fixed_point(t.label());
        return t;
    }
    std::vector<Term> children;
    children.reserve(t.child_count());
    for (size_t i = 0; i < t.child_count(); ++i)
        children.push_back(expand_fixedpoint(t.child(i), defs));
    return make_node(t.label(), t.star_begin(), std::move(children), false);
}

Language expand_fixedpoint(const Language& language, const MacroDefinitions& defs) {
    std::vector<Term> out;
    out.reserve(language.count());
    for (const Term& t : language.terms()) out.push_back(expand_fixedpoint(t, defs));
    return Language(std::move(out));
}

bool is_reduced(const MacroDefinitions& defs) {
    std::unordered_set<Term, TermHash> seen;
    for (size_t i = 0; i < defs.count(); ++i)
        if (!seen.insert(defs.fixed_point(i)).second) return false;
    return true;
}

MacroDefinitions reduce_definitions(const Alphabet& alphabet, const MacroDefinitions& defs,
                                    std::vector<std::string>* dropped) {
    std::unordered_map<Term, std::string, TermHash> winner;
    for (size_t i = 0; i < defs.count(); ++i) {
        auto [it, inserted] = winner.emplace(defs.fixed_point(i), defs.names()[i]);
        if (!inserted && defs.names()[i] < it->second) it->second = defs.names()[i];
    }
    std::vector<std::string> keep;
    for (size_t i = 0; i < defs.count(); ++i) {
        if (winner.at(defs.fixed_point(i)) == defs.names()[i])
            keep.push_back(defs.names()[i]);
        else if (dropped)
            dropped->push_back(defs.names()[i]);
    }
    return defs.restrict_to(alphabet, keep);
}

Term instantiate(const Term& host, const std::string& m, const Position& p,
                 const MacroDefinitions& defs) {
    Term target = subterm_at(host, p);
    Term step = make_macro_leaf(m);
    (void)defs.index_of(m);
    bool matches = false;
    for (size_t n = 0; n <= defs.chain_bound(); ++n) {
        if (step == target) {
            matches = true;
            break;
        }
        Term next = expand_once(step, defs);
        if (next == step) break;
        step = next;
    }
    if (!matches)
        throw Error(ErrorKind::NotInstantiable,
                    "subterm at position is not an expansion step of macro '" + m + "'");
    return substitute(host, p, make_macro_leaf(m));
}

bool is_encoding(const Language& macrofied, const MacroDefinitions& defs, const Language& source) {
    return expand_fixedpoint(macrofied, defs) == source;
}

Encoding make_encoding(Language macrofied, MacroDefinitions defs, Language source) {
    if (!is_encoding(macrofied, defs, source))
        throw Error(ErrorKind::VerifyMismatch,
                    "macrofied language does not expand to the source language");
    return Encoding{std::move(macrofied), std::move(defs), std::move(source)};
}

EncodingSize encoding_size(const Encoding& e) {
    EncodingSize s;
    s.language = e.macrofied.total_size();
    s.definitions = e.defs.definitions_size();
    s.total = s.language + s.definitions;
    return s;
}

namespace {

// All n-step expansion forms of m for n >= 1, up to the fixed point.
std::vector<Term> expansion_chain(const MacroDefinitions& defs, const std::string& m) {
    std::vector<Term> chain;
    Term step = make_macro_leaf(m);
    while (true) {
        Term next = expand_once(step, defs);
        if (next == step) break;
        chain.push_back(next);
        step = next;
    }
    return chain;
}

bool instantiable_in(const std::vector<Term>& hosts, const std::vector<Term>& forms) {
    for (const Term& form : forms)
        for (const Term& host : hosts)
            if (is_subterm(form, host)) return true;
    return false;
}

} // namespace

Exhaustiveness exhaustiveness(const Encoding& e) {
    Exhaustiveness out{true, true};
    const std::vector<Term>& members = e.macrofied.terms();
    for (const std::string& m : e.defs.names()) {
        std::vector<Term> forms = expansion_chain(e.defs, m);
        if (out.macrofication && instantiable_in(members, forms)) out.macrofication = false;
        if (out.expansion) {
            std::vector<Term> others;
            for (const std::string& other : e.defs.names())
                if (other != m) others.push_back(e.defs.rhs(other));
            if (instantiable_in(others, forms)) out.expansion = false;
        }
        if (!out.macrofication && !out.expansion) break;
    }
    return out;
}

bool definitions_equivalent(const MacroDefinitions& a, const MacroDefinitions& b) {
    if (!is_reduced(a) || !is_reduced(b))
        throw Error(ErrorKind::NotReduced, "equivalence requires reduced definitions");
    if (a.count() != b.count()) return false;
    std::unordered_set<Term, TermHash> fps;
    for (size_t i = 0; i < a.count(); ++i) fps.insert(a.fixed_point(i));
    for (size_t i = 0; i < b.count(); ++i)
        if (!fps.count(b.fixed_point(i))) return false;
    return true;
}

} // namespace macmin
