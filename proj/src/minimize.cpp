#include "macmin/minimize.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <unordered_map>

namespace macmin {

int MinimizationReport::reduction_percent() const {
    if (reduction_den == 0) return 0;
    return static_cast<int>((200 * reduction_num + reduction_den) / (2 * reduction_den));
}

const DominanceTable::Entry* DominanceTable::find(const Term& t) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), t,
                               [](const Entry& e, const Term& key) {
                                   return Term::compare(e.term, key) < 0;
                               });
    if (it == entries.end() || !(it->term == t)) return nullptr;
    return &*it;
}

namespace {

struct OccInfo {
    uint64_t count = 0;
    std::vector<Term> parents; // distinct immediate parent subterms
};

DominanceTable build_table(const std::vector<Term>& roots) {
    std::unordered_map<Term, OccInfo, TermHash> table;
    std::vector<Term> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
        Term t = stack.back();
        stack.pop_back();
        ++table[t].count;
        for (size_t i = 0; i < t.child_count(); ++i) {
            const Term& c = t.child(i);
            OccInfo& info = table[c];
            bool seen = false;
            for (const Term& p : info.parents)
                if (p == t) {
                    seen = true;
                    break;
                }
            if (!seen) info.parents.push_back(t);
            stack.push_back(c);
        }
    }

    DominanceTable out;
    out.entries.reserve(table.size());
    for (auto& [term, info] : table) {
        DominanceTable::Entry e;
        e.term = term;
        e.count = info.count;
        out.entries.push_back(std::move(e));
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const auto& a, const auto& b) { return Term::compare(a.term, b.term) < 0; });

    // Dominance: equal occurrence count forces a 1:1 nesting, so it suffices
    // to look at immediate parents; the chain is then followed upward to the
    // maximal dominator.
    auto direct_dominator = [&](const Term& t, uint64_t count) -> std::optional<Term> {
        auto it = table.find(t);
        if (it == table.end()) return std::nullopt;
        for (const Term& p : it->second.parents)
            if (table.at(p).count == count) return p;
        return std::nullopt;
    };
    for (auto& entry : out.entries) {
        std::optional<Term> dom = direct_dominator(entry.term, entry.count);
        if (!dom) continue;
        while (auto up = direct_dominator(*dom, entry.count)) dom = up;
        entry.dominated_by = dom;
    }
    return out;
}

} // namespace

DominanceTable occurrence_table(const Language& language) {
    return build_table(language.terms());
}

DominanceTable occurrence_table(const Encoding& encoding) {
    std::vector<Term> roots = encoding.macrofied.terms();
    for (size_t i = 0; i < encoding.defs.count(); ++i) roots.push_back(encoding.defs.rhs(i));
    return build_table(roots);
}

namespace {

// Fixed-point expansion -> instantiation winner (lexicographically least name
// among macros sharing the expansion).
using FpLookup = std::unordered_map<Term, std::string, TermHash>;

FpLookup build_lookup(const MacroDefinitions& defs) {
    FpLookup lookup;
    for (const std::string& name : defs.names()) {
        auto [it, inserted] = lookup.emplace(defs.fixed_point(name), name);
        if (!inserted && name < it->second) it->second = name;
    }
    return lookup;
}

struct MacrofyResult {
    Term term;
    uint64_t replacements = 0;
};

// Enumerates the term's own subterms, largest first, and instantiates every
// lookup hit against the current shape of the term. skip_self leaves the root
// occurrence alone (right-hand sides must stay non-constant); exclude skips
// one fixed point without copying the lookup.
MacrofyResult macrofy_term(const Term& t, const FpLookup& lookup, bool skip_self,
                           const Term* exclude = nullptr) {
    std::vector<Term> subterms = distinct_subterms(t);
    std::sort(subterms.begin(), subterms.end(), [](const Term& a, const Term& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return Term::compare(a, b) < 0;
    });
    MacrofyResult out{t, 0};
    for (const Term& st : subterms) {
        if (st.size() < 2) break; // expansions are never constants
        if (skip_self && st == t) continue;
        if (exclude && st == *exclude) continue;
        auto hit = lookup.find(st);
        if (hit == lookup.end()) continue;
        ReplaceResult r = replace_all(out.term, st, make_macro_leaf(hit->second));
        out.term = r.term;
        out.replacements += r.count;
    }
    return out;
}

void parallel_map(size_t count, unsigned jobs, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    unsigned workers = std::min<size_t>(jobs, count);
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct MacrofiedLanguage {
    std::vector<Term> terms; // aligned with input order
    uint64_t replacements = 0;
    uint64_t changed = 0;
};

MacrofiedLanguage macrofy_language(const Language& language, const FpLookup& lookup,
                                   unsigned jobs) {
    const std::vector<Term>& input = language.terms();
    MacrofiedLanguage out;
    out.terms.resize(input.size());
    std::vector<uint64_t> reps(input.size(), 0);
    parallel_map(input.size(), jobs, [&](size_t i) {
        MacrofyResult r = macrofy_term(input[i], lookup, false);
        out.terms[i] = r.term;
        reps[i] = r.replacements;
    });
    for (size_t i = 0; i < input.size(); ++i) {
        out.replacements += reps[i];
        if (!(out.terms[i] == input[i])) ++out.changed;
    }
    return out;
}

MinimizationReport finish_report(int problem, const Language& source, Language macrofied,
                                 MacroDefinitions defs, uint64_t changed, uint64_t replacements) {
    MinimizationReport report;
    report.problem = problem;
    report.input_size = source.total_size();
    report.term_count = source.count();
    report.changed_term_count = changed;
    report.instantiation_count = replacements;
    report.macro_count = defs.count();
    report.encoding = make_encoding(std::move(macrofied), std::move(defs), source);
    EncodingSize sz = encoding_size(report.encoding);
    report.language_size = sz.language;
    report.definitions_size = sz.definitions;
    report.output_size = sz.total;
    report.reduction_den = report.input_size > 0 ? report.input_size : 1;
    report.reduction_num =
        report.output_size <= report.input_size ? report.input_size - report.output_size : 0;
    return report;
}

void require_macro_free(const Language& language) {
    if (language.contains_macro())
        throw Error(ErrorKind::Config, "input language must be macro-free");
}

} // namespace

MinimizationReport minimize_p1(const Language& language, const MacroDefinitions& defs,
                               const MinimizeOptions& options) {
    require_macro_free(language);
    FpLookup lookup = build_lookup(defs);
    MacrofiedLanguage m = macrofy_language(language, lookup, options.jobs);
    return finish_report(1, language, Language(std::move(m.terms)), defs, m.changed,
                         m.replacements);
}

MinimizationReport minimize_p2(const Language& language, const MacroDefinitions& defs,
                               const MinimizeOptions& options) {
    require_macro_free(language);
    if (!is_reduced(defs))
        throw Error(ErrorKind::NotReduced, "problem 2 requires reduced macro definitions");
    FpLookup lookup = build_lookup(defs);
    MacrofiedLanguage m = macrofy_language(language, lookup, options.jobs);

    // Right-hand sides are re-derived from the fixed points so that the
    // original partial instantiations cannot block smaller ones.
    std::vector<Term> new_rhs(defs.count());
    std::vector<uint64_t> rhs_reps(defs.count(), 0);
    parallel_map(defs.count(), options.jobs, [&](size_t i) {
        MacrofyResult r = macrofy_term(defs.fixed_point(i), lookup, true);
        new_rhs[i] = r.term;
        rhs_reps[i] = r.replacements;
    });
    uint64_t replacements = m.replacements;
    for (uint64_t r : rhs_reps) replacements += r;

    MacroDefinitions out_defs = defs.with_rewritten_rhs(std::move(new_rhs));
    return finish_report(2, language, Language(std::move(m.terms)), std::move(out_defs), m.changed,
                         replacements);
}

MacroDefinitions select_macros_p3(const Language& language, const Alphabet& alphabet) {
    require_macro_free(language);
    std::vector<std::string> offenders;
    for (const Term& t : language.terms()) {
        std::vector<Term> stack{t};
        while (!stack.empty()) {
            Term cur = stack.back();
            stack.pop_back();
            if (alphabet.kind_of(cur.label()).is_unary() &&
                std::find(offenders.begin(), offenders.end(), cur.label()) == offenders.end())
                offenders.push_back(cur.label());
            for (size_t i = 0; i < cur.child_count(); ++i) stack.push_back(cur.child(i));
        }
    }
    if (!offenders.empty()) {
        std::sort(offenders.begin(), offenders.end());
        std::string msg = "unary symbols reachable in the language:";
        for (const auto& o : offenders) msg += " " + o;
        throw Error(ErrorKind::UnarySymbolsPresent, msg);
    }

    DominanceTable table = occurrence_table(language);
    std::vector<Term> chosen;
    for (const auto& entry : table.entries)
        if (entry.term.size() >= 2 && entry.count >= 2 && !entry.dominated_by)
            chosen.push_back(entry.term);
    // table entries are in canonical order already, so ranks are stable
    std::vector<std::pair<std::string, Term>> defs;
    defs.reserve(chosen.size());
    for (size_t k = 0; k < chosen.size(); ++k)
        defs.emplace_back("__m" + std::to_string(k), chosen[k]);
    return MacroDefinitions::validate(alphabet, std::move(defs));
}

namespace {

void count_macro_leaves(const Term& t, std::unordered_map<std::string, uint64_t>& counts) {
    if (!t.contains_macro()) return;
    if (t.is_macro()) {
        ++counts[t.label()];
        return;
    }
    for (size_t i = 0; i < t.child_count(); ++i) count_macro_leaves(t.child(i), counts);
}

} // namespace

MinimizationReport minimize_p3(const Language& language, const Alphabet& alphabet,
                               const MinimizeOptions& options) {
    MacroDefinitions selected = select_macros_p3(language, alphabet);
    MinimizationReport report = minimize_p2(language, selected, options);

    if (options.prune && report.encoding.defs.count() > 0) {
        // Removing macro m re-expands each of its instantiation sites to the
        // macrofication of its fixed point without m; the size delta is exact
        // because instantiation decisions outside those sites are unaffected.
        // Remove while some delta is <= 0, most negative first, exact ties
        // toward fewer macros. The working copies are edited in place; the
        // final encoding is recomputed from the surviving definitions.
        std::vector<std::string> survivors = report.encoding.defs.names();
        std::vector<Term> lang = report.encoding.macrofied.terms();
        std::unordered_map<std::string, Term> rhs, fps;
        for (const std::string& name : survivors) {
            rhs.emplace(name, report.encoding.defs.rhs(name));
            fps.emplace(name, report.encoding.defs.fixed_point(name));
        }
        std::unordered_map<std::string, Term> regions;
        bool removed_any = false;

        while (!survivors.empty()) {
            FpLookup lookup;
            for (const std::string& name : survivors) lookup.emplace(fps.at(name), name);

            std::unordered_map<std::string, uint64_t> sites;
            for (const Term& t : lang) count_macro_leaves(t, sites);
            for (const std::string& name : survivors) count_macro_leaves(rhs.at(name), sites);

            std::string best;
            int64_t best_delta = 1;
            for (const std::string& name : survivors) {
                const Term& fp = fps.at(name);
                auto cached = regions.find(name);
                if (cached == regions.end())
                    cached = regions.emplace(name, macrofy_term(fp, lookup, false, &fp).term)
                                 .first;
                auto k = sites.find(name);
                int64_t delta =
                    int64_t(k == sites.end() ? 0 : k->second) *
                        (int64_t(cached->second.size()) - 1) -
                    (1 + int64_t(rhs.at(name).size()));
                if (delta > 0) continue;
                bool better = best.empty() || delta < best_delta ||
                              (delta == best_delta && Term::compare(fp, fps.at(best)) < 0);
                if (better) {
                    best = name;
                    best_delta = delta;
                }
            }
            if (best.empty()) break;

            Term leaf = make_macro_leaf(best);
            const Term region = regions.at(best);
            for (Term& t : lang) t = replace_all(t, leaf, region).term;
            for (const std::string& name : survivors)
                if (name != best) {
                    auto it = rhs.find(name);
                    it->second = replace_all(it->second, leaf, region).term;
                }
            const Term removed_fp = fps.at(best);
            survivors.erase(std::find(survivors.begin(), survivors.end(), best));
            rhs.erase(best);
            fps.erase(best);
            regions.erase(best);
            // regions of containment neighbours are stale
            for (auto it = regions.begin(); it != regions.end();) {
                const Term& other_fp = fps.at(it->first);
                bool stale = other_fp.size() > removed_fp.size()
                                 ? is_subterm(removed_fp, other_fp)
                                 : false;
                it = stale ? regions.erase(it) : std::next(it);
            }
            removed_any = true;
        }
        if (removed_any)
            report = minimize_p2(language, selected.restrict_to(alphabet, survivors), options);
    }
    report.problem = 3;
    return report;
}

} // namespace macmin
