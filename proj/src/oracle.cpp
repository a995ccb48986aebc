#include "macmin/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>
#include <unordered_set>

namespace macmin {

namespace {

using Clock = std::chrono::steady_clock;

struct BudgetTracker {
    uint64_t max_states;
    Clock::time_point deadline;
    uint64_t used = 0;

    explicit BudgetTracker(const SearchBudget& b)
        : max_states(b.max_states),
          deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(b.max_seconds))) {}

    void charge() {
        if (++used > max_states)
            throw Error(ErrorKind::BudgetExceeded,
                        "oracle state budget exceeded (" + std::to_string(max_states) + ")");
        if ((used & 0x3ff) == 0 && Clock::now() > deadline)
            throw Error(ErrorKind::BudgetExceeded, "oracle time budget exceeded");
    }
};

struct TermIndex {
    std::unordered_map<Term, uint32_t, TermHash> ids;
    std::vector<Term> terms;

    uint32_t id(const Term& t) {
        auto [it, inserted] = ids.emplace(t, static_cast<uint32_t>(terms.size()));
        if (inserted) terms.push_back(t);
        return it->second;
    }
    const Term& term(uint32_t i) const { return terms[i]; }
};

struct State {
    std::vector<uint32_t> lang; // sorted unique ids (set semantics)
    std::vector<uint32_t> rhs;  // aligned with macro index; empty for problem 1

    bool operator==(const State& o) const { return lang == o.lang && rhs == o.rhs; }
};

struct StateHash {
    size_t operator()(const State& s) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        auto feed = [&h](uint32_t v) { h = (h ^ v) * 0x100000001b3ULL; };
        for (uint32_t v : s.lang) feed(v);
        feed(0xffffffffu);
        for (uint32_t v : s.rhs) feed(v);
        return static_cast<size_t>(h);
    }
};

// One single-instantiation move applied to one term: the resulting term, and
// whether the replaced occurrence was the whole term.
struct CachedMove {
    uint32_t successor;
    bool at_root;
};

class Search {
public:
    Search(const Language& language, const MacroDefinitions& defs, bool rewrite_rhs,
           BudgetTracker& budget)
        : defs_(defs), rewrite_rhs_(rewrite_rhs), budget_(budget) {
        for (size_t i = 0; i < defs.count(); ++i) {
            const Term& fp = defs.fixed_point(i);
            fp_index_[fp].push_back(defs.names()[i]);
            min_fp_size_ = std::min(min_fp_size_, fp.size());
        }
        for (auto& [fp, names] : fp_index_) std::sort(names.begin(), names.end());

        for (const Term& t : language.terms()) initial_.lang.push_back(index_.id(t));
        std::sort(initial_.lang.begin(), initial_.lang.end());
        initial_.lang.erase(std::unique(initial_.lang.begin(), initial_.lang.end()),
                            initial_.lang.end());
        if (rewrite_rhs_)
            for (size_t i = 0; i < defs.count(); ++i)
                initial_.rhs.push_back(index_.id(defs.fixed_point(i)));
    }

    void run() {
        std::vector<State> stack;
        budget_.charge();
        visited_.insert(initial_);
        stack.push_back(initial_);
        min_size_ = state_size(initial_);
        best_ = initial_;

        while (!stack.empty()) {
            State cur = std::move(stack.back());
            stack.pop_back();

            uint64_t size = state_size(cur);
            if (size < min_size_ || (size == min_size_ && state_less(cur, best_))) {
                min_size_ = size;
                best_ = cur;
            }

            for (size_t mi = 0; mi < cur.lang.size(); ++mi)
                for (const CachedMove& move : moves_of(cur.lang[mi])) {
                    State next;
                    next.lang = with_member_replaced(cur.lang, mi, move.successor);
                    next.rhs = cur.rhs;
                    push(std::move(next), stack);
                }
            if (rewrite_rhs_)
                for (size_t di = 0; di < cur.rhs.size(); ++di)
                    for (const CachedMove& move : moves_of(cur.rhs[di])) {
                        if (move.at_root) continue; // right-hand sides stay non-constant
                        State next;
                        next.lang = cur.lang;
                        next.rhs = cur.rhs;
                        next.rhs[di] = move.successor;
                        push(std::move(next), stack);
                    }
        }
    }

    uint64_t min_size() const { return min_size_; }
    uint64_t states() const { return visited_.size(); }

    Language best_language() const {
        std::vector<Term> out;
        out.reserve(best_.lang.size());
        for (uint32_t id : best_.lang) out.push_back(index_.term(id));
        return Language(std::move(out));
    }

    std::vector<Term> best_rhs() const {
        std::vector<Term> out;
        out.reserve(best_.rhs.size());
        for (uint32_t id : best_.rhs) out.push_back(index_.term(id));
        return out;
    }

private:
    uint64_t state_size(const State& s) const {
        uint64_t total = 0;
        for (uint32_t id : s.lang) total += index_.term(id).size();
        if (rewrite_rhs_)
            for (uint32_t id : s.rhs) total += 1 + index_.term(id).size();
        else
            total += defs_.definitions_size();
        return total;
    }

    // Deterministic tie-break between equal-size states.
    bool state_less(const State& a, const State& b) const {
        const size_t na = a.lang.size(), nb = b.lang.size();
        for (size_t i = 0; i < std::min(na, nb); ++i)
            if (int c = Term::compare(index_.term(a.lang[i]), index_.term(b.lang[i])); c != 0)
                return c < 0;
        if (na != nb) return na < nb;
        for (size_t i = 0; i < a.rhs.size() && i < b.rhs.size(); ++i)
            if (int c = Term::compare(index_.term(a.rhs[i]), index_.term(b.rhs[i])); c != 0)
                return c < 0;
        return false;
    }

    static std::vector<uint32_t> with_member_replaced(const std::vector<uint32_t>& lang,
                                                      size_t at, uint32_t new_id) {
        std::vector<uint32_t> out = lang;
        out[at] = new_id;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void push(State&& next, std::vector<State>& stack) {
        if (visited_.insert(next).second) {
            budget_.charge();
            stack.push_back(std::move(next));
        }
    }

    void collect_moves(const Term& t, std::vector<uint32_t>& path, const Term& whole,
                       std::vector<CachedMove>& out) {
        if (t.size() >= min_fp_size_) {
            auto it = fp_index_.find(t);
            if (it != fp_index_.end())
                for (const std::string& m : it->second) {
                    Term succ = substitute(whole, Position{path}, make_macro_leaf(m));
                    out.push_back(CachedMove{index_.id(succ), path.empty()});
                }
        }
        for (size_t i = 0; i < t.child_count(); ++i) {
            path.push_back(static_cast<uint32_t>(i));
            collect_moves(t.child(i), path, whole, out);
            path.pop_back();
        }
    }

    const std::vector<CachedMove>& moves_of(uint32_t id) {
        if (id < move_cache_.size() && ready_[id]) return move_cache_[id];
        std::vector<CachedMove> moves;
        std::vector<uint32_t> path;
        Term t = index_.term(id);
        collect_moves(t, path, t, moves);
        if (move_cache_.size() < index_.terms.size()) {
            move_cache_.resize(index_.terms.size());
            ready_.resize(index_.terms.size(), false);
        }
        move_cache_[id] = std::move(moves);
        ready_[id] = true;
        return move_cache_[id];
    }

    const MacroDefinitions& defs_;
    bool rewrite_rhs_;
    BudgetTracker& budget_;
    TermIndex index_;
    std::unordered_map<Term, std::vector<std::string>, TermHash> fp_index_;
    uint64_t min_fp_size_ = UINT64_MAX;
    State initial_;
    std::unordered_set<State, StateHash> visited_;
    std::vector<std::vector<CachedMove>> move_cache_;
    std::vector<bool> ready_;
    uint64_t min_size_ = 0;
    State best_;
};

OracleResult run_search(const Language& language, const MacroDefinitions& defs, bool rewrite_rhs,
                        BudgetTracker& budget) {
    if (language.contains_macro())
        throw Error(ErrorKind::Config, "oracle input language must be macro-free");
    Search search(language, defs, rewrite_rhs, budget);
    search.run();
    OracleResult result;
    result.min_size = search.min_size();
    result.states_explored = search.states();
    MacroDefinitions witness_defs =
        rewrite_rhs ? defs.with_rewritten_rhs(search.best_rhs()) : defs;
    result.witness = make_encoding(search.best_language(), std::move(witness_defs), language);
    return result;
}

} // namespace

OracleResult oracle_p1(const Language& language, const MacroDefinitions& defs,
                       const SearchBudget& budget) {
    BudgetTracker tracker(budget);
    return run_search(language, defs, false, tracker);
}

OracleResult oracle_p2(const Language& language, const MacroDefinitions& defs,
                       const SearchBudget& budget) {
    if (!is_reduced(defs))
        throw Error(ErrorKind::NotReduced, "oracle_p2 requires reduced macro definitions");
    BudgetTracker tracker(budget);
    return run_search(language, defs, true, tracker);
}

OracleResult oracle_p3(const Language& language, const Alphabet& alphabet,
                       const OracleP3Options& options) {
    if (language.contains_macro())
        throw Error(ErrorKind::Config, "oracle input language must be macro-free");
    BudgetTracker tracker(options.budget);

    // Candidate expansions: non-constant subterms occurring at least twice.
    auto occurrences = subterm_occurrences(language);
    std::vector<Term> candidates;
    for (const auto& [term, count] : occurrences)
        if (count >= 2 && term.size() >= 2) candidates.push_back(term);
    std::sort(candidates.begin(), candidates.end(),
              [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });

    const size_t cap = std::min(options.max_macros, candidates.size());

    OracleResult best;
    bool have_best = false;

    std::vector<size_t> picks;
    // Enumerate candidate subsets of size 0..cap in lexicographic order.
    std::function<void(size_t)> enumerate = [&](size_t start) {
        {
            std::vector<std::pair<std::string, Term>> defs;
            defs.reserve(picks.size());
            for (size_t k = 0; k < picks.size(); ++k)
                defs.emplace_back("__o" + std::to_string(picks[k]), candidates[picks[k]]);
            MacroDefinitions md = MacroDefinitions::validate(alphabet, std::move(defs));
            OracleResult r = run_search(language, md, true, tracker);
            if (!have_best || r.min_size < best.min_size) {
                uint64_t states = best.states_explored;
                best = std::move(r);
                best.states_explored += states;
                have_best = true;
            } else {
                best.states_explored += r.states_explored;
            }
        }
        if (picks.size() == cap) return;
        for (size_t i = start; i < candidates.size(); ++i) {
            picks.push_back(i);
            enumerate(i + 1);
            picks.pop_back();
        }
    };
    enumerate(0);
    return best;
}

} // namespace macmin
