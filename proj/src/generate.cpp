#include "macmin/generate.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace macmin {

namespace {

// splitmix64; avoids distribution differences across standard libraries
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
    bool chance(double p) { return double(next() % 1000000) < p * 1000000.0; }
};

struct SymbolPick {
    std::string name;
    SymbolKind kind;
};

class InstanceBuilder {
public:
    InstanceBuilder(const GenOptions& options) : opt_(options), rng_(options.seed) {
        size_t n = std::max<size_t>(2, opt_.symbol_count);
        size_t constants = std::max<size_t>(1, n / 2);
        for (size_t i = 0; i < constants; ++i)
            declare("k" + std::to_string(i), SymbolKind::ordered(0));
        size_t i = 0;
        while (symbols_.size() < n) {
            uint64_t pick = rng_.below(opt_.include_unordered ? 4 : 2);
            std::string name = "s" + std::to_string(i++);
            if (opt_.allow_unary && rng_.chance(0.3)) {
                declare("u" + std::to_string(i), SymbolKind::ordered(1));
                continue;
            }
            switch (pick) {
                case 0: declare(name, SymbolKind::ordered(2)); break;
                case 1: declare(name, SymbolKind::ordered(3)); break;
                case 2: declare(name, SymbolKind::unordered()); break;
                default: declare(name, SymbolKind::mixed(1)); break;
            }
        }
    }

    GeneratedInstance build() {
        GeneratedInstance out;
        std::vector<Term> terms;
        // budgets lean toward the cap so instances have room for repetition
        uint64_t lo = std::max<uint64_t>(1, (opt_.max_term_size + 2) / 3);
        for (size_t i = 0; i < opt_.term_count; ++i) {
            uint64_t budget = lo + rng_.below(opt_.max_term_size - lo + 1);
            terms.push_back(random_term(budget, false));
        }
        out.language = Language(std::move(terms));
        out.alphabet = alphabet_;
        out.macros = random_macros(out.language);
        return out;
    }

private:
    void declare(const std::string& name, SymbolKind kind) {
        if (alphabet_.has(name)) return;
        alphabet_.declare(name, kind);
        symbols_.push_back({name, kind});
        if (kind.is_constant()) constants_.push_back(name);
    }

    // Number of children for a symbol within the remaining budget, or 0 when
    // it cannot fit.
    size_t fit_children(const SymbolKind& kind, uint64_t budget) {
        if (kind.is_constant()) return 0;
        size_t min_children = 0;
        switch (kind.family) {
            case SymbolFamily::Ordered: min_children = kind.arity; break;
            case SymbolFamily::Unordered: min_children = opt_.allow_unary ? 1 : 2; break;
            case SymbolFamily::Mixed:
                min_children = std::max<size_t>(kind.arity, opt_.allow_unary ? 1 : 2);
                break;
        }
        if (budget < 1 + min_children) return 0;
        if (kind.family == SymbolFamily::Ordered) return kind.arity;
        size_t room = static_cast<size_t>(budget - 1);
        size_t extra = rng_.below(std::min<size_t>(room - min_children, 2) + 1);
        return min_children + extra;
    }

    Term random_term(uint64_t budget, bool allow_reuse = true) {
        if (allow_reuse && budget >= 3 && opt_.reuse_bias > 0 && !pool_.empty() &&
            rng_.chance(opt_.reuse_bias)) {
            const Term& reuse = pool_[rng_.below(pool_.size())];
            if (reuse.size() <= budget) return reuse;
        }
        if (budget <= 1) return make_term(alphabet_, constants_[rng_.below(constants_.size())], {});

        for (int attempt = 0; attempt < 8; ++attempt) {
            const SymbolPick& pick = symbols_[rng_.below(symbols_.size())];
            size_t n = fit_children(pick.kind, budget);
            if (n == 0) continue;
            uint64_t remaining = budget - 1;
            std::vector<Term> children;
            children.reserve(n);
            for (size_t i = 0; i < n; ++i) {
                uint64_t reserve = (n - 1 - i); // each later child needs >= 1
                uint64_t share = remaining > reserve ? remaining - reserve : 1;
                uint64_t child_budget = 1 + rng_.below(share);
                if (i + 1 == n) child_budget = remaining - reserve ? remaining : 1;
                children.push_back(random_term(child_budget));
                remaining -= std::min(remaining, children.back().size());
            }
            Term t = make_term(alphabet_, pick.name, std::move(children));
            pool_.push_back(t);
            if (pool_.size() > 64) pool_.erase(pool_.begin());
            return t;
        }
        return make_term(alphabet_, constants_[rng_.below(constants_.size())], {});
    }

    // Candidate definitions drawn from repeated subterms, occasionally nested
    // inside each other.
    std::vector<std::pair<std::string, Term>> random_macros(const Language& language) {
        std::vector<std::pair<std::string, Term>> out;
        if (opt_.macro_count == 0) return out;

        auto occ = subterm_occurrences(language);
        std::vector<Term> candidates, repeated;
        for (const auto& [term, count] : occ) {
            if (term.size() < 2) continue;
            candidates.push_back(term);
            if (count >= 2) repeated.push_back(term);
        }
        auto canonical = [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; };
        std::sort(candidates.begin(), candidates.end(), canonical);
        std::sort(repeated.begin(), repeated.end(), canonical);
        if (candidates.empty()) return out;

        std::vector<Term> chosen;
        std::unordered_set<std::string> used_keys;
        for (size_t attempts = 0; attempts < opt_.macro_count * 8; ++attempts) {
            if (chosen.size() >= opt_.macro_count) break;
            // prefer repeated subterms, and occasionally a strict superterm of
            // an already chosen one so that containment chains appear
            const Term* pick = nullptr;
            if (!chosen.empty() && rng_.chance(0.35)) {
                const Term& inner = chosen[rng_.below(chosen.size())];
                size_t offset = rng_.below(candidates.size());
                for (size_t k = 0; k < candidates.size(); ++k) {
                    const Term& c = candidates[(k + offset) % candidates.size()];
                    if (c.size() > inner.size() && is_subterm(inner, c)) {
                        pick = &c;
                        break;
                    }
                }
            }
            if (!pick) {
                if (!repeated.empty() && rng_.chance(0.7))
                    pick = &repeated[rng_.below(repeated.size())];
                else
                    pick = &candidates[rng_.below(candidates.size())];
            }
            if (!opt_.reduced && !chosen.empty() && rng_.chance(0.2)) {
                chosen.push_back(chosen[rng_.below(chosen.size())]); // duplicate fixed point
                continue;
            }
            if (used_keys.insert(canonical_key(*pick)).second) chosen.push_back(*pick);
        }
        std::sort(chosen.begin(), chosen.end(), [](const Term& a, const Term& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return Term::compare(a, b) < 0;
        });

        // Build right-hand sides smallest-first so later ones may use earlier
        // macros; nesting stays acyclic because replacements are strictly
        // smaller.
        std::vector<std::string> names(chosen.size());
        for (size_t i = 0; i < chosen.size(); ++i) names[i] = "__g" + std::to_string(i);
        for (size_t i = 0; i < chosen.size(); ++i) {
            Term rhs = chosen[i];
            for (size_t j = 0; j < i; ++j) {
                if (chosen[j].size() >= rhs.size()) continue;
                if (!rng_.chance(0.5)) continue;
                ReplaceResult r = replace_all(rhs, chosen[j], make_macro_leaf(names[j]));
                if (r.term.size() >= 2) rhs = r.term;
            }
            out.emplace_back(names[i], rhs);
        }
        return out;
    }

    GenOptions opt_;
    Rng rng_;
    Alphabet alphabet_;
    std::vector<SymbolPick> symbols_;
    std::vector<std::string> constants_;
    std::vector<Term> pool_;
};

} // namespace

GeneratedInstance generate_instance(const GenOptions& options) {
    InstanceBuilder builder(options);
    return builder.build();
}

} // namespace macmin
