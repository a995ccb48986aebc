#ifndef MACMIN_MACRO_HPP
#define MACMIN_MACRO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "macmin/term.hpp"

namespace macmin {

/// Acyclic macro definitions: a finite map from constant macro symbols
/// (disjoint from the alphabet) to non-constant right-hand sides over the
/// alphabet plus the macro symbols. Fixed-point expansions are materialized at
/// construction, so a validated value is immutable and freely shareable.
class MacroDefinitions {
public:
    MacroDefinitions() = default;

    /// Checks namespace disjointness, well-formed non-constant right-hand
    /// sides, and acyclicity of the `uses` graph. Throws SymbolClash,
    /// UnknownSymbol, ConstantExpansion, DuplicateSymbolDeclaration or
    /// CyclicDefinitions.
    static MacroDefinitions validate(const Alphabet& alphabet,
                                     std::vector<std::pair<std::string, Term>> defs);

    size_t count() const { return names_.size(); }
    bool empty() const { return names_.empty(); }

    /// Macro names in lexicographic order.
    const std::vector<std::string>& names() const { return names_; }

    bool defines(const std::string& name) const;
    size_t index_of(const std::string& name) const;

    const Term& rhs(size_t idx) const { return rhs_[idx]; }
    const Term& rhs(const std::string& name) const { return rhs_[index_of(name)]; }
    const Term& fixed_point(size_t idx) const { return fixed_points_[idx]; }
    const Term& fixed_point(const std::string& name) const { return fixed_points_[index_of(name)]; }

    /// Length of the longest `uses` chain; expand_fixedpoint needs at most
    /// this many 1-step rounds.
    size_t chain_bound() const { return chain_bound_; }

    /// Sum over definitions of 1 + size(rhs).
    uint64_t definitions_size() const;

    /// Same macro names with new right-hand sides that must preserve every
    /// fixed point (used when instantiating macros inside definitions).
    MacroDefinitions with_rewritten_rhs(std::vector<Term> new_rhs) const;

    /// Restriction to a subset of macro names.
    MacroDefinitions restrict_to(const Alphabet& alphabet,
                                 const std::vector<std::string>& keep) const;

private:
    std::vector<std::string> names_;   // sorted
    std::vector<Term> rhs_;            // aligned with names_
    std::vector<Term> fixed_points_;   // aligned with names_
    size_t chain_bound_ = 0;
};

/// 1-step expansion: every macro occurrence replaced by its definition,
/// simultaneously.
Term expand_once(const Term& t, const MacroDefinitions& defs);
Term expand_n(const Term& t, const MacroDefinitions& defs, size_t n);

/// The unique macro-free expansion.
Term expand_fixedpoint(const Term& t, const MacroDefinitions& defs);
Language expand_fixedpoint(const Language& language, const MacroDefinitions& defs);

/// True iff no two distinct macros share a fixed-point expansion.
bool is_reduced(const MacroDefinitions& defs);

/// Keeps, per fixed-point class, the lexicographically least macro name;
/// reports the discarded names.
MacroDefinitions reduce_definitions(const Alphabet& alphabet, const MacroDefinitions& defs,
                                    std::vector<std::string>* dropped = nullptr);

/// Replaces host|_p with the macro symbol, provided host|_p equals some
/// n-step expansion of `m` (n along m's own expansion chain). Throws
/// NotInstantiable otherwise.
Term instantiate(const Term& host, const std::string& m, const Position& p,
                 const MacroDefinitions& defs);

/// A macrofied language together with its definitions and the language it
/// encodes.
struct Encoding {
    Language macrofied;
    MacroDefinitions defs;
    Language source;
};

/// True iff the fixed-point expansion of `macrofied` equals `source` as a set.
bool is_encoding(const Language& macrofied, const MacroDefinitions& defs, const Language& source);

/// Checked constructor for Encoding. Throws VerifyMismatch if the round trip
/// fails.
Encoding make_encoding(Language macrofied, MacroDefinitions defs, Language source);

struct EncodingSize {
    uint64_t language = 0;
    uint64_t definitions = 0;
    uint64_t total = 0;
};
EncodingSize encoding_size(const Encoding& e);

struct Exhaustiveness {
    bool macrofication = false; // no macro can be instantiated in the language
    bool expansion = false;     // nor in any other macro's right-hand side
    bool both() const { return macrofication && expansion; }
};
Exhaustiveness exhaustiveness(const Encoding& e);

/// True iff there is a fixed-point-preserving bijection between the two
/// (reduced) definition sets. Throws NotReduced.
bool definitions_equivalent(const MacroDefinitions& a, const MacroDefinitions& b);

} // namespace macmin

#endif
