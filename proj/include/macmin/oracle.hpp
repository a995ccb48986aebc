#ifndef MACMIN_ORACLE_HPP
#define MACMIN_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "macmin/macro.hpp"

namespace macmin {

struct SearchBudget {
    uint64_t max_states = 2'000'000;
    double max_seconds = 120.0;
};

struct OracleResult {
    uint64_t min_size = 0;
    Encoding witness;
    uint64_t states_explored = 0;
};

/// Exact minimum of encoding_size over all encodings of `language` w.r.t.
/// `defs`, by exhaustive memoized search over single-instantiation moves
/// (each move replaces one occurrence of a macro's expansion by the macro
/// symbol). Definitions are kept verbatim. Throws BudgetExceeded.
OracleResult oracle_p1(const Language& language, const MacroDefinitions& defs,
                       const SearchBudget& budget = {});

/// Exact minimum over encodings whose definitions are equivalent to `defs`
/// (must be reduced): moves also apply inside right-hand sides, which start
/// from the full expansions.
OracleResult oracle_p2(const Language& language, const MacroDefinitions& defs,
                       const SearchBudget& budget = {});

struct OracleP3Options {
    SearchBudget budget;
    /// Cap on simultaneous macros per candidate definition set.
    size_t max_macros = 4;
};

/// Exact minimum over all encodings of `language`: enumerates reduced
/// candidate definition sets whose right-hand sides expand to repeated
/// (occ >= 2) non-constant subterms, evaluating each with the problem-2
/// search. Unary symbols are permitted.
OracleResult oracle_p3(const Language& language, const Alphabet& alphabet,
                       const OracleP3Options& options = {});

} // namespace macmin

#endif
