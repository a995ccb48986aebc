#ifndef MACMIN_MINIMIZE_HPP
#define MACMIN_MINIMIZE_HPP

#include <optional>
#include <string>
#include <vector>

#include "macmin/macro.hpp"

namespace macmin {

struct MinimizeOptions {
    unsigned jobs = 1;  // per-term macrofication workers; output is identical for any value
    bool prune = true;  // problem 3: drop macros whose removal does not grow the encoding
};

struct MinimizationReport {
    Encoding encoding;
    int problem = 0;
    uint64_t input_size = 0;
    uint64_t output_size = 0;
    uint64_t language_size = 0;
    uint64_t definitions_size = 0;
    uint64_t term_count = 0;
    uint64_t changed_term_count = 0;
    uint64_t macro_count = 0;
    uint64_t instantiation_count = 0;
    // exact rational 1 - output/input
    uint64_t reduction_num = 0;
    uint64_t reduction_den = 1;

    double proportional_reduction() const {
        return reduction_den ? double(reduction_num) / double(reduction_den) : 0.0;
    }
    /// Rounded to the nearest integer percent.
    int reduction_percent() const;
};

/// Occurrence counts for every distinct subterm, plus dominance: a term is
/// dominated when some strict superterm occurs exactly as often.
struct DominanceTable {
    struct Entry {
        Term term;
        uint64_t count = 0;
        std::optional<Term> dominated_by; // maximal dominator
    };

    std::vector<Entry> entries; // canonical order
    const Entry* find(const Term& t) const;
};

DominanceTable occurrence_table(const Language& language);
/// Counts positions across the macrofied language and every definition
/// right-hand side.
DominanceTable occurrence_table(const Encoding& encoding);

/// Size-minimal encoding of `language` w.r.t. the given definitions, which are
/// returned verbatim. Macros are instantiated exhaustively, containing macros
/// before contained ones; each term is processed against a fixed-point lookup
/// table over its own subterms in descending containment order.
MinimizationReport minimize_p1(const Language& language, const MacroDefinitions& defs,
                               const MinimizeOptions& options = {});

/// Size-minimal encoding w.r.t. the equivalence class of `defs` (which must be
/// reduced): right-hand sides are exhaustively macrofied as well. Macro names
/// are preserved.
MinimizationReport minimize_p2(const Language& language, const MacroDefinitions& defs,
                               const MinimizeOptions& options = {});

/// One definition per non-constant subterm that occurs at least twice and is
/// not dominated. Names are __m<k> with k the canonical rank of the defining
/// term. Throws UnarySymbolsPresent when a ranked unary symbol occurs in the
/// language.
MacroDefinitions select_macros_p3(const Language& language, const Alphabet& alphabet);

/// Size-minimal encoding over freely chosen definitions: select_macros_p3,
/// minimize_p2, then a pruning pass that removes any macro whose removal does
/// not grow the encoding (exact ties resolve toward fewer macros).
MinimizationReport minimize_p3(const Language& language, const Alphabet& alphabet,
                               const MinimizeOptions& options = {});

} // namespace macmin

#endif
