#ifndef MACMIN_CORPUS_HPP
#define MACMIN_CORPUS_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "macmin/minimize.hpp"

namespace macmin {

/// Line-oriented corpus text format ('#' starts a comment):
///
///   symbol <name> : ordered/<n> | unordered | mixed/<m>
///   term <termExpr>
///   macro <name> -> <termExpr>
///
/// termExpr := name | name '(' termExpr (',' termExpr)* ')'
/// Names match [A-Za-z_][A-Za-z0-9_'.-]*; the '__' prefix is reserved for
/// macro symbols, and every other macro name must be introduced by a macro
/// line.
struct CorpusDocument {
    Alphabet alphabet;
    Language terms;
    std::vector<std::pair<std::string, Term>> macros; // raw, pre-validation
};

struct ParseOptions {
    /// Lenient mode: undeclared symbols become ordered with the first
    /// observed arity; later conflicting arities are errors.
    bool infer_alphabet = false;
};

CorpusDocument parse_corpus(std::string_view text, const ParseOptions& options = {});

std::string render_term(const Term& t);

/// Macro-free corpus: symbol declarations plus term lines in canonical order.
std::string write_corpus(const Alphabet& alphabet, const Language& language);

/// Encoding document: symbols, macro definitions (deterministic canonical
/// order of right-hand sides), and the macrofied language. Re-parses to a
/// canonically equal encoding.
std::string write_encoding(const Alphabet& alphabet, const Encoding& encoding);

/// Minimization statistics as JSON with a stable key order.
std::string write_stats(const MinimizationReport& report);

} // namespace macmin

#endif
