#ifndef MACMIN_GENERATE_HPP
#define MACMIN_GENERATE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "macmin/macro.hpp"

namespace macmin {

/// Seeded random corpora for the oracle-equivalence and property suites.
/// Identical options yield identical instances.
struct GenOptions {
    uint64_t seed = 1;
    size_t term_count = 5;
    uint64_t max_term_size = 12;
    size_t symbol_count = 6;     // constants and symbols of arity 2/3
    bool allow_unary = false;    // adds arity-1 symbols; off keeps every node >= 2 children
    bool include_unordered = true;
    size_t macro_count = 0;      // candidate definitions over repeated subterms
    bool reduced = true;         // allow duplicate fixed points when false
    double reuse_bias = 0.5;     // chance of reusing an already generated subtree
};

struct GeneratedInstance {
    Alphabet alphabet;
    Language language;
    std::vector<std::pair<std::string, Term>> macros; // raw; validate before use
};

GeneratedInstance generate_instance(const GenOptions& options);

} // namespace macmin

#endif
