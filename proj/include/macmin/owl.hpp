#ifndef MACMIN_OWL_HPP
#define MACMIN_OWL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "macmin/macro.hpp"

namespace macmin {

/// Fixed modeling of the ingested OWL constructors.
///   SubClassOf, ObjectSomeValuesFrom, ObjectAllValuesFrom -> ordered/2
///   ObjectComplementOf                                    -> ordered/1
///   ObjectIntersectionOf, ObjectUnionOf,
///   EquivalentClasses, DisjointClasses                    -> unordered
///   DisjointUnion                                         -> mixed/1
///   class and property IRIs                               -> constants
const std::vector<std::pair<std::string, SymbolKind>>& owl_constructor_table();

struct OwlParseOptions {
    /// Ingest unsupported constructors as opaque ordered symbols with their
    /// first observed arity instead of skipping the axiom.
    bool lenient = false;
};

struct OwlDocument {
    Alphabet alphabet;
    std::vector<Term> axioms;                  // in file order, duplicates kept
    uint64_t skipped_axioms = 0;               // unsupported kinds/constructors
    std::map<std::string, uint64_t> skip_reasons;
};

/// Parses the functional-style syntax subset (SubClassOf, EquivalentClasses,
/// DisjointClasses, DisjointUnion over class expressions); annotations are
/// discarded and other axiom kinds are skipped with a count.
OwlDocument parse_owl_functional(std::string_view text, const OwlParseOptions& options = {});

/// Structural set collapse of axioms.
Language axioms_as_language(const std::vector<Term>& axioms);

struct OntologyCorpus {
    struct Dropped {
        std::string reason; // cycle | duplicate-definition | unary | unsupported-constructor
        std::string what;
    };

    Language axioms;              // every ingested axiom, set-collapsed
    Alphabet alphabet_p12;        // candidate names removed
    Language language_p12;        // candidate macros expanded away
    MacroDefinitions candidate_defs;
    Alphabet alphabet_p3;         // full alphabet
    Language language_p3;         // axioms minus the ones using unary symbols
    std::vector<Dropped> dropped;
};

/// Experimental preparation: candidate definitions from EquivalentClasses(N, C)
/// axioms with N named and C complex, minus cyclic and multiply-defined
/// candidates; the problem-1/2 input expands those candidates away, the
/// problem-3 input is the axiom set without unary-symbol axioms.
OntologyCorpus prepare_experiment(const OwlDocument& document);

} // namespace macmin

#endif
