#ifndef MACMIN_ALPHABET_HPP
#define MACMIN_ALPHABET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "macmin/errors.hpp"

namespace macmin {

/// How a symbol's children are addressed: positionally, position-free, or a
/// ranked prefix followed by position-free children.
enum class SymbolFamily : uint8_t { Ordered, Unordered, Mixed };

struct SymbolKind {
    SymbolFamily family = SymbolFamily::Ordered;
    // Ordered: exact arity (0 = constant). Mixed: ranked prefix length (>= 1).
    // Unordered: unused.
    uint32_t arity = 0;

    static SymbolKind ordered(uint32_t arity) { return {SymbolFamily::Ordered, arity}; }
    static SymbolKind unordered() { return {SymbolFamily::Unordered, 0}; }
    static SymbolKind mixed(uint32_t ranked_prefix);

    bool is_constant() const { return family == SymbolFamily::Ordered && arity == 0; }
    bool is_unary() const { return family == SymbolFamily::Ordered && arity == 1; }

    bool operator==(const SymbolKind& o) const { return family == o.family && arity == o.arity; }
};

std::string to_string(const SymbolKind& kind);

/// Symbol table mapping names to kinds. Names are unique; kinds are fixed at
/// declaration time.
class Alphabet {
public:
    Alphabet() = default;

    void declare(const std::string& name, SymbolKind kind);

    bool has(const std::string& name) const { return index_.count(name) != 0; }
    std::optional<SymbolKind> find(const std::string& name) const;
    SymbolKind kind_of(const std::string& name) const;

    /// Declared names in lexicographic order.
    std::vector<std::string> sorted_names() const;

    size_t size() const { return index_.size(); }

private:
    std::unordered_map<std::string, SymbolKind> index_;
};

} // namespace macmin

#endif
