#ifndef MACMIN_CONTAINMENT_HPP
#define MACMIN_CONTAINMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "macmin/macro.hpp"

namespace macmin {

/// m_outer contains m_inner iff the inner fixed point is a subterm of the
/// outer fixed point (the macros must be distinct).
bool contains(const MacroDefinitions& defs, const std::string& m_outer,
              const std::string& m_inner);

/// Two macros are dependent iff one contains the other.
bool are_dependent(const MacroDefinitions& defs, const std::string& m1, const std::string& m2);

/// DAG of macros ordered by strict containment of fixed points, stratified so
/// that level 0 holds macros with no strict container and level k holds
/// macros whose every strict container lies in levels < k. Macros sharing a
/// fixed point are grouped into one node; the group's instantiation winner is
/// the lexicographically least name.
struct HasseDiagram {
    struct NodeInfo {
        std::vector<std::string> macros; // sorted; front() is the winner
        Term fixed_point;
        uint64_t fp_size = 0;
        uint32_t level = 0;
        std::vector<uint32_t> covers; // covered node indices (directly contained)
    };

    std::vector<NodeInfo> nodes;                 // by level, canonical fp order within
    std::vector<std::vector<uint32_t>> levels;   // node indices per level
    std::vector<std::string> discarded;          // pruned by max_useful_size
};

HasseDiagram build_hasse(const MacroDefinitions& defs,
                         std::optional<uint64_t> max_useful_size = std::nullopt);

/// Graphviz rendering for debugging.
std::string hasse_to_dot(const HasseDiagram& diagram);

} // namespace macmin

#endif
