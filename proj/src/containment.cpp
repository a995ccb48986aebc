#include "macmin/containment.hpp"

#include <algorithm>
#include <unordered_map>

namespace macmin {

bool contains(const MacroDefinitions& defs, const std::string& m_outer,
              const std::string& m_inner) {
    if (m_outer == m_inner)
        throw Error(ErrorKind::Config, "containment is defined for distinct macros");
    return is_subterm(defs.fixed_point(m_inner), defs.fixed_point(m_outer));
}

bool are_dependent(const MacroDefinitions& defs, const std::string& m1, const std::string& m2) {
    return contains(defs, m1, m2) || contains(defs, m2, m1);
}

HasseDiagram build_hasse(const MacroDefinitions& defs, std::optional<uint64_t> max_useful_size) {
    HasseDiagram diagram;

    // Group macros by fixed point; prune groups whose expansion can never be
    // instantiated within the size bound.
    std::unordered_map<Term, size_t, TermHash> group_of;
    std::vector<HasseDiagram::NodeInfo> nodes;
    for (const std::string& name : defs.names()) {
        const Term& fp = defs.fixed_point(name);
        if (max_useful_size && fp.size() > *max_useful_size) {
            diagram.discarded.push_back(name);
            continue;
        }
        auto it = group_of.find(fp);
        if (it == group_of.end()) {
            group_of.emplace(fp, nodes.size());
            HasseDiagram::NodeInfo info;
            info.fixed_point = fp;
            info.fp_size = fp.size();
            info.macros.push_back(name);
            nodes.push_back(std::move(info));
        } else {
            nodes[it->second].macros.push_back(name);
        }
    }
    for (auto& node : nodes) std::sort(node.macros.begin(), node.macros.end());

    const size_t n = nodes.size();
    std::vector<std::vector<bool>> strictly_contains(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j && nodes[j].fp_size < nodes[i].fp_size)
                strictly_contains[i][j] = is_subterm(nodes[j].fixed_point, nodes[i].fixed_point);

    // Longest-path stratification from the maximal (uncontained) nodes.
    std::vector<uint32_t> level(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (strictly_contains[i][j] && level[j] < level[i] + 1) {
                    level[j] = level[i] + 1;
                    changed = true;
                }
    }
    for (size_t i = 0; i < n; ++i) nodes[i].level = level[i];

    // Deterministic node order: by level, then canonical order of fixed point.
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (nodes[a].level != nodes[b].level) return nodes[a].level < nodes[b].level;
        return Term::compare(nodes[a].fixed_point, nodes[b].fixed_point) < 0;
    });
    std::vector<size_t> new_index(n);
    for (size_t i = 0; i < n; ++i) new_index[order[i]] = i;

    diagram.nodes.resize(n);
    for (size_t i = 0; i < n; ++i) diagram.nodes[new_index[i]] = std::move(nodes[i]);

    // Covering edges: transitive reduction of strict containment.
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (!strictly_contains[i][j]) continue;
            bool covered = true;
            for (size_t k = 0; k < n && covered; ++k)
                if (k != i && k != j && strictly_contains[i][k] && strictly_contains[k][j])
                    covered = false;
            if (covered)
                diagram.nodes[new_index[i]].covers.push_back(static_cast<uint32_t>(new_index[j]));
        }
    }
    for (auto& node : diagram.nodes) std::sort(node.covers.begin(), node.covers.end());

    uint32_t max_level = 0;
    for (const auto& node : diagram.nodes) max_level = std::max(max_level, node.level);
    diagram.levels.assign(n == 0 ? 0 : max_level + 1, {});
    for (size_t i = 0; i < diagram.nodes.size(); ++i)
        diagram.levels[diagram.nodes[i].level].push_back(static_cast<uint32_t>(i));

    std::sort(diagram.discarded.begin(), diagram.discarded.end());
    return diagram;
}

std::string hasse_to_dot(const HasseDiagram& diagram) {
    std::string out = "digraph macro_containment {\n  rankdir=TB;\n";
    for (size_t i = 0; i < diagram.nodes.size(); ++i) {
        const auto& node = diagram.nodes[i];
        out += "  n" + std::to_string(i) + " [label=\"";
        for (size_t k = 0; k < node.macros.size(); ++k) {
            if (k) out += ", ";
            out += node.macros[k];
        }
        out += "\\nsize " + std::to_string(node.fp_size);
        out += "\\nlevel " + std::to_string(node.level) + "\"];\n";
    }
    for (size_t i = 0; i < diagram.nodes.size(); ++i)
        for (uint32_t j : diagram.nodes[i].covers)
            out += "  n" + std::to_string(i) + " -> n" + std::to_string(j) + ";\n";
    out += "}\n";
    return out;
}

} // namespace macmin
