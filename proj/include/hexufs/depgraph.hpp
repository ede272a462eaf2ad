#pragma once

// Atom dependency graphs, e-cycles, cyclic input atoms and the SCC
// decomposition into component programs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hexufs/core.hpp"

namespace hexufs {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

namespace detail {

inline constexpr std::uint32_t npos32 = std::numeric_limits<std::uint32_t>::max();

// Iterative Tarjan over nodes [0, n) with `active[v]`; inactive nodes get
// npos32. Components are numbered in completion order, so every edge u -> v
// between different components has comp[v] < comp[u].
inline std::vector<std::uint32_t> tarjan(std::size_t n, const std::vector<std::vector<std::uint32_t>>& adj,
                                         const std::vector<bool>& active, std::size_t* count = nullptr) {
    std::vector<std::uint32_t> comp(n, npos32), index(n, npos32), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> frames;
    std::uint32_t next_index = 0, next_comp = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (!active[root] || index[root] != npos32) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < adj[v].size()) {
                std::uint32_t w = adj[v][pos++];
                if (!active[w]) continue;
                if (index[w] == npos32) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::uint32_t done = v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            if (low[done] == index[done]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                } while (w != done);
                ++next_comp;
            }
        }
    }
    if (count) *count = next_comp;
    return comp;
}

inline void sort_unique(std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// SCCs of ->^d = -> ∪ <- ∪ ->_e restricted to `active`.
inline std::vector<std::uint32_t> d_components(std::size_t n, const std::vector<Edge>& ordinary, const std::vector<Edge>& external,
                                               const std::vector<bool>& active) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [u, v] : ordinary) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto [u, v] : external) adj[u].push_back(v);
    return tarjan(n, adj, active);
}

inline bool e_cycle(std::size_t n, const std::vector<Edge>& ordinary, const std::vector<Edge>& external, const std::vector<bool>& active) {
    const auto comp = d_components(n, ordinary, external, active);
    for (auto [u, v] : external)
        if (active[u] && active[v] && comp[u] == comp[v]) return true;
    return false;
}

}  // namespace detail

// Nodes are the ids of A(Π) in the program's atom table.
struct DependencyGraph {
    AtomTablePtr table;
    std::vector<AtomId> nodes;
    std::vector<Edge> ordinary;  // head -> positive ordinary body atom
    std::vector<Edge> external;  // head -> input atom of a body external

    std::size_t universe() const { return table ? table->size() : 0; }

    std::vector<bool> mask(std::optional<std::span<const AtomId>> scope = std::nullopt) const {
        std::vector<bool> out(universe(), false);
        if (!scope) {
            for (AtomId a : nodes) out[a] = true;
        } else {
            for (AtomId a : *scope) out.at(a) = true;
        }
        return out;
    }
};

inline DependencyGraph build_dependency_graph(const Program& program) {
    DependencyGraph g;
    g.table = program.table_ptr();
    g.nodes = program.atoms();
    for (const auto& rule : program.compiled()) {
        for (const auto& lit : rule.body) {
            if (!lit.external && !lit.naf) {
                for (AtomId h : rule.head) g.ordinary.push_back({h, lit.index});
            } else if (lit.external) {
                for (AtomId in : program.external_input_atoms(lit.index))
                    for (AtomId h : rule.head) g.external.push_back({h, in});
            }
        }
    }
    detail::sort_unique(g.ordinary);
    detail::sort_unique(g.external);
    return g;
}

// True iff some e-edge inside `scope` lies on a cycle of ->^d within `scope`.
inline bool has_e_cycle(const DependencyGraph& g, std::optional<std::span<const AtomId>> scope = std::nullopt) {
    return detail::e_cycle(g.universe(), g.ordinary, g.external, g.mask(scope));
}

// CA: targets a of e-edges b ->_e a with a and b in one ->^d component.
inline std::vector<AtomId> cyclic_input_atoms(const DependencyGraph& g, std::optional<std::span<const AtomId>> scope = std::nullopt) {
    const auto active = g.mask(scope);
    const auto comp = detail::d_components(g.universe(), g.ordinary, g.external, active);
    std::set<AtomId> out;
    for (auto [b, a] : g.external)
        if (active[a] && active[b] && comp[a] == comp[b]) out.insert(a);
    return {out.begin(), out.end()};
}

struct Component {
    std::vector<AtomId> atoms;
    std::vector<std::size_t> rules;  // Π_C as indices into the source program
    Program program;                 // Π_C over the source atom table
    bool e_cycle = false;            // e-cycle under ->^d inside C
    std::vector<AtomId> cyclic_inputs;  // CA(Π_C) ∩ C
    std::vector<std::size_t> depends_on;  // components reached by edges leaving C
};

// Components are listed in topological order: each one after all components
// it depends on.
struct ComponentPartition {
    std::vector<Component> components;
    std::vector<std::uint32_t> component_of;  // by atom id; npos32 outside A(Π)

    std::size_t ecyclic() const {
        return static_cast<std::size_t>(std::count_if(components.begin(), components.end(), [](const Component& c) { return c.e_cycle; }));
    }
};

inline ComponentPartition scc_partition(const Program& program, const DependencyGraph& g) {
    const std::size_t n = g.universe();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [u, v] : g.ordinary) adj[u].push_back(v);
    for (auto [u, v] : g.external) adj[u].push_back(v);
    std::size_t count = 0;
    const auto comp = detail::tarjan(n, adj, g.mask(), &count);

    ComponentPartition part;
    part.component_of = comp;
    part.components.resize(count);
    for (AtomId a : g.nodes) part.components[comp[a]].atoms.push_back(a);

    for (std::size_t i = 0; i < program.compiled().size(); ++i) {
        std::set<std::uint32_t> hit;
        for (AtomId h : program.compiled()[i].head) hit.insert(comp[h]);
        for (auto c : hit) part.components[c].rules.push_back(i);
    }

    std::vector<std::set<std::size_t>> deps(count);
    for (const auto* edges : {&g.ordinary, &g.external})
        for (auto [u, v] : *edges)
            if (comp[u] != comp[v]) deps[comp[u]].insert(comp[v]);

    for (std::size_t c = 0; c < count; ++c) {
        auto& component = part.components[c];
        component.program = program.subprogram(component.rules);
        component.depends_on.assign(deps[c].begin(), deps[c].end());
        for (auto [u, v] : g.external)
            if (comp[u] == c && comp[v] == c) component.e_cycle = true;
        const auto local = build_dependency_graph(component.program);
        const auto ca = cyclic_input_atoms(local);
        for (AtomId a : ca)
            if (comp[a] == c) component.cyclic_inputs.push_back(a);
    }
    return part;
}

inline ComponentPartition scc_partition(const Program& program) { return scc_partition(program, build_dependency_graph(program)); }

struct CriterionReport {
    bool has_e_cycle = false;
    std::vector<AtomId> cyclic_inputs;  // CA restricted to the scope
    bool predicate_e_cycle = false;
};

// Predicate dependency graph: the homomorphic image of the atom graph.
struct PredicateGraph {
    std::vector<std::string> nodes;
    std::vector<Edge> ordinary;
    std::vector<Edge> external;
};

inline PredicateGraph build_predicate_graph(const Program& program, const DependencyGraph& g) {
    PredicateGraph pg;
    std::map<std::string, std::uint32_t> index;
    for (AtomId a : g.nodes) index.emplace(program.table()[a].predicate, 0);
    for (auto& [name, i] : index) {
        i = static_cast<std::uint32_t>(pg.nodes.size());
        pg.nodes.push_back(name);
    }
    auto pred = [&](AtomId a) { return index.at(program.table()[a].predicate); };
    for (auto [u, v] : g.ordinary) pg.ordinary.push_back({pred(u), pred(v)});
    for (auto [u, v] : g.external) pg.external.push_back({pred(u), pred(v)});
    detail::sort_unique(pg.ordinary);
    detail::sort_unique(pg.external);
    return pg;
}

inline bool has_e_cycle(const PredicateGraph& pg) {
    return detail::e_cycle(pg.nodes.size(), pg.ordinary, pg.external, std::vector<bool>(pg.nodes.size(), true));
}

inline bool predicate_precheck(const Program& program) {
    const auto g = build_dependency_graph(program);
    return has_e_cycle(build_predicate_graph(program, g));
}

// false means the UFS search may be skipped for the scope.
inline bool needs_ufs_check(const Program& program, const DependencyGraph& g, std::optional<std::span<const AtomId>> scope,
                            CriterionReport* report = nullptr) {
    CriterionReport r;
    r.has_e_cycle = has_e_cycle(g, scope);
    r.cyclic_inputs = cyclic_input_atoms(g, scope);
    r.predicate_e_cycle = has_e_cycle(build_predicate_graph(program, g));
    if (report) *report = std::move(r);
    return report ? report->has_e_cycle : r.has_e_cycle;
}

inline bool needs_ufs_check(const Program& program, CriterionReport* report = nullptr) {
    return needs_ufs_check(program, build_dependency_graph(program), std::nullopt, report);
}

struct AnalysisReport {
    DependencyGraph graph;
    ComponentPartition partition;
    CriterionReport global;
};

inline AnalysisReport analyze(const Program& program) {
    AnalysisReport r;
    r.graph = build_dependency_graph(program);
    r.partition = scc_partition(program, r.graph);
    needs_ufs_check(program, r.graph, std::nullopt, &r.global);
    return r;
}

inline std::string to_text(const AnalysisReport& r) {
    const auto& table = *r.graph.table;
    std::ostringstream out;
    out << "atoms: " << atoms_str(table, r.graph.nodes) << "\n";
    out << "ordinary edges:";
    for (auto [u, v] : r.graph.ordinary) out << " " << table[u].str() << "->" << table[v].str();
    out << "\ne-edges:";
    for (auto [u, v] : r.graph.external) out << " " << table[u].str() << "->e " << table[v].str();
    out << "\ncomponents: " << r.partition.components.size() << " (" << r.partition.ecyclic() << " with e-cycle)\n";
    for (std::size_t i = 0; i < r.partition.components.size(); ++i) {
        const auto& c = r.partition.components[i];
        out << "  C" << i + 1 << " " << atoms_str(table, c.atoms) << " rules=" << c.rules.size()
            << " e-cycle=" << (c.e_cycle ? "yes" : "no") << " CA=" << atoms_str(table, c.cyclic_inputs) << "\n";
    }
    out << "predicate-level e-cycle: " << (r.global.predicate_e_cycle ? "yes" : "no") << "\n";
    out << "CA: " << atoms_str(table, r.global.cyclic_inputs) << "\n";
    out << (r.global.has_e_cycle ? "UFS check: required (e-cycle present)" : "UFS check: skippable (no e-cycle)") << "\n";
    return out.str();
}

}  // namespace hexufs
