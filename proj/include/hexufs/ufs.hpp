#pragma once

// FLP reduct and answer-set oracle, unfounded sets, the unfounded-set search,
// cuts.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hexufs/core.hpp"
#include "hexufs/depgraph.hpp"
#include "hexufs/oracles.hpp"
#include "hexufs/satisfaction.hpp"

namespace hexufs {

struct FlpReduct {
    std::vector<std::size_t> rules;  // indices of the rules with a true body
};

inline FlpReduct flp_reduct(const Program& program, const Interpretation& interp, const OracleRegistry& registry) {
    FlpReduct out;
    for (std::size_t i = 0; i < program.compiled().size(); ++i)
        if (body_true(program, program.compiled()[i], interp, registry)) out.rules.push_back(i);
    return out;
}

// Exhaustive check: A is a model of fΠ^A and no interpretation with strictly
// fewer true atoms of A(Π) is.
inline bool is_flp_answer_set(const Program& program, const Interpretation& interp, const OracleRegistry& registry,
                              std::size_t cap = 20) {
    const auto reduct = flp_reduct(program, interp, registry);
    if (!is_model(program, reduct.rules, interp, registry)) return false;
    std::vector<AtomId> truth;
    for (AtomId a : program.atoms())
        if (interp.holds(a)) truth.push_back(a);
    if (truth.size() > cap)
        throw CapExceeded("FLP check: " + std::to_string(truth.size()) + " true atoms exceed the cap of " + std::to_string(cap));
    if (truth.empty()) return true;
    const std::uint64_t full = (std::uint64_t{1} << truth.size()) - 1;
    for (std::uint64_t keep = 0; keep < full; ++keep) {
        Interpretation smaller = interp;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (!(keep >> i & 1)) smaller.set(truth[i], false);
        if (is_model(program, reduct.rules, smaller, registry)) return false;
    }
    return true;
}

// Every rule with a head atom in X has a body literal false under A, or one
// false under A ∪̇¬X, or a true head atom outside X.
inline bool is_unfounded_set(const Program& program, const Interpretation& interp, std::span<const AtomId> x,
                             const OracleRegistry& registry) {
    if (x.empty()) return true;
    std::vector<bool> in_x(interp.size(), false);
    for (AtomId a : x) in_x.at(a) = true;
    const Interpretation overridden = interp.override_false(x);
    for (const auto& rule : program.compiled()) {
        if (std::none_of(rule.head.begin(), rule.head.end(), [&](AtomId h) { return in_x[h]; })) continue;
        if (std::any_of(rule.head.begin(), rule.head.end(), [&](AtomId h) { return !in_x[h] && interp.holds(h); })) continue;
        if (!body_true(program, rule, interp, registry)) continue;
        if (!body_true(program, rule, overridden, registry)) continue;
        return false;
    }
    return true;
}

struct UfsQuery {
    const Program& program;
    const Interpretation& interpretation;
    std::vector<AtomId> domain;
    std::vector<AtomId> required;  // empty: unconstrained
    std::size_t cap = 20;
};

struct SearchStats {
    std::uint64_t nodes = 0;
};

namespace detail {

// Branch-and-bound over subsets X of the true domain atoms. Each relevant rule
// yields a clause "some true head atom stays out, some positive body atom is
// in, or some external literal turns false under A ∪̇¬X"; an external literal
// is decided once all of its domain inputs are. Branches include first and
// require each new solution to be strictly smaller, so the final witness is
// the lexicographically least among those of minimum cardinality.
class UfsSearch {
public:
    UfsSearch(const UfsQuery& q, const OracleRegistry& registry, std::vector<AtomId> vars)
        : q_(q), registry_(registry), vars_(std::move(vars)) {
        var_of_.assign(q.interpretation.size(), npos32);
        for (std::uint32_t i = 0; i < vars_.size(); ++i) var_of_[vars_[i]] = i;
        value_.assign(vars_.size(), kOpen);

        const auto& program = q.program;
        for (const auto& rule : program.compiled()) {
            if (rule.head.empty()) continue;
            Clause c;
            bool relevant = true, some_head = false;
            for (AtomId h : rule.head) {
                if (!q.interpretation.holds(h)) continue;
                if (var_of_[h] == npos32) relevant = false;
                some_head = true;
                c.out.push_back(var_of_[h]);
            }
            if (!relevant || !some_head) continue;
            if (!body_true(program, rule, q.interpretation, registry)) continue;
            for (const auto& lit : rule.body) {
                if (!lit.external) {
                    if (!lit.naf && var_of_[lit.index] != npos32) c.in.push_back(var_of_[lit.index]);
                    continue;
                }
                std::vector<std::uint32_t> inputs;
                for (AtomId a : program.external_input_atoms(lit.index))
                    if (var_of_[a] != npos32) inputs.push_back(var_of_[a]);
                if (inputs.empty()) continue;
                ExtLit e{lit.index, lit.naf, std::move(inputs)};
                c.ext.push_back(externals_.size());
                externals_.push_back(std::move(e));
            }
            clauses_.push_back(std::move(c));
        }
        if (!q.required.empty()) {
            Clause c;
            for (AtomId a : q.required)
                if (a < var_of_.size() && var_of_[a] != npos32) c.in.push_back(var_of_[a]);
            clauses_.push_back(std::move(c));
        }
        Clause nonempty;
        for (std::uint32_t v = 0; v < vars_.size(); ++v) nonempty.in.push_back(v);
        clauses_.push_back(std::move(nonempty));
        ext_value_.assign(externals_.size(), kOpen);
    }

    std::optional<std::vector<AtomId>> run(SearchStats& stats) {
        stats_ = &stats;
        search(0);
        if (!best_) return std::nullopt;
        return best_;
    }

private:
    static constexpr std::int8_t kOut = 0, kIn = 1, kOpen = -1;

    struct ExtLit {
        std::uint32_t external;
        bool naf;
        std::vector<std::uint32_t> inputs;
    };
    struct Clause {
        std::vector<std::uint32_t> out;  // satisfied by a variable left out
        std::vector<std::uint32_t> in;   // satisfied by a variable put in
        std::vector<std::size_t> ext;    // satisfied by an external literal turning false
    };

    // Literal value of an external once its inputs are all decided: kIn when
    // the literal is false under A ∪̇¬X (the clause is satisfied).
    std::int8_t external_state(std::size_t e) {
        if (ext_value_[e] != kOpen) return ext_value_[e];
        const auto& lit = externals_[e];
        std::vector<AtomId> removed;
        for (auto v : lit.inputs) {
            if (value_[v] == kOpen) return kOpen;
            if (value_[v] == kIn) removed.push_back(vars_[v]);
        }
        const Interpretation view = q_.interpretation.override_false(removed);
        const bool holds = registry_.evaluate(q_.program.externals()[lit.external], view) != lit.naf;
        return holds ? kOut : kIn;
    }

    bool assign(std::uint32_t v, std::int8_t val, std::vector<std::uint32_t>& trail) {
        if (value_[v] == val) return true;
        if (value_[v] != kOpen) return false;
        value_[v] = val;
        trail.push_back(v);
        if (val == kIn) ++count_in_;
        return true;
    }

    void undo(std::vector<std::uint32_t>& trail, std::vector<std::size_t>& ext_trail) {
        for (auto v : trail) {
            if (value_[v] == kIn) --count_in_;
            value_[v] = kOpen;
        }
        for (auto e : ext_trail) ext_value_[e] = kOpen;
        trail.clear();
        ext_trail.clear();
    }

    bool propagate(std::vector<std::uint32_t>& trail, std::vector<std::size_t>& ext_trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            if (best_ && count_in_ >= best_->size()) return false;
            if (best_ && count_in_ + 1 == best_->size()) {
                for (std::uint32_t v = 0; v < vars_.size(); ++v)
                    if (value_[v] == kOpen) {
                        assign(v, kOut, trail);
                        changed = true;
                    }
            }
            for (std::size_t e = 0; e < externals_.size(); ++e) {
                if (ext_value_[e] != kOpen) continue;
                const auto s = external_state(e);
                if (s != kOpen) {
                    ext_value_[e] = s;
                    ext_trail.push_back(e);
                }
            }
            for (const auto& c : clauses_) {
                int open = 0;
                std::uint32_t last = 0;
                std::int8_t want = kOpen;
                bool sat = false, blocked = false;
                for (auto v : c.out) {
                    if (value_[v] == kOut) sat = true;
                    else if (value_[v] == kOpen) ++open, last = v, want = kOut;
                }
                for (auto v : c.in) {
                    if (sat) break;
                    if (value_[v] == kIn) sat = true;
                    else if (value_[v] == kOpen) ++open, last = v, want = kIn;
                }
                for (auto e : c.ext) {
                    if (sat) break;
                    if (ext_value_[e] == kIn) sat = true;
                    else if (ext_value_[e] == kOpen) blocked = true;
                }
                if (sat || blocked) continue;
                if (open == 0) return false;
                if (open == 1) {
                    assign(last, want, trail);
                    changed = true;
                }
            }
        }
        return true;
    }

    void search(std::uint32_t from) {
        ++stats_->nodes;
        std::vector<std::uint32_t> trail;
        std::vector<std::size_t> ext_trail;
        if (!propagate(trail, ext_trail)) {
            undo(trail, ext_trail);
            return;
        }
        while (from < vars_.size() && value_[from] != kOpen) ++from;
        if (from == vars_.size()) {
            std::vector<AtomId> x;
            for (std::uint32_t v = 0; v < vars_.size(); ++v)
                if (value_[v] == kIn) x.push_back(vars_[v]);
            if (!is_unfounded_set(q_.program, q_.interpretation, x, registry_))
                throw std::logic_error("unfounded-set search produced a set that fails the definition");
            best_ = std::move(x);
        } else {
            for (std::int8_t val : {kIn, kOut}) {
                std::vector<std::uint32_t> branch;
                assign(from, val, branch);
                search(from + 1);
                for (auto v : branch) {
                    if (value_[v] == kIn) --count_in_;
                    value_[v] = kOpen;
                }
            }
        }
        undo(trail, ext_trail);
    }

    const UfsQuery& q_;
    const OracleRegistry& registry_;
    std::vector<AtomId> vars_;
    std::vector<std::uint32_t> var_of_;
    std::vector<std::int8_t> value_;
    std::vector<Clause> clauses_;
    std::vector<ExtLit> externals_;
    std::vector<std::int8_t> ext_value_;
    std::size_t count_in_ = 0;
    std::optional<std::vector<AtomId>> best_;
    SearchStats* stats_ = nullptr;
};

}  // namespace detail

// Smallest nonempty unfounded X ⊆ domain ∩ A^T meeting `required` (when
// nonempty); ties broken lexicographically by atom id.
inline std::optional<std::vector<AtomId>> find_unfounded_set(const UfsQuery& q, const OracleRegistry& registry,
                                                             SearchStats* stats = nullptr) {
    SearchStats local;
    SearchStats& s = stats ? *stats : local;
    std::vector<AtomId> vars;
    for (AtomId a : q.domain)
        if (q.interpretation.holds(a)) vars.push_back(a);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.empty()) return std::nullopt;
    if (!q.required.empty() &&
        std::none_of(q.required.begin(), q.required.end(), [&](AtomId a) { return std::binary_search(vars.begin(), vars.end(), a); }))
        return std::nullopt;
    if (vars.size() > q.cap)
        throw CapExceeded("unfounded-set search: domain of " + std::to_string(vars.size()) + " atoms exceeds the cap of " +
                          std::to_string(q.cap));
    return detail::UfsSearch(q, registry, std::move(vars)).run(s);
}

// Reference search: all subsets of the domain by increasing size, then
// lexicographically. Only for small domains.
inline std::optional<std::vector<AtomId>> find_unfounded_set_naive(const UfsQuery& q, const OracleRegistry& registry) {
    std::vector<AtomId> vars(q.domain.begin(), q.domain.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.size() > q.cap) throw CapExceeded("naive unfounded-set search: domain too large");
    const std::size_t n = vars.size();
    std::optional<std::vector<AtomId>> best;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<AtomId> x;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) x.push_back(vars[i]);
        if (!q.required.empty() && std::none_of(x.begin(), x.end(), [&](AtomId a) {
                return std::find(q.required.begin(), q.required.end(), a) != q.required.end();
            }))
            continue;
        if (best && (x.size() > best->size() || (x.size() == best->size() && x >= *best))) continue;
        if (is_unfounded_set(q.program, q.interpretation, x, registry)) best = std::move(x);
    }
    return best;
}

inline bool is_unfounded_free(const Program& program, const Interpretation& interp, const OracleRegistry& registry,
                              std::size_t cap = 20) {
    UfsQuery q{program, interp, program.atoms(), {}, cap};
    return !find_unfounded_set(q, registry).has_value();
}

// C ⊆ U is a cut when no e-edge leads from U into C and no ordinary edge
// crosses between C and U \ C.
inline bool is_cut(const DependencyGraph& g, std::span<const AtomId> u, std::span<const AtomId> c) {
    const std::size_t n = g.universe();
    std::vector<bool> in_u(n, false), in_c(n, false);
    for (AtomId a : u) in_u.at(a) = true;
    for (AtomId a : c) in_c.at(a) = true;
    for (auto [from, to] : g.external)
        if (in_u[from] && in_c[to]) return false;
    for (auto [from, to] : g.ordinary) {
        const bool rest_from = in_u[from] && !in_c[from];
        const bool rest_to = in_u[to] && !in_c[to];
        if ((in_c[from] && rest_to) || (rest_from && in_c[to])) return false;
    }
    return true;
}

inline bool is_cut(const Program& program, std::span<const AtomId> u, std::span<const AtomId> c) {
    return is_cut(build_dependency_graph(program), u, c);
}

// U \ C for an unfounded U and a cut C of it; the result is unfounded.
inline std::vector<AtomId> reduce_by_cut(const Program& program, const Interpretation& interp, std::span<const AtomId> u,
                                         std::span<const AtomId> c, const OracleRegistry& registry) {
    for (AtomId a : c)
        if (std::find(u.begin(), u.end(), a) == u.end()) throw Error("reduce_by_cut: C is not a subset of U");
    if (!is_cut(program, u, c)) throw Error("reduce_by_cut: C is not a cut of U");
    if (!is_unfounded_set(program, interp, u, registry)) throw Error("reduce_by_cut: U is not unfounded");
    std::vector<AtomId> rest;
    for (AtomId a : u)
        if (std::find(c.begin(), c.end(), a) == c.end()) rest.push_back(a);
    if (!is_unfounded_set(program, interp, rest, registry)) throw std::logic_error("reduce_by_cut: U \\ C is not unfounded");
    return rest;
}

}  // namespace hexufs
