#pragma once

// Guess-and-check evaluation with the e-cycle criterion and the component
// decomposition deciding which unfounded-set searches run.

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hexufs/asp.hpp"
#include "hexufs/core.hpp"
#include "hexufs/depgraph.hpp"
#include "hexufs/oracles.hpp"
#include "hexufs/ufs.hpp"

namespace hexufs {

enum class Mode { full, no_decomposition, no_criterion, brute };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::full: return "full";
        case Mode::no_decomposition: return "no-decomposition";
        case Mode::no_criterion: return "no-criterion";
        case Mode::brute: return "brute";
    }
    return "?";
}

inline Mode parse_mode(const std::string& name) {
    for (Mode m : {Mode::full, Mode::no_decomposition, Mode::no_criterion, Mode::brute})
        if (name == mode_name(m)) return m;
    throw Error("unknown mode '" + name + "' (expected full, no-decomposition, no-criterion or brute)");
}

inline Engine parse_engine(const std::string& name) {
    if (name == "exhaustive") return Engine::exhaustive;
    if (name == "propagate") return Engine::propagate;
    throw Error("unknown engine '" + name + "' (expected exhaustive or propagate)");
}

// Receives the scope of a decision and the computed needs-check value and
// returns the value to use. Test fixtures use it to corrupt the criterion.
using CriterionHook = std::function<bool(std::span<const AtomId> scope, bool needs_check)>;

struct EvaluationOptions {
    Mode mode = Mode::full;
    Engine engine = Engine::propagate;
    bool ca_restriction = true;
    std::optional<std::size_t> max_answers;
    std::size_t exhaustive_cap = 24;
    std::size_t ufs_cap = 20;
    std::size_t brute_cap = 20;
    CriterionHook criterion_hook;
};

struct Rejection {
    Interpretation candidate;          // projected compatible set
    std::vector<AtomId> witness;       // unfounded set found
    std::optional<std::size_t> component;  // full mode: component searched
};

struct EvaluationReport {
    std::vector<Interpretation> answer_sets;
    std::vector<Rejection> rejections;
    std::size_t compatible_sets = 0;
    std::size_t candidates_rejected = 0;
    std::size_t ufs_searches_run = 0;
    std::size_t ufs_searches_skipped = 0;
    std::size_t eligible_checks = 0;
    std::size_t components_total = 0;
    std::size_t components_ecyclic = 0;
    std::uint64_t search_node_expansions = 0;
    std::vector<std::size_t> component_searches;  // full mode, per component
    std::map<std::string, double> phase_times_ms;
};

using AnswerCallback = std::function<void(const Interpretation&)>;

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline void evaluate_brute(const Program& program, const OracleRegistry& registry, const EvaluationOptions& options,
                           EvaluationReport& report, const AnswerCallback& on_answer) {
    const auto& atoms = program.atoms();
    const std::size_t n = atoms.size();
    if (n > options.brute_cap || n > 63)
        throw CapExceeded("brute mode: " + std::to_string(n) + " atoms exceed the cap of " + std::to_string(options.brute_cap));
    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < end; ++mask) {
        Interpretation interp(program.table_ptr());
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> (n - 1 - i) & 1) interp.set(atoms[i], true);
        if (!is_model(program, interp, registry)) continue;
        if (!is_flp_answer_set(program, interp, registry, options.brute_cap)) continue;
        report.answer_sets.push_back(interp);
        if (on_answer) on_answer(interp);
        if (options.max_answers && report.answer_sets.size() >= *options.max_answers) return;
    }
}

}  // namespace detail

inline EvaluationReport evaluate(const Program& program, const OracleRegistry& registry, const EvaluationOptions& options = {},
                                 const AnswerCallback& on_answer = {}) {
    using detail::Clock;
    const auto start = Clock::now();
    if (!program.is_ground()) throw Error("evaluate requires a ground program");
    if (program.has_classical_negation()) throw Error("evaluate requires classical negation to be rewritten first");
    for (const auto& ext : program.externals()) registry.check(ext);

    EvaluationReport report;
    if (options.max_answers && *options.max_answers == 0) return report;
    if (options.mode == Mode::brute) {
        detail::evaluate_brute(program, registry, options, report, on_answer);
        report.phase_times_ms["total"] = detail::ms_since(start);
        return report;
    }

    // Syntactic analysis, once per program.
    const auto graph = build_dependency_graph(program);
    const auto partition = scc_partition(program, graph);
    report.components_total = partition.components.size();
    report.components_ecyclic = partition.ecyclic();
    report.component_searches.assign(partition.components.size(), 0);
    auto decide = [&](std::span<const AtomId> scope, bool computed) {
        return options.criterion_hook ? options.criterion_hook(scope, computed) : computed;
    };
    const bool global_needs = decide(graph.nodes, has_e_cycle(graph));
    const auto global_ca = cyclic_input_atoms(graph);
    const auto guess = build_guessing_program(program);
    report.phase_times_ms["analysis"] = detail::ms_since(start);

    double ufs_ms = 0;
    bool stop = false;
    auto search = [&](const Program& scope_program, const Interpretation& interp, std::span<const AtomId> domain,
                      std::optional<std::span<const AtomId>> required) -> std::optional<std::vector<AtomId>> {
        ++report.ufs_searches_run;
        if (required && required->empty()) return std::nullopt;
        const auto t = Clock::now();
        SearchStats stats;
        UfsQuery q{scope_program, interp, {domain.begin(), domain.end()}, {}, options.ufs_cap};
        if (required) q.required.assign(required->begin(), required->end());
        auto found = find_unfounded_set(q, registry, &stats);
        report.search_node_expansions += stats.nodes;
        ufs_ms += detail::ms_since(t);
        return found;
    };

    auto check = [&](const Interpretation& candidate) {
        ++report.compatible_sets;
        const Interpretation a = project(candidate, program);
        std::optional<Rejection> rejected;

        if (options.mode == Mode::full) {
            for (std::size_t c = 0; c < partition.components.size() && !rejected; ++c) {
                const auto& comp = partition.components[c];
                if (std::none_of(comp.atoms.begin(), comp.atoms.end(), [&](AtomId x) { return a.holds(x); })) continue;
                ++report.eligible_checks;
                if (!decide(comp.atoms, comp.e_cycle)) {
                    ++report.ufs_searches_skipped;
                    continue;
                }
                ++report.component_searches[c];
                std::optional<std::span<const AtomId>> required;
                if (options.ca_restriction) required = comp.cyclic_inputs;
                if (auto x = search(comp.program, a, comp.atoms, required)) rejected = Rejection{a, *x, c};
            }
        } else if (std::any_of(program.atoms().begin(), program.atoms().end(), [&](AtomId x) { return a.holds(x); })) {
            ++report.eligible_checks;
            const bool restricted = options.mode == Mode::no_decomposition;
            if (restricted && !global_needs) {
                ++report.ufs_searches_skipped;
            } else {
                std::optional<std::span<const AtomId>> required;
                if (restricted && options.ca_restriction) required = global_ca;
                if (auto x = search(program, a, program.atoms(), required)) rejected = Rejection{a, *x, std::nullopt};
            }
        }

        if (rejected) {
            ++report.candidates_rejected;
            report.rejections.push_back(std::move(*rejected));
            return true;
        }
        report.answer_sets.push_back(a);
        if (on_answer) on_answer(a);
        stop = options.max_answers && report.answer_sets.size() >= *options.max_answers;
        return !stop;
    };

    const auto enum_start = Clock::now();
    enumerate_compatible_sets(program, guess, registry, {options.engine, options.exhaustive_cap}, check);
    const double enum_ms = detail::ms_since(enum_start);
    report.phase_times_ms["ufs"] = ufs_ms;
    report.phase_times_ms["enumeration"] = enum_ms - ufs_ms;
    report.phase_times_ms["total"] = detail::ms_since(start);
    return report;
}

// Differences between full-mode answer sets and the brute-force FLP oracle.
inline std::vector<std::string> verify(const Program& program, const OracleRegistry& registry, EvaluationOptions options = {}) {
    options.max_answers.reset();
    options.mode = Mode::full;
    const auto full = evaluate(program, registry, options);
    options.mode = Mode::brute;
    const auto brute = evaluate(program, registry, options);

    std::set<std::vector<bool>> got, want;
    std::map<std::vector<bool>, std::string> label;
    for (const auto& a : full.answer_sets) {
        got.insert(a.bits());
        label[a.bits()] = a.str();
    }
    for (const auto& a : brute.answer_sets) {
        want.insert(a.bits());
        label[a.bits()] = a.str();
    }
    std::vector<std::string> out;
    for (const auto& b : want)
        if (!got.contains(b)) out.push_back("missing answer set " + label[b]);
    for (const auto& b : got)
        if (!want.contains(b)) out.push_back("unexpected answer set " + label[b]);
    return out;
}

}  // namespace hexufs
