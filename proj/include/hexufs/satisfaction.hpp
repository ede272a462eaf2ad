#pragma once

#include <span>

#include "hexufs/core.hpp"
#include "hexufs/oracles.hpp"

namespace hexufs {

inline bool satisfies(const Interpretation& interp, const BodyLiteral& lit, const OracleRegistry& registry) {
    bool value = lit.is_external() ? registry.evaluate(lit.external(), interp) : interp.holds(lit.atom());
    return value != lit.naf;
}

inline bool satisfies(const Program& program, const CompiledLiteral& lit, const Interpretation& interp,
                      const OracleRegistry& registry) {
    bool value = lit.external ? registry.evaluate(program.externals()[lit.index], interp) : interp.holds(lit.index);
    return value != lit.naf;
}

inline bool body_true(const Program& program, const CompiledRule& rule, const Interpretation& interp,
                      const OracleRegistry& registry) {
    // ordinary literals first: cheaper and often decisive
    for (const auto& lit : rule.body)
        if (!lit.external && !satisfies(program, lit, interp, registry)) return false;
    for (const auto& lit : rule.body)
        if (lit.external && !satisfies(program, lit, interp, registry)) return false;
    return true;
}

inline bool rule_satisfied(const Program& program, const CompiledRule& rule, const Interpretation& interp,
                           const OracleRegistry& registry) {
    for (AtomId h : rule.head)
        if (interp.holds(h)) return true;
    return !body_true(program, rule, interp, registry);
}

// `interp` must be over the program's atom table.
inline bool is_model(const Program& program, const Interpretation& interp, const OracleRegistry& registry) {
    for (const auto& rule : program.compiled())
        if (!rule_satisfied(program, rule, interp, registry)) return false;
    return true;
}

// Same check restricted to a subset of the rules.
inline bool is_model(const Program& program, std::span<const std::size_t> rules, const Interpretation& interp,
                     const OracleRegistry& registry) {
    for (std::size_t i : rules)
        if (!rule_satisfied(program, program.compiled()[i], interp, registry)) return false;
    return true;
}

}  // namespace hexufs
