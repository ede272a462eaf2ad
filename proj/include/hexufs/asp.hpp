#pragma once

// Ordinary ASP: guessing program, GL reduct, answer-set enumeration with an
// exhaustive engine and a propagation engine, compatible sets.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hexufs/core.hpp"
#include "hexufs/oracles.hpp"
#include "hexufs/satisfaction.hpp"

namespace hexufs {

inline constexpr const char* kReplacementPrefix = "__e_";
inline constexpr const char* kComplementPrefix = "__ne_";

namespace detail {

// Injective flattening of a name and its input tokens into one predicate
// name: '_' separates parts, any other character outside [A-Za-z0-9] is
// written as "_X" followed by two uppercase hex digits.
inline std::string flatten_part(const std::string& token) {
    std::string out;
    for (unsigned char c : token) {
        if (std::isalnum(c)) {
            out += static_cast<char>(c);
        } else {
            char buf[5];
            std::snprintf(buf, sizeof buf, "_X%02X", c);
            out += buf;
        }
    }
    return out;
}

inline std::string flatten(const ExternalAtom& ext) {
    std::string out = flatten_part(ext.name);
    for (const auto& in : ext.inputs) out += "_" + flatten_part(in.token);
    return out;
}

inline bool reserved(const std::string& predicate) {
    return predicate.starts_with(kReplacementPrefix) || predicate.starts_with(kComplementPrefix);
}

}  // namespace detail

struct Replacement {
    ExternalAtom external;
    Atom positive;  // e_{&g[p]}(c)
    Atom negative;  // ne_{&g[p]}(c)
};

struct GuessingProgram {
    Program program;                        // Π̂
    std::vector<Replacement> replacements;  // parallel to source.externals()

    bool is_replacement(const Atom& a) const { return detail::reserved(a.predicate); }
};

inline GuessingProgram build_guessing_program(const Program& source) {
    if (!source.is_ground()) throw Error("guessing program requires a ground program");
    for (const auto& a : source.table().atoms())
        if (detail::reserved(a.predicate)) throw Error("atom " + a.str() + " uses a reserved replacement-atom prefix");

    GuessingProgram out;
    std::map<ExternalAtom, std::size_t> index;
    for (const auto& ext : source.externals()) {
        const std::string flat = detail::flatten(ext);
        Replacement r{ext, Atom{kReplacementPrefix + flat, ext.outputs, false}, Atom{kComplementPrefix + flat, ext.outputs, false}};
        for (const auto& prev : out.replacements)
            if (prev.positive == r.positive) throw Error("replacement atom collision for " + ext.str() + " and " + prev.external.str());
        index.emplace(ext, out.replacements.size());
        out.replacements.push_back(std::move(r));
    }

    std::vector<Rule> rules;
    for (Rule r : source.rules()) {
        for (auto& lit : r.body)
            if (lit.is_external()) lit.payload = out.replacements[index.at(lit.external())].positive;
        rules.push_back(std::move(r));
    }
    for (const auto& rep : out.replacements) rules.push_back(Rule{{rep.positive, rep.negative}, {}});
    out.program = Program(std::move(rules));
    return out;
}

// Positive program: rules with a true naf atom dropped, naf literals removed.
inline Program gl_reduct(const Program& program, const Interpretation& interp) {
    if (program.has_externals()) throw Error("gl_reduct requires an ordinary program");
    std::vector<Rule> out;
    for (const auto& r : program.rules()) {
        Rule reduced{r.head, {}};
        bool keep = true;
        for (const auto& lit : r.body) {
            if (!lit.naf) {
                reduced.body.push_back(lit);
            } else if (interp.holds(lit.atom())) {
                keep = false;
                break;
            }
        }
        if (keep) out.push_back(std::move(reduced));
    }
    return Program::with_table(std::move(out), program.table_ptr());
}

enum class Engine { exhaustive, propagate };

inline const char* engine_name(Engine e) { return e == Engine::exhaustive ? "exhaustive" : "propagate"; }

// Return false to stop the enumeration.
using AnswerSetCallback = std::function<bool(const Interpretation&)>;

struct EnumerationOptions {
    Engine engine = Engine::propagate;
    std::size_t exhaustive_cap = 24;
};

namespace detail {

inline constexpr std::uint32_t npos_local = 0xffffffffu;

// Rule over local variable indices 0..n-1.
struct LocalRule {
    std::vector<std::uint32_t> head, pos, neg;
};

inline std::vector<LocalRule> localize(const Program& program, std::vector<std::uint32_t>& local_of) {
    local_of.assign(program.table().size(), npos_local);
    for (std::uint32_t i = 0; i < program.atoms().size(); ++i) local_of[program.atoms()[i]] = i;
    std::vector<LocalRule> rules;
    for (const auto& r : program.compiled()) {
        LocalRule lr;
        for (AtomId h : r.head) lr.head.push_back(local_of[h]);
        for (const auto& l : r.body) (l.naf ? lr.neg : lr.pos).push_back(local_of[l.index]);
        rules.push_back(std::move(lr));
    }
    return rules;
}

// DPLL: is there a model M ⊊ T of the reduct of `rules` wrt T? `in_t` marks T.
inline bool exists_smaller_model(const std::vector<LocalRule>& rules, const std::vector<bool>& in_t) {
    std::vector<std::uint32_t> vars;
    std::vector<std::int32_t> var_of(in_t.size(), -1);
    for (std::uint32_t i = 0; i < in_t.size(); ++i)
        if (in_t[i]) {
            var_of[i] = static_cast<std::int32_t>(vars.size());
            vars.push_back(i);
        }
    if (vars.empty()) return false;

    // Clause literals: (var, wanted value). Reduct rule with P ⊆ T becomes
    // ¬P ∨ (H ∩ T); atoms outside T are false in every candidate M.
    using Clause = std::vector<std::pair<std::uint32_t, bool>>;
    std::vector<Clause> clauses;
    for (const auto& r : rules) {
        bool dropped = false;
        for (auto b : r.neg)
            if (in_t[b]) dropped = true;
        for (auto b : r.pos)
            if (!in_t[b]) dropped = true;
        if (dropped) continue;
        Clause c;
        for (auto b : r.pos) c.push_back({static_cast<std::uint32_t>(var_of[b]), false});
        for (auto h : r.head)
            if (in_t[h]) c.push_back({static_cast<std::uint32_t>(var_of[h]), true});
        clauses.push_back(std::move(c));
    }
    Clause strict;
    for (std::uint32_t v = 0; v < vars.size(); ++v) strict.push_back({v, false});
    clauses.push_back(std::move(strict));

    std::vector<std::int8_t> value(vars.size(), -1);
    std::function<bool()> solve = [&]() -> bool {
        std::vector<std::uint32_t> trail;
        auto undo = [&] {
            for (auto v : trail) value[v] = -1;
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& c : clauses) {
                int open = 0;
                std::pair<std::uint32_t, bool> last{};
                bool sat = false;
                for (const auto& [v, want] : c) {
                    if (value[v] < 0) {
                        ++open;
                        last = {v, want};
                    } else if ((value[v] == 1) == want) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (open == 0) {
                    undo();
                    return false;
                }
                if (open == 1) {
                    value[last.first] = last.second ? 1 : 0;
                    trail.push_back(last.first);
                    changed = true;
                }
            }
        }
        std::uint32_t pick = 0;
        while (pick < value.size() && value[pick] >= 0) ++pick;
        if (pick == value.size()) return true;
        for (std::int8_t v : {0, 1}) {
            value[pick] = v;
            if (solve()) return true;
        }
        value[pick] = -1;
        undo();
        return false;
    };
    return solve();
}

// Watches for the external propagator: once all inputs are assigned, the
// oracle value fixes the replacement pair.
struct ExternalWatch {
    std::vector<std::uint32_t> inputs;  // local indices
    std::uint32_t positive = 0, negative = 0;
    std::function<bool(const std::vector<std::int8_t>&)> evaluate;
};

class PropagationSolver {
public:
    PropagationSolver(const Program& program, std::vector<ExternalWatch> watches)
        : program_(program), watches_(std::move(watches)) {
        rules_ = localize(program, local_of_);
        n_ = static_cast<std::uint32_t>(program.atoms().size());
        occ_.resize(n_);
        head_occ_.resize(n_);
        watch_occ_.resize(n_);
        for (std::uint32_t r = 0; r < rules_.size(); ++r) {
            std::set<std::uint32_t> vars;
            for (auto v : rules_[r].head) {
                vars.insert(v);
                head_occ_[v].push_back(r);
            }
            for (auto v : rules_[r].pos) vars.insert(v);
            for (auto v : rules_[r].neg) vars.insert(v);
            for (auto v : vars) occ_[v].push_back(r);
        }
        for (std::uint32_t w = 0; w < watches_.size(); ++w)
            for (auto v : watches_[w].inputs) watch_occ_[v].push_back(w);
        value_.assign(n_, -1);
    }

    void run(const AnswerSetCallback& emit) {
        stopped_ = false;
        std::vector<std::uint32_t> trail;
        bool ok = true;
        for (std::uint32_t r = 0; r < rules_.size() && ok; ++r) ok = check_rule(r, trail);
        for (std::uint32_t v = 0; v < n_ && ok; ++v) ok = check_support(v, trail);
        for (std::uint32_t w = 0; w < watches_.size() && ok; ++w) ok = check_watch(w, trail);
        if (ok) ok = propagate(trail);
        if (ok) search(0, emit);
        for (auto v : trail) value_[v] = -1;
    }

private:
    static constexpr std::int8_t kFalse = 0, kTrue = 1, kOpen = -1;

    bool assign(std::uint32_t v, std::int8_t val, std::vector<std::uint32_t>& trail) {
        if (value_[v] == val) return true;
        if (value_[v] != kOpen) return false;
        value_[v] = val;
        trail.push_back(v);
        queue_.push_back(v);
        return true;
    }

    // Clause ¬B+ ∨ B- ∨ H of a rule.
    bool check_rule(std::uint32_t r, std::vector<std::uint32_t>& trail) {
        const auto& rule = rules_[r];
        int open = 0;
        std::uint32_t last = 0;
        std::int8_t want = kOpen;
        auto lit = [&](std::uint32_t v, std::int8_t sat_value) {
            if (value_[v] == sat_value) return true;
            if (value_[v] == kOpen) {
                ++open;
                last = v;
                want = sat_value;
            }
            return false;
        };
        for (auto v : rule.head)
            if (lit(v, kTrue)) return true;
        for (auto v : rule.pos)
            if (lit(v, kFalse)) return true;
        for (auto v : rule.neg)
            if (lit(v, kTrue)) return true;
        if (open == 0) return false;
        if (open == 1) return assign(last, want, trail);
        return true;
    }

    // An atom without any rule that could still support it must be false.
    bool check_support(std::uint32_t a, std::vector<std::uint32_t>& trail) {
        if (value_[a] == kFalse) return true;
        for (auto r : head_occ_[a]) {
            const auto& rule = rules_[r];
            bool possible = true;
            for (auto v : rule.pos)
                if (value_[v] == kFalse) possible = false;
            for (auto v : rule.neg)
                if (value_[v] == kTrue) possible = false;
            for (auto v : rule.head)
                if (v != a && value_[v] == kTrue) possible = false;
            if (possible) return true;
        }
        return assign(a, kFalse, trail);
    }

    bool check_watch(std::uint32_t w, std::vector<std::uint32_t>& trail) {
        const auto& watch = watches_[w];
        for (auto v : watch.inputs)
            if (value_[v] == kOpen) return true;
        const bool val = watch.evaluate(value_);
        return assign(watch.positive, val ? kTrue : kFalse, trail) && assign(watch.negative, val ? kFalse : kTrue, trail);
    }

    bool propagate(std::vector<std::uint32_t>& trail) {
        while (!queue_.empty()) {
            const std::uint32_t v = queue_.back();
            queue_.pop_back();
            bool ok = true;
            for (auto r : occ_[v]) {
                if (!(ok = check_rule(r, trail))) break;
                for (auto h : rules_[r].head)
                    if (!(ok = check_support(h, trail))) break;
                if (!ok) break;
            }
            if (ok) ok = check_support(v, trail);
            if (ok)
                for (auto w : watch_occ_[v])
                    if (!(ok = check_watch(w, trail))) break;
            if (!ok) {
                queue_.clear();
                return false;
            }
        }
        return true;
    }

    void search(std::uint32_t from, const AnswerSetCallback& emit) {
        while (from < n_ && value_[from] != kOpen) ++from;
        if (from == n_) {
            leaf(emit);
            return;
        }
        for (std::int8_t val : {kFalse, kTrue}) {
            std::vector<std::uint32_t> trail;
            if (assign(from, val, trail) && propagate(trail)) search(from + 1, emit);
            for (auto v : trail) value_[v] = kOpen;
            if (stopped_) return;
        }
    }

    void leaf(const AnswerSetCallback& emit) {
        std::vector<bool> in_t(n_);
        for (std::uint32_t v = 0; v < n_; ++v) in_t[v] = value_[v] == kTrue;
        if (exists_smaller_model(rules_, in_t)) return;
        Interpretation interp(program_.table_ptr());
        for (std::uint32_t v = 0; v < n_; ++v)
            if (in_t[v]) interp.set(program_.atoms()[v], true);
        if (!emit(interp)) stopped_ = true;
    }

    const Program& program_;
    std::vector<ExternalWatch> watches_;
    std::vector<LocalRule> rules_;
    std::vector<std::uint32_t> local_of_;
    std::uint32_t n_ = 0;
    std::vector<std::vector<std::uint32_t>> occ_, head_occ_, watch_occ_;
    std::vector<std::int8_t> value_;
    std::vector<std::uint32_t> queue_;
    bool stopped_ = false;
};

inline void enumerate_exhaustive(const Program& program, std::size_t cap, const AnswerSetCallback& emit) {
    const std::size_t n = program.atoms().size();
    if (n > cap || n > 63)
        throw CapExceeded("exhaustive engine: " + std::to_string(n) + " atoms exceed the cap of " + std::to_string(cap));
    std::vector<std::uint32_t> local_of;
    const auto rules = localize(program, local_of);

    // Atom i is bit n-1-i, so counting upwards is false-first in id order.
    auto bit = [n](std::uint32_t v) { return std::uint64_t{1} << (n - 1 - v); };
    struct MaskRule {
        std::uint64_t head = 0, pos = 0, neg = 0;
    };
    std::vector<MaskRule> masks;
    for (const auto& r : rules) {
        MaskRule m;
        for (auto v : r.head) m.head |= bit(v);
        for (auto v : r.pos) m.pos |= bit(v);
        for (auto v : r.neg) m.neg |= bit(v);
        masks.push_back(m);
    }
    auto is_model = [&](std::uint64_t a) {
        for (const auto& m : masks)
            if ((m.pos & a) == m.pos && (m.neg & a) == 0 && (m.head & a) == 0) return false;
        return true;
    };
    auto reduct_model = [&](std::uint64_t a, std::uint64_t sub) {
        for (const auto& m : masks)
            if ((m.neg & a) == 0 && (m.pos & sub) == m.pos && (m.head & sub) == 0) return false;
        return true;
    };

    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t a = 0; a < end; ++a) {
        if (!is_model(a)) continue;
        bool minimal = true;
        if (a != 0) {
            for (std::uint64_t sub = (a - 1) & a;; sub = (sub - 1) & a) {
                if (reduct_model(a, sub)) {
                    minimal = false;
                    break;
                }
                if (sub == 0) break;
            }
        }
        if (!minimal) continue;
        Interpretation interp(program.table_ptr());
        for (std::uint32_t v = 0; v < n; ++v)
            if (a & bit(v)) interp.set(program.atoms()[v], true);
        if (!emit(interp)) return;
    }
}

}  // namespace detail

// Answer sets of an ordinary program in lexicographic false-first order.
inline void enumerate_answer_sets(const Program& program, const EnumerationOptions& options, const AnswerSetCallback& emit) {
    if (program.has_externals()) throw Error("enumerate_answer_sets requires an ordinary program");
    if (options.engine == Engine::exhaustive) {
        detail::enumerate_exhaustive(program, options.exhaustive_cap, emit);
    } else {
        detail::PropagationSolver(program, {}).run(emit);
    }
}

inline std::vector<Interpretation> answer_sets(const Program& program, const EnumerationOptions& options = {}) {
    std::vector<Interpretation> out;
    enumerate_answer_sets(program, options, [&](const Interpretation& i) {
        out.push_back(i);
        return true;
    });
    return out;
}

// Oracle input view of Â: the ordinary atoms only matter by input locality,
// and replacement predicates never occur as oracle inputs.
inline bool check_compatible(const Program& /*source*/, const GuessingProgram& guess, const Interpretation& candidate,
                             const OracleRegistry& registry) {
    for (const auto& rep : guess.replacements) {
        const bool value = registry.evaluate(rep.external, candidate);
        if (value != candidate.holds(rep.positive)) return false;
    }
    return true;
}

// Compatible sets of Π in the order of the answer sets of Π̂. The propagate
// engine additionally fixes each replacement pair as soon as the oracle inputs
// are assigned.
inline void enumerate_compatible_sets(const Program& source, const GuessingProgram& guess, const OracleRegistry& registry,
                                      const EnumerationOptions& options, const AnswerSetCallback& emit) {
    const Program& hat = guess.program;
    auto filtered = [&](const Interpretation& candidate) {
        if (!check_compatible(source, guess, candidate, registry)) return true;
        return emit(candidate);
    };
    if (options.engine == Engine::exhaustive) {
        detail::enumerate_exhaustive(hat, options.exhaustive_cap, filtered);
        return;
    }

    std::vector<std::uint32_t> local_of(hat.table().size(), detail::npos_local);
    for (std::uint32_t i = 0; i < hat.atoms().size(); ++i) local_of[hat.atoms()[i]] = i;
    std::vector<detail::ExternalWatch> watches;
    for (std::size_t i = 0; i < guess.replacements.size(); ++i) {
        const auto& rep = guess.replacements[i];
        detail::ExternalWatch w;
        std::vector<AtomId> input_ids;
        for (AtomId a : source.external_input_atoms(i)) {
            const AtomId id = hat.table().id(source.table()[a]);
            input_ids.push_back(id);
            w.inputs.push_back(local_of[id]);
        }
        w.positive = local_of[hat.table().id(rep.positive)];
        w.negative = local_of[hat.table().id(rep.negative)];
        w.evaluate = [&registry, &hat, &rep, input_ids, local = w.inputs](const std::vector<std::int8_t>& value) {
            Interpretation view(hat.table_ptr());
            for (std::size_t k = 0; k < input_ids.size(); ++k) view.set(input_ids[k], value[local[k]] == 1);
            return registry.evaluate(rep.external, view);
        };
        watches.push_back(std::move(w));
    }
    detail::PropagationSolver(hat, std::move(watches)).run(filtered);
}

inline std::vector<Interpretation> compatible_sets(const Program& source, const OracleRegistry& registry,
                                                   const EnumerationOptions& options = {}) {
    const auto guess = build_guessing_program(source);
    std::vector<Interpretation> out;
    enumerate_compatible_sets(source, guess, registry, options, [&](const Interpretation& i) {
        out.push_back(i);
        return true;
    });
    return out;
}

// Drops replacement atoms: the result is over the atom table of `source`.
inline Interpretation project(const Interpretation& candidate, const Program& source) {
    return transfer(candidate, source.table_ptr());
}

}  // namespace hexufs
