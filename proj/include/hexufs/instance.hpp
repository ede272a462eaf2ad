#pragma once

// Seeded benchmark family: ordinary-cyclic chains, some of which close an
// e-cycle through &id, behind a disjunctive choice layer.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hexufs/core.hpp"

namespace hexufs {

struct InstanceSpec {
    std::size_t components = 1;          // m
    std::size_t ecyclic = 0;             // k
    std::size_t atoms_per_component = 1;  // s
    std::uint64_t seed = 0;
};

// Chains 0..k-1 are e-chains r<i>_1..r<i>_s with
//   r<i>_1 :- &id[r<i>_s]().   r<i>_{j+1} :- r<i>_j.
// Chains k..m-1 are cycles p<i>_1..p<i>_s, q<i> with
//   p<i>_{j+1} :- p<i>_j.   q<i> :- p<i>_s.   p<i>_1 :- q<i>.
//   p<i>_1 :- sel<i>.   sel<i> | nsel<i>.
// each fed by &id over the last atom of a seed-chosen e-chain (when k > 0),
// and with probability 1/2 also by the last atom of an earlier cycle.
inline Program generate_instance(const InstanceSpec& spec) {
    const std::size_t m = spec.components, k = spec.ecyclic, s = spec.atoms_per_component;
    if (k > m) throw Error("invalid instance: more e-cyclic components than components");
    if (s == 0) throw Error("invalid instance: components need at least one atom");

    std::mt19937_64 rng(spec.seed);
    auto atom = [](std::string name) { return Atom{std::move(name), {}, false}; };
    auto pos = [&](const std::string& name) { return BodyLiteral{false, atom(name)}; };
    auto id_of = [](const std::string& name) {
        return BodyLiteral{false, ExternalAtom{"id", {InputTerm{InputKind::predicate, name}}, {}}};
    };
    auto r_name = [](std::size_t i, std::size_t j) { return "r" + std::to_string(i) + "_" + std::to_string(j); };
    auto p_name = [](std::size_t i, std::size_t j) { return "p" + std::to_string(i) + "_" + std::to_string(j); };

    std::vector<Rule> rules;
    for (std::size_t i = 0; i < k; ++i) {
        rules.push_back({{atom(r_name(i, 1))}, {id_of(r_name(i, s))}});
        for (std::size_t j = 1; j < s; ++j) rules.push_back({{atom(r_name(i, j + 1))}, {pos(r_name(i, j))}});
    }
    for (std::size_t i = k; i < m; ++i) {
        const std::string q = "q" + std::to_string(i);
        const std::string sel = "sel" + std::to_string(i);
        for (std::size_t j = 1; j < s; ++j) rules.push_back({{atom(p_name(i, j + 1))}, {pos(p_name(i, j))}});
        rules.push_back({{atom(q)}, {pos(p_name(i, s))}});
        rules.push_back({{atom(p_name(i, 1))}, {pos(q)}});
        if (k > 0) {
            const std::size_t c = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
            rules.push_back({{atom(p_name(i, 1))}, {id_of(r_name(c, s))}});
        }
        if (i > k && std::bernoulli_distribution(0.5)(rng)) {
            const std::size_t from = std::uniform_int_distribution<std::size_t>(k, i - 1)(rng);
            rules.push_back({{atom(p_name(i, 1))}, {pos(p_name(from, s))}});
        }
        rules.push_back({{atom(p_name(i, 1))}, {pos(sel)}});
        rules.push_back({{atom(sel), atom("n" + sel)}, {}});
    }
    return Program(std::move(rules));
}

}  // namespace hexufs
