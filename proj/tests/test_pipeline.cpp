#include <gtest/gtest.h>

#include <map>

#include "hexufs/hexufs.hpp"
#include "support/corpus.hpp"

using namespace hexufs;

namespace {

Atom atom(const std::string& p, Tuple args = {}) { return Atom{p, std::move(args), false}; }

std::vector<std::string> strings(const std::vector<Interpretation>& sets) {
    std::vector<std::string> out;
    for (const auto& s : sets) out.push_back(s.str());
    std::sort(out.begin(), out.end());
    return out;
}

Program sample(const std::string& name, const OracleRegistry& reg) {
    return instantiate(parse_program_file(std::string(HEXUFS_PROGRAMS_DIR) + "/" + name, reg));
}

EvaluationOptions in_mode(Mode m) {
    EvaluationOptions o;
    o.mode = m;
    return o;
}

const char* kExample3 = "r :- &id[r](). p :- &id[r](). p :- q. q :- p.";

}  // namespace

TEST(Modes, NamesRoundTrip) {
    for (Mode m : {Mode::full, Mode::no_decomposition, Mode::no_criterion, Mode::brute}) EXPECT_EQ(parse_mode(mode_name(m)), m);
    EXPECT_THROW(parse_mode("fast"), Error);
    EXPECT_EQ(parse_engine("exhaustive"), Engine::exhaustive);
    EXPECT_THROW(parse_engine("sat"), Error);
}

TEST(Evaluate, ExampleOne) {
    const auto reg = builtin_registry();
    const auto p = parse_program("p :- &id[p]().");
    const auto r = evaluate(p, reg);
    EXPECT_EQ(strings(r.answer_sets), (std::vector<std::string>{"{}"}));
    EXPECT_EQ(r.compatible_sets, 2u);
    EXPECT_EQ(r.candidates_rejected, 1u);
    EXPECT_EQ(r.ufs_searches_run, 1u);
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_EQ(r.rejections[0].candidate.str(), "{p}");
    EXPECT_EQ(atoms_str(p.table(), r.rejections[0].witness), atoms_str(p.table(), std::vector<AtomId>{p.table().id(atom("p"))}));
    EXPECT_EQ(r.components_total, 1u);
    EXPECT_EQ(r.components_ecyclic, 1u);
}

TEST(Evaluate, ExampleThree) {
    const auto reg = builtin_registry();
    const auto p = parse_program(kExample3);
    const auto r = evaluate(p, reg);
    EXPECT_EQ(strings(r.answer_sets), (std::vector<std::string>{"{}"}));
    EXPECT_EQ(r.components_total, 2u);
    EXPECT_EQ(r.components_ecyclic, 1u);

    const auto part = scc_partition(p);
    std::size_t c1 = 0, c2 = 0;
    for (std::size_t i = 0; i < part.components.size(); ++i)
        (part.components[i].atoms.size() == 2 ? c1 : c2) = i;
    EXPECT_EQ(r.component_searches[c1], 0u);
    EXPECT_GT(r.component_searches[c2], 0u);

    const AtomId rid = p.table().id(atom("r"));
    std::size_t with_r = 0;
    for (const auto& c : compatible_sets(p, reg))
        if (project(c, p).holds(rid)) ++with_r;
    EXPECT_EQ(r.candidates_rejected, with_r);
    for (const auto& rej : r.rejections) {
        EXPECT_TRUE(rej.candidate.holds(rid));
        EXPECT_EQ(rej.witness, std::vector<AtomId>{rid});
        EXPECT_EQ(rej.component, c2);
    }
}

TEST(Evaluate, DiffAndConcatRunNoSearches) {
    const auto reg = builtin_registry();
    for (const char* name : {"diff.hex", "concat.hex"}) {
        const auto p = sample(name, reg);
        const auto full = evaluate(p, reg);
        EXPECT_EQ(full.ufs_searches_run, 0u) << name;
        EXPECT_EQ(full.components_ecyclic, 0u);
        EXPECT_EQ(strings(full.answer_sets), strings(evaluate(p, reg, in_mode(Mode::brute)).answer_sets)) << name;
        EXPECT_EQ(evaluate(p, reg, in_mode(Mode::no_decomposition)).ufs_searches_run, 0u);
        EXPECT_TRUE(verify(p, reg).empty());
    }
}

TEST(Evaluate, TableOracleSample) {
    auto reg = builtin_registry();
    load_table_oracle_file(std::string(HEXUFS_PROGRAMS_DIR) + "/choice.oracle", reg);
    const auto p = sample("choice.hex", reg);
    for (Mode m : {Mode::full, Mode::no_decomposition, Mode::no_criterion})
        EXPECT_EQ(strings(evaluate(p, reg, in_mode(m)).answer_sets), strings(evaluate(p, reg, in_mode(Mode::brute)).answer_sets));
    EXPECT_TRUE(verify(p, reg).empty());
}

TEST(Evaluate, Rejections) {
    const auto reg = builtin_registry();
    EXPECT_THROW(evaluate(parse_program("p(X) :- q(X)."), reg), Error);
    EXPECT_THROW(evaluate(parse_program("-p."), reg), Error);
    auto big = in_mode(Mode::brute);
    big.brute_cap = 1;
    EXPECT_THROW(evaluate(parse_program("a | b."), reg, big), CapExceeded);
}

TEST(Evaluate, MaxAnswersAndCallback) {
    const auto reg = builtin_registry();
    const auto p = parse_program("a | b. c | d.");
    EvaluationOptions o;
    o.max_answers = 2;
    std::vector<std::string> streamed;
    const auto r = evaluate(p, reg, o, [&](const Interpretation& a) { streamed.push_back(a.str()); });
    EXPECT_EQ(r.answer_sets.size(), 2u);
    EXPECT_EQ(streamed.size(), 2u);
    o.max_answers = 0;
    EXPECT_TRUE(evaluate(p, reg, o).answer_sets.empty());
    o.mode = Mode::brute;
    o.max_answers = 3;
    EXPECT_EQ(evaluate(p, reg, o).answer_sets.size(), 3u);
}

TEST(Evaluate, ReportInvariants) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto inst = corpus::random_instance(seed);
        const auto cs = compatible_sets(inst.program, inst.registry);
        std::vector<Interpretation> projected;
        for (const auto& c : cs) projected.push_back(project(c, inst.program));
        const auto pfam = corpus::family(projected);
        for (Mode m : {Mode::full, Mode::no_decomposition, Mode::no_criterion}) {
            const auto r = evaluate(inst.program, inst.registry, in_mode(m));
            EXPECT_EQ(r.ufs_searches_run + r.ufs_searches_skipped, r.eligible_checks) << mode_name(m);
            EXPECT_EQ(r.compatible_sets, cs.size());
            EXPECT_EQ(r.answer_sets.size() + r.candidates_rejected, r.compatible_sets);
            EXPECT_EQ(r.rejections.size(), r.candidates_rejected);
            for (const auto& a : r.answer_sets) EXPECT_TRUE(std::binary_search(pfam.begin(), pfam.end(), a.str()));
            for (const auto& rej : r.rejections)
                EXPECT_TRUE(is_unfounded_set(inst.program, rej.candidate, rej.witness, inst.registry)) << inst.program_text;
            EXPECT_TRUE(r.phase_times_ms.contains("total"));
        }
    }
}

TEST(Verify, SamplesAgreeWithBruteForce) {
    const auto reg = builtin_registry();
    for (const char* name : {"example1.hex", "example3.hex", "diff.hex", "concat.hex"})
        EXPECT_TRUE(verify(sample(name, reg), reg).empty()) << name;
}

// Forcing the criterion to skip every search accepts {p} in Example 1.
TEST(Verify, DetectsCorruptedCriterion) {
    const auto reg = builtin_registry();
    const auto p = parse_program("p :- &id[p]().");
    EvaluationOptions o;
    o.criterion_hook = [](std::span<const AtomId>, bool) { return false; };
    const auto issues = verify(p, reg, o);
    EXPECT_EQ(issues, (std::vector<std::string>{"unexpected answer set {p}"}));
    EXPECT_EQ(evaluate(p, reg, o).ufs_searches_skipped, 1u);
}

TEST(GenerateInstance, SmallestEcyclicInstanceIsExampleThree) {
    const auto g = generate_instance({2, 1, 1, 0});
    std::vector<Rule> core;
    for (const auto& r : g.rules()) {
        bool choice = false;
        for (const auto& h : r.head) choice = choice || h.predicate.starts_with("sel") || h.predicate.starts_with("nsel");
        for (const auto& l : r.body) choice = choice || (!l.is_external() && l.atom().predicate.starts_with("sel"));
        if (!choice) core.push_back(r);
    }
    const std::map<std::string, std::string> rename = {{"r0_1", "r"}, {"p1_1", "p"}, {"q1", "q"}};
    for (auto& r : core) {
        for (auto& h : r.head) h.predicate = rename.at(h.predicate);
        for (auto& l : r.body) {
            if (l.is_external()) {
                auto e = l.external();
                for (auto& in : e.inputs) in.token = rename.at(in.token);
                l.payload = e;
            } else {
                auto a = l.atom();
                a.predicate = rename.at(a.predicate);
                l.payload = a;
            }
        }
    }
    const Program renamed(core);
    const Program ex3 = parse_program(kExample3);
    std::vector<std::string> a, b;
    for (const auto& r : renamed.rules()) a.push_back(r.str());
    for (const auto& r : ex3.rules()) b.push_back(r.str());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
}

TEST(GenerateInstance, DeterministicPerSeed) {
    EXPECT_EQ(generate_instance({8, 1, 3, 5}), generate_instance({8, 1, 3, 5}));
    bool differs = false;
    for (std::uint64_t s = 1; s < 10 && !differs; ++s) differs = !(generate_instance({8, 2, 3, 0}) == generate_instance({8, 2, 3, s}));
    EXPECT_TRUE(differs);
    EXPECT_THROW(generate_instance({2, 3, 1, 0}), Error);
    EXPECT_THROW(generate_instance({2, 1, 0, 0}), Error);
}

TEST(GenerateInstance, ShapeAndCriterion) {
    const auto p = generate_instance({5, 2, 3, 1});
    EXPECT_TRUE(p.is_ground());
    const auto part = scc_partition(p);
    EXPECT_EQ(part.ecyclic(), 2u);
    EXPECT_FALSE(has_e_cycle(build_dependency_graph(generate_instance({6, 0, 3, 4}))));
    const auto r = evaluate(generate_instance({6, 0, 3, 4}), builtin_registry());
    EXPECT_EQ(r.ufs_searches_run, 0u);
    EXPECT_EQ(r.answer_sets.size(), 64u);
}

TEST(GenerateInstance, ModesAgreeOnSmallInstances) {
    const auto reg = builtin_registry();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = generate_instance({3, 1, 2, seed});
        const auto want = strings(evaluate(p, reg, in_mode(Mode::brute)).answer_sets);
        for (Mode m : {Mode::full, Mode::no_decomposition, Mode::no_criterion})
            EXPECT_EQ(strings(evaluate(p, reg, in_mode(m)).answer_sets), want) << mode_name(m);
    }
}
