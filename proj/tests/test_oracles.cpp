#include <gtest/gtest.h>

#include "hexufs/hexufs.hpp"
#include "support/corpus.hpp"

using namespace hexufs;

namespace {

Atom atom(const std::string& p, Tuple args = {}) { return Atom{p, std::move(args), false}; }

ExternalAtom ext(const std::string& name, std::vector<InputTerm> inputs, Tuple outputs = {}) {
    return ExternalAtom{name, std::move(inputs), std::move(outputs)};
}

InputTerm pred(const std::string& p) { return {InputKind::predicate, p}; }
InputTerm cnst(const std::string& c) { return {InputKind::constant, c}; }

Interpretation over(const std::vector<Atom>& table, const std::vector<Atom>& true_atoms) {
    return Interpretation::from_atoms(std::make_shared<AtomTable>(table), true_atoms);
}

}  // namespace

TEST(Builtins, Id) {
    const auto reg = builtin_registry();
    const std::vector<Atom> t = {atom("p"), atom("q", {"a"})};
    EXPECT_FALSE(reg.evaluate(ext("id", {pred("p")}), over(t, {})));
    EXPECT_TRUE(reg.evaluate(ext("id", {pred("p")}), over(t, {atom("p")})));
    EXPECT_TRUE(reg.evaluate(ext("id", {pred("q")}), over(t, {atom("q", {"a"})})));
    EXPECT_FALSE(reg.evaluate(ext("id", {pred("q")}), over(t, {atom("p")})));
}

TEST(Builtins, Diff) {
    const auto reg = builtin_registry();
    const std::vector<Atom> t = {atom("s", {"a"}), atom("s", {"b"}), atom("u", {"b"})};
    const auto i = over(t, {atom("s", {"a"}), atom("s", {"b"}), atom("u", {"b"})});
    EXPECT_TRUE(reg.evaluate(ext("diff", {pred("s"), pred("u")}, {"a"}), i));
    EXPECT_FALSE(reg.evaluate(ext("diff", {pred("s"), pred("u")}, {"b"}), i));
    EXPECT_FALSE(reg.evaluate(ext("diff", {pred("s"), pred("u")}, {"c"}), i));
    EXPECT_EQ(reg.external_extension("diff", std::vector{pred("s"), pred("u")}, i, {"a", "b", "c"}), (std::set<Tuple>{{"a"}}));
    EXPECT_TRUE(reg.external_extension("diff", std::vector{pred("s"), pred("u")}, i, {"b"}).empty());
}

TEST(Builtins, Concat) {
    const auto reg = builtin_registry();
    const Interpretation empty;
    EXPECT_TRUE(reg.evaluate(ext("concat", {cnst("a"), cnst("b")}, {"ab"}), empty));
    EXPECT_TRUE(reg.evaluate(ext("concat", {cnst("\"x\""), cnst("y")}, {"\"xy\""}), empty));
    EXPECT_FALSE(reg.evaluate(ext("concat", {cnst("a"), cnst("b")}, {"ba"}), empty));
    EXPECT_EQ(reg.external_extension("concat", std::vector{cnst("a"), cnst("b")}, empty, {"a", "b", "ab", "ba"}),
              (std::set<Tuple>{{"ab"}}));
}

TEST(Registry, Errors) {
    auto reg = builtin_registry();
    EXPECT_THROW(reg.add(id_oracle()), Error);
    EXPECT_THROW(reg.get("nosuch"), OracleError);
    EXPECT_THROW(reg.evaluate(ext("nosuch", {pred("p")}), Interpretation{}), OracleError);
    EXPECT_THROW(reg.evaluate(ext("id", {pred("p"), pred("q")}), Interpretation{}), OracleError);
    EXPECT_THROW(reg.check(ext("id", {cnst("p")})), OracleError);
    EXPECT_THROW(reg.add(OracleSpec{{"bare", {}, 0}, nullptr, nullptr, true, {}}), Error);
    EXPECT_EQ(reg.names(), (std::vector<std::string>{"concat", "diff", "id"}));
}

TEST(TableOracle, ParsesHeaderAndEntries) {
    const auto tables = parse_table_oracles(
        "% comment\n"
        "oracle t inputs predicate, constant out_arity 1\n"
        "require q(a) & r ; forbid q(b) ; out (x) (y)\n"
        "out (z)\n");
    ASSERT_EQ(tables.size(), 1u);
    const auto& t = tables[0];
    EXPECT_EQ(t.name, "t");
    EXPECT_EQ(t.input_kinds, (std::vector<InputKind>{InputKind::predicate, InputKind::constant}));
    EXPECT_EQ(t.output_arity, 1u);
    ASSERT_EQ(t.entries.size(), 2u);
    EXPECT_EQ(t.entries[0].require, (std::vector<Atom>{atom("q", {"a"}), atom("r")}));
    EXPECT_EQ(t.entries[0].forbid, (std::vector<Atom>{atom("q", {"b"})}));
    EXPECT_EQ(t.entries[0].outputs, (std::vector<Tuple>{{"x"}, {"y"}}));
    EXPECT_TRUE(t.entries[1].require.empty());
}

TEST(TableOracle, ParseErrors) {
    EXPECT_THROW(parse_table_oracles("out ()\n"), ParseError);
    EXPECT_THROW(parse_table_oracles("oracle t inputs widget out_arity 0\n"), ParseError);
    EXPECT_THROW(parse_table_oracles("oracle t inputs predicate out_arity 1\nout ()\n"), ParseError);
    EXPECT_THROW(parse_table_oracles("oracle t inputs predicate out_arity 0\nrequire q(X) ; out ()\n"), ParseError);
    EXPECT_THROW(parse_table_oracles("oracle t inputs predicate s out_arity 0\nrequire q ; out ()\n"), ParseError);
    try {
        parse_table_oracles("oracle t inputs predicate out_arity 0\nout ()\nbogus ()\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(TableOracle, DuplicateName) {
    auto reg = builtin_registry();
    EXPECT_THROW(load_table_oracles("oracle id inputs predicate out_arity 0\n", reg), Error);
    OracleRegistry fresh;
    EXPECT_THROW(load_table_oracles("oracle t inputs predicate out_arity 0\noracle t inputs predicate out_arity 0\n", fresh), Error);
}

TEST(TableOracle, ActualNamesMustBeInputs) {
    auto reg = builtin_registry();
    load_table_oracles("oracle t inputs predicate out_arity 0\nrequire q ; out ()\n", reg);
    EXPECT_NO_THROW(parse_program("p :- &t[q]().", reg));
    EXPECT_THROW(parse_program("p :- &t[r]().", reg), ParseError);
}

TEST(TableOracle, FormalNamesRebind) {
    auto reg = builtin_registry();
    load_table_oracles("oracle t inputs predicate s out_arity 0\nrequire s(a) ; forbid s(b) ; out ()\n", reg);
    const std::vector<Atom> table = {atom("q", {"a"}), atom("q", {"b"}), atom("r", {"a"})};
    EXPECT_TRUE(reg.evaluate(ext("t", {pred("q")}), over(table, {atom("q", {"a"})})));
    EXPECT_FALSE(reg.evaluate(ext("t", {pred("q")}), over(table, {atom("q", {"a"}), atom("q", {"b"})})));
    EXPECT_TRUE(reg.evaluate(ext("t", {pred("r")}), over(table, {atom("r", {"a"})})));
    EXPECT_FALSE(reg.evaluate(ext("t", {pred("r")}), over(table, {atom("q", {"a"})})));
}

TEST(TableOracle, ChoiceSample) {
    auto reg = builtin_registry();
    load_table_oracle_file(std::string(HEXUFS_PROGRAMS_DIR) + "/choice.oracle", reg);
    const std::vector<Atom> table = {atom("q", {"a"}), atom("q", {"b"})};
    const std::vector<InputTerm> q = {pred("q")};
    EXPECT_EQ(reg.external_extension("pick", q, over(table, {atom("q", {"a"})}), {"x", "y"}), (std::set<Tuple>{{"x"}}));
    EXPECT_EQ(reg.external_extension("pick", q, over(table, {}), {"x", "y"}), (std::set<Tuple>{{"y"}}));
    EXPECT_EQ(reg.external_extension("pick", q, over(table, {atom("q", {"a"}), atom("q", {"b"})}), {"x", "y"}),
              (std::set<Tuple>{{"y"}}));
}

// A tuple is in the extension iff some matching entry lists it.
TEST(TableOracle, UnionOfMatchingEntries) {
    std::mt19937_64 rng(11);
    const std::vector<Atom> pool = {atom("q", {"a"}), atom("q", {"b"}), atom("q", {"c"})};
    for (int round = 0; round < 200; ++round) {
        std::string text = "oracle t inputs predicate out_arity 1\n";
        struct Line {
            std::vector<int> state;
            std::vector<std::string> outs;
        };
        std::vector<Line> lines(1 + rng() % 3);
        for (auto& l : lines) {
            std::string req, forb;
            for (const auto& a : pool) {
                const int s = static_cast<int>(rng() % 3);
                l.state.push_back(s);
                if (s == 0) req += (req.empty() ? "require " : " & ") + a.str();
                if (s == 1) forb += (forb.empty() ? "forbid " : " & ") + a.str();
            }
            for (const char* o : {"x", "y"})
                if (rng() % 2) l.outs.push_back(o);
            std::string line;
            if (!req.empty()) line += req + " ; ";
            if (!forb.empty()) line += forb + " ; ";
            line += "out";
            for (const auto& o : l.outs) line += " (" + o + ")";
            text += line + "\n";
        }
        OracleRegistry reg;
        load_table_oracles(text, reg);
        for (std::uint32_t m = 0; m < 8; ++m) {
            std::vector<Atom> truth;
            for (std::size_t k = 0; k < 3; ++k)
                if (m >> k & 1) truth.push_back(pool[k]);
            const auto i = over(pool, truth);
            std::set<Tuple> expected;
            for (const auto& l : lines) {
                bool match = true;
                for (std::size_t k = 0; k < 3; ++k) {
                    const bool v = m >> k & 1;
                    if (l.state[k] == 0 && !v) match = false;
                    if (l.state[k] == 1 && v) match = false;
                }
                if (match)
                    for (const auto& o : l.outs) expected.insert({o});
            }
            EXPECT_EQ(reg.external_extension("t", std::vector{pred("q")}, i, {"x", "y"}), expected) << text;
            for (const char* o : {"x", "y"})
                EXPECT_EQ(reg.evaluate(ext("t", {pred("q")}, {o}), i), expected.contains({o}));
        }
    }
}

// Oracle values depend only on the extensions of the predicate inputs.
TEST(Oracles, DeterministicAndInputLocal) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = corpus::random_instance(seed);
        if (!inst.program.has_externals()) continue;
        const auto all = corpus::interpretations(inst.program);
        for (std::size_t e = 0; e < inst.program.externals().size(); ++e) {
            const auto& x = inst.program.externals()[e];
            const auto& inputs = inst.program.external_input_atoms(e);
            for (const auto& a : all) {
                const bool v = inst.registry.evaluate(x, a);
                EXPECT_EQ(inst.registry.evaluate(x, a), v);
                for (const auto& b : all) {
                    bool same = true;
                    for (AtomId id : inputs) same = same && a.holds(id) == b.holds(id);
                    if (same) {
                        EXPECT_EQ(inst.registry.evaluate(x, b), v) << inst.oracle_text << inst.program_text;
                    }
                }
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 500);
}
