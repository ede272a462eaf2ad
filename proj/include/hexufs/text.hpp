#pragma once

// Program text: parsing, printing, classical-negation rewriting and naive
// instantiation of rules with variables.
//
//   program := (rule ".")*
//   rule    := head | head ":-" body | ":-" body
//   head    := atom ("|" atom)*
//   body    := literal ("," literal)*
//   literal := ["not"] (atom | extatom)
//   extatom := "&" ident "[" term ("," term)* "]" "(" [term ("," term)*] ")"
//   atom    := ["-"] ident ["(" term ("," term)* ")"]

#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hexufs/core.hpp"
#include "hexufs/lexer.hpp"
#include "hexufs/oracles.hpp"

namespace hexufs {

namespace detail {

class ProgramParser {
public:
    ProgramParser(std::string_view text, const OracleRegistry& registry) : lex_(text), registry_(registry) {}

    Program parse() {
        std::vector<Rule> rules;
        while (lex_.peek().kind != TokenKind::end) {
            const Token start = lex_.peek();
            Rule r = parse_rule();
            if (r.head.empty() && r.body.empty()) throw ParseError("rule with empty head and empty body", start.line, start.column);
            lex_.expect(TokenKind::dot, "'.' at end of rule");
            rules.push_back(std::move(r));
        }
        return Program(std::move(rules));
    }

private:
    Rule parse_rule() {
        Rule r;
        if (!lex_.accept(TokenKind::if_)) {
            do {
                r.head.push_back(atom());
            } while (lex_.accept(TokenKind::bar));
            if (!lex_.accept(TokenKind::if_)) return r;
        }
        do {
            r.body.push_back(literal());
        } while (lex_.accept(TokenKind::comma));
        return r;
    }

    BodyLiteral literal() {
        BodyLiteral lit;
        if (lex_.peek().kind == TokenKind::identifier && lex_.peek().text == "not") {
            lex_.next();
            lit.naf = true;
        }
        if (lex_.peek().kind == TokenKind::amp)
            lit.payload = external();
        else
            lit.payload = atom();
        return lit;
    }

    Atom atom() {
        const Token at = lex_.peek();
        Atom a = parse_atom(lex_);
        auto [it, inserted] = arities_.emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity())
            throw ParseError("predicate " + a.predicate + " used with arity " + std::to_string(a.arity()) + " but earlier with arity " +
                                 std::to_string(it->second),
                             at.line, at.column);
        return a;
    }

    ExternalAtom external() {
        const Token at = lex_.expect(TokenKind::amp);
        ExternalAtom ext;
        ext.name = lex_.expect(TokenKind::identifier, "external atom name").text;
        if (!registry_.contains(ext.name)) throw ParseError("unknown external atom &" + ext.name, at.line, at.column);
        const auto& sig = registry_.signature(ext.name);

        lex_.expect(TokenKind::lbracket);
        do {
            const Token t = lex_.peek();
            if (!is_term_token(t.kind)) lex_.fail("expected input term, found " + Lexer::describe(t));
            lex_.next();
            const std::size_t pos = ext.inputs.size();
            if (pos >= sig.input_kinds.size())
                throw ParseError("&" + ext.name + " takes " + std::to_string(sig.input_kinds.size()) + " inputs", t.line, t.column);
            const InputKind kind = sig.input_kinds[pos];
            if (kind == InputKind::predicate && t.kind != TokenKind::identifier)
                throw ParseError("input " + std::to_string(pos + 1) + " of &" + ext.name + " must be a predicate name", t.line, t.column);
            ext.inputs.push_back({kind, t.text});
        } while (lex_.accept(TokenKind::comma));
        lex_.expect(TokenKind::rbracket);
        if (ext.inputs.size() != sig.input_kinds.size())
            throw ParseError("&" + ext.name + " takes " + std::to_string(sig.input_kinds.size()) + " inputs", at.line, at.column);

        lex_.expect(TokenKind::lparen);
        if (lex_.peek().kind != TokenKind::rparen) {
            do {
                if (!is_term_token(lex_.peek().kind)) lex_.fail("expected output term, found " + Lexer::describe(lex_.peek()));
                ext.outputs.push_back(lex_.next().text);
            } while (lex_.accept(TokenKind::comma));
        }
        lex_.expect(TokenKind::rparen);
        if (ext.outputs.size() != sig.output_arity)
            throw ParseError("&" + ext.name + " has output arity " + std::to_string(sig.output_arity), at.line, at.column);
        try {
            registry_.check(ext);
        } catch (const OracleError& e) {
            throw ParseError(e.what(), at.line, at.column);
        }
        return ext;
    }

    Lexer lex_;
    const OracleRegistry& registry_;
    std::map<std::string, std::size_t> arities_;
};

}  // namespace detail

// Input terms of external atoms are typed from the registry signatures.
inline Program parse_program(std::string_view text, const OracleRegistry& registry) {
    return detail::ProgramParser(text, registry).parse();
}

inline Program parse_program(std::string_view text) {
    static const OracleRegistry builtins = builtin_registry();
    return parse_program(text, builtins);
}

inline Program parse_program_file(const std::string& path, const OracleRegistry& registry) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open program file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_program(text, registry);
    } catch (const ParseError& e) {
        throw Error(path + ":" + e.what());
    }
}

inline std::string to_string(const Program& program) { return program.str(); }

// Replaces every classical literal -a by a fresh atom neg_a and adds the
// constraint ":- a, neg_a." once per such atom.
inline Program rewrite_strong_negation(const Program& program) {
    if (!program.has_classical_negation()) return program;

    std::set<std::string> plain;
    for (const auto& a : program.table().atoms())
        if (!a.classical) plain.insert(a.predicate);

    std::set<Atom> negated;
    auto rewrite = [&](Atom a) {
        if (!a.classical) return a;
        const std::string fresh = "neg_" + a.predicate;
        if (plain.contains(fresh)) throw Error("cannot rewrite -" + a.predicate + ": predicate " + fresh + " already occurs");
        a.classical = false;
        negated.insert(a);
        a.predicate = fresh;
        return a;
    };

    std::vector<Rule> rules;
    for (Rule r : program.rules()) {
        for (auto& h : r.head) h = rewrite(h);
        for (auto& l : r.body)
            if (!l.is_external()) l.payload = rewrite(l.atom());
        rules.push_back(std::move(r));
    }
    for (const auto& a : negated) {
        Atom neg = a;
        neg.predicate = "neg_" + a.predicate;
        rules.push_back(Rule{{}, {BodyLiteral{false, a}, BodyLiteral{false, neg}}});
    }
    return Program(std::move(rules));
}

namespace detail {

inline std::set<std::string> rule_variables(const Rule& r) {
    std::set<std::string> vars;
    auto add = [&](const std::string& t) {
        if (is_variable(t)) vars.insert(t);
    };
    for (const auto& h : r.head)
        for (const auto& t : h.args) add(t);
    for (const auto& l : r.body) {
        if (!l.is_external()) {
            for (const auto& t : l.atom().args) add(t);
            continue;
        }
        for (const auto& in : l.external().inputs) add(in.token);
        for (const auto& t : l.external().outputs) add(t);
    }
    return vars;
}

inline std::string substitute(const std::string& t, const std::map<std::string, std::string>& sub) {
    auto it = sub.find(t);
    return it == sub.end() ? t : it->second;
}

}  // namespace detail

// Applies every substitution of the rule variables by constants of `universe`.
// Each variable must occur in a positive ordinary body atom.
inline Program instantiate(const Program& program, const std::set<std::string>& universe) {
    if (program.is_ground()) return program;
    const std::vector<std::string> constants(universe.begin(), universe.end());

    std::vector<Rule> out;
    for (const auto& r : program.rules()) {
        const auto vars = detail::rule_variables(r);
        std::set<std::string> safe;
        for (const auto& l : r.body)
            if (!l.is_external() && !l.naf)
                for (const auto& t : l.atom().args)
                    if (is_variable(t)) safe.insert(t);
        for (const auto& l : r.body)
            if (l.is_external())
                for (const auto& in : l.external().inputs)
                    if (in.kind == InputKind::predicate && is_variable(in.token))
                        throw Error("variable " + in.token + " in predicate input position of rule: " + r.str());
        for (const auto& v : vars)
            if (!safe.contains(v)) throw Error("unsafe variable " + v + " in rule: " + r.str());

        if (vars.empty()) {
            out.push_back(r);
            continue;
        }
        if (constants.empty()) continue;

        const std::vector<std::string> names(vars.begin(), vars.end());
        std::vector<std::size_t> digits(names.size(), 0);
        while (true) {
            std::map<std::string, std::string> sub;
            for (std::size_t i = 0; i < names.size(); ++i) sub[names[i]] = constants[digits[i]];
            Rule g = r;
            for (auto& h : g.head)
                for (auto& t : h.args) t = detail::substitute(t, sub);
            for (auto& l : g.body) {
                if (!l.is_external()) {
                    Atom a = l.atom();
                    for (auto& t : a.args) t = detail::substitute(t, sub);
                    l.payload = std::move(a);
                } else {
                    ExternalAtom e = l.external();
                    for (auto& in : e.inputs) in.token = detail::substitute(in.token, sub);
                    for (auto& t : e.outputs) t = detail::substitute(t, sub);
                    l.payload = std::move(e);
                }
            }
            out.push_back(std::move(g));

            std::size_t pos = names.size();
            while (pos > 0 && ++digits[pos - 1] == constants.size()) digits[--pos] = 0;
            if (pos == 0) break;
        }
    }
    return Program(std::move(out));
}

// Instantiates over the constants occurring in the program.
inline Program instantiate(const Program& program) { return instantiate(program, program.constants()); }

}  // namespace hexufs
