#pragma once

// External sources: typed oracle signatures, the registry, the builtin
// oracles (id, diff, concat) and file-defined table oracles.

#include <fstream>
#include <functional>
#include <istream>
#include <iterator>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hexufs/core.hpp"
#include "hexufs/lexer.hpp"

namespace hexufs {

struct OracleSignature {
    std::string name;
    std::vector<InputKind> input_kinds;
    std::size_t output_arity = 0;
};

// Arguments of one oracle invocation f_&g(A, p, c).
struct OracleCall {
    const Interpretation& interpretation;
    std::span<const InputTerm> inputs;
    std::span<const std::string> outputs;

    std::set<Tuple> extension(std::size_t input) const { return interpretation.extension(inputs[input].token); }
    const std::string& token(std::size_t input) const { return inputs[input].token; }
};

using EvaluateFn = std::function<bool(const OracleCall&)>;
using EnumerateFn =
    std::function<std::set<Tuple>(const Interpretation&, std::span<const InputTerm>, const std::set<std::string>& universe)>;

// Oracle callbacks must be deterministic, side-effect free, and read only the
// extensions of the predicate inputs they are given.
struct OracleSpec {
    OracleSignature signature;
    EvaluateFn evaluate;
    EnumerateFn enumerate;  // optional; pointwise evaluation over the universe otherwise
    bool enumerable = true;
    // Predicates read directly by name (table oracles without formal names);
    // each must be a predicate input of every reference.
    std::set<std::string> read_predicates;
};

inline std::string strip_quotes(const std::string& token) {
    if (token.size() >= 2 && token.front() == '"' && token.back() == '"') return token.substr(1, token.size() - 2);
    return token;
}

class OracleRegistry {
public:
    void add(OracleSpec spec) {
        const std::string name = spec.signature.name;
        if (!spec.evaluate) throw Error("oracle " + name + " has no evaluation callback");
        if (!oracles_.emplace(name, std::move(spec)).second) throw Error("duplicate oracle name: " + name);
    }

    bool contains(const std::string& name) const { return oracles_.contains(name); }

    const OracleSpec& get(const std::string& name) const {
        auto it = oracles_.find(name);
        if (it == oracles_.end()) throw OracleError("unknown oracle &" + name);
        return it->second;
    }

    const OracleSignature& signature(const std::string& name) const { return get(name).signature; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [n, s] : oracles_) out.push_back(n);
        return out;
    }

    // Signature conformance of a reference; throws OracleError on mismatch.
    void check(const ExternalAtom& ext) const {
        const auto& spec = get(ext.name);
        const auto& sig = spec.signature;
        if (ext.inputs.size() != sig.input_kinds.size())
            throw OracleError(ext.str() + ": &" + ext.name + " expects " + std::to_string(sig.input_kinds.size()) +
                              " inputs, got " + std::to_string(ext.inputs.size()));
        for (std::size_t i = 0; i < ext.inputs.size(); ++i)
            if (ext.inputs[i].kind != sig.input_kinds[i])
                throw OracleError(ext.str() + ": input " + std::to_string(i + 1) + " has the wrong kind");
        if (ext.outputs.size() != sig.output_arity)
            throw OracleError(ext.str() + ": &" + ext.name + " has output arity " + std::to_string(sig.output_arity));
        if (!spec.read_predicates.empty()) {
            auto preds = ext.predicate_inputs();
            for (const auto& p : spec.read_predicates)
                if (std::find(preds.begin(), preds.end(), p) == preds.end())
                    throw OracleError(ext.str() + ": table oracle &" + ext.name + " reads predicate " + p +
                                      ", which is not one of its predicate inputs");
        }
    }

    bool evaluate(const std::string& name, const Interpretation& interp, std::span<const InputTerm> inputs,
                  std::span<const std::string> outputs) const {
        const auto& spec = get(name);
        if (inputs.size() != spec.signature.input_kinds.size() || outputs.size() != spec.signature.output_arity)
            throw OracleError("signature mismatch in call to &" + name);
        return spec.evaluate(OracleCall{interp, inputs, outputs});
    }

    bool evaluate(const ExternalAtom& ext, const Interpretation& interp) const {
        return evaluate(ext.name, interp, ext.inputs, ext.outputs);
    }

    // ext(&g[p], A) restricted to tuples over `universe`.
    std::set<Tuple> external_extension(const std::string& name, std::span<const InputTerm> inputs,
                                       const Interpretation& interp, const std::set<std::string>& universe) const {
        const auto& spec = get(name);
        if (!spec.enumerable) throw OracleError("&" + name + " does not support output enumeration");
        if (spec.enumerate) {
            std::set<Tuple> out;
            for (auto& t : spec.enumerate(interp, inputs, universe))
                if (std::all_of(t.begin(), t.end(), [&](const std::string& c) { return universe.contains(c); }))
                    out.insert(std::move(t));
            return out;
        }
        std::set<Tuple> out;
        std::vector<std::string> constants(universe.begin(), universe.end());
        const std::size_t arity = spec.signature.output_arity;
        if (arity > 0 && constants.empty()) return out;
        std::vector<std::size_t> digits(arity, 0);
        while (true) {
            Tuple t;
            for (std::size_t d : digits) t.push_back(constants[d]);
            if (evaluate(name, interp, inputs, t)) out.insert(t);
            std::size_t pos = arity;
            while (pos > 0 && ++digits[pos - 1] == constants.size()) digits[--pos] = 0;
            if (pos == 0) break;
        }
        return out;
    }

private:
    std::map<std::string, OracleSpec> oracles_;
};

// &id[p](): true iff some p-atom is true (for 0-ary p: iff p is true).
inline OracleSpec id_oracle() {
    OracleSpec spec;
    spec.signature = {"id", {InputKind::predicate}, 0};
    spec.evaluate = [](const OracleCall& call) { return !call.extension(0).empty(); };
    return spec;
}

// &diff[p,q](c): c ∈ ext(p) \ ext(q) over unary extensions.
inline OracleSpec diff_oracle() {
    OracleSpec spec;
    spec.signature = {"diff", {InputKind::predicate, InputKind::predicate}, 1};
    spec.evaluate = [](const OracleCall& call) {
        Tuple t(call.outputs.begin(), call.outputs.end());
        return call.extension(0).contains(t) && !call.extension(1).contains(t);
    };
    spec.enumerate = [](const Interpretation& interp, std::span<const InputTerm> inputs, const std::set<std::string>&) {
        std::set<Tuple> out;
        auto minus = interp.extension(inputs[1].token);
        for (const auto& t : interp.extension(inputs[0].token))
            if (t.size() == 1 && !minus.contains(t)) out.insert(t);
        return out;
    };
    return spec;
}

// &concat[a,b](c): c is the string concatenation of a and b (quotes ignored).
inline OracleSpec concat_oracle() {
    OracleSpec spec;
    spec.signature = {"concat", {InputKind::constant, InputKind::constant}, 1};
    spec.evaluate = [](const OracleCall& call) {
        return strip_quotes(call.outputs[0]) == strip_quotes(call.token(0)) + strip_quotes(call.token(1));
    };
    return spec;
}

inline OracleRegistry builtin_registry() {
    OracleRegistry reg;
    reg.add(id_oracle());
    reg.add(diff_oracle());
    reg.add(concat_oracle());
    return reg;
}

// One line of a table oracle: the entry matches A when all required atoms are
// true and all forbidden atoms are false; it then yields its output tuples.
struct TableEntry {
    std::vector<Atom> require;
    std::vector<Atom> forbid;
    std::vector<Tuple> outputs;
};

struct TableOracle {
    std::string name;
    std::vector<InputKind> input_kinds;
    // Optional formal names of predicate positions ("predicate NAME"). When
    // present, entry atoms use these names and are rebound to the actual
    // predicate inputs of each call.
    std::vector<std::string> formal_names;
    std::size_t output_arity = 0;
    std::vector<TableEntry> entries;

    bool uses_formal_names() const {
        return std::any_of(formal_names.begin(), formal_names.end(), [](const std::string& n) { return !n.empty(); });
    }

    OracleSpec to_spec() const {
        OracleSpec spec;
        spec.signature = {name, input_kinds, output_arity};
        if (!uses_formal_names())
            for (const auto& e : entries) {
                for (const auto& a : e.require) spec.read_predicates.insert(a.predicate);
                for (const auto& a : e.forbid) spec.read_predicates.insert(a.predicate);
            }
        auto table = std::make_shared<const TableOracle>(*this);
        auto actual = [table](const Atom& a, std::span<const InputTerm> inputs) {
            Atom out = a;
            if (table->uses_formal_names()) {
                for (std::size_t i = 0; i < table->formal_names.size(); ++i)
                    if (table->formal_names[i] == a.predicate) {
                        out.predicate = inputs[i].token;
                        return out;
                    }
                throw OracleError("table oracle &" + table->name + ": unknown formal predicate " + a.predicate);
            }
            for (const auto& in : inputs)
                if (in.kind == InputKind::predicate && in.token == a.predicate) return out;
            throw OracleError("table oracle &" + table->name + " reads " + a.str() + " outside its predicate inputs");
        };
        auto matches = [table, actual](const TableEntry& e, const Interpretation& interp, std::span<const InputTerm> inputs) {
            for (const auto& a : e.require)
                if (!interp.holds(actual(a, inputs))) return false;
            for (const auto& a : e.forbid)
                if (interp.holds(actual(a, inputs))) return false;
            return true;
        };
        spec.evaluate = [table, matches](const OracleCall& call) {
            Tuple t(call.outputs.begin(), call.outputs.end());
            for (const auto& e : table->entries)
                if (std::find(e.outputs.begin(), e.outputs.end(), t) != e.outputs.end() && matches(e, call.interpretation, call.inputs))
                    return true;
            return false;
        };
        spec.enumerate = [table, matches](const Interpretation& interp, std::span<const InputTerm> inputs, const std::set<std::string>&) {
            std::set<Tuple> out;
            for (const auto& e : table->entries)
                if (matches(e, interp, inputs)) out.insert(e.outputs.begin(), e.outputs.end());
            return out;
        };
        return spec;
    }
};

namespace detail {

inline InputKind parse_kind(const std::string& word, Lexer& lex) {
    if (word == "predicate" || word == "pred") return InputKind::predicate;
    if (word == "constant" || word == "const") return InputKind::constant;
    lex.fail("unknown input kind '" + word + "' (expected predicate or constant)");
}

inline Tuple parse_tuple(Lexer& lex) {
    Tuple t;
    lex.expect(TokenKind::lparen);
    if (lex.peek().kind != TokenKind::rparen) {
        do {
            if (!is_term_token(lex.peek().kind) || lex.peek().kind == TokenKind::variable)
                lex.fail("expected constant, found " + Lexer::describe(lex.peek()));
            t.push_back(lex.next().text);
        } while (lex.accept(TokenKind::comma));
    }
    lex.expect(TokenKind::rparen);
    return t;
}

inline TableOracle parse_table_header(Lexer& lex) {
    TableOracle table;
    if (lex.next().text != "oracle") lex.fail("expected 'oracle'");
    table.name = lex.expect(TokenKind::identifier, "oracle name").text;
    const Token inputs_kw = lex.expect(TokenKind::identifier, "'inputs'");
    if (inputs_kw.text != "inputs") throw ParseError("expected 'inputs'", inputs_kw.line, inputs_kw.column);
    do {
        const std::string word = lex.expect(TokenKind::identifier, "input kind").text;
        table.input_kinds.push_back(parse_kind(word, lex));
        std::string formal;
        if (lex.peek().kind == TokenKind::identifier && lex.peek().text != "out_arity" && table.input_kinds.back() == InputKind::predicate) {
            formal = lex.next().text;
        }
        table.formal_names.push_back(formal);
    } while (lex.accept(TokenKind::comma));
    const Token arity_kw = lex.expect(TokenKind::identifier, "'out_arity'");
    if (arity_kw.text != "out_arity") throw ParseError("expected 'out_arity'", arity_kw.line, arity_kw.column);
    table.output_arity = std::stoul(lex.expect(TokenKind::integer, "output arity").text);

    const auto named = std::count_if(table.formal_names.begin(), table.formal_names.end(), [](const std::string& n) { return !n.empty(); });
    const auto preds = std::count(table.input_kinds.begin(), table.input_kinds.end(), InputKind::predicate);
    if (named != 0 && named != preds) lex.fail("either all or none of the predicate inputs must be named");
    return table;
}

inline TableEntry parse_table_entry(Lexer& lex, const TableOracle& table) {
    TableEntry entry;
    std::set<std::string> seen;
    const std::set<std::string> formal(table.formal_names.begin(), table.formal_names.end());
    auto check_atom = [&](const Atom& a, const Token& at) {
        if (!a.is_ground()) throw ParseError("table entries must be ground", at.line, at.column);
        if (table.uses_formal_names() && !formal.contains(a.predicate))
            throw ParseError("entry atom " + a.str() + " uses a predicate that is not a declared predicate input", at.line, at.column);
    };
    do {
        const Token kw = lex.expect(TokenKind::identifier, "'require', 'forbid' or 'out'");
        if (!seen.insert(kw.text).second) throw ParseError("repeated section '" + kw.text + "'", kw.line, kw.column);
        if (kw.text == "require" || kw.text == "forbid") {
            auto& atoms = kw.text == "require" ? entry.require : entry.forbid;
            if (lex.peek().kind == TokenKind::identifier) {
                do {
                    const Token at = lex.peek();
                    atoms.push_back(parse_atom(lex, false));
                    check_atom(atoms.back(), at);
                } while (lex.accept(TokenKind::amp));
            }
        } else if (kw.text == "out") {
            while (lex.peek().kind == TokenKind::lparen) {
                const Token at = lex.peek();
                entry.outputs.push_back(parse_tuple(lex));
                if (entry.outputs.back().size() != table.output_arity)
                    throw ParseError("output tuple arity differs from out_arity " + std::to_string(table.output_arity), at.line, at.column);
            }
        } else {
            throw ParseError("unknown section '" + kw.text + "'", kw.line, kw.column);
        }
    } while (lex.accept(TokenKind::semicolon));
    return entry;
}

}  // namespace detail

// Parses one or more table oracles. Each starts with a header line
//   oracle NAME inputs KIND,KIND,... out_arity N
// followed by entry lines
//   require a(t) & b ; forbid c ; out (t1) (t2)
inline std::vector<TableOracle> parse_table_oracles(std::string_view text) {
    std::vector<TableOracle> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        pos = eol + 1;
        Lexer lex(line, line_no);
        if (lex.peek().kind == TokenKind::end) continue;
        if (lex.peek().kind == TokenKind::identifier && lex.peek().text == "oracle") {
            out.push_back(detail::parse_table_header(lex));
        } else {
            if (out.empty()) lex.fail("table entry before any 'oracle' header");
            out.back().entries.push_back(detail::parse_table_entry(lex, out.back()));
        }
        if (lex.peek().kind != TokenKind::end) lex.fail("unexpected " + Lexer::describe(lex.peek()));
    }
    return out;
}

inline std::vector<std::string> load_table_oracles(std::string_view text, OracleRegistry& registry) {
    std::vector<std::string> names;
    for (const auto& table : parse_table_oracles(text)) {
        registry.add(table.to_spec());
        names.push_back(table.name);
    }
    return names;
}

inline std::vector<std::string> load_table_oracle_file(const std::string& path, OracleRegistry& registry) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open oracle file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return load_table_oracles(text, registry);
    } catch (const ParseError& e) {
        throw Error(path + ":" + e.what());
    }
}

}  // namespace hexufs
