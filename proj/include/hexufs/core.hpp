#pragma once

// Ground HEX-program data model: atoms, external atoms, rules, programs,
// assignments and interpretations.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace hexufs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Raised when an exhaustive procedure would exceed its configured size limit.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class OracleError : public Error {
public:
    using Error::Error;
};

using AtomId = std::uint32_t;
using Tuple = std::vector<std::string>;

// Variables start with an uppercase letter or an underscore; everything else
// (lowercase identifiers, quoted strings, integers) is a constant.
inline bool is_variable(std::string_view token) {
    return !token.empty() && (std::isupper(static_cast<unsigned char>(token.front())) || token.front() == '_');
}

struct Atom {
    std::string predicate;
    Tuple args;
    bool classical = false;  // "-p": removed by rewrite_strong_negation

    auto operator<=>(const Atom&) const = default;
    bool operator==(const Atom&) const = default;

    std::size_t arity() const { return args.size(); }

    bool is_ground() const {
        return std::none_of(args.begin(), args.end(), [](const std::string& a) { return is_variable(a); });
    }

    std::string str() const {
        std::string out = classical ? "-" : "";
        out += predicate;
        if (!args.empty()) {
            out += '(';
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (i) out += ',';
                out += args[i];
            }
            out += ')';
        }
        return out;
    }
};

enum class InputKind { predicate, constant };

struct InputTerm {
    InputKind kind = InputKind::constant;
    std::string token;

    auto operator<=>(const InputTerm&) const = default;
    bool operator==(const InputTerm&) const = default;
};

// &name[inputs](outputs)
struct ExternalAtom {
    std::string name;
    std::vector<InputTerm> inputs;
    Tuple outputs;

    auto operator<=>(const ExternalAtom&) const = default;
    bool operator==(const ExternalAtom&) const = default;

    std::vector<std::string> predicate_inputs() const {
        std::vector<std::string> out;
        for (const auto& in : inputs)
            if (in.kind == InputKind::predicate) out.push_back(in.token);
        return out;
    }

    bool is_ground() const {
        for (const auto& in : inputs)
            if (in.kind == InputKind::constant && is_variable(in.token)) return false;
        return std::none_of(outputs.begin(), outputs.end(), [](const std::string& a) { return is_variable(a); });
    }

    std::string str() const {
        std::string out = "&" + name + "[";
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            if (i) out += ',';
            out += inputs[i].token;
        }
        out += "](";
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            if (i) out += ',';
            out += outputs[i];
        }
        return out + ")";
    }
};

struct BodyLiteral {
    bool naf = false;
    std::variant<Atom, ExternalAtom> payload;

    bool is_external() const { return std::holds_alternative<ExternalAtom>(payload); }
    const Atom& atom() const { return std::get<Atom>(payload); }
    const ExternalAtom& external() const { return std::get<ExternalAtom>(payload); }

    auto operator<=>(const BodyLiteral&) const = default;
    bool operator==(const BodyLiteral&) const = default;

    std::string str() const {
        std::string out = naf ? "not " : "";
        return out + (is_external() ? external().str() : atom().str());
    }
};

struct Rule {
    std::vector<Atom> head;  // sorted, duplicate-free; empty for constraints
    std::vector<BodyLiteral> body;

    auto operator<=>(const Rule&) const = default;
    bool operator==(const Rule&) const = default;

    bool is_constraint() const { return head.empty(); }
    bool is_fact() const { return body.empty() && head.size() == 1; }

    // Sorts the head and drops repeated literals, keeping body order.
    void normalize() {
        std::sort(head.begin(), head.end());
        head.erase(std::unique(head.begin(), head.end()), head.end());
        std::vector<BodyLiteral> unique_body;
        for (auto& lit : body)
            if (std::find(unique_body.begin(), unique_body.end(), lit) == unique_body.end())
                unique_body.push_back(std::move(lit));
        body = std::move(unique_body);
    }

    std::string str() const {
        if (head.empty() && body.empty()) return ":- .";
        std::string out;
        for (std::size_t i = 0; i < head.size(); ++i) {
            if (i) out += " | ";
            out += head[i].str();
        }
        if (!body.empty()) {
            out += head.empty() ? ":- " : " :- ";
            for (std::size_t i = 0; i < body.size(); ++i) {
                if (i) out += ", ";
                out += body[i].str();
            }
        }
        return out + ".";
    }
};

// Sorted, duplicate-free set of atoms with dense ids. Id order is the
// lexicographic atom order used by all enumeration routines.
class AtomTable {
public:
    AtomTable() = default;

    explicit AtomTable(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        std::sort(atoms_.begin(), atoms_.end());
        atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
        for (AtomId i = 0; i < atoms_.size(); ++i) {
            index_.emplace(atoms_[i], i);
            by_predicate_[atoms_[i].predicate].push_back(i);
        }
    }

    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const Atom& operator[](AtomId id) const { return atoms_.at(id); }
    const std::vector<Atom>& atoms() const { return atoms_; }

    std::optional<AtomId> find(const Atom& atom) const {
        auto it = index_.find(atom);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    AtomId id(const Atom& atom) const {
        auto found = find(atom);
        if (!found) throw Error("atom " + atom.str() + " is not in the atom table");
        return *found;
    }

    std::span<const AtomId> of_predicate(const std::string& predicate) const {
        auto it = by_predicate_.find(predicate);
        if (it == by_predicate_.end()) return {};
        return it->second;
    }

private:
    std::vector<Atom> atoms_;
    std::map<Atom, AtomId> index_;
    std::map<std::string, std::vector<AtomId>> by_predicate_;
};

using AtomTablePtr = std::shared_ptr<const AtomTable>;

// Complete assignment over an atom table, stored as its true-atom set.
// Atoms outside the table are false.
class Interpretation {
public:
    Interpretation() : table_(std::make_shared<AtomTable>()) {}
    explicit Interpretation(AtomTablePtr table) : table_(std::move(table)), truth_(table_->size(), false) {}
    Interpretation(AtomTablePtr table, std::span<const AtomId> true_atoms) : Interpretation(std::move(table)) {
        for (AtomId a : true_atoms) set(a, true);
    }

    static Interpretation from_atoms(AtomTablePtr table, const std::vector<Atom>& true_atoms) {
        Interpretation out(std::move(table));
        for (const auto& a : true_atoms) out.set(out.table().id(a), true);
        return out;
    }

    const AtomTable& table() const { return *table_; }
    const AtomTablePtr& table_ptr() const { return table_; }
    std::size_t size() const { return truth_.size(); }

    bool holds(AtomId id) const { return truth_.at(id); }
    bool holds(const Atom& atom) const {
        auto id = table_->find(atom);
        return id && truth_[*id];
    }
    void set(AtomId id, bool value) { truth_.at(id) = value; }

    std::vector<AtomId> true_atoms() const {
        std::vector<AtomId> out;
        for (AtomId i = 0; i < truth_.size(); ++i)
            if (truth_[i]) out.push_back(i);
        return out;
    }

    std::size_t count_true() const { return static_cast<std::size_t>(std::count(truth_.begin(), truth_.end(), true)); }

    // ext(q, A): argument tuples of the true q-atoms.
    std::set<Tuple> extension(const std::string& predicate) const {
        std::set<Tuple> out;
        for (AtomId id : table_->of_predicate(predicate))
            if (truth_[id]) out.insert((*table_)[id].args);
        return out;
    }

    // A ∪̇¬ X: every atom of X forced false.
    Interpretation override_false(std::span<const AtomId> atoms) const {
        Interpretation out = *this;
        for (AtomId a : atoms) out.truth_.at(a) = false;
        return out;
    }

    bool operator==(const Interpretation& other) const {
        return truth_ == other.truth_ && table_->atoms() == other.table_->atoms();
    }

    // "{a, b}" with atoms in table order.
    std::string str() const {
        std::string out = "{";
        bool first = true;
        for (AtomId i = 0; i < truth_.size(); ++i) {
            if (!truth_[i]) continue;
            if (!first) out += ", ";
            out += (*table_)[i].str();
            first = false;
        }
        return out + "}";
    }

    const std::vector<bool>& bits() const { return truth_; }

private:
    AtomTablePtr table_;
    std::vector<bool> truth_;
};

// A consistent set of signed literals over arbitrary atoms.
class Assignment {
public:
    Assignment() = default;

    Assignment& assign(const Atom& atom, bool value) {
        auto [it, inserted] = literals_.emplace(atom, value);
        if (!inserted && it->second != value)
            throw Error("inconsistent assignment: both T and F for " + atom.str());
        return *this;
    }

    std::optional<bool> value(const Atom& atom) const {
        auto it = literals_.find(atom);
        if (it == literals_.end()) return std::nullopt;
        return it->second;
    }

    std::set<Atom> true_atoms() const {
        std::set<Atom> out;
        for (const auto& [a, v] : literals_)
            if (v) out.insert(a);
        return out;
    }

    std::set<Atom> false_atoms() const {
        std::set<Atom> out;
        for (const auto& [a, v] : literals_)
            if (!v) out.insert(a);
        return out;
    }

    std::size_t size() const { return literals_.size(); }
    const std::map<Atom, bool>& literals() const { return literals_; }
    bool operator==(const Assignment&) const = default;

    std::set<Tuple> extension(const std::string& predicate) const {
        std::set<Tuple> out;
        for (const auto& [a, v] : literals_)
            if (v && a.predicate == predicate) out.insert(a.args);
        return out;
    }

private:
    std::map<Atom, bool> literals_;
};

// (A \ {Ta | a ∈ X}) ∪ {Fa | a ∈ X}
inline Assignment override_false(const Assignment& assignment, const std::set<Atom>& atoms) {
    Assignment out;
    for (const auto& [a, v] : assignment.literals())
        if (!atoms.contains(a)) out.assign(a, v);
    for (const auto& a : atoms) out.assign(a, false);
    return out;
}

// Rule literal resolved against the program's atom table and external list.
struct CompiledLiteral {
    bool naf = false;
    bool external = false;
    std::uint32_t index = 0;  // atom id or index into Program::externals()
};

struct CompiledRule {
    std::vector<AtomId> head;
    std::vector<CompiledLiteral> body;
};

class Program {
public:
    Program() : table_(std::make_shared<AtomTable>()) {}

    // Normalizes every rule and drops duplicates, keeping first occurrences.
    explicit Program(std::vector<Rule> rules) : Program(std::move(rules), nullptr) {}

    // Subprogram whose atoms are looked up in an existing (super-)table, so that
    // interpretations of the parent program apply unchanged.
    static Program with_table(std::vector<Rule> rules, AtomTablePtr table) {
        return Program(std::move(rules), std::move(table));
    }

    const std::vector<Rule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }

    const AtomTable& table() const { return *table_; }
    const AtomTablePtr& table_ptr() const { return table_; }

    // A(Π): ids of the atoms occurring in some rule (ascending).
    const std::vector<AtomId>& atoms() const { return atoms_; }
    bool occurs(AtomId id) const { return id < occurs_.size() && occurs_[id]; }

    const std::vector<CompiledRule>& compiled() const { return compiled_; }
    const std::vector<ExternalAtom>& externals() const { return externals_; }
    bool has_externals() const { return !externals_.empty(); }

    // Occurring atoms whose predicate is a predicate input of externals()[i].
    const std::vector<AtomId>& external_input_atoms(std::size_t i) const { return external_inputs_.at(i); }

    bool is_ground() const { return ground_; }
    bool has_classical_negation() const { return classical_; }

    std::set<std::string> constants() const {
        std::set<std::string> out;
        auto add = [&](const std::string& t) {
            if (!is_variable(t)) out.insert(t);
        };
        auto add_atom = [&](const Atom& a) {
            for (const auto& t : a.args) add(t);
        };
        for (const auto& r : rules_) {
            for (const auto& h : r.head) add_atom(h);
            for (const auto& l : r.body) {
                if (!l.is_external()) {
                    add_atom(l.atom());
                    continue;
                }
                for (const auto& in : l.external().inputs)
                    if (in.kind == InputKind::constant) add(in.token);
                for (const auto& t : l.external().outputs) add(t);
            }
        }
        return out;
    }

    // Predicate name -> arity over all occurring atoms.
    std::map<std::string, std::size_t> predicates() const {
        std::map<std::string, std::size_t> out;
        for (AtomId a : atoms_) out.emplace((*table_)[a].predicate, (*table_)[a].arity());
        return out;
    }

    Program subprogram(std::span<const std::size_t> rule_indices) const {
        std::vector<Rule> rules;
        for (std::size_t i : rule_indices) rules.push_back(rules_.at(i));
        return with_table(std::move(rules), table_);
    }

    std::string str() const {
        std::string out;
        for (const auto& r : rules_) out += r.str() + "\n";
        return out;
    }

    bool operator==(const Program& other) const { return rules_ == other.rules_; }

private:
    Program(std::vector<Rule> rules, AtomTablePtr table) {
        for (auto& r : rules) {
            r.normalize();
            if (std::find(rules_.begin(), rules_.end(), r) == rules_.end()) rules_.push_back(std::move(r));
        }

        std::vector<Atom> occurring;
        std::set<ExternalAtom> externals;
        for (const auto& r : rules_) {
            for (const auto& h : r.head) occurring.push_back(h);
            for (const auto& l : r.body) {
                if (l.is_external())
                    externals.insert(l.external());
                else
                    occurring.push_back(l.atom());
            }
        }
        table_ = table ? std::move(table) : std::make_shared<AtomTable>(occurring);
        externals_.assign(externals.begin(), externals.end());

        occurs_.assign(table_->size(), false);
        for (const auto& a : occurring) occurs_[table_->id(a)] = true;
        for (AtomId i = 0; i < occurs_.size(); ++i)
            if (occurs_[i]) atoms_.push_back(i);

        ground_ = true;
        classical_ = false;
        for (const auto& a : occurring) {
            ground_ = ground_ && a.is_ground();
            classical_ = classical_ || a.classical;
        }
        for (const auto& e : externals_) ground_ = ground_ && e.is_ground();

        for (const auto& e : externals_) {
            std::vector<AtomId> inputs;
            for (const auto& p : e.predicate_inputs())
                for (AtomId id : table_->of_predicate(p))
                    if (occurs_[id] && (*table_)[id].classical == false) inputs.push_back(id);
            std::sort(inputs.begin(), inputs.end());
            inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
            external_inputs_.push_back(std::move(inputs));
        }

        for (const auto& r : rules_) {
            CompiledRule cr;
            for (const auto& h : r.head) cr.head.push_back(table_->id(h));
            for (const auto& l : r.body) {
                CompiledLiteral cl;
                cl.naf = l.naf;
                cl.external = l.is_external();
                if (cl.external) {
                    auto it = std::lower_bound(externals_.begin(), externals_.end(), l.external());
                    cl.index = static_cast<std::uint32_t>(it - externals_.begin());
                } else {
                    cl.index = table_->id(l.atom());
                }
                cr.body.push_back(cl);
            }
            compiled_.push_back(std::move(cr));
        }
    }

    std::vector<Rule> rules_;
    AtomTablePtr table_;
    std::vector<AtomId> atoms_;
    std::vector<bool> occurs_;
    std::vector<CompiledRule> compiled_;
    std::vector<ExternalAtom> externals_;
    std::vector<std::vector<AtomId>> external_inputs_;
    bool ground_ = true;
    bool classical_ = false;
};

// Interpretation over `table` agreeing with `source` on shared atoms.
inline Interpretation transfer(const Interpretation& source, AtomTablePtr table) {
    Interpretation out(table);
    for (AtomId i = 0; i < table->size(); ++i) out.set(i, source.holds((*table)[i]));
    return out;
}

inline std::string atoms_str(const AtomTable& table, std::span<const AtomId> ids) {
    std::vector<std::string> names;
    for (AtomId id : ids) names.push_back(table[id].str());
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out + "}";
}

}  // namespace hexufs
