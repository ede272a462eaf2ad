// hexufs: evaluate ground HEX programs and inspect their unfounded-set checks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hexufs/hexufs.hpp"

namespace {

using nlohmann::json;
using namespace hexufs;

struct Loaded {
    OracleRegistry registry;
    Program program;
};

Loaded load(const std::string& file, const std::vector<std::string>& oracle_files) {
    Loaded out{builtin_registry(), {}};
    for (const auto& f : oracle_files) load_table_oracle_file(f, out.registry);
    Program p = rewrite_strong_negation(parse_program_file(file, out.registry));
    if (!p.is_ground()) p = instantiate(p);
    out.program = std::move(p);
    return out;
}

json stats_json(const EvaluationReport& r) {
    json j;
    j["answer_sets"] = r.answer_sets.size();
    j["compatible_sets"] = r.compatible_sets;
    j["candidates_rejected"] = r.candidates_rejected;
    j["ufs_searches_run"] = r.ufs_searches_run;
    j["ufs_searches_skipped"] = r.ufs_searches_skipped;
    j["eligible_checks"] = r.eligible_checks;
    j["components_total"] = r.components_total;
    j["components_ecyclic"] = r.components_ecyclic;
    j["search_node_expansions"] = r.search_node_expansions;
    j["phase_times_ms"] = r.phase_times_ms;
    return j;
}

json analysis_json(const AnalysisReport& r) {
    const auto& t = *r.graph.table;
    auto names = [&](const std::vector<AtomId>& ids) {
        json a = json::array();
        for (AtomId id : ids) a.push_back(t[id].str());
        return a;
    };
    auto edges = [&](const std::vector<Edge>& es) {
        json a = json::array();
        for (auto [u, v] : es) a.push_back({t[u].str(), t[v].str()});
        return a;
    };
    json j;
    j["atoms"] = names(r.graph.nodes);
    j["ordinary_edges"] = edges(r.graph.ordinary);
    j["e_edges"] = edges(r.graph.external);
    j["components"] = json::array();
    for (const auto& c : r.partition.components) {
        json cj;
        cj["atoms"] = names(c.atoms);
        cj["rules"] = c.rules.size();
        cj["e_cycle"] = c.e_cycle;
        cj["cyclic_inputs"] = names(c.cyclic_inputs);
        cj["depends_on"] = c.depends_on;
        j["components"].push_back(cj);
    }
    j["has_e_cycle"] = r.global.has_e_cycle;
    j["predicate_e_cycle"] = r.global.predicate_e_cycle;
    j["cyclic_inputs"] = names(r.global.cyclic_inputs);
    j["ufs_check"] = r.global.has_e_cycle ? "required" : "skippable";
    return j;
}

Interpretation parse_interpretation(const std::string& text, const Program& program) {
    Interpretation interp(program.table_ptr());
    Lexer lex(text);
    if (lex.peek().kind == TokenKind::end) return interp;
    do {
        const Atom a = parse_atom(lex);
        const auto id = program.table().find(a);
        if (!id) throw Error("atom " + a.str() + " does not occur in the program");
        interp.set(*id, true);
    } while (lex.accept(TokenKind::comma));
    if (lex.peek().kind != TokenKind::end) lex.fail("expected ',' between atoms");
    return interp;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, sep))
        if (!part.empty()) out.push_back(part);
    return out;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evaluate ground HEX programs with e-cycle-aware unfounded-set checking"};
    app.require_subcommand(1);

    std::string file;
    std::vector<std::string> oracle_files;
    std::string mode = "full", engine = "propagate", stats_path, interpretation;
    std::size_t max_answers = 0, ufs_cap = 20, exhaustive_cap = 24, brute_cap = 20;
    bool no_ca = false, as_json = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("file", file, "program file")->required();
        sub->add_option("--oracles", oracle_files, "table oracle file (repeatable)");
        sub->add_option("--ufs-cap", ufs_cap, "largest unfounded-set search domain");
    };

    auto* solve = app.add_subcommand("solve", "print the answer sets, one per line");
    common(solve);
    solve->add_option("--mode", mode, "full, no-decomposition, no-criterion or brute");
    solve->add_option("--engine", engine, "exhaustive or propagate");
    solve->add_option("--max-answers", max_answers, "stop after N answer sets (0: all)");
    solve->add_option("--stats-json", stats_path, "write evaluation counters as JSON");
    solve->add_option("--exhaustive-cap", exhaustive_cap, "atom limit of the exhaustive engine");
    solve->add_option("--brute-cap", brute_cap, "atom limit of brute mode");
    solve->add_flag("--no-ca-restriction", no_ca, "search without the cyclic-input-atom restriction");

    auto* analyze_cmd = app.add_subcommand("analyze", "report dependency graph, components and the e-cycle criterion");
    common(analyze_cmd);
    analyze_cmd->add_flag("--json", as_json, "machine-readable output");

    auto* check_ufs = app.add_subcommand("check-ufs", "print a smallest unfounded set intersecting the interpretation");
    common(check_ufs);
    check_ufs->add_option("--interpretation", interpretation, "true atoms, comma separated")->required();

    auto* verify_cmd = app.add_subcommand("verify", "compare full mode against the brute-force FLP oracle");
    common(verify_cmd);
    verify_cmd->add_option("--engine", engine, "exhaustive or propagate");
    verify_cmd->add_option("--brute-cap", brute_cap, "atom limit of brute mode");

    std::string bench_spec, bench_modes = "full,no-decomposition,no-criterion";
    auto* bench = app.add_subcommand("bench", "compare modes on a generated instance");
    bench->add_option("--spec", bench_spec, "m,k,s[,seed]")->required();
    bench->add_option("--modes", bench_modes, "comma separated modes");
    bench->add_option("--engine", engine, "exhaustive or propagate");
    bench->add_option("--ufs-cap", ufs_cap, "largest unfounded-set search domain");
    bench->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        EvaluationOptions options;
        options.engine = parse_engine(engine);
        options.ufs_cap = ufs_cap;
        options.exhaustive_cap = exhaustive_cap;
        options.brute_cap = brute_cap;

        if (*solve) {
            auto [registry, program] = load(file, oracle_files);
            options.mode = parse_mode(mode);
            options.ca_restriction = !no_ca;
            if (max_answers > 0) options.max_answers = max_answers;
            const auto report = evaluate(program, registry, options, [](const Interpretation& a) { std::cout << a.str() << "\n"; });
            if (!stats_path.empty()) write_json(stats_path, stats_json(report));
            return report.answer_sets.empty() ? 1 : 0;
        }
        if (*analyze_cmd) {
            auto [registry, program] = load(file, oracle_files);
            const auto report = analyze(program);
            if (as_json)
                std::cout << analysis_json(report).dump(2) << "\n";
            else
                std::cout << to_text(report);
            return 0;
        }
        if (*check_ufs) {
            auto [registry, program] = load(file, oracle_files);
            const auto a = parse_interpretation(interpretation, program);
            UfsQuery q{program, a, program.atoms(), {}, ufs_cap};
            const auto x = find_unfounded_set(q, registry);
            std::cout << (x ? atoms_str(program.table(), *x) : "none") << "\n";
            return 0;
        }
        if (*verify_cmd) {
            auto [registry, program] = load(file, oracle_files);
            const auto issues = verify(program, registry, options);
            for (const auto& i : issues) std::cout << i << "\n";
            if (issues.empty()) std::cout << "ok\n";
            return issues.empty() ? 0 : 1;
        }
        if (*bench) {
            const auto parts = split(bench_spec, ',');
            if (parts.size() < 3 || parts.size() > 4) throw Error("--spec expects m,k,s[,seed]");
            InstanceSpec spec{std::stoul(parts[0]), std::stoul(parts[1]), std::stoul(parts[2]), parts.size() == 4 ? std::stoull(parts[3]) : 0};
            const Program program = generate_instance(spec);
            const OracleRegistry registry = builtin_registry();
            json all = json::object();
            for (const auto& m : split(bench_modes, ',')) {
                options.mode = parse_mode(m);
                const auto report = evaluate(program, registry, options);
                if (as_json) {
                    all[m] = stats_json(report);
                    continue;
                }
                std::cout << m << ": answer_sets=" << report.answer_sets.size() << " compatible_sets=" << report.compatible_sets
                          << " ufs_searches_run=" << report.ufs_searches_run << " ufs_searches_skipped=" << report.ufs_searches_skipped
                          << " search_node_expansions=" << report.search_node_expansions << " total_ms=" << report.phase_times_ms.at("total")
                          << "\n";
            }
            if (as_json) std::cout << all.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "hexufs: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
