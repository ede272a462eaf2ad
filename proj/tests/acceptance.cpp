// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "support/properties.hpp"

using namespace hexufs;

namespace {

int failures = 0;

void line(bool ok, const std::string& name, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  " << detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(double v, int digits = 3) {
    std::ostringstream o;
    o.precision(digits);
    o << std::fixed << v;
    return o.str();
}

Program sample(const std::string& name, const OracleRegistry& reg) {
    return instantiate(parse_program_file(std::string(HEXUFS_PROGRAMS_DIR) + "/" + name, reg));
}

AtomId id_of(const Program& p, const std::string& name) { return p.table().id(Atom{name, {}, false}); }

std::string worked_examples(bool& ok) {
    std::vector<std::string> bad;
    auto check = [&](bool c, const std::string& what) {
        if (!c) bad.push_back(what);
    };
    const auto reg = builtin_registry();

    const auto ex1 = sample("example1.hex", reg);
    const auto r1 = evaluate(ex1, reg);
    check(r1.answer_sets.size() == 1 && r1.answer_sets[0].str() == "{}", "ex1 answer sets");
    check(r1.compatible_sets == 2, "ex1 compatible sets");
    check(r1.rejections.size() == 1 && r1.rejections[0].candidate.str() == "{p}" &&
              r1.rejections[0].witness == std::vector<AtomId>{id_of(ex1, "p")},
          "ex1 rejection");

    const auto ex3 = sample("example3.hex", reg);
    const auto r3 = evaluate(ex3, reg);
    const auto part = scc_partition(ex3);
    const AtomId p = id_of(ex3, "p"), q = id_of(ex3, "q"), r = id_of(ex3, "r");
    std::vector<AtomId> pq{p, q};
    std::sort(pq.begin(), pq.end());
    std::size_t c_pq = part.components.size(), c_r = part.components.size();
    for (std::size_t i = 0; i < part.components.size(); ++i) {
        if (part.components[i].atoms == pq) c_pq = i;
        if (part.components[i].atoms == std::vector<AtomId>{r}) c_r = i;
    }
    check(part.components.size() == 2 && c_pq < 2 && c_r < 2, "ex3 components");
    if (c_pq < 2 && c_r < 2) {
        check(!part.components[c_pq].e_cycle && r3.component_searches[c_pq] == 0, "ex3 {p,q} exempt");
        std::size_t with_r = 0;
        for (const auto& c : compatible_sets(ex3, reg)) with_r += project(c, ex3).holds(r);
        check(r3.rejections.size() == with_r && with_r > 0, "ex3 every candidate with r rejected");
        for (const auto& rej : r3.rejections)
            check(rej.candidate.holds(r) && rej.witness == std::vector<AtomId>{r} && rej.component == c_r, "ex3 witness {r}");
    }
    check(r3.answer_sets.size() == 1 && r3.answer_sets[0].str() == "{}", "ex3 answer sets");

    for (const char* name : {"diff.hex", "concat.hex"}) {
        const auto prog = sample(name, reg);
        check(to_text(analyze(prog)).find("no e-cycle") != std::string::npos, std::string(name) + " reports no e-cycle");
        check(evaluate(prog, reg).ufs_searches_run == 0, std::string(name) + " runs no search");
    }
    ok = bad.empty();
    std::string out;
    for (const auto& b : bad) out += " [" + b + "]";
    return out;
}

std::string tally(const props::Tally& t) {
    std::string s = "programs=" + std::to_string(t.programs) + " instances=" + std::to_string(t.instances) +
                    " counterexamples=" + std::to_string(t.counterexamples);
    if (t.counterexamples) std::cerr << t.first << "\n";
    return s;
}

}  // namespace

int main() {
    constexpr std::size_t kPrograms = 500;
    constexpr std::size_t kMin = 200;

    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        const auto detail = worked_examples(ok);
        const double s = seconds_since(t0);
        line(ok && s < 1.0, "worked-examples", "exact" + detail + " time=" + fmt(s) + "s (limit 1s)");
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto t = props::flp_equivalence(kPrograms);
        const double s = seconds_since(t0);
        line(t.ok() && t.programs >= 500 && s < 300, "flp-unfounded-free-equivalence", tally(t) + " time=" + fmt(s) + "s (limit 300s)");
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto t = props::mode_equivalence(kPrograms);
        const double s = seconds_since(t0);
        line(t.ok() && t.programs >= 500 && s < 600, "mode-equivalence", tally(t) + " time=" + fmt(s) + "s (limit 600s)");
    }
    {
        const std::pair<const char*, props::Tally> suite[] = {
            {"cut_removal", props::cut_removal(kPrograms)},         {"guess_transfer", props::guess_transfer(kPrograms)},
            {"no_e_cycle_witness", props::no_e_cycle_witness(kPrograms)},           {"component_carrier", props::component_carrier(kPrograms)},
            {"component_lift", props::component_lift(kPrograms)},           {"restriction", props::restriction(kPrograms)},
        };
        bool ok = true;
        std::string detail;
        for (const auto& [name, t] : suite) {
            ok = ok && t.ok(kMin);
            detail += std::string(detail.empty() ? "" : "; ") + name + " " + std::to_string(t.instances) + "/" +
                      std::to_string(t.counterexamples);
            if (t.counterexamples) std::cerr << name << ":\n" << t.first << "\n";
        }
        line(ok, "unfoundedness-property-suite", detail + " (instances/counterexamples, need >=200/0)");
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto reg = builtin_registry();
        bool ok = true;
        std::string detail;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto e = props::effort(generate_instance({8, 1, 3, seed}), reg, 64);
            const double vs_dec = double(e.full) / double(e.no_decomposition);
            const double vs_crit = double(e.full) / double(e.no_criterion);
            ok = ok && vs_dec <= 0.25 && vs_crit <= 0.10;
            detail += "seed" + std::to_string(seed) + " nodes " + std::to_string(e.full) + "/" + std::to_string(e.no_decomposition) +
                      "/" + std::to_string(e.no_criterion) + " ratios " + fmt(vs_dec) + "," + fmt(vs_crit) + "; ";
        }
        std::size_t k0_searches = 0;
        for (std::uint64_t seed = 0; seed < 3; ++seed)
            k0_searches += evaluate(generate_instance({8, 0, 3, seed}), reg).ufs_searches_run;
        ok = ok && k0_searches == 0;
        const double s = seconds_since(t0);
        ok = ok && s < 60;
        line(ok, "effort-reduction",
             detail + "k=0 searches=" + std::to_string(k0_searches) + " (need <=0.25, <=0.10, 0) time=" + fmt(s) + "s (limit 60s)");
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto t = props::engine_agreement(kPrograms);
        const double s = seconds_since(t0);
        line(t.ok() && s < 300, "engine-agreement", tally(t) + " time=" + fmt(s) + "s (limit 300s)");
    }
    return failures == 0 ? 0 : 1;
}
