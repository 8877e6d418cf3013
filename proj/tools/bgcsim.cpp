#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bgc/demo.hpp"
#include "bgc/figures.hpp"
#include "bgc/harness.hpp"
#include "bgc/proptest.hpp"

namespace {

using nlohmann::json;

// Attack tokens accepted on the CLI and in config files.
void apply_attack_token(bgc::AttackSpec& attack, const std::string& token) {
    if (token == "symmetrization_collapse") {
        attack.kind = bgc::AttackKind::Symmetrization;
        attack.collapse = bgc::CollapseMode::ForceOn;
    } else if (token == "symmetrization_nocollapse") {
        attack.kind = bgc::AttackKind::Symmetrization;
        attack.collapse = bgc::CollapseMode::ForceOff;
    } else {
        attack.kind = bgc::attack_kind_from_string(token);
    }
}

bgc::CollapseMode collapse_from_string(const std::string& s) {
    if (s == "random") return bgc::CollapseMode::Random;
    if (s == "on") return bgc::CollapseMode::ForceOn;
    if (s == "off") return bgc::CollapseMode::ForceOff;
    throw bgc::ConfigError("collapse must be one of random|on|off");
}

// Worker ids are 0-based in serialized formats and 1-based in memory.
std::vector<int> ids_from_json(const json& arr) {
    std::vector<int> out;
    for (const auto& v : arr) out.push_back(v.get<int>() + 1);
    return out;
}

void load_run_config(const std::string& path, bgc::RunInvocation& inv) {
    std::ifstream is(path);
    if (!is) throw bgc::ConfigError("cannot read config file: " + path);
    json j;
    is >> j;

    auto& sys = inv.system;
    if (j.contains("n")) sys.n_workers = j["n"].get<int>();
    if (j.contains("s")) sys.n_malicious = j["s"].get<int>();
    if (j.contains("u")) sys.honest_per_group = j["u"].get<int>();
    if (j.contains("m")) sys.n_groups = j["m"].get<int>();
    if (j.contains("p")) sys.n_samples = j["p"].get<int>();
    if (j.contains("d")) sys.dim = j["d"].get<int>();
    if (j.contains("alphabet_log2")) sys.alphabet = bgc::Alphabet(j["alphabet_log2"].get<int>());
    if (j.contains("seed")) sys.rng_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("reps")) inv.repetitions = j["reps"].get<int>();
    if (j.contains("out")) inv.out_path = j["out"].get<std::string>();
    if (j.contains("transcript")) inv.transcript_path = j["transcript"].get<std::string>();

    if (j.contains("attack")) {
        const json& a = j["attack"];
        if (a.is_string()) {
            apply_attack_token(inv.attack, a.get<std::string>());
        } else {
            if (a.contains("kind")) apply_attack_token(inv.attack, a["kind"].get<std::string>());
            if (a.contains("collapse"))
                inv.attack.collapse = collapse_from_string(a["collapse"].get<std::string>());
            if (a.contains("malicious")) inv.attack.malicious_workers = ids_from_json(a["malicious"]);
            if (a.contains("stragglers")) inv.attack.stragglers = ids_from_json(a["stragglers"]);
            if (a.contains("rate")) inv.attack.corruption_rate = a["rate"].get<double>();
            if (a.contains("seed")) inv.attack.rng_seed = a["seed"].get<std::uint64_t>();
        }
    }
}

std::vector<int> parse_id_list(const std::string& csv) {
    std::vector<int> out;
    std::string cur;
    for (char ch : csv + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur) + 1);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw bgc::ConfigError("cannot open output file: " + path);
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bgcsim: Byzantine-resilient gradient coding simulator"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "simulate one configuration, emit one CSV row per rep");
    std::string cfg_path, attack_token = "none", collapse_token, malicious_csv, straggler_csv;
    std::string out_path, transcript_path;
    int n = 0, s = 0, u = 0, m = 0, p = 0, d = 0, k = 0, reps = 0;
    std::uint64_t seed = 0, attack_seed = 0;
    double rate = -1.0;
    run->add_option("--config", cfg_path, "JSON config file (flags override its fields)");
    run->add_option("--n", n, "number of workers");
    run->add_option("--s", s, "number of malicious workers");
    run->add_option("--u", u, "honest workers per group");
    run->add_option("--m", m, "number of fractional repetition groups");
    run->add_option("--p", p, "number of samples");
    run->add_option("--d", d, "gradient dimension");
    run->add_option("--alphabet-log2,-k", k, "log2 of the alphabet size");
    run->add_option("--attack", attack_token,
                    "none|symmetrization|symmetrization_collapse|symmetrization_nocollapse|"
                    "align_and_stall|random");
    run->add_option("--collapse", collapse_token, "random|on|off (symmetrization variant)");
    run->add_option("--malicious", malicious_csv, "comma-separated 0-based malicious worker ids");
    run->add_option("--stragglers", straggler_csv, "comma-separated 0-based straggler ids");
    run->add_option("--rate", rate, "corruption rate for the random attack");
    run->add_option("--seed", seed, "run seed");
    run->add_option("--attack-seed", attack_seed, "attack stream seed (default: derived)");
    run->add_option("--reps", reps, "repetitions (seed, seed+1, ...)");
    run->add_option("--out", out_path, "CSV output path (default stdout)");
    run->add_option("--transcript", transcript_path, "JSONL transcript dump (last rep)");

    // ---- figure ----
    auto* figure = app.add_subcommand("figure", "emit analytic figure data as CSV");
    std::string which, fig_out;
    int fig_s = 10, fig_k = 16, fig_n = 10, fig_m = 10;
    std::int64_t fig_p = 10000, fig_d = 1000000;
    figure->add_option("--which", which, "fig2|fig3|fig4|fig5")->required();
    figure->add_option("--out", fig_out, "output path (default stdout)");
    figure->add_option("--s", fig_s, "malicious workers (fig4)");
    figure->add_option("--n", fig_n, "workers (fig3)");
    figure->add_option("--m", fig_m, "groups (fig5)");
    figure->add_option("--p", fig_p, "samples (fig4)");
    figure->add_option("--d", fig_d, "gradient dimension (fig4)");
    figure->add_option("--alphabet-log2,-k", fig_k, "log2 of the alphabet size");

    // ---- proptest ----
    auto* prop = app.add_subcommand("proptest", "run the property grid; nonzero exit on violation");
    bgc::PropTestOptions popt;
    bool quiet = false;
    prop->add_option("--base-seed", popt.base_seed, "suite seed");
    prop->add_option("--seeds-per-case", popt.seeds_per_case, "seeds per (config, attack, placement)");
    prop->add_option("--max-exhaustive", popt.max_exhaustive_placements,
                     "enumerate all malicious placements up to this count");
    prop->add_option("--random-placements", popt.random_placements,
                     "random placements when enumeration is too large");
    prop->add_option("--min-runs", popt.min_runs, "warn if fewer runs executed");
    prop->add_option("--dump", popt.dump_path, "failing transcript path");
    prop->add_flag("--quiet", quiet, "suppress the progress log");

    // ---- demo-gd ----
    auto* demo = app.add_subcommand("demo-gd", "quantized least-squares gradient descent demo");
    bgc::DemoConfig dcfg;
    std::string demo_attack = "symmetrization", demo_collapse, demo_out;
    bool baseline = false;
    demo->add_option("--d", dcfg.dim, "model dimension");
    demo->add_option("--p", dcfg.samples, "number of samples");
    demo->add_option("--iters", dcfg.iters, "iterations");
    demo->add_option("--eta", dcfg.learning_rate, "learning rate");
    demo->add_option("--alphabet-log2,-k", dcfg.alphabet_log2, "log2 of the alphabet size");
    demo->add_option("--scale", dcfg.quant_scale, "fixed-point quantizer scale");
    demo->add_option("--seed", dcfg.seed, "demo seed");
    demo->add_option("--s", dcfg.s, "malicious workers");
    demo->add_option("--u", dcfg.u, "honest workers per group");
    demo->add_option("--m", dcfg.m, "groups");
    demo->add_option("--attack", demo_attack, "attack kind");
    demo->add_option("--collapse", demo_collapse, "random|on|off");
    demo->add_flag("--baseline", baseline, "attack-free direct summation instead of the protocol");
    demo->add_option("--out", demo_out, "trajectory CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            bgc::RunInvocation inv;
            if (!cfg_path.empty()) load_run_config(cfg_path, inv);
            if (run->count("--n")) inv.system.n_workers = n;
            if (run->count("--s")) inv.system.n_malicious = s;
            if (run->count("--u")) inv.system.honest_per_group = u;
            if (run->count("--m")) inv.system.n_groups = m;
            if (run->count("--p")) inv.system.n_samples = p;
            if (run->count("--d")) inv.system.dim = d;
            if (run->count("--alphabet-log2")) inv.system.alphabet = bgc::Alphabet(k);
            if (run->count("--seed")) inv.system.rng_seed = seed;
            if (run->count("--attack")) apply_attack_token(inv.attack, attack_token);
            if (run->count("--collapse")) inv.attack.collapse = collapse_from_string(collapse_token);
            if (run->count("--malicious")) inv.attack.malicious_workers = parse_id_list(malicious_csv);
            if (run->count("--stragglers")) inv.attack.stragglers = parse_id_list(straggler_csv);
            if (run->count("--rate")) inv.attack.corruption_rate = rate;
            if (run->count("--attack-seed")) inv.attack.rng_seed = attack_seed;
            if (run->count("--reps")) inv.repetitions = reps;
            if (run->count("--out")) inv.out_path = out_path;
            if (run->count("--transcript")) inv.transcript_path = transcript_path;
            return bgc::cmd_run(inv, std::cerr);
        }

        if (figure->parsed()) {
            std::string text;
            if (which == "fig2")
                text = bgc::fig2_csv();
            else if (which == "fig3")
                text = bgc::fig3_csv(fig_n, fig_k);
            else if (which == "fig4")
                text = bgc::fig4_csv(fig_s, fig_p, fig_d, fig_k);
            else if (which == "fig5")
                text = bgc::fig5_csv(fig_m, fig_k);
            else
                throw bgc::ConfigError("unknown figure: " + which);
            write_text(fig_out, text);
            return 0;
        }

        if (prop->parsed()) {
            bgc::PropTestReport report =
                bgc::run_property_suite(popt, quiet ? nullptr : &std::cerr);
            std::cout << report.summary() << "\n";
            for (const auto& msg : report.messages) std::cout << "violation: " << msg << "\n";
            return report.ok() ? 0 : 1;
        }

        if (demo->parsed()) {
            bgc::AttackSpec attack;
            apply_attack_token(attack, demo_attack);
            if (!demo_collapse.empty()) attack.collapse = collapse_from_string(demo_collapse);
            bgc::DemoResult r = bgc::run_demo_gd(dcfg, attack, !baseline);
            write_text(demo_out, r.csv);
            return 0;
        }
    } catch (const bgc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
