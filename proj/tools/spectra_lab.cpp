// spectra-lab: build rings from description files, print their prime spectra,
// run the check registry and write JSON reports.
//
// exit codes: 0 ok, 1 a check expected to hold was falsified,
//             2 usage or ring-file error, 3 internal error while checking.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "spectra_lab/spectra_lab.hpp"

using namespace spectra_lab;

namespace {

constexpr int exit_ok = 0, exit_falsified = 1, exit_usage = 2, exit_internal = 3;

struct Common {
    std::string ring_path;
    std::string builtin;
    std::string seed;
    std::size_t samples = 0;
    int n_max = 0;
    int precision = 0;
    std::string json_path;
    bool no_timing = false;
};

void add_common(CLI::App* sub, Common& c, bool sampling) {
    sub->add_option("--ring", c.ring_path, "ring description file");
    sub->add_option("--builtin", c.builtin, "built-in ring by name (see `info`)");
    sub->add_option("--precision", c.precision, "pi-adic precision prec2 (overrides the file)")->check(CLI::Range(2, 4096));
    sub->add_option("--json", c.json_path, "write JSON here ('-' for stdout)");
    if (!sampling) return;
    sub->add_option("--samples", c.samples, "samples per check (default: file, else 1000)");
    sub->add_option("--seed", c.seed, "seed: decimal, 0x-hex or any text (hashed); falls back to $SPECTRA_LAB_SEED");
    sub->add_option("--n-max", c.n_max, "exponent bound for the divided check")->check(CLI::Range(1, 64));
    sub->add_flag("--no-timing", c.no_timing, "omit wall_time fields from JSON");
}

RingConfig load(const Common& c) {
    if (!c.ring_path.empty() && !c.builtin.empty()) throw parse_error("give either --ring or --builtin, not both");
    if (!c.builtin.empty()) {
        auto r = instances::by_name(c.builtin);
        if (!r) throw parse_error("no built-in ring named '" + c.builtin + "'");
        RingConfig cfg{*r};
        if (c.precision > 0 && ambient_of(*r).is_padic()) {
            if (r->get<PadicDRing>()) cfg.ring = make_padic_d(ambient_of(*r).as_padic().p, c.precision, r->label);
            else cfg.ring = make_padic_val(ambient_of(*r).as_padic().p, c.precision, r->label);
        }
        return cfg;
    }
    if (c.ring_path.empty()) throw parse_error("--ring <path> or --builtin <name> is required");
    return load_ring(c.ring_path, c.precision);
}

void apply_overrides(RingConfig& cfg, const Common& c) {
    if (!c.seed.empty()) cfg.sampler.seed = parse_seed(c.seed);
    else if (const char* env = std::getenv("SPECTRA_LAB_SEED"); env && *env) cfg.sampler.seed = parse_seed(env);
    if (c.samples) cfg.samples = c.samples;
    if (c.n_max) cfg.n_max = c.n_max;
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) return;
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

int finish_suite(const SuiteResult& res, const Common& c, bool table) {
    json j = suite_json(res, !c.no_timing);
    if (table && c.json_path != "-") std::cout << suite_table(res);
    write_json(c.json_path, j);
    if (!res.errors.empty()) return exit_internal;
    return res.ok() ? exit_ok : exit_falsified;
}

int cmd_info(const Common& c) {
    std::cout << "spectra-lab " << tool_version << " (report schema " << report_schema << ")\n";
    if (!c.ring_path.empty() || !c.builtin.empty()) {
        RingConfig cfg = load(c);
        std::cout << "ring: " << display_name(cfg.ring) << "\n  " << describe(cfg.ring) << "\n";
        if (auto s = ring_shape(cfg.ring)) std::cout << "  shape: " << to_string(*s) << "\n";
        std::cout << "  maximal ideal: " << IdealObject::maximal(cfg.ring).to_string() << "\n";
        std::cout << "  unit values: " << unit_subgroup(cfg.ring).to_string() << "\n";
        json j = {{"schema", report_schema},
                  {"ring", display_name(cfg.ring)},
                  {"descriptor", describe(cfg.ring)},
                  {"maximal_ideal", IdealObject::maximal(cfg.ring).to_string()}};
        write_json(c.json_path, j);
        return exit_ok;
    }
    std::cout << "\ngroups:   int_lex:n  rat_lex:n  hahn_rat\nkinds:    valuation d_plus coarsening padic_d padic_val cpi pullback\n";
    std::cout << "checks:  ";
    for (auto& n : check_names()) std::cout << " " << n;
    std::cout << "\nbuilt-in rings:\n";
    for (auto& r : instances::all()) std::cout << "  " << std::left << std::setw(16) << r.label << describe(r) << "\n";
    return exit_ok;
}

int cmd_spec(const Common& c, bool dot) {
    RingConfig cfg = load(c);
    SpecChain chain = spec_chain(cfg.ring);
    if (dot) {
        std::cout << chain_dot(chain);
    } else if (c.json_path != "-") {
        std::cout << display_name(cfg.ring) << (chain.dense ? " (finite skeleton of a chain with dense stretches)" : "") << "\n";
        for (std::size_t i = 0; i < chain.size(); ++i) {
            std::cout << "  " << (i == 0 ? "0" : chain.prime(i).cut().to_string());
            if (i + 1 == chain.size()) std::cout << "   <- maximal";
            std::cout << "\n";
            if (i + 1 < chain.size()) std::cout << (chain.adjacent[i] ? "   |\n" : "   :  (primes in between)\n");
        }
    }
    write_json(c.json_path, chain_json(chain));
    return exit_ok;
}

std::vector<std::string> select_checks(const std::string& name) {
    if (name == "all") return check_names();
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
        throw parse_error("unknown check '" + name + "'; run `spectra-lab info` for the list");
    return {name};
}

int cmd_check(const Common& c, const std::string& name) {
    RingConfig cfg = load(c);
    apply_overrides(cfg, c);
    auto names = select_checks(name);
    Sampler s(cfg.sampler);
    SuiteResult res = run_suite(cfg.ring, s, names, RunOptions{cfg.samples, cfg.n_max});
    return finish_suite(res, c, true);
}

int cmd_witness(const Common& c, const std::string& name) {
    RingConfig cfg = load(c);
    apply_overrides(cfg, c);
    auto names = select_checks(name);
    Sampler s(cfg.sampler);
    SuiteResult res = run_suite(cfg.ring, s, names, RunOptions{cfg.samples, cfg.n_max});
    json out = json::array();
    for (auto& r : res.reports) {
        if (r.witnesses.empty()) continue;
        bool replay = r.replay ? r.replay() : false;
        if (c.json_path != "-") {
            std::cout << r.check_id << " (" << to_string(r.verdict) << ", replay " << (replay ? "ok" : "FAILED") << ")\n";
            for (auto& w : r.witnesses) std::cout << "  " << w.role << " = " << to_string(w.value) << "\n";
        }
        out.push_back(report_json(r, !c.no_timing));
    }
    if (out.empty() && c.json_path != "-") std::cout << "no witnesses\n";
    write_json(c.json_path, json{{"schema", report_schema}, {"ring", res.ring}, {"seed", res.seed}, {"witnessed", out}});
    if (!res.errors.empty()) {
        for (auto& e : res.errors) std::cerr << "error: " << e << "\n";
        return exit_internal;
    }
    return res.ok() ? exit_ok : exit_falsified;
}

int cmd_report(const Common& c) {
    RingConfig cfg = load(c);
    apply_overrides(cfg, c);
    auto names = cfg.checks;
    if (!c.builtin.empty()) names = check_names();
    Sampler s(cfg.sampler);
    SuiteResult res = run_suite(cfg.ring, s, names, RunOptions{cfg.samples, cfg.n_max});
    return finish_suite(res, c, true);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectra-lab: ideal calculus and prime spectra of valuation rings and their divided subrings"};
    app.require_subcommand(1);
    Common info_o, spec_o, check_o, witness_o, report_o;
    bool dot = false;
    std::string check_name, witness_name;

    auto* info = app.add_subcommand("info", "version, vocabulary and built-in rings; with --ring, describe that ring");
    add_common(info, info_o, false);
    auto* spec = app.add_subcommand("spec", "prime spectrum of a ring");
    add_common(spec, spec_o, false);
    spec->add_flag("--dot", dot, "emit Graphviz DOT");
    auto* check = app.add_subcommand("check", "run one check, or all of them");
    check->add_option("name", check_name, "check name or 'all'")->required();
    add_common(check, check_o, true);
    auto* witness = app.add_subcommand("witness", "run a check and print only its witnesses");
    witness->add_option("name", witness_name, "check name or 'all'")->required();
    add_common(witness, witness_o, true);
    auto* report = app.add_subcommand("report", "run the checks selected in the ring file");
    add_common(report, report_o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*info) return cmd_info(info_o);
        if (*spec) return cmd_spec(spec_o, dot);
        if (*check) return cmd_check(check_o, check_name);
        if (*witness) return cmd_witness(witness_o, witness_name);
        if (*report) return cmd_report(report_o);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_usage;
}
