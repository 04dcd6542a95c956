// vlcmgen -- command-line front end for the vlcm shared library.
//
// Subcommands: generate | sweep | montgomery | verify. Flags assemble the
// JSON run configuration consumed by the C API; --config loads a JSON file
// with the same schema first, and explicit flags override its entries.

#include <vlcm/vlcm.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::ordered_json;

namespace {

struct FlagState {
    std::string config_file;
    std::vector<std::string> constants;
    std::string constants_file, instance, arch, output, out_dir, name, format, dir;
    std::uint64_t seed = 0;
    unsigned p = 0, r = 0, iw = 0, workers = 0, r1 = 0, r2 = 0;
    std::uint32_t vectors = 0, pairs = 0;
    std::vector<std::string> archs;
    std::vector<unsigned> p_list, r_list, iw_list;
};

ordered_json build_config(const CLI::App& sub, const FlagState& fl) {
    ordered_json cfg = ordered_json::object();
    if (!fl.config_file.empty()) {
        std::ifstream is(fl.config_file);
        if (!is) {
            std::cerr << "configuration error: cannot read " << fl.config_file << "\n";
            std::exit(1);
        }
        std::ostringstream ss;
        ss << is.rdbuf();
        cfg = ordered_json::parse(ss.str());
    }
    auto set_if = [&](const char* flag, const char* key, auto value) {
        const CLI::Option* opt = sub.get_option_no_throw(flag);
        if (opt && opt->count() > 0) cfg[key] = value;
    };
    set_if("--constants", "constants", fl.constants);
    set_if("--constants-file", "constants_file", fl.constants_file);
    set_if("--instance", "instance", fl.instance);
    set_if("--arch", "arch", fl.arch);
    set_if("--p", "p", fl.p);
    set_if("--r", "r", fl.r);
    set_if("--iw", "iw", fl.iw);
    set_if("--output", "output", fl.output);
    set_if("--seed", "seed", fl.seed);
    set_if("--vectors", "vectors", fl.vectors);
    set_if("--out-dir", "out_dir", fl.out_dir);
    set_if("--name", "name", fl.name);
    set_if("--archs", "archs", fl.archs);
    set_if("--p-set", "p_list", fl.p_list);
    set_if("--r-set", "r_list", fl.r_list);
    set_if("--iw-set", "iw_list", fl.iw_list);
    set_if("--workers", "workers", fl.workers);
    set_if("--format", "format", fl.format);
    set_if("--r1", "r1", fl.r1);
    set_if("--r2", "r2", fl.r2);
    set_if("--pairs", "pairs", fl.pairs);
    set_if("--dir", "dir", fl.dir);
    return cfg;
}

void add_common_flags(CLI::App* sub, FlagState& fl) {
    sub->add_option("--config", fl.config_file, "JSON configuration file (flags override)");
    sub->add_option("--constants", fl.constants, "hex constants (repeatable or comma separated)")
        ->delimiter(',');
    sub->add_option("--constants-file", fl.constants_file, "file with one hex constant per line");
    sub->add_option("--instance", fl.instance, "bundled curve instance name");
    sub->add_option("--seed", fl.seed, "random seed driving stimuli and testbenches");
    sub->add_option("--vectors", fl.vectors, "verification vector count");
    sub->add_option("--out-dir", fl.out_dir, "output directory root");
    sub->add_option("--name", fl.name, "design name (defaults to a derived one)");
}

int dispatch(vlcm_status (*fn)(const char*, vlcm_result**), const ordered_json& cfg,
             bool print_report) {
    vlcm_result* res = nullptr;
    vlcm_status st = fn(cfg.dump().c_str(), &res);
    const char* msg = vlcm_result_message(res);
    if (st == VLCM_OK) {
        std::cout << msg << "\n";
        if (print_report) std::cout << vlcm_result_report_json(res) << "\n";
    } else {
        std::cerr << msg << "\n";
    }
    vlcm_result_free(res);
    return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplierless very-large-constant multiplication generator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("vlcmgen ") + vlcm_version());

    FlagState fl;
    bool print_report = false;
    app.add_flag("--report", print_report, "print the JSON report to stdout");

    CLI::App* gen = app.add_subcommand("generate", "emit one multiplierless design");
    add_common_flags(gen, fl);
    gen->add_option("--arch", fl.arch, "sa2io | sacsa | sahybrid | ct");
    gen->add_option("--p", fl.p, "constant partition width (shift-adds architectures)");
    gen->add_option("--r", fl.r, "input partition width (compressor-tree architecture)");
    gen->add_option("--iw", fl.iw, "input variable bit-width");
    gen->add_option("--output", fl.output, "single | sumcarry");

    CLI::App* sweep = app.add_subcommand("sweep", "explore the p/r/iw design space");
    add_common_flags(sweep, fl);
    sweep->add_option("--archs", fl.archs, "architectures to sweep")->delimiter(',');
    sweep->add_option("--p-set", fl.p_list, "partition widths to sweep")->delimiter(',');
    sweep->add_option("--r-set", fl.r_list, "input partition widths to sweep")->delimiter(',');
    sweep->add_option("--iw-set", fl.iw_list, "input bit-widths to sweep")->delimiter(',');
    sweep->add_option("--workers", fl.workers, "concurrent sweep workers");
    sweep->add_option("--format", fl.format, "csv | json (primary report named in the summary)");
    sweep->add_option("--output", fl.output, "single | sumcarry");

    CLI::App* mont = app.add_subcommand("montgomery", "emit a word-serial Montgomery multiplier");
    add_common_flags(mont, fl);
    mont->add_option("--r1", fl.r1, "word width of the A/q path");
    mont->add_option("--r2", fl.r2, "word width of the B/m_bar representation (default r1)");
    mont->add_option("--pairs", fl.pairs, "random operand pairs for lock-step verification");
    mont->add_option("--arch", fl.arch, "architecture of the constant-multiple block");
    mont->add_option("--p", fl.p, "partition width for the constant-multiple block");
    mont->add_option("--r", fl.r, "input partition width for the constant-multiple block");

    CLI::App* verify = app.add_subcommand("verify", "re-check an emitted design directory");
    verify->add_option("--dir", fl.dir, "design directory holding report.json and the RTL")
        ->required();
    verify->add_option("--vectors", fl.vectors, "vector count for the re-check");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) return dispatch(vlcm_generate, build_config(*gen, fl), print_report);
    if (sweep->parsed()) return dispatch(vlcm_sweep, build_config(*sweep, fl), print_report);
    if (mont->parsed()) return dispatch(vlcm_montgomery, build_config(*mont, fl), print_report);
    if (verify->parsed()) return dispatch(vlcm_verify, build_config(*verify, fl), print_report);
    return 1;
}
