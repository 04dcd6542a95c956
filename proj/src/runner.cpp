#include "runner.hpp"

#include "emit.hpp"
#include "montgomery.hpp"
#include "rtl_interp.hpp"

#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace vlcm {

namespace fs = std::filesystem;

namespace {

std::string substitute(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    os << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

OutputForm output_form_from(const std::string& s) {
    if (s == "single") return OutputForm::Single;
    if (s == "sumcarry") return OutputForm::SumCarry;
    throw ConfigError("output form must be 'single' or 'sumcarry', got '" + s + "'");
}

Json cost_to_json(const CostReport& c) {
    Json j;
    j["add2"] = c.add2_count;
    j["sub2"] = c.sub2_count;
    j["csa"] = c.csa_count;
    j["mux"] = c.mux_count;
    j["final_adders"] = c.final_adder_count;
    j["fa_estimate"] = c.fa_estimate;
    j["stage_depth"] = c.stage_depth;
    return j;
}

// Oracle verification: each graph output must equal constant * x, with x
// driven by the seeded generator. Throws VerifyError on the first mismatch.
void verify_against_oracle(const Dfg& g, const std::vector<BigUint>& constants, unsigned iw,
                           std::uint64_t seed, std::uint32_t vectors) {
    Evaluator eval(g);
    SplitMix64 rng(seed);
    for (std::uint32_t k = 0; k < vectors; ++k) {
        BigUint x = random_bits(rng, iw);
        eval.run({x});
        for (std::size_t i = 0; i < constants.size(); ++i) {
            if (eval.output_value(i) != constants[i] * x)
                throw VerifyError("output y" + std::to_string(i) + " mismatch at vector " +
                                  std::to_string(k));
        }
    }
}

// Independent re-check of the emitted text through the RTL interpreter.
void cross_check_rtl(const std::string& rtl, const Dfg& g,
                     const std::vector<BigUint>& constants, unsigned iw, std::uint64_t seed,
                     std::uint32_t vectors) {
    RtlModule mod = RtlModule::parse(rtl);
    SplitMix64 rng(seed ^ 0x9d2c5680u);
    const std::string& xname = g.inputs().front().name;
    for (std::uint32_t k = 0; k < vectors; ++k) {
        BigUint x = random_bits(rng, iw);
        auto outs = mod.run({{xname, x}});
        for (std::size_t i = 0; i < constants.size(); ++i) {
            const OutputBinding& o = g.outputs()[i];
            BigUint got;
            if (o.carry)
                got = outs.at(o.name + "_s") + outs.at(o.name + "_c");
            else
                got = outs.at(o.name);
            if (got != constants[i] * x)
                throw VerifyError("emitted RTL disagrees with the oracle on output " + o.name +
                                  " at vector " + std::to_string(k));
        }
    }
}

std::string default_name(const RunConfig& cfg, const std::string& prefix) {
    std::string base = cfg.instance.empty() ? "design" : cfg.instance;
    for (char& c : base)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    std::string param = cfg.r ? ("r" + std::to_string(cfg.r)) : ("p" + std::to_string(cfg.p));
    return prefix + base + "_" + cfg.arch + "_" + param + "_iw" + std::to_string(cfg.iw);
}

struct SweepRow {
    std::string arch;
    unsigned p_or_r = 0;
    unsigned iw = 0;
    CostReport cost;
    bool verified = false;
    std::uint32_t vectors = 0;
    std::string error;
};

}  // namespace

std::vector<BigUint> resolve_constants(const RunConfig& cfg) {
    int sources = !cfg.constants_hex.empty();
    sources += !cfg.constants_file.empty();
    sources += !cfg.instance.empty();
    if (sources != 1)
        throw ConfigError(
            "exactly one constants source is required: --constants, a constants file, or "
            "--instance");
    std::vector<BigUint> out;
    if (!cfg.instance.empty()) {
        out.push_back(find_instance(cfg.instance).prime);
    } else if (!cfg.constants_file.empty()) {
        std::istringstream is(read_file(cfg.constants_file));
        std::string line;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
                line.pop_back();
            std::size_t start = 0;
            while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
                ++start;
            if (start < line.size()) out.push_back(parse_hex(line.substr(start)));
        }
        if (out.empty()) throw ConfigError("constants file holds no values");
    } else {
        for (const std::string& h : cfg.constants_hex) out.push_back(parse_hex(h));
    }
    return out;
}

VlcmSpec vlcm_spec_from_config(const RunConfig& cfg, const std::vector<BigUint>& constants) {
    VlcmSpec spec;
    spec.constants = constants;
    spec.arch = arch_from_name(cfg.arch);
    spec.p = cfg.p;
    spec.r = cfg.r;
    spec.iw = cfg.iw;
    spec.output_form = output_form_from(cfg.output);
    return spec;
}

RunConfig parse_run_config(const Json& doc) {
    RunConfig cfg;
    static const std::set<std::string> known = {
        "constants", "constants_file", "instance", "arch",   "p",       "r",
        "iw",        "output",         "seed",     "vectors", "out_dir", "name",
        "archs",     "p_list",         "r_list",   "iw_list", "workers", "format",
        "r1",        "r2",             "pairs",    "dir"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) throw ConfigError("unknown configuration key '" + key + "'");

    auto get_uns = [&](const char* key, unsigned fallback) -> unsigned {
        return doc.contains(key) ? doc.at(key).get<unsigned>() : fallback;
    };
    if (doc.contains("constants"))
        cfg.constants_hex = doc.at("constants").get<std::vector<std::string>>();
    if (doc.contains("constants_file"))
        cfg.constants_file = doc.at("constants_file").get<std::string>();
    if (doc.contains("instance")) cfg.instance = doc.at("instance").get<std::string>();
    if (doc.contains("arch")) cfg.arch = doc.at("arch").get<std::string>();
    cfg.p = get_uns("p", 0);
    cfg.r = get_uns("r", 0);
    cfg.iw = get_uns("iw", 16);
    if (doc.contains("output")) cfg.output = doc.at("output").get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("vectors")) cfg.vectors = doc.at("vectors").get<std::uint32_t>();
    if (doc.contains("out_dir")) cfg.out_dir = doc.at("out_dir").get<std::string>();
    if (doc.contains("name")) cfg.name = doc.at("name").get<std::string>();
    if (doc.contains("archs")) cfg.archs = doc.at("archs").get<std::vector<std::string>>();
    if (doc.contains("p_list")) cfg.p_list = doc.at("p_list").get<std::vector<unsigned>>();
    if (doc.contains("r_list")) cfg.r_list = doc.at("r_list").get<std::vector<unsigned>>();
    if (doc.contains("iw_list")) cfg.iw_list = doc.at("iw_list").get<std::vector<unsigned>>();
    cfg.workers = get_uns("workers", 0);
    if (doc.contains("format")) cfg.format = doc.at("format").get<std::string>();
    cfg.r1 = get_uns("r1", 16);
    cfg.r2 = get_uns("r2", 0);
    if (doc.contains("pairs")) cfg.pairs = doc.at("pairs").get<std::uint32_t>();
    if (doc.contains("dir")) cfg.dir = doc.at("dir").get<std::string>();
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("format must be 'csv' or 'json'");
    return cfg;
}

// ---- generate --------------------------------------------------------------

static RunResult run_generate(const RunConfig& cfg) {
    std::vector<BigUint> constants = resolve_constants(cfg);
    if (cfg.arch.empty()) throw ConfigError("generate requires --arch");
    VlcmSpec spec = vlcm_spec_from_config(cfg, constants);
    std::uint32_t vectors = cfg.vectors.value_or(10000);

    Dfg g = build_vlcm(spec);
    auto diags = g.validate();
    if (!diags.empty()) throw Error("internal: generated graph is invalid: " + diags.front());
    verify_against_oracle(g, constants, spec.iw, cfg.seed, vectors);

    std::string name = cfg.name.empty() ? default_name(cfg, "") : cfg.name;
    EmitConfig ec;
    ec.module_name = name;
    ec.vectors = vectors;
    ec.seed = cfg.seed;

    std::string rtl = emit_rtl(g, ec);
    bool interp_checked = false;
    if (g.nodes().size() <= 2000) {
        cross_check_rtl(rtl, g, constants, spec.iw, cfg.seed, 100);
        interp_checked = true;
    }
    std::string tb = emit_testbench(g, ec);
    ScriptBundle scripts = emit_scripts(ec);
    std::string rtl_files = name + ".v";
    scripts.synth_tcl = substitute(scripts.synth_tcl, "{{RTL_FILES}}", rtl_files);
    scripts.sim_sh = substitute(scripts.sim_sh, "{{RTL_FILES}}", rtl_files);

    CostReport cost = g.cost();
    Json report;
    report["name"] = name;
    if (!cfg.instance.empty()) report["instance"] = cfg.instance;
    report["arch"] = cfg.arch;
    if (spec.p) report["p"] = spec.p;
    if (spec.r) report["r"] = spec.r;
    report["iw"] = spec.iw;
    report["output"] = cfg.output;
    report["seed"] = cfg.seed;
    report["vectors"] = vectors;
    report["verified"] = true;
    report["rtl_interp_checked"] = interp_checked;
    Json consts = Json::array(), consts_dec = Json::array();
    for (const BigUint& c : constants) {
        consts.push_back(to_hex(c));
        consts_dec.push_back(to_dec(c));
    }
    report["constants"] = consts;
    report["constants_dec"] = consts_dec;
    report["cost"] = cost_to_json(cost);
    Json outs = Json::array();
    for (const OutputBinding& o : g.outputs()) {
        Json jo;
        jo["name"] = o.name;
        jo["sum_carry"] = o.carry.has_value();
        jo["width"] = bit_width(o.value_bound);
        outs.push_back(jo);
    }
    report["outputs"] = outs;
    report["files"] = Json::array({name + ".v", name + "_tb.v", name + "_syn.tcl-template",
                                   name + "_sim.sh-template", name + ".dot", "report.json"});

    fs::path dir = fs::path(cfg.out_dir) / name;
    fs::create_directories(dir);
    write_file(dir / (name + ".v"), rtl);
    write_file(dir / (name + "_tb.v"), tb);
    write_file(dir / (name + "_syn.tcl-template"), scripts.synth_tcl);
    write_file(dir / (name + "_sim.sh-template"), scripts.sim_sh);
    write_file(dir / (name + ".dot"), g.export_dot());
    write_file(dir / "report.json", report.dump(2) + "\n");

    RunResult res;
    res.report = report;
    res.message = "generated " + (dir / "").string() + " (" +
                  std::to_string(cost.two_input_ops()) + " two-input ops, " +
                  std::to_string(cost.csa_count) + " CSAs, " + std::to_string(cost.mux_count) +
                  " MUXes); verified on " + std::to_string(vectors) + " vectors";
    return res;
}

// ---- sweep -----------------------------------------------------------------

static RunResult run_sweep(const RunConfig& cfg) {
    std::vector<BigUint> constants = resolve_constants(cfg);
    std::uint32_t vectors = cfg.vectors.value_or(1000);

    std::vector<std::string> archs =
        cfg.archs.empty() ? std::vector<std::string>{"sa2io", "sacsa", "sahybrid", "ct"}
                          : cfg.archs;
    std::vector<unsigned> p_list = cfg.p_list.empty()
                                       ? std::vector<unsigned>{8, 12, 16, 20, 24, 28}
                                       : cfg.p_list;
    std::vector<unsigned> r_list =
        cfg.r_list.empty() ? std::vector<unsigned>{2, 3, 4, 5, 6, 7} : cfg.r_list;
    std::vector<unsigned> iw_list =
        cfg.iw_list.empty() ? std::vector<unsigned>{16, 32, 64} : cfg.iw_list;

    std::vector<SweepRow> rows;
    for (const std::string& arch : archs) {
        bool ct = arch_from_name(arch) == Arch::Ct;
        for (unsigned param : (ct ? r_list : p_list))
            for (unsigned iw : iw_list) {
                SweepRow row;
                row.arch = arch;
                row.p_or_r = param;
                row.iw = iw;
                row.vectors = vectors;
                rows.push_back(row);
            }
    }
    if (rows.empty()) throw ConfigError("sweep ranges are empty");

    unsigned workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, rows.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            SweepRow& row = rows[i];
            try {
                VlcmSpec spec;
                spec.constants = constants;
                spec.arch = arch_from_name(row.arch);
                (spec.arch == Arch::Ct ? spec.r : spec.p) = row.p_or_r;
                spec.iw = row.iw;
                spec.output_form = output_form_from(cfg.output);
                Dfg g = build_vlcm(spec);
                row.cost = g.cost();
                verify_against_oracle(g, constants, row.iw, cfg.seed, vectors);
                row.verified = true;
            } catch (const std::exception& e) {
                row.error = e.what();
                row.verified = false;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::string instance_label = cfg.instance.empty() ? "constants" : cfg.instance;
    std::ostringstream csv;
    csv << "instance,architecture,p_or_r,iw,add2,sub2,csa,mux,fa_estimate,stage_depth,"
           "verified,vectors,error\n";
    Json jrows = Json::array();
    std::size_t failures = 0;
    for (const SweepRow& row : rows) {
        csv << instance_label << "," << row.arch << "," << row.p_or_r << "," << row.iw << ","
            << row.cost.add2_count << "," << row.cost.sub2_count << "," << row.cost.csa_count
            << "," << row.cost.mux_count << "," << row.cost.fa_estimate << ","
            << row.cost.stage_depth << "," << (row.verified ? "true" : "false") << ","
            << row.vectors << "," << row.error << "\n";
        Json j;
        j["instance"] = instance_label;
        j["architecture"] = row.arch;
        j["p_or_r"] = row.p_or_r;
        j["iw"] = row.iw;
        j["add2"] = row.cost.add2_count;
        j["sub2"] = row.cost.sub2_count;
        j["csa"] = row.cost.csa_count;
        j["mux"] = row.cost.mux_count;
        j["fa_estimate"] = row.cost.fa_estimate;
        j["stage_depth"] = row.cost.stage_depth;
        j["verified"] = row.verified;
        j["vectors"] = row.vectors;
        j["error"] = row.error;
        jrows.push_back(j);
        if (!row.verified) ++failures;
    }

    std::string name = cfg.name.empty() ? ("sweep_" + instance_label) : cfg.name;
    for (char& c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
    fs::path dir = fs::path(cfg.out_dir) / name;
    fs::create_directories(dir);
    write_file(dir / "sweep.csv", csv.str());
    Json report;
    report["name"] = name;
    report["instance"] = instance_label;
    report["seed"] = cfg.seed;
    report["vectors"] = vectors;
    report["rows"] = jrows;
    write_file(dir / "sweep.json", report.dump(2) + "\n");

    RunResult res;
    res.report = report;
    res.exit_code = failures ? 2 : 0;
    res.message = "swept " + std::to_string(rows.size()) + " configurations into " +
                  (dir / (cfg.format == "csv" ? "sweep.csv" : "sweep.json")).string() +
                  (failures ? (" (" + std::to_string(failures) + " rows FAILED)")
                            : " (all rows verified)");
    return res;
}

// ---- montgomery ------------------------------------------------------------

static RunResult run_montgomery(const RunConfig& cfg) {
    std::vector<BigUint> constants = resolve_constants(cfg);
    if (constants.size() != 1)
        throw ConfigError("the montgomery command works on exactly one odd modulus");
    const BigUint& modulus = constants.front();

    MontgomeryParams prm = derive_params(modulus, cfg.r1);
    MontConfig mc;
    mc.r1 = cfg.r1;
    mc.r2 = cfg.r2 ? cfg.r2 : cfg.r1;
    mc.vlcm_arch = cfg.arch.empty() ? Arch::Ct : arch_from_name(cfg.arch);
    mc.vlcm_p = cfg.p;
    mc.vlcm_r = cfg.r;
    if (mc.vlcm_arch == Arch::Ct && mc.vlcm_r == 0) mc.vlcm_r = std::min(4u, cfg.r1);
    MontDatapath dp(mc, prm);

    // lock-step verification of the datapath model against the reference
    BigUint limit = prm.m_bar << 1;
    SplitMix64 rng(cfg.seed);
    bool exhaustive = (limit <= 400);  // covers every modulus below 2^8 at r1=2
    std::uint64_t checked = 0;
    std::vector<BigUint> dp_states, ref_states;
    auto check_pair = [&](const BigUint& a, const BigUint& b) {
        ref_states = mont_reference_states(a, b, prm);
        BigUint got = dp.run(a, b, &dp_states);
        if (dp_states != ref_states)
            throw VerifyError("datapath diverged from the reference at A=" + to_hex(a) +
                              " B=" + to_hex(b));
        BigUint want = ref_states.back();
        if (got != want || got >= limit || (got * prm.R - a * b) % prm.modulus != 0)
            throw VerifyError("montgomery result check failed at A=" + to_hex(a) +
                              " B=" + to_hex(b));
        ++checked;
    };
    if (exhaustive) {
        for (BigUint a = 0; a < limit; ++a)
            for (BigUint b = 0; b < limit; ++b) check_pair(a, b);
    } else {
        for (std::uint32_t k = 0; k < cfg.pairs; ++k)
            check_pair(random_below(rng, limit), random_below(rng, limit));
    }

    std::string name = cfg.name;
    if (name.empty()) {
        std::string base = cfg.instance.empty() ? "modulus" : cfg.instance;
        for (char& c : base)
            if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
        name = "mont_" + base + "_r1" + std::to_string(mc.r1) + "_" +
               arch_name(mc.vlcm_arch) +
               (mc.vlcm_r ? std::to_string(mc.vlcm_r) : std::to_string(mc.vlcm_p));
    }
    EmitConfig block_ec;
    block_ec.module_name = name + "_mulblk";
    block_ec.seed = cfg.seed;
    block_ec.vectors = cfg.vectors.value_or(10000);
    EmitConfig top_ec = block_ec;
    top_ec.module_name = name;
    top_ec.vectors = std::min<std::uint32_t>(cfg.vectors.value_or(100), 1000);

    std::string block_rtl = emit_rtl(dp.vlcm_graph(), block_ec);
    std::string top_rtl = emit_mont_rtl(dp, top_ec);
    std::string top_tb = emit_mont_testbench(dp, top_ec);
    ScriptBundle scripts = emit_scripts(top_ec);
    std::string rtl_files = name + "_mulblk.v " + name + ".v";
    scripts.synth_tcl = substitute(scripts.synth_tcl, "{{RTL_FILES}}", rtl_files);
    scripts.sim_sh = substitute(scripts.sim_sh, "{{RTL_FILES}}", rtl_files);

    Json report;
    report["name"] = name;
    if (!cfg.instance.empty()) report["instance"] = cfg.instance;
    report["modulus"] = to_hex(modulus);
    report["modulus_dec"] = to_dec(modulus);
    report["modulus_bits"] = prm.modulus_bits;
    report["r1"] = mc.r1;
    report["r2"] = mc.r2;
    report["n_w"] = prm.n_w;
    report["iterations"] = prm.iterations();
    report["m_a"] = dp.m_a();
    report["m_b"] = dp.m_b();
    report["m_prime"] = to_hex(prm.m_prime);
    report["m_bar"] = to_hex(prm.m_bar);
    report["vlcm_arch"] = arch_name(mc.vlcm_arch);
    if (mc.vlcm_p) report["vlcm_p"] = mc.vlcm_p;
    if (mc.vlcm_r) report["vlcm_r"] = mc.vlcm_r;
    report["vlcm_cost"] = cost_to_json(dp.vlcm_graph().cost());
    report["verified_pairs"] = checked;
    report["exhaustive"] = exhaustive;
    report["lock_step"] = true;
    report["seed"] = cfg.seed;
    report["files"] = Json::array({name + "_mulblk.v", name + ".v", name + "_tb.v",
                                   name + "_syn.tcl-template", name + "_sim.sh-template",
                                   name + "_mulblk.dot", "report.json"});

    fs::path dir = fs::path(cfg.out_dir) / name;
    fs::create_directories(dir);
    write_file(dir / (name + "_mulblk.v"), block_rtl);
    write_file(dir / (name + ".v"), top_rtl);
    write_file(dir / (name + "_tb.v"), top_tb);
    write_file(dir / (name + "_syn.tcl-template"), scripts.synth_tcl);
    write_file(dir / (name + "_sim.sh-template"), scripts.sim_sh);
    write_file(dir / (name + "_mulblk.dot"), dp.vlcm_graph().export_dot());
    write_file(dir / "report.json", report.dump(2) + "\n");

    RunResult res;
    res.report = report;
    res.message = "generated " + (dir / "").string() + "; " + std::to_string(prm.iterations()) +
                  " iterations per multiplication; verified " + std::to_string(checked) +
                  (exhaustive ? " pairs (exhaustive)" : " random pairs") + " in lock-step";
    return res;
}

// ---- verify ----------------------------------------------------------------

static RunResult run_verify(const RunConfig& cfg) {
    if (cfg.dir.empty()) throw ConfigError("verify requires the design directory (--dir)");
    fs::path dir(cfg.dir);
    Json report = Json::parse(read_file(dir / "report.json"));
    if (!report.contains("constants"))
        throw ConfigError("this report has no constants section; only multiplierless block "
                          "directories can be re-verified");
    std::string name = report.at("name").get<std::string>();
    std::vector<BigUint> constants;
    for (const auto& h : report.at("constants")) constants.push_back(parse_hex(h.get<std::string>()));
    unsigned iw = report.at("iw").get<unsigned>();
    std::uint64_t seed = report.at("seed").get<std::uint64_t>();
    std::uint32_t vectors = cfg.vectors.value_or(100);

    RtlModule mod = RtlModule::parse(read_file(dir / (name + ".v")));
    SplitMix64 rng(seed);
    const std::string xname = mod.inputs().front().first;
    for (std::uint32_t k = 0; k < vectors; ++k) {
        BigUint x = random_bits(rng, iw);
        auto outs = mod.run({{xname, x}});
        for (std::size_t i = 0; i < constants.size(); ++i) {
            std::string base = "y" + std::to_string(i);
            BigUint got;
            if (outs.count(base + "_s"))
                got = outs.at(base + "_s") + outs.at(base + "_c");
            else
                got = outs.at(base);
            if (got != constants[i] * x)
                throw VerifyError("RTL output " + base + " disagrees with the oracle at vector " +
                                  std::to_string(k));
        }
    }

    RunResult res;
    res.report["name"] = name;
    res.report["verified"] = true;
    res.report["vectors"] = vectors;
    res.message = "re-verified " + name + ".v against the big-integer oracle on " +
                  std::to_string(vectors) + " vectors";
    return res;
}

RunResult run_command(Command cmd, const RunConfig& cfg) {
    try {
        switch (cmd) {
            case Command::Generate: return run_generate(cfg);
            case Command::Sweep: return run_sweep(cfg);
            case Command::Montgomery: return run_montgomery(cfg);
            case Command::Verify: return run_verify(cfg);
        }
        throw ConfigError("unknown command");
    } catch (const ConfigError& e) {
        RunResult res;
        res.exit_code = 1;
        res.message = std::string("configuration error: ") + e.what();
        return res;
    } catch (const VerifyError& e) {
        RunResult res;
        res.exit_code = 2;
        res.message = std::string("verification failure: ") + e.what();
        return res;
    } catch (const std::exception& e) {
        RunResult res;
        res.exit_code = 1;
        res.message = e.what();
        return res;
    }
}

}  // namespace vlcm
