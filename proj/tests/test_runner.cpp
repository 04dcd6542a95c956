#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "runner.hpp"

#include <vlcm/vlcm.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

using namespace vlcm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vlcm_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunResult capi_call(vlcm_status (*fn)(const char*, vlcm_result**), const Json& cfg) {
    vlcm_result* res = nullptr;
    vlcm_status st = fn(cfg.dump().c_str(), &res);
    RunResult out;
    out.exit_code = static_cast<int>(st);
    out.message = vlcm_result_message(res);
    std::string rep = vlcm_result_report_json(res);
    if (!rep.empty()) out.report = Json::parse(rep);
    CHECK(vlcm_result_status(res) == st);
    vlcm_result_free(res);
    return out;
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad values") {
    CHECK_THROWS_AS(parse_run_config(Json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(parse_run_config(Json::parse(R"({"format": "xml"})")), ConfigError);
    RunConfig cfg = parse_run_config(Json::parse(R"({"constants": ["0x33"], "iw": 8})"));
    CHECK(cfg.iw == 8);
    CHECK(cfg.constants_hex.size() == 1);

    RunConfig both;
    both.instance = "anomalous";
    both.constants_hex = {"0x33"};
    CHECK_THROWS_AS(resolve_constants(both), ConfigError);
    RunConfig none;
    CHECK_THROWS_AS(resolve_constants(none), ConfigError);
}

TEST_CASE("generate writes a verified, self-consistent file set") {
    TempDir tmp;
    Json cfg;
    cfg["constants"] = {"0x33", "0x37"};
    cfg["arch"] = "sa2io";
    cfg["p"] = 8;
    cfg["iw"] = 8;
    cfg["vectors"] = 64;
    cfg["out_dir"] = tmp.path.string();
    cfg["name"] = "pairblk";
    RunResult res = capi_call(vlcm_generate, cfg);
    REQUIRE(res.exit_code == 0);

    // two-input op count: at p=8 the constants are their own coefficients,
    // and shared synthesis needs at most the 5-operation bound
    std::size_t ops = res.report["cost"]["add2"].get<std::size_t>() +
                      res.report["cost"]["sub2"].get<std::size_t>();
    CHECK(ops <= 5);
    CHECK(res.report["verified"] == true);
    CHECK(res.report["rtl_interp_checked"] == true);

    fs::path dir = tmp.path / "pairblk";
    for (const char* f : {"pairblk.v", "pairblk_tb.v", "pairblk_syn.tcl-template",
                          "pairblk_sim.sh-template", "pairblk.dot", "report.json"})
        CHECK(fs::exists(dir / f));

    // report counts must equal the shipped graph's cost
    Json on_disk = Json::parse(slurp(dir / "report.json"));
    CHECK(on_disk["cost"] == res.report["cost"]);
    std::string tcl = slurp(dir / "pairblk_syn.tcl-template");
    CHECK(tcl.find("pairblk.v") != std::string::npos);

    // the emitted directory re-verifies through the RTL interpreter
    Json vcfg;
    vcfg["dir"] = dir.string();
    vcfg["vectors"] = 40;
    RunResult vres = capi_call(vlcm_verify, vcfg);
    CHECK(vres.exit_code == 0);

    // tampering with a baked constant must flip the verdict
    Json tampered = on_disk;
    tampered["constants"][0] = "0x35";
    std::ofstream(dir / "report.json") << tampered.dump(2);
    RunResult bad = capi_call(vlcm_verify, vcfg);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("generate honors the compressor-tree resource formula") {
    TempDir tmp;
    Json cfg;
    cfg["constants"] = {"0x9a7"};
    cfg["arch"] = "ct";
    cfg["r"] = 2;
    cfg["iw"] = 8;
    cfg["vectors"] = 64;
    cfg["out_dir"] = tmp.path.string();
    RunResult res = capi_call(vlcm_generate, cfg);
    REQUIRE(res.exit_code == 0);
    CHECK(res.report["cost"]["mux"] == 4);
    CHECK(res.report["cost"]["csa"] == 2);
}

TEST_CASE("config errors exit with code 1") {
    Json cfg;
    cfg["constants"] = Json::array();
    cfg["arch"] = "sa2io";
    cfg["p"] = 8;
    RunResult res = capi_call(vlcm_generate, cfg);
    CHECK(res.exit_code == 1);
    CHECK(res.message.find("configuration error") != std::string::npos);

    vlcm_result* raw = nullptr;
    CHECK(vlcm_generate("{not json", &raw) == VLCM_ERR_CONFIG);
    CHECK(std::string(vlcm_result_message(raw)).size() > 0);
    vlcm_result_free(raw);
    CHECK(std::string(vlcm_version()) == "0.1.0");
}

TEST_CASE("repeated runs with one seed are byte-identical") {
    TempDir tmp;
    auto run_into = [&](const std::string& sub) {
        Json cfg;
        cfg["constants"] = {"0xabc123"};
        cfg["arch"] = "sacsa";
        cfg["p"] = 8;
        cfg["iw"] = 12;
        cfg["seed"] = 77;
        cfg["vectors"] = 50;
        cfg["out_dir"] = (tmp.path / sub).string();
        cfg["name"] = "rep";
        RunResult res = capi_call(vlcm_generate, cfg);
        REQUIRE(res.exit_code == 0);
        return tmp.path / sub / "rep";
    };
    fs::path a = run_into("one"), b = run_into("two");
    for (const auto& entry : fs::directory_iterator(a)) {
        fs::path other = b / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
    }
}

TEST_CASE("sweep produces one verified row per configuration") {
    TempDir tmp;
    SUBCASE("single point") {
        Json cfg;
        cfg["constants"] = {"0x9a7"};
        cfg["archs"] = {"ct"};
        cfg["r_list"] = {3};
        cfg["iw_list"] = {8};
        cfg["vectors"] = 32;
        cfg["out_dir"] = tmp.path.string();
        cfg["name"] = "single";
        RunResult res = capi_call(vlcm_sweep, cfg);
        REQUIRE(res.exit_code == 0);
        CHECK(res.report["rows"].size() == 1);
        CHECK(res.report["rows"][0]["verified"] == true);
    }
    SUBCASE("default grid structure on a bundled instance") {
        Json cfg;
        cfg["instance"] = "brainpool348";
        cfg["iw_list"] = {16};
        cfg["vectors"] = 3;
        cfg["workers"] = 2;
        cfg["out_dir"] = tmp.path.string();
        cfg["name"] = "bp348";
        RunResult res = capi_call(vlcm_sweep, cfg);
        REQUIRE(res.exit_code == 0);
        // 6 p-rows for each of the three shift-adds architectures plus 6
        // r-rows for the compressor trees
        CHECK(res.report["rows"].size() == 24);
        std::string csv = slurp(tmp.path / "bp348" / "sweep.csv");
        CHECK(csv.rfind("instance,architecture,p_or_r,iw,add2,sub2,csa,mux,fa_estimate,"
                        "stage_depth,verified,vectors,error\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);
        CHECK(fs::exists(tmp.path / "bp348" / "sweep.json"));
        for (const auto& row : res.report["rows"]) CHECK(row["verified"] == true);
    }
}

TEST_CASE("montgomery command verifies in lock-step and emits the datapath") {
    TempDir tmp;
    SUBCASE("tiny modulus runs exhaustively") {
        Json cfg;
        cfg["constants"] = {"0x3d"};  // 61
        cfg["r1"] = 2;
        cfg["arch"] = "ct";
        cfg["r"] = 2;
        cfg["out_dir"] = tmp.path.string();
        cfg["name"] = "tinymont";
        RunResult res = capi_call(vlcm_montgomery, cfg);
        REQUIRE(res.exit_code == 0);
        CHECK(res.report["exhaustive"] == true);
        CHECK(res.report["lock_step"] == true);
        CHECK(res.report["iterations"].get<unsigned>() ==
              res.report["n_w"].get<unsigned>() + 3);
        for (const char* f :
             {"tinymont.v", "tinymont_mulblk.v", "tinymont_tb.v", "report.json"})
            CHECK(fs::exists(tmp.path / "tinymont" / f));
    }
    SUBCASE("even modulus is rejected") {
        Json cfg;
        cfg["constants"] = {"0x10"};
        cfg["r1"] = 2;
        RunResult res = capi_call(vlcm_montgomery, cfg);
        CHECK(res.exit_code == 1);
    }
    SUBCASE("curve instance with random pairs") {
        Json cfg;
        cfg["instance"] = "anomalous";
        cfg["r1"] = 16;
        cfg["pairs"] = 25;
        cfg["vectors"] = 3;
        cfg["out_dir"] = tmp.path.string();
        RunResult res = capi_call(vlcm_montgomery, cfg);
        REQUIRE(res.exit_code == 0);
        CHECK(res.report["exhaustive"] == false);
        CHECK(res.report["verified_pairs"] == 25);
        CHECK(res.report["modulus_bits"] == 204);
    }
}

TEST_CASE("bundled data file agrees with the built-in instances") {
    fs::path data = fs::path(__FILE__).parent_path().parent_path() / "data" / "instances.json";
    auto from_file = load_instances_json(slurp(data));
    const auto& builtin = builtin_instances();
    REQUIRE(from_file.size() == builtin.size());
    for (std::size_t i = 0; i < builtin.size(); ++i) {
        CHECK(from_file[i].name == builtin[i].name);
        CHECK(from_file[i].bits == builtin[i].bits);
        CHECK(from_file[i].prime == builtin[i].prime);
    }
}
