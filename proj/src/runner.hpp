#pragma once

#include "architectures.hpp"
#include "instances.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vlcm {

using Json = nlohmann::ordered_json;

enum class Command { Generate, Sweep, Montgomery, Verify };

// Mirrors the JSON run configuration accepted by every command (and produced
// by the command-line flags).
struct RunConfig {
    // constants source: exactly one of these three
    std::vector<std::string> constants_hex;
    std::string constants_file;
    std::string instance;

    std::string arch;  // sa2io | sacsa | sahybrid | ct
    unsigned p = 0;
    unsigned r = 0;
    unsigned iw = 16;
    std::string output = "sumcarry";  // single | sumcarry
    std::uint64_t seed = 1;
    std::optional<std::uint32_t> vectors;  // default depends on the command
    std::string out_dir = ".";
    std::string name;

    // sweep
    std::vector<std::string> archs;
    std::vector<unsigned> p_list;
    std::vector<unsigned> r_list;
    std::vector<unsigned> iw_list;
    unsigned workers = 0;  // 0 -> hardware concurrency
    std::string format = "csv";

    // montgomery
    unsigned r1 = 16;
    unsigned r2 = 0;  // 0 -> r1
    std::uint32_t pairs = 1000;

    // verify
    std::string dir;
};

RunConfig parse_run_config(const Json& doc);

struct RunResult {
    int exit_code = 0;  // 0 ok, 1 config error, 2 verification failure
    std::string message;
    Json report;
};

RunResult run_command(Command cmd, const RunConfig& cfg);

// Resolved helpers shared with tests.
std::vector<BigUint> resolve_constants(const RunConfig& cfg);
VlcmSpec vlcm_spec_from_config(const RunConfig& cfg, const std::vector<BigUint>& constants);

}  // namespace vlcm
