#pragma once

#include "montgomery.hpp"

#include <string>

namespace vlcm {

struct EmitConfig {
    std::string module_name = "vlcm_block";
    std::uint32_t vectors = 10000;  // self-checking testbench vector count
    std::uint64_t seed = 1;
};

// Behavioral Verilog-2001 for a validated graph. One wire per node output at
// its exact computed width; shifts appear as zero-padding concatenations;
// MUX tables are emitted as constant case arms so synthesis can fold them.
// Byte-identical across runs for the same graph and config.
std::string emit_rtl(const Dfg& g, const EmitConfig& cfg);

// Self-checking testbench: seeded pseudo-random stimuli with expected values
// precomputed by the graph evaluator and baked in as literals, so the check
// never relies on a simulator-side multiplier. Pair outputs are compared
// after addition.
std::string emit_testbench(const Dfg& g, const EmitConfig& cfg);

struct ScriptBundle {
    std::string synth_tcl;  // <module>_syn.tcl-template
    std::string sim_sh;     // <module>_sim.sh-template
};

ScriptBundle emit_scripts(const EmitConfig& cfg);

// Sequential wrapper around the word-serial multiplier: one algorithm
// iteration per clock, the m_bar multiple coming from a separately emitted
// multiplierless block (module name <module>_mulblk).
std::string emit_mont_rtl(const MontDatapath& dp, const EmitConfig& cfg);
std::string emit_mont_testbench(const MontDatapath& dp, const EmitConfig& cfg);

bool is_valid_identifier(const std::string& name);

}  // namespace vlcm
