#include "emit.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace vlcm {

namespace {

std::string hex_literal(unsigned width, const BigUint& v) {
    return std::to_string(std::max(1u, width)) + "'h" + v.get_str(16);
}

std::string zero_bits(unsigned n) { return std::to_string(n) + "'b0"; }

std::string wire_name(NodeId id) { return "w" + std::to_string(id); }

std::string ref_name(const Dfg& g, ValueRef ref) {
    const Node& n = g.nodes()[ref.node];
    if (n.kind == NodeKind::Input) {
        for (const InputDecl& in : g.inputs())
            if (in.node == ref.node) return in.name;
    }
    if (n.kind == NodeKind::Csa)
        return wire_name(ref.node) + ((ref.port == Port::Carry) ? "_c" : "_s");
    return wire_name(ref.node);
}

// value << shift as a zero-padding concatenation
std::string shifted_expr(const Dfg& g, const Edge& e) {
    std::string base = ref_name(g, e.src);
    if (e.shift == 0) return base;
    return "{" + base + ", " + zero_bits(e.shift) + "}";
}

std::string shifted_expr(const Dfg& g, const OutputHalf& h) {
    return shifted_expr(g, Edge{h.ref, h.shift, false});
}

std::string range_decl(unsigned width) {
    return "[" + std::to_string(std::max(1u, width) - 1) + ":0]";
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

}  // namespace

bool is_valid_identifier(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string emit_rtl(const Dfg& g, const EmitConfig& cfg) {
    if (!is_valid_identifier(cfg.module_name))
        throw ConfigError("'" + cfg.module_name + "' is not a valid module name");
    auto diags = g.validate();
    if (!diags.empty()) throw Error("cannot emit an invalid graph: " + diags.front());

    // Const nodes are inlined into MUX case arms; emit a wire only for consts
    // feeding ordinary operations.
    std::vector<bool> const_needs_wire(g.nodes().size(), false);
    for (const Node& n : g.nodes()) {
        if (n.kind == NodeKind::Mux) continue;
        for (const Edge& e : n.operands)
            if (g.nodes()[e.src.node].kind == NodeKind::Const)
                const_needs_wire[e.src.node] = true;
    }
    for (const OutputBinding& o : g.outputs()) {
        if (g.nodes()[o.sum.ref.node].kind == NodeKind::Const)
            const_needs_wire[o.sum.ref.node] = true;
        if (o.carry && g.nodes()[o.carry->ref.node].kind == NodeKind::Const)
            const_needs_wire[o.carry->ref.node] = true;
    }

    std::ostringstream os;
    os << "// " << cfg.module_name << " -- multiplierless constant multiplication block\n";
    os << "// machine generated; do not edit\n";
    os << "module " << cfg.module_name << " (\n";
    bool first = true;
    for (const InputDecl& in : g.inputs()) {
        os << (first ? "" : ",\n") << "    input  wire " << range_decl(in.width) << " " << in.name;
        first = false;
    }
    for (const OutputBinding& o : g.outputs()) {
        if (o.carry) {
            unsigned ws = bit_width(BigUint(g.bound(o.sum.ref) << o.sum.shift));
            unsigned wc = bit_width(BigUint(g.bound(o.carry->ref) << o.carry->shift));
            os << ",\n    output wire " << range_decl(ws) << " " << o.name << "_s";
            os << ",\n    output wire " << range_decl(wc) << " " << o.name << "_c";
        } else {
            unsigned w = bit_width(BigUint(g.bound(o.sum.ref) << o.sum.shift));
            os << ",\n    output wire " << range_decl(w) << " " << o.name;
        }
    }
    os << "\n);\n\n";

    for (const Node& n : g.nodes()) {
        switch (n.kind) {
            case NodeKind::Input:
                break;
            case NodeKind::Const:
                if (const_needs_wire[n.id]) {
                    unsigned w = g.width({n.id, Port::Out});
                    os << "  wire " << range_decl(w) << " " << wire_name(n.id) << " = "
                       << hex_literal(w, n.value) << ";\n";
                }
                break;
            case NodeKind::Add2:
            case NodeKind::FinalAdder:
                os << "  wire " << range_decl(g.width({n.id, Port::Out})) << " "
                   << wire_name(n.id) << " = " << shifted_expr(g, n.operands[0]) << " + "
                   << shifted_expr(g, n.operands[1]) << ";\n";
                break;
            case NodeKind::Sub2:
                os << "  wire " << range_decl(g.width({n.id, Port::Out})) << " "
                   << wire_name(n.id) << " = " << shifted_expr(g, n.operands[0]) << " - "
                   << shifted_expr(g, n.operands[1]) << ";\n";
                break;
            case NodeKind::Csa: {
                std::string a = shifted_expr(g, n.operands[0]);
                std::string b = shifted_expr(g, n.operands[1]);
                std::string c = shifted_expr(g, n.operands[2]);
                os << "  wire " << range_decl(g.width({n.id, Port::Sum})) << " "
                   << wire_name(n.id) << "_s = " << a << " ^ " << b << " ^ " << c << ";\n";
                os << "  wire " << range_decl(g.width({n.id, Port::Carry})) << " "
                   << wire_name(n.id) << "_c = {(" << a << " & " << b << ") | (" << a << " & "
                   << c << ") | (" << b << " & " << c << "), 1'b0};\n";
                break;
            }
            case NodeKind::Mux: {
                unsigned w = g.width({n.id, Port::Out});
                unsigned lo = n.mux.slice_lo;
                unsigned r = n.mux.slice_width;
                unsigned iw = 0;
                std::string sel_src;
                for (const InputDecl& in : g.inputs())
                    if (in.node == n.mux.input) {
                        iw = in.width;
                        sel_src = in.name;
                    }
                std::string sel = wire_name(n.id) + "_sel";
                os << "  wire " << range_decl(r) << " " << sel << " = ";
                if (lo + r <= iw) {
                    os << sel_src << "[" << (lo + r - 1) << ":" << lo << "];\n";
                } else {
                    // ragged top slice: pad the missing high bits with zeros
                    unsigned have = iw - lo;
                    os << "{" << zero_bits(r - have) << ", " << sel_src << "[" << (iw - 1) << ":"
                       << lo << "]};\n";
                }
                os << "  reg " << range_decl(w) << " " << wire_name(n.id) << ";\n";
                os << "  always @(*) begin\n    case (" << sel << ")\n";
                for (std::size_t j = 0; j < n.operands.size(); ++j) {
                    const BigUint& v = g.nodes()[n.operands[j].src.node].value;
                    os << "      " << r << "'d" << j << ": " << wire_name(n.id) << " = "
                       << hex_literal(w, v) << ";\n";
                }
                os << "    endcase\n  end\n";
                break;
            }
        }
    }

    os << "\n";
    for (const OutputBinding& o : g.outputs()) {
        if (o.carry) {
            os << "  assign " << o.name << "_s = " << shifted_expr(g, o.sum) << ";\n";
            os << "  assign " << o.name << "_c = " << shifted_expr(g, *o.carry) << ";\n";
        } else {
            os << "  assign " << o.name << " = " << shifted_expr(g, o.sum) << ";\n";
        }
    }
    os << "\nendmodule\n";
    return os.str();
}

std::string emit_testbench(const Dfg& g, const EmitConfig& cfg) {
    if (cfg.vectors < 1) throw ConfigError("testbench vector count must be at least 1");
    auto diags = g.validate();
    if (!diags.empty()) throw Error("cannot emit an invalid graph: " + diags.front());

    Evaluator eval(g);
    SplitMix64 rng(cfg.seed);

    std::ostringstream os;
    os << "// self-checking testbench for " << cfg.module_name << " (" << cfg.vectors
       << " seeded random vectors, expected values precomputed)\n";
    os << "`timescale 1ns/1ps\n";
    os << "module " << cfg.module_name << "_tb;\n\n";

    for (const InputDecl& in : g.inputs())
        os << "  reg " << range_decl(in.width) << " " << in.name << ";\n";
    for (const OutputBinding& o : g.outputs()) {
        if (o.carry) {
            unsigned ws = bit_width(BigUint(g.bound(o.sum.ref) << o.sum.shift));
            unsigned wc = bit_width(BigUint(g.bound(o.carry->ref) << o.carry->shift));
            unsigned wsum = std::max(1u, bit_width(o.value_bound));
            os << "  wire " << range_decl(ws) << " " << o.name << "_s;\n";
            os << "  wire " << range_decl(wc) << " " << o.name << "_c;\n";
            os << "  wire " << range_decl(wsum) << " " << o.name << "_sum = " << o.name
               << "_s + " << o.name << "_c;\n";
        } else {
            unsigned w = bit_width(BigUint(g.bound(o.sum.ref) << o.sum.shift));
            os << "  wire " << range_decl(w) << " " << o.name << ";\n";
        }
    }

    os << "\n  " << cfg.module_name << " dut (";
    bool first = true;
    for (const InputDecl& in : g.inputs()) {
        os << (first ? "" : ", ") << "." << in.name << "(" << in.name << ")";
        first = false;
    }
    for (const OutputBinding& o : g.outputs()) {
        if (o.carry)
            os << ", ." << o.name << "_s(" << o.name << "_s), ." << o.name << "_c(" << o.name
               << "_c)";
        else
            os << ", ." << o.name << "(" << o.name << ")";
    }
    os << ");\n\n  integer errors;\n\n  initial begin\n    errors = 0;\n";

    std::vector<BigUint> inputs(g.inputs().size());
    for (std::uint32_t k = 0; k < cfg.vectors; ++k) {
        for (std::size_t i = 0; i < inputs.size(); ++i)
            inputs[i] = random_bits(rng, g.inputs()[i].width);
        eval.run(inputs);
        os << "    ";
        for (std::size_t i = 0; i < inputs.size(); ++i)
            os << g.inputs()[i].name << " = " << hex_literal(g.inputs()[i].width, inputs[i])
               << "; ";
        os << "#1;\n";
        for (std::size_t oi = 0; oi < g.outputs().size(); ++oi) {
            const OutputBinding& o = g.outputs()[oi];
            BigUint expected = eval.output_value(oi);
            std::string observed = o.carry ? o.name + "_sum" : o.name;
            unsigned w = o.carry ? std::max(1u, bit_width(o.value_bound))
                                 : bit_width(BigUint(g.bound(o.sum.ref) << o.sum.shift));
            os << "    if (" << observed << " !== " << hex_literal(w, expected)
               << ") begin errors = errors + 1; $display(\"FAIL vector " << k << " output "
               << o.name << "\"); end\n";
        }
    }

    os << "    if (errors == 0) $display(\"PASS: " << cfg.vectors
       << " vectors matched\");\n    else $display(\"FAIL: %0d mismatches\", errors);\n"
       << "    $finish;\n  end\n\nendmodule\n";
    return os.str();
}

ScriptBundle emit_scripts(const EmitConfig& cfg) {
    if (!is_valid_identifier(cfg.module_name))
        throw ConfigError("'" + cfg.module_name + "' is not a valid module name");
    ScriptBundle out;
    out.synth_tcl = replace_all(
        "# synthesis script template for {{MODULE}}\n"
        "# Fill in the library below, then sweep CLOCK_PERIOD_PS with a binary\n"
        "# search between DELAY_LOWER_PS and DELAY_UPPER_PS until the smallest\n"
        "# period closes timing without negative slack.\n"
        "set TOP {{MODULE}}\n"
        "set RTL_FILES {{{RTL_FILES}}}\n"
        "set LIB_FILE {{LIB_FILE}}\n"
        "set CLOCK_PERIOD_PS {{CLOCK_PERIOD_PS}}\n"
        "set DELAY_LOWER_PS 0\n"
        "set DELAY_UPPER_PS 80000\n"
        "read_libs ${LIB_FILE}\n"
        "read_hdl ${RTL_FILES}\n"
        "elaborate ${TOP}\n"
        "define_clock -period ${CLOCK_PERIOD_PS} -name clk [clock_ports]\n"
        "syn_generic\n"
        "syn_map\n"
        "syn_opt\n"
        "report_area   > ${TOP}_area.rpt\n"
        "report_timing > ${TOP}_timing.rpt\n"
        "report_power  > ${TOP}_power.rpt\n"
        "write_hdl     > ${TOP}_netlist.v\n",
        "{{MODULE}}", cfg.module_name);
    out.sim_sh = replace_all(
        "#!/bin/sh\n"
        "# simulation script template for {{MODULE}}\n"
        "# any Verilog-2001 simulator works; Icarus Verilog shown\n"
        "set -e\n"
        "SIM=\"${SIM:-iverilog}\"\n"
        "\"$SIM\" -o {{MODULE}}_sim {{RTL_FILES}} {{MODULE}}_tb.v\n"
        "vvp {{MODULE}}_sim\n",
        "{{MODULE}}", cfg.module_name);
    return out;
}

namespace {

struct MontWidths {
    unsigned aw, bw, sw, tw, pw, vs, vc;
    bool has_carry;
    std::string vs_port, vc_port;
};

MontWidths mont_widths(const MontDatapath& dp) {
    const MontgomeryParams& prm = dp.params();
    const MontConfig& cfg = dp.config();
    const Dfg& g = dp.vlcm_graph();
    const OutputBinding& o = g.outputs().front();
    MontWidths w{};
    w.aw = cfg.r1 * (prm.n_w + 3);
    w.bw = bit_width(prm.m_bar) + 1;
    w.sw = bit_width(prm.m_bar) + cfg.r1 + 4;
    w.vs = bit_width(BigUint(g.bound(o.sum.ref) << o.sum.shift));
    w.has_carry = o.carry.has_value();
    w.vc = w.has_carry ? bit_width(BigUint(g.bound(o.carry->ref) << o.carry->shift)) : 1;
    w.tw = std::max({w.sw, w.vs, w.vc}) + 2;
    w.pw = cfg.r1 + w.bw;
    w.vs_port = o.name + (w.has_carry ? "_s" : "");
    w.vc_port = o.name + "_c";
    return w;
}

}  // namespace

std::string emit_mont_rtl(const MontDatapath& dp, const EmitConfig& cfg) {
    if (!is_valid_identifier(cfg.module_name))
        throw ConfigError("'" + cfg.module_name + "' is not a valid module name");
    const MontConfig& mc = dp.config();
    const MontgomeryParams& prm = dp.params();
    MontWidths w = mont_widths(dp);
    unsigned iter = prm.iterations();

    std::ostringstream os;
    os << "// " << cfg.module_name
       << " -- word-serial constant-time Montgomery multiplier\n"
       << "// one recurrence iteration per clock; the constant multiple comes from\n"
       << "// the multiplierless block " << cfg.module_name << "_mulblk\n"
       << "// machine generated; do not edit\n";
    os << "module " << cfg.module_name << " (\n"
       << "    input  wire clk,\n    input  wire rst,\n    input  wire start,\n"
       << "    input  wire " << range_decl(w.aw) << " a_in,\n"
       << "    input  wire " << range_decl(w.bw) << " b_in,\n"
       << "    output reg  busy,\n    output reg  done,\n"
       << "    output wire " << range_decl(w.sw) << " s_out,\n"
       << "    output wire " << range_decl(w.sw) << " c_out\n);\n\n";
    os << "  localparam integer ITERATIONS = " << iter << ";\n\n";
    os << "  reg " << range_decl(w.aw) << " a_shift;\n";
    os << "  reg " << range_decl(w.bw) << " b_reg;\n";
    os << "  reg " << range_decl(w.sw) << " s_sum;\n";
    os << "  reg " << range_decl(w.sw) << " s_carry;\n";
    os << "  reg [31:0] count;\n\n";
    os << "  // q_i = S mod 2^r1, from the low redundant words only\n";
    os << "  wire " << range_decl(mc.r1) << " q = s_sum[" << (mc.r1 - 1)
       << ":0] + s_carry[" << (mc.r1 - 1) << ":0];\n\n";
    os << "  wire " << range_decl(w.vs) << " v_s;\n";
    if (w.has_carry) os << "  wire " << range_decl(w.vc) << " v_c;\n";
    os << "  " << cfg.module_name << "_mulblk mbar_mul (.x(q), ." << w.vs_port << "(v_s)";
    if (w.has_carry) os << ", ." << w.vc_port << "(v_c)";
    os << ");\n\n";
    os << "  wire " << range_decl(mc.r1) << " a_i = a_shift[" << (mc.r1 - 1) << ":0];\n";
    os << "  wire " << range_decl(w.pw) << " prod = a_i * b_reg;\n";
    os << "  // multiplication & accumulation plus 4:2 compression, behavioral\n";
    os << "  wire " << range_decl(w.tw) << " t = s_sum + s_carry + v_s"
       << (w.has_carry ? " + v_c" : "") << ";\n\n";
    os << "  always @(posedge clk) begin\n"
       << "    if (rst) begin\n"
       << "      busy <= 1'b0; done <= 1'b0; count <= 0;\n"
       << "      a_shift <= 0; b_reg <= 0; s_sum <= 0; s_carry <= 0;\n"
       << "    end else if (start && !busy) begin\n"
       << "      busy <= 1'b1; done <= 1'b0; count <= 0;\n"
       << "      a_shift <= a_in; b_reg <= b_in; s_sum <= 0; s_carry <= 0;\n"
       << "    end else if (busy) begin\n"
       << "      s_sum <= t[" << (w.tw - 1) << ":" << mc.r1 << "];\n"
       << "      s_carry <= prod;\n"
       << "      a_shift <= {" << zero_bits(mc.r1) << ", a_shift[" << (w.aw - 1) << ":"
       << mc.r1 << "]};\n"
       << "      count <= count + 1;\n"
       << "      if (count == ITERATIONS - 1) begin busy <= 1'b0; done <= 1'b1; end\n"
       << "    end else begin\n      done <= 1'b0;\n    end\n  end\n\n";
    os << "  assign s_out = s_sum;\n  assign c_out = s_carry;\n\nendmodule\n";
    return os.str();
}

std::string emit_mont_testbench(const MontDatapath& dp, const EmitConfig& cfg) {
    if (cfg.vectors < 1) throw ConfigError("testbench vector count must be at least 1");
    MontWidths w = mont_widths(dp);
    const MontgomeryParams& prm = dp.params();
    BigUint limit = prm.m_bar << 1;
    SplitMix64 rng(cfg.seed);

    std::ostringstream os;
    os << "// self-checking testbench for " << cfg.module_name << " (" << cfg.vectors
       << " seeded random operand pairs)\n";
    os << "`timescale 1ns/1ps\n";
    os << "module " << cfg.module_name << "_tb;\n\n";
    os << "  reg clk, rst, start;\n";
    os << "  reg " << range_decl(w.aw) << " a_in;\n";
    os << "  reg " << range_decl(w.bw) << " b_in;\n";
    os << "  wire busy, done;\n";
    os << "  wire " << range_decl(w.sw) << " s_out, c_out;\n";
    os << "  wire " << range_decl(w.sw + 1) << " collapsed = s_out + c_out;\n";
    os << "  integer errors;\n\n";
    os << "  " << cfg.module_name
       << " dut (.clk(clk), .rst(rst), .start(start), .a_in(a_in), .b_in(b_in),\n"
       << "       .busy(busy), .done(done), .s_out(s_out), .c_out(c_out));\n\n";
    os << "  initial begin\n    clk = 1'b0;\n    forever #5 clk = ~clk;\n  end\n\n";
    os << "  initial begin\n    errors = 0;\n    rst = 1'b1; start = 1'b0; a_in = 0; b_in = 0;\n"
       << "    @(posedge clk); #1; rst = 1'b0;\n";

    for (std::uint32_t k = 0; k < cfg.vectors; ++k) {
        BigUint a = random_below(rng, limit);
        BigUint b = random_below(rng, limit);
        BigUint expected = mont_multiply_reference(a, b, prm);
        os << "    a_in = " << hex_literal(w.aw, a) << ";\n";
        os << "    b_in = " << hex_literal(w.bw, b) << ";\n";
        os << "    start = 1'b1; @(posedge clk); #1; start = 1'b0;\n";
        os << "    wait (done === 1'b1); #1;\n";
        os << "    if (collapsed !== " << hex_literal(w.sw + 1, expected)
           << ") begin errors = errors + 1; $display(\"FAIL pair " << k << "\"); end\n";
        os << "    @(posedge clk); #1;\n";
    }

    os << "    if (errors == 0) $display(\"PASS: " << cfg.vectors
       << " pairs matched\");\n    else $display(\"FAIL: %0d mismatches\", errors);\n"
       << "    $finish;\n  end\n\nendmodule\n";
    return os.str();
}

}  // namespace vlcm
