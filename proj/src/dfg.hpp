#pragma once

#include "bigint.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace vlcm {

// Dataflow-graph IR shared by every architecture. Nodes compute unsigned
// values; shifts live on edges (wires), so a shift never costs hardware.
// A CSA has three inputs and two outputs (sum, carry); the carry output is
// stored already shifted left by one, so that value(sum) + value(carry)
// always equals the sum of the three operands.

enum class NodeKind { Input, Add2, Sub2, Csa, Mux, FinalAdder, Const };
enum class Port : std::uint8_t { Out = 0, Sum = 0, Carry = 1 };

using NodeId = std::int32_t;

struct ValueRef {
    NodeId node = -1;
    Port port = Port::Out;

    friend bool operator==(const ValueRef& a, const ValueRef& b) {
        return a.node == b.node && a.port == b.port;
    }
    friend bool operator<(const ValueRef& a, const ValueRef& b) {
        return std::tie(a.node, a.port) < std::tie(b.node, b.port);
    }
};

struct Edge {
    ValueRef src;
    std::uint32_t shift = 0;  // multiply by 2^shift, wires only
    bool negate = false;      // legal only as the subtrahend of a Sub2
};

struct MuxSelect {
    NodeId input = -1;  // selector source, must be an Input node
    std::uint32_t slice_lo = 0;
    std::uint32_t slice_width = 0;  // table holds 1 << slice_width entries
};

struct Node {
    NodeId id = -1;
    NodeKind kind = NodeKind::Input;
    std::vector<Edge> operands;
    MuxSelect mux;        // Mux only
    BigUint value;        // Const only
    BigUint bound_main;   // exact upper bound of Out/Sum value
    BigUint bound_carry;  // exact upper bound of Carry value (Csa only)
};

// One output value; a plain node reference plus a free wire shift.
struct OutputHalf {
    ValueRef ref;
    std::uint32_t shift = 0;
};

// Declared graph output: single value, or a redundant sum+carry pair that
// collapses by addition.
struct OutputBinding {
    std::string name;
    OutputHalf sum;
    std::optional<OutputHalf> carry;
    BigUint value_bound;  // exact bound of the collapsed value
};

struct InputDecl {
    std::string name;
    std::uint32_t width = 0;
    NodeId node = -1;
};

struct CostReport {
    std::size_t add2_count = 0;
    std::size_t sub2_count = 0;
    std::size_t csa_count = 0;
    std::size_t mux_count = 0;
    std::size_t final_adder_count = 0;
    std::size_t fa_estimate = 0;   // sum over CSA nodes of their sum widths
    std::size_t stage_depth = 0;   // Add2/Sub2/Csa/FinalAdder each count one

    std::size_t two_input_ops() const { return add2_count + sub2_count; }
};

struct EvalOutput {
    BigUint value;  // collapsed (sum + carry)
    std::optional<BigUint> sum;
    std::optional<BigUint> carry;
};

class Dfg {
  public:
    NodeId add_input(const std::string& name, std::uint32_t width);
    NodeId add_const(const BigUint& v);
    NodeId add_add2(Edge a, Edge b);
    // exact_bound: tight bound on the difference when the caller knows it
    // (builders track the realized constant); defaults to the minuend bound.
    NodeId add_sub2(Edge minuend, Edge subtrahend, std::optional<BigUint> exact_bound = {});
    NodeId add_csa(Edge a, Edge b, Edge c);
    NodeId add_final_adder(Edge a, Edge b, std::optional<BigUint> exact_bound = {});
    NodeId add_mux(const MuxSelect& sel, const std::vector<NodeId>& const_table);

    void bind_output(const std::string& name, OutputHalf sum,
                     std::optional<OutputHalf> carry = {},
                     std::optional<BigUint> value_bound = {});

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<InputDecl>& inputs() const { return inputs_; }
    const std::vector<OutputBinding>& outputs() const { return outputs_; }
    const InputDecl* find_input(const std::string& name) const;

    const BigUint& bound(ValueRef ref) const;
    std::uint32_t width(ValueRef ref) const;  // max(1, bit_width(bound))
    BigUint shifted_bound(const Edge& e) const { return bound(e.src) << e.shift; }

    // Empty means structurally sound: acyclic, arities correct, widths
    // sufficient, outputs bound, ports/negates legal.
    std::vector<std::string> validate() const;

    CostReport cost() const;

    std::map<std::string, EvalOutput> evaluate(const std::map<std::string, BigUint>& assignment) const;

    std::string export_dot() const;

    // Test hook: structural mutation to exercise validator diagnostics.
    std::vector<Node>& mutable_nodes() { return nodes_; }

  private:
    NodeId push(Node n);
    void check_ref(ValueRef ref, const char* ctx) const;

    std::vector<Node> nodes_;
    std::vector<InputDecl> inputs_;
    std::vector<OutputBinding> outputs_;
};

// Precomputes evaluation order and reuses buffers; the hot path for
// multi-vector verification runs.
class Evaluator {
  public:
    explicit Evaluator(const Dfg& g);

    // Assignment values must satisfy value < 2^width for each input.
    void run(const std::vector<BigUint>& input_values);
    std::map<std::string, EvalOutput> collect() const;

    BigUint value_of(ValueRef ref) const;
    BigUint output_value(std::size_t output_index) const;  // collapsed

    std::size_t input_count() const { return g_.inputs().size(); }

  private:
    const Dfg& g_;
    std::vector<NodeId> order_;
    std::vector<BigUint> val_main_;
    std::vector<BigUint> val_carry_;
    BigUint t0_, t1_, t2_, t3_;  // scratch
};

}  // namespace vlcm
