#include "dfg.hpp"

#include <algorithm>
#include <sstream>

namespace vlcm {

namespace {

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Input: return "Input";
        case NodeKind::Add2: return "Add2";
        case NodeKind::Sub2: return "Sub2";
        case NodeKind::Csa: return "Csa";
        case NodeKind::Mux: return "Mux";
        case NodeKind::FinalAdder: return "FinalAdder";
        case NodeKind::Const: return "Const";
    }
    return "?";
}

bool is_stage(NodeKind k) {
    return k == NodeKind::Add2 || k == NodeKind::Sub2 || k == NodeKind::Csa ||
           k == NodeKind::FinalAdder;
}

BigUint pow2_minus_1(std::uint32_t bits) {
    BigUint v = 1;
    v <<= bits;
    return v - 1;
}

}  // namespace

NodeId Dfg::push(Node n) {
    n.id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
}

void Dfg::check_ref(ValueRef ref, const char* ctx) const {
    if (ref.node < 0 || ref.node >= static_cast<NodeId>(nodes_.size()))
        throw Error(std::string(ctx) + ": operand references unknown node " +
                    std::to_string(ref.node));
    if (ref.port == Port::Carry && nodes_[ref.node].kind != NodeKind::Csa)
        throw Error(std::string(ctx) + ": carry port taken from non-CSA node " +
                    std::to_string(ref.node));
}

NodeId Dfg::add_input(const std::string& name, std::uint32_t width) {
    if (width == 0) throw Error("input '" + name + "' must have width >= 1");
    Node n;
    n.kind = NodeKind::Input;
    n.bound_main = pow2_minus_1(width);
    NodeId id = push(std::move(n));
    inputs_.push_back({name, width, id});
    return id;
}

NodeId Dfg::add_const(const BigUint& v) {
    Node n;
    n.kind = NodeKind::Const;
    n.value = v;
    n.bound_main = v;
    return push(std::move(n));
}

NodeId Dfg::add_add2(Edge a, Edge b) {
    check_ref(a.src, "Add2");
    check_ref(b.src, "Add2");
    Node n;
    n.kind = NodeKind::Add2;
    n.operands = {a, b};
    n.bound_main = shifted_bound(a) + shifted_bound(b);
    return push(std::move(n));
}

NodeId Dfg::add_sub2(Edge minuend, Edge subtrahend, std::optional<BigUint> exact_bound) {
    check_ref(minuend.src, "Sub2");
    check_ref(subtrahend.src, "Sub2");
    subtrahend.negate = true;
    minuend.negate = false;
    Node n;
    n.kind = NodeKind::Sub2;
    n.operands = {minuend, subtrahend};
    n.bound_main = exact_bound ? *exact_bound : shifted_bound(minuend);
    return push(std::move(n));
}

NodeId Dfg::add_csa(Edge a, Edge b, Edge c) {
    check_ref(a.src, "Csa");
    check_ref(b.src, "Csa");
    check_ref(c.src, "Csa");
    BigUint ba = shifted_bound(a), bb = shifted_bound(b), bc = shifted_bound(c);
    BigUint total = ba + bb + bc;
    std::uint32_t wmax = std::max({bit_width(ba), bit_width(bb), bit_width(bc)});
    Node n;
    n.kind = NodeKind::Csa;
    n.operands = {a, b, c};
    // sum is a bitwise XOR, so it fits in the widest operand; carry is the
    // majority shifted left by one
    n.bound_main = std::min(BigUint(pow2_minus_1(wmax)), total);
    n.bound_carry = std::min(BigUint(pow2_minus_1(wmax) << 1), total);
    return push(std::move(n));
}

NodeId Dfg::add_final_adder(Edge a, Edge b, std::optional<BigUint> exact_bound) {
    check_ref(a.src, "FinalAdder");
    check_ref(b.src, "FinalAdder");
    Node n;
    n.kind = NodeKind::FinalAdder;
    n.operands = {a, b};
    n.bound_main = exact_bound ? *exact_bound : shifted_bound(a) + shifted_bound(b);
    return push(std::move(n));
}

NodeId Dfg::add_mux(const MuxSelect& sel, const std::vector<NodeId>& const_table) {
    if (sel.slice_width == 0 || sel.slice_width > 30)
        throw Error("Mux: slice width out of range");
    if (const_table.size() != (std::size_t{1} << sel.slice_width))
        throw Error("Mux: table must hold exactly 2^slice_width entries");
    if (sel.input < 0 || sel.input >= static_cast<NodeId>(nodes_.size()) ||
        nodes_[sel.input].kind != NodeKind::Input)
        throw Error("Mux: selector must reference an Input node");
    Node n;
    n.kind = NodeKind::Mux;
    n.mux = sel;
    for (NodeId c : const_table) {
        check_ref({c, Port::Out}, "Mux");
        if (nodes_[c].kind != NodeKind::Const)
            throw Error("Mux: table entries must be Const nodes");
        n.operands.push_back({{c, Port::Out}, 0, false});
        n.bound_main = std::max(n.bound_main, nodes_[c].value);
    }
    return push(std::move(n));
}

void Dfg::bind_output(const std::string& name, OutputHalf sum,
                      std::optional<OutputHalf> carry,
                      std::optional<BigUint> value_bound) {
    check_ref(sum.ref, "output");
    if (carry) check_ref(carry->ref, "output");
    BigUint b = bound(sum.ref) << sum.shift;
    if (carry) b += bound(carry->ref) << carry->shift;
    outputs_.push_back({name, sum, carry, value_bound ? *value_bound : b});
}

const InputDecl* Dfg::find_input(const std::string& name) const {
    for (const auto& in : inputs_)
        if (in.name == name) return &in;
    return nullptr;
}

const BigUint& Dfg::bound(ValueRef ref) const {
    const Node& n = nodes_.at(ref.node);
    return (ref.port == Port::Carry && n.kind == NodeKind::Csa) ? n.bound_carry : n.bound_main;
}

std::uint32_t Dfg::width(ValueRef ref) const {
    return std::max(1u, bit_width(bound(ref)));
}

std::vector<std::string> Dfg::validate() const {
    std::vector<std::string> diags;
    auto complain = [&](NodeId id, const std::string& what) {
        diags.push_back("node " + std::to_string(id) + " (" +
                        kind_name(nodes_[id].kind) + "): " + what);
    };

    for (const Node& n : nodes_) {
        std::size_t arity = n.operands.size();
        switch (n.kind) {
            case NodeKind::Input:
            case NodeKind::Const:
                if (arity != 0) complain(n.id, "leaf node has operands");
                break;
            case NodeKind::Add2:
            case NodeKind::Sub2:
            case NodeKind::FinalAdder:
                if (arity != 2) complain(n.id, "expects exactly 2 operands, has " + std::to_string(arity));
                break;
            case NodeKind::Csa:
                if (arity != 3) complain(n.id, "expects exactly 3 operands, has " + std::to_string(arity));
                break;
            case NodeKind::Mux: {
                std::size_t want = std::size_t{1} << n.mux.slice_width;
                if (arity != want)
                    complain(n.id, "expects " + std::to_string(want) + " table entries, has " +
                                       std::to_string(arity));
                if (n.mux.input < 0 || n.mux.input >= static_cast<NodeId>(nodes_.size()) ||
                    nodes_[n.mux.input].kind != NodeKind::Input)
                    complain(n.id, "selector is not an Input node");
                for (const Edge& e : n.operands)
                    if (e.src.node >= 0 && e.src.node < static_cast<NodeId>(nodes_.size()) &&
                        nodes_[e.src.node].kind != NodeKind::Const)
                        complain(n.id, "table entry is not a Const node");
                break;
            }
        }
        for (std::size_t i = 0; i < arity; ++i) {
            const Edge& e = n.operands[i];
            if (e.src.node < 0 || e.src.node >= static_cast<NodeId>(nodes_.size())) {
                complain(n.id, "operand references unknown node");
                continue;
            }
            if (e.src.port == Port::Carry && nodes_[e.src.node].kind != NodeKind::Csa)
                complain(n.id, "carry port taken from non-CSA source");
            if (e.negate && !(n.kind == NodeKind::Sub2 && i == 1))
                complain(n.id, "negate flag outside a Sub2 subtrahend slot");
            if (n.kind == NodeKind::Sub2 && i == 1 && !e.negate)
                complain(n.id, "subtrahend edge missing negate flag");
        }
    }

    // Cycle check over operand and selector dependencies (Kahn).
    std::size_t count = nodes_.size();
    std::vector<std::vector<NodeId>> users(count);
    std::vector<std::size_t> pending(count, 0);
    for (const Node& n : nodes_) {
        auto dep = [&](NodeId d) {
            if (d >= 0 && d < static_cast<NodeId>(count)) {
                users[d].push_back(n.id);
                pending[n.id]++;
            }
        };
        for (const Edge& e : n.operands) dep(e.src.node);
        if (n.kind == NodeKind::Mux) dep(n.mux.input);
    }
    std::vector<NodeId> ready;
    for (std::size_t i = 0; i < count; ++i)
        if (pending[i] == 0) ready.push_back(static_cast<NodeId>(i));
    std::size_t visited = 0;
    std::vector<NodeId> topo;
    while (!ready.empty()) {
        NodeId id = ready.back();
        ready.pop_back();
        topo.push_back(id);
        ++visited;
        for (NodeId u : users[id])
            if (--pending[u] == 0) ready.push_back(u);
    }
    bool acyclic = visited == count;
    if (!acyclic) diags.push_back("graph contains a cycle");

    // Width sufficiency: Sub2/FinalAdder bounds may carry the caller's exact
    // knowledge (tighter than interval propagation), so they are checked at
    // evaluation time instead; every other kind must cover the bound
    // propagated from its operands' stored bounds.
    if (acyclic && diags.empty()) {
        for (NodeId id : topo) {
            const Node& n = nodes_[id];
            auto sbp = [&](const Edge& e) -> BigUint { return BigUint(bound(e.src)) << e.shift; };
            BigUint want_main, want_carry;
            switch (n.kind) {
                case NodeKind::Input:
                case NodeKind::Const:
                case NodeKind::Sub2:
                case NodeKind::FinalAdder:
                    continue;
                case NodeKind::Add2:
                    want_main = sbp(n.operands[0]) + sbp(n.operands[1]);
                    break;
                case NodeKind::Csa: {
                    BigUint total = sbp(n.operands[0]) + sbp(n.operands[1]) + sbp(n.operands[2]);
                    std::uint32_t wmax = 0;
                    for (const Edge& e : n.operands)
                        wmax = std::max(wmax, bit_width(BigUint(sbp(e))));
                    want_main = std::min(pow2_minus_1(wmax), total);
                    want_carry = std::min(BigUint(pow2_minus_1(wmax) << 1), total);
                    break;
                }
                case NodeKind::Mux:
                    for (const Edge& e : n.operands)
                        want_main = std::max(want_main, nodes_[e.src.node].value);
                    break;
            }
            if (n.bound_main < want_main)
                complain(n.id, "stored width bound is smaller than the propagated bound");
            if (n.kind == NodeKind::Csa && n.bound_carry < want_carry)
                complain(n.id, "stored carry bound is smaller than the propagated bound");
        }
    }

    if (outputs_.empty()) diags.push_back("graph declares no outputs");
    for (const OutputBinding& o : outputs_) {
        auto bad = [&](const OutputHalf& h) {
            return h.ref.node < 0 || h.ref.node >= static_cast<NodeId>(nodes_.size());
        };
        if (bad(o.sum) || (o.carry && bad(*o.carry)))
            diags.push_back("output '" + o.name + "' is not bound to a valid node");
    }
    return diags;
}

CostReport Dfg::cost() const {
    CostReport r;
    std::vector<std::size_t> depth(nodes_.size(), 0);
    for (const Node& n : nodes_) {
        std::size_t in_depth = 0;
        for (const Edge& e : n.operands)
            in_depth = std::max(in_depth, depth[e.src.node]);
        if (n.kind == NodeKind::Mux) in_depth = std::max(in_depth, depth[n.mux.input]);
        depth[n.id] = in_depth + (is_stage(n.kind) ? 1 : 0);
        switch (n.kind) {
            case NodeKind::Add2: r.add2_count++; break;
            case NodeKind::Sub2: r.sub2_count++; break;
            case NodeKind::Csa:
                r.csa_count++;
                r.fa_estimate += width({n.id, Port::Sum});
                break;
            case NodeKind::Mux: r.mux_count++; break;
            case NodeKind::FinalAdder: r.final_adder_count++; break;
            default: break;
        }
    }
    for (const OutputBinding& o : outputs_) {
        r.stage_depth = std::max(r.stage_depth, depth[o.sum.ref.node]);
        if (o.carry) r.stage_depth = std::max(r.stage_depth, depth[o.carry->ref.node]);
    }
    return r;
}

Evaluator::Evaluator(const Dfg& g) : g_(g) {
    auto diags = g.validate();
    if (!diags.empty())
        throw EvalError("cannot evaluate an invalid graph: " + diags.front());
    // validate() guarantees acyclicity; recompute a topological order here.
    std::size_t count = g.nodes().size();
    std::vector<std::vector<NodeId>> users(count);
    std::vector<std::size_t> pending(count, 0);
    for (const Node& n : g.nodes()) {
        for (const Edge& e : n.operands) {
            users[e.src.node].push_back(n.id);
            pending[n.id]++;
        }
        if (n.kind == NodeKind::Mux) {
            users[n.mux.input].push_back(n.id);
            pending[n.id]++;
        }
    }
    std::vector<NodeId> ready;
    for (std::size_t i = 0; i < count; ++i)
        if (pending[i] == 0) ready.push_back(static_cast<NodeId>(i));
    while (!ready.empty()) {
        NodeId id = ready.back();
        ready.pop_back();
        order_.push_back(id);
        for (NodeId u : users[id])
            if (--pending[u] == 0) ready.push_back(u);
    }
    val_main_.resize(count);
    val_carry_.resize(count);
}

void Evaluator::run(const std::vector<BigUint>& input_values) {
    const auto& inputs = g_.inputs();
    if (input_values.size() != inputs.size())
        throw EvalError("expected " + std::to_string(inputs.size()) + " input values, got " +
                        std::to_string(input_values.size()));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (input_values[i] < 0 || bit_width(input_values[i]) > inputs[i].width)
            throw EvalError("input '" + inputs[i].name + "' value exceeds its declared width");
        val_main_[inputs[i].node] = input_values[i];
    }

    auto shifted = [&](const Edge& e, BigUint& into) {
        const BigUint& v = (e.src.port == Port::Carry) ? val_carry_[e.src.node] : val_main_[e.src.node];
        if (e.shift == 0)
            into = v;
        else
            mpz_mul_2exp(into.get_mpz_t(), v.get_mpz_t(), e.shift);
    };

    for (NodeId id : order_) {
        const Node& n = g_.nodes()[id];
        switch (n.kind) {
            case NodeKind::Input:
                break;
            case NodeKind::Const:
                val_main_[id] = n.value;
                break;
            case NodeKind::Add2:
            case NodeKind::FinalAdder:
                shifted(n.operands[0], t0_);
                shifted(n.operands[1], t1_);
                mpz_add(val_main_[id].get_mpz_t(), t0_.get_mpz_t(), t1_.get_mpz_t());
                break;
            case NodeKind::Sub2:
                shifted(n.operands[0], t0_);
                shifted(n.operands[1], t1_);
                if (t0_ < t1_)
                    throw EvalError("node " + std::to_string(id) +
                                    " (Sub2): negative intermediate value");
                mpz_sub(val_main_[id].get_mpz_t(), t0_.get_mpz_t(), t1_.get_mpz_t());
                break;
            case NodeKind::Csa: {
                shifted(n.operands[0], t0_);
                shifted(n.operands[1], t1_);
                shifted(n.operands[2], t2_);
                BigUint& s = val_main_[id];
                BigUint& c = val_carry_[id];
                mpz_xor(s.get_mpz_t(), t0_.get_mpz_t(), t1_.get_mpz_t());
                mpz_xor(s.get_mpz_t(), s.get_mpz_t(), t2_.get_mpz_t());
                // majority = (a&b) | (a&c) | (b&c), carried out shifted by 1
                mpz_and(c.get_mpz_t(), t0_.get_mpz_t(), t1_.get_mpz_t());
                mpz_and(t3_.get_mpz_t(), t0_.get_mpz_t(), t2_.get_mpz_t());
                mpz_ior(c.get_mpz_t(), c.get_mpz_t(), t3_.get_mpz_t());
                mpz_and(t3_.get_mpz_t(), t1_.get_mpz_t(), t2_.get_mpz_t());
                mpz_ior(c.get_mpz_t(), c.get_mpz_t(), t3_.get_mpz_t());
                mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), 1);
                // local invariant of the full-adder array
                t3_ = t0_ + t1_ + t2_;
                if (s + c != t3_)
                    throw EvalError("node " + std::to_string(id) +
                                    " (Csa): sum+carry does not equal the operand total");
                break;
            }
            case NodeKind::Mux: {
                const BigUint& x = val_main_[n.mux.input];
                mpz_fdiv_q_2exp(t0_.get_mpz_t(), x.get_mpz_t(), n.mux.slice_lo);
                unsigned long idx = mpz_fdiv_ui(t0_.get_mpz_t(), 1ul << n.mux.slice_width);
                val_main_[id] = g_.nodes()[n.operands[idx].src.node].value;
                break;
            }
        }
        if (val_main_[id] > n.bound_main ||
            (n.kind == NodeKind::Csa && val_carry_[id] > n.bound_carry))
            throw EvalError("node " + std::to_string(id) + " exceeded its width bound");
    }
}

BigUint Evaluator::value_of(ValueRef ref) const {
    return (ref.port == Port::Carry) ? val_carry_[ref.node] : val_main_[ref.node];
}

BigUint Evaluator::output_value(std::size_t output_index) const {
    const OutputBinding& o = g_.outputs().at(output_index);
    BigUint v = value_of(o.sum.ref) << o.sum.shift;
    if (o.carry) v += value_of(o.carry->ref) << o.carry->shift;
    return v;
}

std::map<std::string, EvalOutput> Evaluator::collect() const {
    std::map<std::string, EvalOutput> out;
    for (std::size_t i = 0; i < g_.outputs().size(); ++i) {
        const OutputBinding& o = g_.outputs()[i];
        EvalOutput eo;
        eo.value = output_value(i);
        if (o.carry) {
            eo.sum = value_of(o.sum.ref) << o.sum.shift;
            eo.carry = value_of(o.carry->ref) << o.carry->shift;
        }
        out[o.name] = std::move(eo);
    }
    return out;
}

std::map<std::string, EvalOutput> Dfg::evaluate(const std::map<std::string, BigUint>& assignment) const {
    Evaluator ev(*this);
    std::vector<BigUint> vals;
    for (const InputDecl& in : inputs_) {
        auto it = assignment.find(in.name);
        if (it == assignment.end())
            throw EvalError("input '" + in.name + "' has no assigned value");
        vals.push_back(it->second);
    }
    ev.run(vals);
    return ev.collect();
}

std::string Dfg::export_dot() const {
    std::ostringstream os;
    os << "digraph dfg {\n  rankdir=BT;\n";
    for (const Node& n : nodes_) {
        os << "  n" << n.id << " [label=\"n" << n.id << " " << kind_name(n.kind);
        if (n.kind == NodeKind::Const)
            os << "\\n" << to_hex(n.value);
        else if (n.kind == NodeKind::Csa)
            os << "\\nw=" << width({n.id, Port::Sum}) << "/" << width({n.id, Port::Carry});
        else
            os << "\\nw=" << width({n.id, Port::Out});
        if (n.kind == NodeKind::Mux)
            os << "\\nsel[" << (n.mux.slice_lo + n.mux.slice_width - 1) << ":" << n.mux.slice_lo
               << "]";
        os << "\"";
        if (n.kind == NodeKind::Input) os << " shape=invtriangle";
        if (n.kind == NodeKind::Const) os << " shape=box";
        os << "];\n";
    }
    for (const Node& n : nodes_) {
        for (std::size_t i = 0; i < n.operands.size(); ++i) {
            const Edge& e = n.operands[i];
            os << "  n" << e.src.node << " -> n" << n.id << " [label=\"";
            if (e.src.port == Port::Carry)
                os << "c";
            else if (nodes_[e.src.node].kind == NodeKind::Csa)
                os << "s";
            if (e.shift) os << "<<" << e.shift;
            if (e.negate) os << " (-)";
            os << "\"];\n";
        }
        if (n.kind == NodeKind::Mux)
            os << "  n" << n.mux.input << " -> n" << n.id << " [style=dashed];\n";
    }
    for (const OutputBinding& o : outputs_) {
        os << "  \"" << o.name << "\" [shape=doubleoctagon];\n";
        os << "  n" << o.sum.ref.node << " -> \"" << o.name << "\"";
        if (o.sum.shift) os << " [label=\"<<" << o.sum.shift << "\"]";
        os << ";\n";
        if (o.carry) {
            os << "  n" << o.carry->ref.node << " -> \"" << o.name << "\"";
            if (o.carry->shift) os << " [label=\"<<" << o.carry->shift << "\"]";
            os << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace vlcm
