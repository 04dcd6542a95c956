#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dfg.hpp"

using namespace vlcm;

namespace {

Edge e(NodeId n, std::uint32_t shift = 0, Port port = Port::Out) {
    return Edge{{n, port}, shift, false};
}

// the 3-CSA realization of {51x, 55x}: shared CSA(x, x<<1, x<<4), then
// CSA(S,C,x<<5) completes 51x and CSA(S51,C51,x<<2) completes 55x (55 = 51+4)
Dfg fig_3csa_graph(unsigned iw) {
    Dfg g;
    NodeId x = g.add_input("x", iw);
    NodeId a = g.add_csa(e(x), e(x, 1), e(x, 4));
    NodeId b = g.add_csa(e(a, 0, Port::Sum), e(a, 0, Port::Carry), e(x, 5));
    NodeId c = g.add_csa(e(b, 0, Port::Sum), e(b, 0, Port::Carry), e(x, 2));
    BigUint xmax = (BigUint(1) << iw) - 1;
    g.bind_output("y0", {{b, Port::Sum}, 0}, OutputHalf{{b, Port::Carry}, 0}, BigUint(51 * xmax));
    g.bind_output("y1", {{c, Port::Sum}, 0}, OutputHalf{{c, Port::Carry}, 0}, BigUint(55 * xmax));
    return g;
}

}  // namespace

TEST_CASE("identity graph evaluates to its input") {
    Dfg g;
    NodeId x = g.add_input("x", 8);
    g.bind_output("y0", {{x, Port::Out}, 0});
    CHECK(g.validate().empty());
    auto out = g.evaluate({{"x", BigUint(9)}});
    CHECK(out.at("y0").value == 9);
    CostReport c = g.cost();
    CHECK(c.add2_count == 0);
    CHECK(c.sub2_count == 0);
    CHECK(c.csa_count == 0);
    CHECK(c.mux_count == 0);
    CHECK(c.fa_estimate == 0);
    CHECK(c.stage_depth == 0);
}

TEST_CASE("CSA full-adder truth row") {
    Dfg g;
    NodeId x = g.add_input("x", 1);
    NodeId csa = g.add_csa(e(x), e(x), e(x));
    g.bind_output("y0", {{csa, Port::Sum}, 0}, OutputHalf{{csa, Port::Carry}, 0});
    auto out = g.evaluate({{"x", BigUint(1)}});
    CHECK(*out.at("y0").sum == 1);
    CHECK(*out.at("y0").carry == 2);
    CHECK(out.at("y0").value == 3);
}

TEST_CASE("three-CSA graph computes 51x and 55x") {
    Dfg g = fig_3csa_graph(8);
    CHECK(g.validate().empty());
    CHECK(g.cost().csa_count == 3);
    auto out = g.evaluate({{"x", BigUint(1)}});
    CHECK(out.at("y0").value == 51);
    CHECK(out.at("y1").value == 55);
    // bit exact over the full input range
    Evaluator ev(g);
    for (unsigned x = 0; x < 256; ++x) {
        ev.run({BigUint(x)});
        CHECK(ev.output_value(0) == 51 * x);
        CHECK(ev.output_value(1) == 55 * x);
    }
}

TEST_CASE("CSA local invariant on random operands") {
    Dfg g;
    NodeId x = g.add_input("x", 32);
    NodeId add = g.add_add2(e(x, 3), e(x));          // 9x
    NodeId csa = g.add_csa(e(add, 1), e(x, 7), e(add));  // 18x + 128x + 9x
    g.bind_output("y0", {{csa, Port::Sum}, 0}, OutputHalf{{csa, Port::Carry}, 0});
    Evaluator ev(g);
    SplitMix64 rng(3);
    for (int i = 0; i < 500; ++i) {
        BigUint x_val = random_bits(rng, 32);
        ev.run({x_val});
        // sum+carry == operand total is asserted inside the evaluator; check
        // the collapsed value too
        CHECK(ev.output_value(0) == 155 * x_val);
    }
}

TEST_CASE("validator diagnostics") {
    SUBCASE("well-formed graph is clean") {
        CHECK(fig_3csa_graph(8).validate().empty());
    }
    SUBCASE("arity violation") {
        Dfg g = fig_3csa_graph(8);
        g.mutable_nodes()[1].operands.pop_back();
        auto diags = g.validate();
        REQUIRE(!diags.empty());
        CHECK(diags.front().find("3 operands") != std::string::npos);
    }
    SUBCASE("cycle detection") {
        Dfg g = fig_3csa_graph(8);
        // make the first CSA depend on the last one
        g.mutable_nodes()[1].operands[0].src = {3, Port::Sum};
        auto diags = g.validate();
        bool has_cycle = false;
        for (const auto& d : diags)
            if (d.find("cycle") != std::string::npos) has_cycle = true;
        CHECK(has_cycle);
    }
    SUBCASE("width bound tampering is caught") {
        Dfg g = fig_3csa_graph(8);
        g.mutable_nodes()[1].bound_main = 1;
        CHECK(!g.validate().empty());
    }
    SUBCASE("negate outside a subtrahend slot") {
        Dfg g = fig_3csa_graph(8);
        g.mutable_nodes()[1].operands[0].negate = true;
        CHECK(!g.validate().empty());
    }
}

TEST_CASE("evaluation errors") {
    Dfg g;
    NodeId x = g.add_input("x", 8);
    Edge sub{{x, Port::Out}, 1, false};
    NodeId s = g.add_sub2(e(x), sub, BigUint(255));  // x - 2x, claimed non-negative
    g.bind_output("y0", {{s, Port::Out}, 0});
    CHECK_THROWS_AS(g.evaluate({{"x", BigUint(1)}}), EvalError);       // underflow
    CHECK_THROWS_AS(g.evaluate({{"z", BigUint(1)}}), EvalError);       // unassigned input
    CHECK_THROWS_AS(g.evaluate({{"x", BigUint(300)}}), EvalError);     // exceeds width
    // x = 0 keeps the subtraction at zero, which is fine
    CHECK(g.evaluate({{"x", BigUint(0)}}).at("y0").value == 0);
}

TEST_CASE("sub2 exact bounds narrow the width") {
    Dfg g;
    NodeId x = g.add_input("x", 8);
    Edge sub{{x, Port::Out}, 0, false};
    NodeId s = g.add_sub2(e(x, 2), sub, BigUint(3 * 255));  // 4x - x = 3x
    CHECK(g.width({s, Port::Out}) == 10);
    g.bind_output("y0", {{s, Port::Out}, 0});
    CHECK(g.validate().empty());
    CHECK(g.evaluate({{"x", BigUint(255)}}).at("y0").value == 765);
}

TEST_CASE("mux selects table entries by input slice") {
    Dfg g;
    NodeId x = g.add_input("x", 8);
    std::vector<NodeId> table;
    for (int j = 0; j < 4; ++j) table.push_back(g.add_const(BigUint(100 * j)));
    NodeId m = g.add_mux({x, 2, 2}, table);  // selects on x[3:2]
    g.bind_output("y0", {{m, Port::Out}, 0});
    CHECK(g.validate().empty());
    CHECK(g.evaluate({{"x", BigUint(0b0000)}}).at("y0").value == 0);
    CHECK(g.evaluate({{"x", BigUint(0b0100)}}).at("y0").value == 100);
    CHECK(g.evaluate({{"x", BigUint(0b1011)}}).at("y0").value == 200);
    CHECK(g.evaluate({{"x", BigUint(0b1101)}}).at("y0").value == 300);
    CHECK(g.cost().mux_count == 1);
    CHECK(g.cost().stage_depth == 0);  // a mux is not an adder stage

    CHECK_THROWS_AS(g.add_mux({x, 0, 2}, std::vector<NodeId>{table[0]}), Error);
}

TEST_CASE("cost counting and fa estimate") {
    Dfg g = fig_3csa_graph(8);
    CostReport c = g.cost();
    CHECK(c.csa_count == 3);
    CHECK(c.stage_depth == 3);  // the three CSAs chain
    std::size_t expect = 0;
    for (const Node& n : g.nodes())
        if (n.kind == NodeKind::Csa) expect += g.width({n.id, Port::Sum});
    CHECK(c.fa_estimate == expect);
    CHECK(c.fa_estimate > 0);
}

TEST_CASE("appending a final adder never lowers the stage depth") {
    Dfg g = fig_3csa_graph(8);
    std::size_t before = g.cost().stage_depth;
    NodeId fa = g.add_final_adder(e(1, 0, Port::Sum), e(1, 0, Port::Carry));
    g.bind_output("y2", {{fa, Port::Out}, 0});
    CHECK(g.cost().stage_depth >= before);
    CHECK(g.cost().final_adder_count == 1);
}

TEST_CASE("dot export is deterministic and labels kinds") {
    Dfg g = fig_3csa_graph(8);
    std::string a = g.export_dot();
    std::string b = g.export_dot();
    CHECK(a == b);
    std::size_t count = 0, pos = 0;
    while ((pos = a.find("Csa", pos)) != std::string::npos) {
        ++count;
        pos += 3;
    }
    CHECK(count == 3);

    Dfg pass;
    NodeId x = pass.add_input("x", 4);
    pass.bind_output("y0", {{x, Port::Out}, 0});
    std::string dot = pass.export_dot();
    CHECK(dot.find("Input") != std::string::npos);
    CHECK(dot.find("y0") != std::string::npos);
}
