#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "architectures.hpp"

#include <set>

using namespace vlcm;

namespace {

void check_outputs(const Dfg& g, const std::vector<BigUint>& constants, unsigned iw,
                   int vectors, std::uint64_t seed) {
    Evaluator ev(g);
    SplitMix64 rng(seed);
    for (int k = 0; k < vectors; ++k) {
        BigUint x = random_bits(rng, iw);
        ev.run({x});
        for (std::size_t i = 0; i < constants.size(); ++i)
            REQUIRE(ev.output_value(i) == constants[i] * x);
    }
}

VlcmSpec spec_of(std::vector<BigUint> constants, Arch arch, unsigned p_or_r, unsigned iw,
                 OutputForm form = OutputForm::SumCarry) {
    VlcmSpec s;
    s.constants = std::move(constants);
    s.arch = arch;
    (arch == Arch::Ct ? s.r : s.p) = p_or_r;
    s.iw = iw;
    s.output_form = form;
    return s;
}

}  // namespace

TEST_CASE("partitioning slices from the least significant bit") {
    Partition part = partition_constant(parse_hex("0xABCD"), 8);
    REQUIRE(part.coefficients.size() == 2);
    CHECK(part.coefficients[0] == 0xCD);
    CHECK(part.coefficients[1] == 0xAB);
    CHECK(part.shifts == std::vector<std::uint32_t>{0, 8});
    CHECK(std::set<BigUint>(part.unique_coefficients.begin(), part.unique_coefficients.end()) ==
          std::set<BigUint>{0xAB, 0xCD});

    // zeros dropped, duplicates stored once; d = ceil(bit_width/p) slices
    Partition rep = partition_constant(parse_hex("0x00CD00CD"), 8);
    CHECK(rep.coefficients == std::vector<BigUint>{0xCD, 0, 0xCD});
    CHECK(rep.unique_coefficients == std::vector<BigUint>{0xCD});
    REQUIRE(rep.equation.size() == 2);
    CHECK(rep.equation[0].second == 0);
    CHECK(rep.equation[1].second == 16);

    CHECK_THROWS_AS(partition_constant(BigUint(0), 8), ConfigError);
    CHECK_THROWS_AS(partition_constant(BigUint(5), 1), ConfigError);
}

TEST_CASE("partition reassembly identity on random values") {
    SplitMix64 rng(31);
    for (unsigned p = 8; p <= 28; p += 4) {
        for (int i = 0; i < 60; ++i) {
            BigUint lc = random_exact_width(rng, 384);
            Partition part = partition_constant(lc, p);
            BigUint sum = 0;
            for (std::size_t j = 0; j < part.coefficients.size(); ++j)
                sum += part.coefficients[j] << (j * p);
            REQUIRE(sum == lc);
        }
    }
}

TEST_CASE("shift-adds with 2-input operations") {
    // degenerate one-coefficient partition equals plain synthesis of {51}
    Dfg g = build_sa_2io(spec_of({51}, Arch::Sa2io, 8, 8));
    CHECK(g.cost().two_input_ops() <= 3);
    Evaluator ev(g);
    for (unsigned x = 0; x < 256; ++x) {
        ev.run({BigUint(x)});
        REQUIRE(ev.output_value(0) == 51 * x);
    }

    // powers of two as coefficients need no stage-2 operations
    BigUint lc = (BigUint(1) << 17) + (BigUint(1) << 9) + 1;  // slices 2,2,1 at p=8
    Dfg g2 = build_sa_2io(spec_of({lc}, Arch::Sa2io, 8, 8));
    CHECK(g2.cost().sub2_count == 0);
    CHECK(g2.cost().two_input_ops() == 2);  // only the equation adder tree
    check_outputs(g2, {lc}, 8, 100, 77);
}

TEST_CASE("shift-adds with CSAs produces pair outputs") {
    SplitMix64 rng(41);
    BigUint lc = random_exact_width(rng, 200);
    Dfg g = build_sa_csa(spec_of({lc}, Arch::SaCsa, 8, 16));
    CHECK(g.outputs().front().carry.has_value());
    CHECK(g.cost().csa_count > 0);
    CHECK(g.cost().two_input_ops() == 0);  // every stage uses CSAs only
    check_outputs(g, {lc}, 16, 200, 43);
}

TEST_CASE("hybrid: single-valued coefficients, CSA finals") {
    // three distinct odd coefficients, no repeated pattern: the one final
    // equation has 3 single-valued terms and needs exactly 1 CSA
    BigUint lc = parse_hex("0x030507");
    Dfg g = build_sa_hybrid(spec_of({lc}, Arch::SaHybrid, 8, 12));
    CHECK(g.cost().csa_count == 1);
    check_outputs(g, {lc}, 12, 200, 45);

    // k single-valued terms cost k-2 CSAs
    BigUint lc5 = parse_hex("0x0305070b0d");
    Dfg g5 = build_sa_hybrid(spec_of({lc5}, Arch::SaHybrid, 8, 12));
    CHECK(g5.cost().csa_count == 3);
    check_outputs(g5, {lc5}, 12, 200, 46);
}

TEST_CASE("compressor-tree resource formula") {
    // iw=8, r=2: four 4-input MUXes and 2 CSAs per constant
    BigUint lc = parse_hex("0x9a7");
    Dfg g = build_ct(spec_of({lc}, Arch::Ct, 2, 8));
    CHECK(g.cost().mux_count == 4);
    CHECK(g.cost().csa_count == 2);
    check_outputs(g, {lc}, 8, 100, 51);

    for (unsigned r = 2; r <= 7; ++r) {
        Dfg gr = build_ct(spec_of({lc}, Arch::Ct, r, 16));
        unsigned slices = (16 + r - 1) / r;
        CHECK(gr.cost().mux_count == slices);
        CHECK(gr.cost().csa_count == slices - 2);
        // ragged final slice included
        check_outputs(gr, {lc}, 16, 150, 52 + r);
    }

    CHECK_THROWS_AS(build_ct(spec_of({lc}, Arch::Ct, 9, 8)), ConfigError);
}

TEST_CASE("architecture equivalence, exhaustive at iw 12") {
    std::vector<BigUint> constants = {parse_hex("0x9a7"), parse_hex("0x33")};
    std::vector<Dfg> graphs;
    graphs.push_back(build_sa_2io(spec_of(constants, Arch::Sa2io, 4, 12)));
    graphs.push_back(build_sa_csa(spec_of(constants, Arch::SaCsa, 4, 12)));
    graphs.push_back(build_sa_hybrid(spec_of(constants, Arch::SaHybrid, 4, 12)));
    graphs.push_back(build_ct(spec_of(constants, Arch::Ct, 3, 12)));
    std::vector<Evaluator> evs;
    for (const Dfg& g : graphs) {
        REQUIRE(g.validate().empty());
        evs.emplace_back(g);
    }
    for (unsigned x = 0; x < (1u << 12); ++x) {
        for (std::size_t a = 0; a < evs.size(); ++a) {
            evs[a].run({BigUint(x)});
            for (std::size_t i = 0; i < constants.size(); ++i)
                REQUIRE(evs[a].output_value(i) == constants[i] * x);
        }
    }
}

TEST_CASE("single output form differs by exactly one final adder per pair") {
    SplitMix64 rng(71);
    BigUint lc = random_exact_width(rng, 120);
    for (Arch arch : {Arch::SaCsa, Arch::SaHybrid, Arch::Ct}) {
        unsigned param = (arch == Arch::Ct) ? 3 : 8;
        Dfg pair_g = build_vlcm(spec_of({lc}, arch, param, 12, OutputForm::SumCarry));
        Dfg single_g = build_vlcm(spec_of({lc}, arch, param, 12, OutputForm::Single));
        std::size_t pairs = 0;
        for (const OutputBinding& o : pair_g.outputs())
            if (o.carry) ++pairs;
        CHECK(single_g.cost().final_adder_count == pair_g.cost().final_adder_count + pairs);
        CHECK(!single_g.outputs().front().carry.has_value());
        check_outputs(pair_g, {lc}, 12, 60, 81);
        check_outputs(single_g, {lc}, 12, 60, 81);
        // identical collapsed values on the same stimuli
        Evaluator ep(pair_g), es(single_g);
        for (int k = 0; k < 50; ++k) {
            BigUint x = random_bits(rng, 12);
            ep.run({x});
            es.run({x});
            CHECK(ep.output_value(0) == es.output_value(0));
        }
    }
}

TEST_CASE("CSA totals add up across the three stages") {
    // replicate the builder's stages by hand and confirm the additive
    // accounting: coefficient CSAs + equation-extraction CSAs + final
    // reduction CSAs equals the cost report of the whole graph
    std::vector<BigUint> constants = {parse_hex("0x13150013"), parse_hex("0x15000013")};
    unsigned p = 8, iw = 8;

    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", iw);
    std::set<BigUint> uniq;
    std::vector<std::vector<std::pair<BigUint, std::uint32_t>>> eqs;
    for (const BigUint& lc : constants) {
        Partition part = partition_constant(lc, p);
        std::vector<std::pair<BigUint, std::uint32_t>> eq;
        for (const auto& [c, shift] : part.equation) {
            unsigned tz;
            BigUint f = odd_part(c, tz);
            eq.push_back({f, shift + tz});
            uniq.insert(f);
        }
        eqs.push_back(eq);
    }
    auto pairs = cse3_realize(ctx, std::vector<BigUint>(uniq.begin(), uniq.end()));
    std::size_t stage2 = g.cost().csa_count;

    std::vector<TermList> lists;
    for (const auto& eq : eqs) {
        TermList list;
        for (const auto& [f, shift] : eq) {
            const SumCarry& sc = pairs.at(f);
            list.terms.push_back({sc.sum.ref, shift + sc.sum.shift, 1});
            if (sc.carry) list.terms.push_back({sc.carry->ref, shift + sc.carry->shift, 1});
        }
        lists.push_back(list);
    }
    extract_3term(ctx, lists);
    std::size_t stage3_shared = g.cost().csa_count - stage2;

    std::size_t finals = 0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        std::size_t n = 0;
        SumCarry sc = csa_reduce(ctx, lists[i], &n);
        finals += n;
        g.bind_output("y" + std::to_string(i), sc.sum, sc.carry,
                      BigUint(constants[i] * ctx.x_max));
    }
    CHECK(g.cost().csa_count == stage2 + stage3_shared + finals);
    CHECK(stage2 > 0);
    CHECK(finals > 0);

    // and the hand-staged graph matches the packaged builder
    Dfg packaged = build_sa_csa(spec_of(constants, Arch::SaCsa, p, iw));
    CHECK(packaged.cost().csa_count == g.cost().csa_count);
    check_outputs(g, constants, iw, 100, 505);
}

TEST_CASE("parameter validation") {
    std::vector<BigUint> c = {BigUint(51)};
    CHECK_THROWS_AS(build_sa_2io(spec_of(c, Arch::Sa2io, 0, 8)), ConfigError);
    CHECK_THROWS_AS(build_ct(spec_of(c, Arch::Ct, 0, 8)), ConfigError);
    VlcmSpec both = spec_of(c, Arch::Sa2io, 8, 8);
    both.r = 2;
    CHECK_THROWS_AS(build_vlcm(both), ConfigError);
    VlcmSpec ct_with_p = spec_of(c, Arch::Ct, 2, 8);
    ct_with_p.p = 8;
    CHECK_THROWS_AS(build_vlcm(ct_with_p), ConfigError);
    CHECK(arch_from_name("sacsa") == Arch::SaCsa);
    CHECK_THROWS_AS(arch_from_name("bogus"), ConfigError);
}

TEST_CASE("builders handle wide constants across the parameter grid") {
    SplitMix64 rng(101);
    BigUint lc = random_exact_width(rng, 256);
    for (unsigned p : {8u, 16u, 28u}) {
        for (Arch arch : {Arch::Sa2io, Arch::SaCsa, Arch::SaHybrid}) {
            Dfg g = build_vlcm(spec_of({lc}, arch, p, 16));
            REQUIRE(g.validate().empty());
            check_outputs(g, {lc}, 16, 40, 300 + p);
        }
    }
    for (unsigned r : {2u, 5u, 7u}) {
        Dfg g = build_vlcm(spec_of({lc}, Arch::Ct, r, 16));
        REQUIRE(g.validate().empty());
        check_outputs(g, {lc}, 16, 40, 400 + r);
    }
}
