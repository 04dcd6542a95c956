#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "optimize.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace vlcm;

namespace {

// Checks every output of an optimizer graph against constant * x on random
// vectors (the transforms must never change values, only structure).
void check_semantics(const Dfg& g, const std::vector<BigUint>& constants, unsigned iw,
                     int vectors = 50, std::uint64_t seed = 1234) {
    Evaluator ev(g);
    SplitMix64 rng(seed);
    for (int k = 0; k < vectors; ++k) {
        BigUint x = random_bits(rng, iw);
        ev.run({x});
        for (std::size_t i = 0; i < constants.size(); ++i)
            REQUIRE(ev.output_value(i) == constants[i] * x);
    }
}

// ---- oracle: exhaustive search over extraction orders (all-positive lists)

using BfTerm = std::tuple<int, int>;  // (source id, shift)
using BfList = std::vector<BfTerm>;

std::vector<BfTerm> bf_pattern(const BfTerm& a, const BfTerm& b) {
    int base = std::min(std::get<1>(a), std::get<1>(b));
    std::vector<BfTerm> key = {{std::get<0>(a), std::get<1>(a) - base},
                               {std::get<0>(b), std::get<1>(b) - base}};
    std::sort(key.begin(), key.end());
    return key;
}

// greedy non-overlapping replacement of one pattern in one list
BfList bf_replace(const BfList& list, const std::vector<BfTerm>& key, int new_src) {
    BfList out;
    std::vector<bool> used(list.size(), false);
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (used[i]) continue;
        for (std::size_t j = i + 1; j < list.size(); ++j) {
            if (used[j]) continue;
            if (bf_pattern(list[i], list[j]) == key) {
                used[i] = used[j] = true;
                int base = std::min(std::get<1>(list[i]), std::get<1>(list[j]));
                out.push_back({new_src, base});
                break;
            }
        }
    }
    for (std::size_t i = 0; i < list.size(); ++i)
        if (!used[i]) out.push_back(list[i]);
    return out;
}

// minimum 2-input operation count over every extraction order
std::size_t bf_cse2_min(const std::vector<BfList>& lists, int next_src) {
    std::size_t best = 0;
    for (const BfList& l : lists) best += l.empty() ? 0 : l.size() - 1;

    std::set<std::vector<BfTerm>> keys;
    std::map<std::vector<BfTerm>, int> count;
    for (const BfList& l : lists)
        for (std::size_t i = 0; i < l.size(); ++i)
            for (std::size_t j = i + 1; j < l.size(); ++j) count[bf_pattern(l[i], l[j])]++;
    for (const auto& [key, c] : count)
        if (c >= 2) keys.insert(key);

    for (const auto& key : keys) {
        std::vector<BfList> next;
        std::size_t replaced = 0;
        for (const BfList& l : lists) {
            BfList r = bf_replace(l, key, next_src);
            replaced += l.size() - r.size();
            next.push_back(std::move(r));
        }
        if (replaced < 2) continue;  // the pattern must occur at least twice
        best = std::min(best, 1 + bf_cse2_min(next, next_src + 1));
    }
    return best;
}

BfList bf_from_constant(const BigUint& c) {
    BfList out;
    auto d = binary_digits(c);
    for (std::size_t k = 0; k < d.digits.size(); ++k)
        if (d.digits[k]) out.push_back({0, static_cast<int>(k)});
    return out;
}

// ---- oracle: exhaustive bounded A-operation reachability

std::set<BigUint> one_op_closure(const std::set<BigUint>& ready, const BigUint& limit) {
    std::set<BigUint> out;
    for (const BigUint& a : ready)
        for (const BigUint& b : ready)
            for (unsigned s = 1; (a << s) <= (limit << 1); ++s) {
                BigUint v = a << s;
                BigUint c1 = v + b;
                if (c1 <= limit && mpz_odd_p(c1.get_mpz_t())) out.insert(c1);
                BigUint c2 = (v > b) ? BigUint(v - b) : BigUint(b - v);
                if (c2 != 0 && c2 <= limit && mpz_odd_p(c2.get_mpz_t())) out.insert(c2);
            }
    return out;
}

}  // namespace

TEST_CASE("digit-based recoding with 2-input operations") {
    // 51x and 55x under binary digits cost 4-1 and 5-1 operations
    Dfg g = dbr_2input({51, 55}, Repr::Binary, 8);
    CHECK(g.cost().two_input_ops() == 7);
    check_semantics(g, {51, 55}, 8);

    // a power of two is a pure wire shift
    Dfg g2 = dbr_2input({BigUint(1) << 9}, Repr::Binary, 8);
    CHECK(g2.cost().two_input_ops() == 0);
    check_semantics(g2, {BigUint(1) << 9}, 8);

    // signed-digit recoding costs nnz(csd)-1
    unsigned nnz45 = csd_recode(45).nonzero_count();
    Dfg g3 = dbr_2input({45}, Repr::Csd, 12);
    CHECK(g3.cost().two_input_ops() == nnz45 - 1);
    check_semantics(g3, {45}, 12);

    CHECK_THROWS_AS(dbr_2input({}, Repr::Binary, 8), ConfigError);
    CHECK_THROWS_AS(dbr_2input({0}, Repr::Binary, 8), ConfigError);
}

TEST_CASE("digit-based recoding with CSAs") {
    Dfg g = dbr_csa({51, 55}, Repr::Binary, 8);
    CHECK(g.cost().csa_count == 5);  // 2 for 51's four digits, 3 for 55's five
    check_semantics(g, {51, 55}, 8);

    // two digits need no reduction: the pair is (x<<1, x)
    Dfg g2 = dbr_csa({3}, Repr::Binary, 8);
    CHECK(g2.cost().csa_count == 0);
    auto out = g2.evaluate({{"x", BigUint(5)}});
    CHECK(out.at("y0").value == 15);
    CHECK(out.at("y0").sum.has_value());

    // four digits need exactly 2 CSAs
    Dfg g3 = dbr_csa({0b1111}, Repr::Binary, 8);
    CHECK(g3.cost().csa_count == 2);

    CHECK_THROWS_AS(dbr_csa({51}, Repr::Csd, 8), ConfigError);
}

TEST_CASE("2-term extraction beats plain recoding on the shared pattern pair") {
    Dfg g = cse_2term({51, 55}, Repr::Binary, 8);
    std::size_t mine = g.cost().two_input_ops();
    CHECK(mine <= 5);
    check_semantics(g, {51, 55}, 8);

    // exhaustive enumeration of extraction orders bounds what is possible
    std::size_t oracle = bf_cse2_min({bf_from_constant(51), bf_from_constant(55)}, 1);
    CHECK(oracle == 3);
    CHECK(mine >= oracle);
    CHECK(mine == 3);
}

TEST_CASE("2-term extraction edge cases") {
    // no repeated pattern: one operation
    Dfg g = cse_2term({(BigUint(1) << 6) + (BigUint(1) << 2)}, Repr::Binary, 8);
    CHECK(g.cost().two_input_ops() == 1);

    // duplicated constants share everything
    for (BigUint c : {BigUint(51), BigUint(0b1011011), BigUint(45)}) {
        Dfg one = cse_2term({c}, Repr::Binary, 10);
        Dfg two = cse_2term({c, c}, Repr::Binary, 10);
        CHECK(one.cost().two_input_ops() == two.cost().two_input_ops());
        check_semantics(two, {c, c}, 10);
    }
}

TEST_CASE("3-term extraction with sum/carry chaining") {
    Dfg g = cse_3term({51, 55}, 8);
    CHECK(g.cost().csa_count <= 3);  // beats the 5-CSA digit recoding
    check_semantics(g, {51, 55}, 8);

    // a single 3-digit constant needs exactly one CSA
    Dfg g2 = cse_3term({0b10101}, 8);
    CHECK(g2.cost().csa_count == 1);

    // without a repeated pattern the count matches plain recoding
    for (BigUint c : {BigUint(0b10101), BigUint(0b110001), BigUint(0b1011)}) {
        Dfg a = cse_3term({c}, 8);
        Dfg b = dbr_csa({c}, Repr::Binary, 8);
        CHECK(a.cost().csa_count == b.cost().csa_count);
    }
}

TEST_CASE("graph-based synthesis fixtures") {
    // {51, 55}: 3 = 1<<1+1, 51 = 3<<4+3, 55 = 51+1<<2
    Dfg g = gb_mcm({51, 55}, 8);
    CHECK(g.cost().two_input_ops() == 3);
    check_semantics(g, {51, 55}, 8);

    // 7 = 8 - 1
    Dfg g2 = gb_mcm({7}, 8);
    CHECK(g2.cost().two_input_ops() == 1);
    CHECK(g2.cost().sub2_count == 1);

    // 45 is reachable in two operations and not in one
    std::set<BigUint> ready = {1};
    auto r1 = one_op_closure(ready, BigUint(1) << 11);
    CHECK(!r1.count(45));
    std::set<BigUint> ready2 = ready;
    for (const BigUint& v : r1) ready2.insert(v);
    auto r2 = one_op_closure(ready2, BigUint(1) << 11);
    CHECK(r2.count(45));
    Dfg g3 = gb_mcm({45}, 8);
    CHECK(g3.cost().two_input_ops() == 2);
    check_semantics(g3, {45}, 8);

    // duplicates and even targets fold into shifts of the same node
    Dfg g4 = gb_mcm({45, 90, 45}, 8);
    CHECK(g4.cost().two_input_ops() == 2);
    check_semantics(g4, {45, 90, 45}, 8);

    // width guard names the cure
    std::vector<BigUint> wide = {(BigUint(1) << 29) + 1};
    try {
        gb_mcm(wide, 8);
        FAIL("expected a width error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("partition width") != std::string::npos);
    }
}

TEST_CASE("planned operations are valid A-operations over ready values") {
    SplitMix64 rng(99);
    for (int round = 0; round < 40; ++round) {
        std::vector<BigUint> targets;
        int n = 1 + static_cast<int>(rng.next() % 4);
        for (int i = 0; i < n; ++i) {
            BigUint t = random_bits(rng, 8 + static_cast<unsigned>(rng.next() % 21)) | 1;
            if (t == 1) t = 3;
            targets.push_back(t);
        }
        std::set<BigUint> avail = {1};
        std::size_t dbr_cost = 0;
        std::set<BigUint> seen;
        for (const BigUint& t : targets)
            if (seen.insert(t).second) dbr_cost += csd_recode(t).nonzero_count() - 1;
        auto plan = gb_plan(targets);
        for (const GbOp& op : plan) {
            REQUIRE(avail.count(op.lhs));
            REQUIRE(avail.count(op.rhs));
            CHECK(((op.lhs_shift == 0) != (op.rhs_shift == 0)));
            BigUint lhs = op.lhs << op.lhs_shift;
            BigUint rhs = op.rhs << op.rhs_shift;
            BigUint v = op.subtract ? BigUint(lhs - rhs) : BigUint(lhs + rhs);
            CHECK(v == op.result);
            CHECK(v > 0);
            CHECK(mpz_odd_p(v.get_mpz_t()));
            avail.insert(op.result);
        }
        for (const BigUint& t : targets) CHECK(avail.count(t));
        CHECK(plan.size() <= dbr_cost);
    }
}

TEST_CASE("CSA tree reduction counts max(k-2, 0)") {
    for (unsigned k = 1; k <= 32; ++k) {
        Dfg g;
        McmContext ctx = make_mcm_context(g, "x", 8);
        TermList terms;
        BigUint total = 0;
        for (unsigned i = 0; i < k; ++i) {
            terms.terms.push_back({{ctx.x, Port::Out}, i, 1});
            total += BigUint(1) << i;
        }
        auto [pair, count] = csa_tree_reduce(g, terms);
        CHECK(count == (k >= 2 ? k - 2 : 0));
        CHECK(g.cost().csa_count == count);
        g.bind_output("y0", pair.sum, pair.carry, BigUint(total * 255));
        Evaluator ev(g);
        SplitMix64 rng(5);
        for (int v = 0; v < 20; ++v) {
            BigUint x = random_bits(rng, 8);
            ev.run({x});
            CHECK(ev.output_value(0) == total * x);
        }
    }
}

TEST_CASE("monotone improvement and semantic preservation on random sets") {
    SplitMix64 rng(2024);
    for (int round = 0; round < 50; ++round) {
        unsigned n = 2 + static_cast<unsigned>(rng.next() % 3);
        std::vector<BigUint> constants;
        for (unsigned i = 0; i < n; ++i) {
            unsigned bits = 8 + static_cast<unsigned>(rng.next() % 21);
            BigUint c = random_exact_width(rng, bits);
            constants.push_back(c);
        }
        unsigned iw = 8 + static_cast<unsigned>(rng.next() % 9);

        for (Repr repr : {Repr::Binary, Repr::Csd}) {
            Dfg dbr = dbr_2input(constants, repr, iw);
            Dfg cse = cse_2term(constants, repr, iw);
            CHECK(cse.cost().two_input_ops() <= dbr.cost().two_input_ops());
            check_semantics(dbr, constants, iw, 10, rng.next());
            check_semantics(cse, constants, iw, 10, rng.next());
        }
        Dfg dbrc = dbr_csa(constants, Repr::Binary, iw);
        Dfg cse3 = cse_3term(constants, iw);
        CHECK(cse3.cost().csa_count <= dbrc.cost().csa_count);
        check_semantics(dbrc, constants, iw, 10, rng.next());
        check_semantics(cse3, constants, iw, 10, rng.next());

        Dfg gb = gb_mcm(constants, iw);
        CHECK(gb.cost().two_input_ops() <=
              dbr_2input(constants, Repr::Csd, iw).cost().two_input_ops());
        check_semantics(gb, constants, iw, 10, rng.next());
    }
}
