#pragma once

#include "dfg.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace vlcm {

enum class Repr { Binary, Csd };

// One addend of an expression: sign * value(src) * 2^shift.
struct Term {
    ValueRef src;
    std::uint32_t shift = 0;
    std::int8_t sign = 1;
};

struct TermList {
    std::vector<Term> terms;
};

// A value kept as an unadded sum/carry pair; carry is absent when the value
// is already a single node.
struct SumCarry {
    OutputHalf sum;
    std::optional<OutputHalf> carry;
};

// Shared builder state for the optimizers: the graph under construction, its
// single variable input, and the known multiple-of-x weight per node output
// (tracked wherever the flow keeps values single, i.e. 2-input flows).
struct McmContext {
    Dfg* g = nullptr;
    NodeId x = -1;
    unsigned iw = 0;
    BigUint x_max;
    std::map<ValueRef, BigUint> weight;
};

McmContext make_mcm_context(Dfg& g, const std::string& input_name, unsigned iw);

// Digit decomposition of constant*x as terms over the input variable.
TermList digit_terms(const McmContext& ctx, const BigUint& c, Repr repr);

// ---- whole-graph operations -------------------------------------------

// One 2-input operation per nonzero digit beyond the first, per constant.
Dfg dbr_2input(const std::vector<BigUint>& constants, Repr repr, unsigned iw);

// Per constant with k nonzero digits: max(k-2, 0) CSAs reducing the digit
// terms to a sum/carry pair. Only the binary representation keeps all CSA
// operands non-negative; Csd is rejected.
Dfg dbr_csa(const std::vector<BigUint>& constants, Repr repr, unsigned iw);

// Iterative most-common 2-term extraction, then balanced adder trees.
Dfg cse_2term(const std::vector<BigUint>& constants, Repr repr, unsigned iw);

// Iterative most-common 3-term extraction with sum/carry chaining, then CSA
// tree reduction; outputs are sum/carry pairs.
Dfg cse_3term(const std::vector<BigUint>& constants, unsigned iw);

// Graph-based multiple-constant synthesis over odd fundamentals. Targets
// whose odd part exceeds kGbWidthLimit bits are rejected.
Dfg gb_mcm(const std::vector<BigUint>& targets, unsigned iw);

inline constexpr unsigned kGbWidthLimit = 28;

// Reduces k terms to a pair using exactly max(k-2, 0) CSAs, consuming the
// smallest-width terms first. Returns the pair and the CSA count.
std::pair<SumCarry, std::size_t> csa_tree_reduce(Dfg& g, const TermList& terms);

// ---- engine entry points used by the architecture builders -------------

// Realizes each odd value (>= 3) with 2-input operations, sharing
// intermediates across all of them. Value 1 is the input wire.
std::map<BigUint, ValueRef> gb_realize(McmContext& ctx, const std::vector<BigUint>& odd_values);

// Realizes each odd value as a sum/carry pair via shared 3-term extraction
// over the binary digit lists.
std::map<BigUint, SumCarry> cse3_realize(McmContext& ctx, const std::vector<BigUint>& odd_values);

// In-place extraction passes over equation term lists.
void extract_2term(McmContext& ctx, std::vector<TermList>& lists);
void extract_3term(McmContext& ctx, std::vector<TermList>& lists);

// Balanced 2-input summation of a term list (requires tracked weights for
// every source). Signed terms are summed as a positive tree minus a negative
// tree, keeping every intermediate non-negative.
OutputHalf sum_terms_tree(McmContext& ctx, const TermList& terms);

SumCarry csa_reduce(McmContext& ctx, const TermList& terms, std::size_t* csa_count = nullptr);

// ---- planning-level helpers (exposed for tests) -------------------------

// A planned 2-input operation: result = minuend<<m_shift (-|+) other<<o_shift,
// all values odd multiples of the eventual input.
struct GbOp {
    BigUint result;
    BigUint lhs;
    unsigned lhs_shift = 0;
    BigUint rhs;
    unsigned rhs_shift = 0;
    bool subtract = false;  // result = lhs<<lhs_shift - rhs<<rhs_shift
};

// Value-level planner behind gb_realize; returns ops in emission order.
std::vector<GbOp> gb_plan(const std::vector<BigUint>& odd_targets);

}  // namespace vlcm
