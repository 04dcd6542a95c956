#include "architectures.hpp"

#include <algorithm>
#include <set>

namespace vlcm {

const char* arch_name(Arch a) {
    switch (a) {
        case Arch::Sa2io: return "sa2io";
        case Arch::SaCsa: return "sacsa";
        case Arch::SaHybrid: return "sahybrid";
        case Arch::Ct: return "ct";
    }
    return "?";
}

Arch arch_from_name(const std::string& name) {
    if (name == "sa2io") return Arch::Sa2io;
    if (name == "sacsa") return Arch::SaCsa;
    if (name == "sahybrid") return Arch::SaHybrid;
    if (name == "ct") return Arch::Ct;
    throw ConfigError("unknown architecture '" + name + "' (expected sa2io|sacsa|sahybrid|ct)");
}

Partition partition_constant(const BigUint& lc, unsigned p) {
    if (lc == 0) throw ConfigError("cannot partition the constant 0");
    if (p < 2) throw ConfigError("partition width p must be at least 2");
    Partition out;
    out.source = lc;
    out.p = p;
    unsigned w = bit_width(lc);
    unsigned d = (w + p - 1) / p;
    BigUint mask = (BigUint(1) << p) - 1;
    std::set<BigUint> seen;
    for (unsigned j = 0; j < d; ++j) {
        BigUint c = (lc >> (j * p)) & mask;
        out.coefficients.push_back(c);
        if (c != 0) {
            std::uint32_t shift = j * p;
            out.shifts.push_back(shift);
            out.equation.push_back({c, shift});
            if (seen.insert(c).second) out.unique_coefficients.push_back(c);
        }
    }
    std::sort(out.unique_coefficients.begin(), out.unique_coefficients.end());
    return out;
}

namespace {

void check_spec(const VlcmSpec& spec, bool wants_p) {
    if (spec.constants.empty()) throw ConfigError("constant list is empty");
    for (const BigUint& c : spec.constants)
        if (c == 0) throw ConfigError("constant 0 cannot be realized");
    if (spec.iw == 0) throw ConfigError("input bit-width iw must be at least 1");
    if (wants_p) {
        if (spec.p < 2) throw ConfigError("shift-adds architectures need a partition width p >= 2");
        if (spec.r != 0)
            throw ConfigError("parameter r applies only to the compressor-tree architecture");
    } else {
        if (spec.r < 1) throw ConfigError("the compressor-tree architecture needs r >= 1");
        if (spec.r > 30) throw ConfigError("input partition width r is too large");
        if (spec.r > spec.iw) throw ConfigError("r must not exceed the input bit-width iw");
        if (spec.p != 0)
            throw ConfigError("parameter p applies only to the shift-adds architectures");
    }
}

std::string output_name(std::size_t i) { return "y" + std::to_string(i); }

// Binds one result, collapsing the pair through a final carry-propagate
// adder when a single-valued output is requested.
void bind_result(McmContext& ctx, const std::string& name, SumCarry sc, const BigUint& lc,
                 OutputForm form) {
    BigUint bound = lc * ctx.x_max;
    if (!sc.carry || form == OutputForm::SumCarry) {
        if (sc.carry)
            ctx.g->bind_output(name, sc.sum, sc.carry, bound);
        else
            ctx.g->bind_output(name, sc.sum, std::nullopt, bound);
        return;
    }
    std::uint32_t base = std::min(sc.sum.shift, sc.carry->shift);
    NodeId fa = ctx.g->add_final_adder(Edge{sc.sum.ref, sc.sum.shift - base, false},
                                       Edge{sc.carry->ref, sc.carry->shift - base, false},
                                       BigUint(bound >> base));
    ctx.g->bind_output(name, {{fa, Port::Out}, base}, std::nullopt, bound);
}

// Stage-1 helper shared by the shift-adds builders: partition every constant
// and normalize coefficients to odd fundamentals, folding the 2^k parts into
// the equation shifts.
struct SaStage1 {
    std::vector<BigUint> odd_values;  // deduplicated odd coefficients (incl. 1 when used)
    // per constant: (odd coefficient, total shift)
    std::vector<std::vector<std::pair<BigUint, std::uint32_t>>> equations;
};

SaStage1 sa_partition_stage(const VlcmSpec& spec) {
    SaStage1 out;
    std::set<BigUint> uniq;
    for (const BigUint& lc : spec.constants) {
        Partition part = partition_constant(lc, spec.p);
        std::vector<std::pair<BigUint, std::uint32_t>> eq;
        for (const auto& [c, shift] : part.equation) {
            unsigned tz;
            BigUint f = odd_part(c, tz);
            eq.push_back({f, shift + tz});
            uniq.insert(f);
        }
        out.equations.push_back(std::move(eq));
    }
    out.odd_values.assign(uniq.begin(), uniq.end());
    return out;
}

}  // namespace

Dfg build_sa_2io(const VlcmSpec& spec) {
    check_spec(spec, true);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", spec.iw);
    SaStage1 s1 = sa_partition_stage(spec);
    auto realized = gb_realize(ctx, s1.odd_values);

    std::vector<TermList> equations;
    for (const auto& eq : s1.equations) {
        TermList list;
        for (const auto& [f, shift] : eq) list.terms.push_back({realized.at(f), shift, 1});
        equations.push_back(std::move(list));
    }
    extract_2term(ctx, equations);

    for (std::size_t i = 0; i < equations.size(); ++i) {
        const TermList& list = equations[i];
        OutputHalf half = (list.terms.size() == 1 && list.terms[0].sign > 0)
                              ? OutputHalf{list.terms[0].src, list.terms[0].shift}
                              : sum_terms_tree(ctx, list);
        g.bind_output(output_name(i), half, std::nullopt,
                      BigUint(spec.constants[i] * ctx.x_max));
    }
    return g;
}

Dfg build_sa_csa(const VlcmSpec& spec) {
    check_spec(spec, true);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", spec.iw);
    SaStage1 s1 = sa_partition_stage(spec);
    auto pairs = cse3_realize(ctx, s1.odd_values);

    std::vector<TermList> equations;
    for (const auto& eq : s1.equations) {
        TermList list;
        for (const auto& [f, shift] : eq) {
            const SumCarry& sc = pairs.at(f);
            list.terms.push_back({sc.sum.ref, shift + sc.sum.shift, 1});
            if (sc.carry) list.terms.push_back({sc.carry->ref, shift + sc.carry->shift, 1});
        }
        equations.push_back(std::move(list));
    }
    extract_3term(ctx, equations);

    for (std::size_t i = 0; i < equations.size(); ++i)
        bind_result(ctx, output_name(i), csa_reduce(ctx, equations[i]), spec.constants[i],
                    spec.output_form);
    return g;
}

Dfg build_sa_hybrid(const VlcmSpec& spec) {
    check_spec(spec, true);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", spec.iw);
    SaStage1 s1 = sa_partition_stage(spec);
    auto realized = gb_realize(ctx, s1.odd_values);

    std::vector<TermList> equations;
    for (const auto& eq : s1.equations) {
        TermList list;
        for (const auto& [f, shift] : eq) list.terms.push_back({realized.at(f), shift, 1});
        equations.push_back(std::move(list));
    }
    // common subexpressions with 2-input operations, final equations with CSAs
    extract_2term(ctx, equations);

    for (std::size_t i = 0; i < equations.size(); ++i)
        bind_result(ctx, output_name(i), csa_reduce(ctx, equations[i]), spec.constants[i],
                    spec.output_form);
    return g;
}

Dfg build_ct(const VlcmSpec& spec) {
    check_spec(spec, false);
    Dfg g;
    McmContext ctx = make_mcm_context(g, "x", spec.iw);
    unsigned slices = (spec.iw + spec.r - 1) / spec.r;

    for (std::size_t i = 0; i < spec.constants.size(); ++i) {
        const BigUint& lc = spec.constants[i];
        // multiples 0..2^r-1 of lc, shared by all of this constant's MUXes
        std::vector<NodeId> table;
        for (std::uint64_t j = 0; j < (std::uint64_t{1} << spec.r); ++j)
            table.push_back(g.add_const(BigUint(lc * j)));

        TermList list;
        for (unsigned j = 0; j < slices; ++j) {
            NodeId mux = g.add_mux({ctx.x, j * spec.r, spec.r}, table);
            list.terms.push_back({{mux, Port::Out}, j * spec.r, 1});
        }
        bind_result(ctx, output_name(i), csa_reduce(ctx, list), lc, spec.output_form);
    }
    return g;
}

Dfg build_vlcm(const VlcmSpec& spec) {
    switch (spec.arch) {
        case Arch::Sa2io: return build_sa_2io(spec);
        case Arch::SaCsa: return build_sa_csa(spec);
        case Arch::SaHybrid: return build_sa_hybrid(spec);
        case Arch::Ct: return build_ct(spec);
    }
    throw ConfigError("unknown architecture");
}

}  // namespace vlcm
