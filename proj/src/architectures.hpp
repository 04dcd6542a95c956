#pragma once

#include "optimize.hpp"

#include <string>
#include <vector>

namespace vlcm {

enum class Arch { Sa2io, SaCsa, SaHybrid, Ct };
enum class OutputForm { Single, SumCarry };

const char* arch_name(Arch a);
Arch arch_from_name(const std::string& name);  // sa2io | sacsa | sahybrid | ct

struct VlcmSpec {
    std::vector<BigUint> constants;
    Arch arch = Arch::SaCsa;
    unsigned p = 0;  // constant partition width, shift-adds architectures
    unsigned r = 0;  // input partition width, compressor-tree architecture
    unsigned iw = 16;
    OutputForm output_form = OutputForm::SumCarry;
};

// Slicing of one very large constant into p-bit coefficients, least
// significant slice first; sum of coefficient<<shift reassembles the value.
struct Partition {
    BigUint source;
    unsigned p = 0;
    std::vector<BigUint> coefficients;                     // c_1..c_d, zeros kept
    std::vector<BigUint> unique_coefficients;              // T: sorted, nonzero, deduplicated
    std::vector<std::uint32_t> shifts;                     // U: per nonzero occurrence
    std::vector<std::pair<BigUint, std::uint32_t>> equation;  // (coefficient, shift) pairs
};

Partition partition_constant(const BigUint& lc, unsigned p);

Dfg build_sa_2io(const VlcmSpec& spec);
Dfg build_sa_csa(const VlcmSpec& spec);
Dfg build_sa_hybrid(const VlcmSpec& spec);
Dfg build_ct(const VlcmSpec& spec);

// Dispatch on spec.arch, with full parameter validation.
Dfg build_vlcm(const VlcmSpec& spec);

}  // namespace vlcm
