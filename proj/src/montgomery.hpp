#pragma once

#include "architectures.hpp"

#include <memory>
#include <vector>

namespace vlcm {

// Precomputed constants of the constant-time word-serial Montgomery
// multiplication. Word-count naming: the algorithm description overloads one
// symbol for both the word count and the modulus bit-width, so here n_w is
// the word count (with slack so that 4*m_bar < 2^(r_w*n_w) holds) and
// modulus_bits is the bit-width of M.
struct MontgomeryParams {
    BigUint modulus;        // M, odd
    unsigned r_w = 0;       // bits per word
    unsigned n_w = 0;       // word count
    unsigned modulus_bits = 0;
    BigUint R;              // 2^(r_w*(n_w+2))
    BigUint m_prime;        // -M^-1 mod R
    BigUint m_bar;          // (m_prime mod 2^r_w) * M, a multiple of M

    unsigned iterations() const { return n_w + 3; }  // loop runs i = 0 .. n_w+2
};

// n_w is chosen as the smallest word count satisfying 4*m_bar < 2^(r_w*n_w);
// m_bar depends only on M mod 2^r_w, so the choice is well defined.
MontgomeryParams derive_params(const BigUint& M, unsigned r_w);

// Exact reference model. Requires A, B < 2*m_bar; returns S with
// S*R = A*B (mod M) and S < 2*m_bar.
BigUint mont_multiply_reference(const BigUint& A, const BigUint& B, const MontgomeryParams& prm);

// S_0 .. S_{n_w+3} of the reference recurrence (for lock-step checks).
std::vector<BigUint> mont_reference_states(const BigUint& A, const BigUint& B,
                                           const MontgomeryParams& prm);

// Redundant positional number: words carry one extra bit beyond the radix,
// so additions never propagate a long carry chain.
struct RnsNumber {
    unsigned radix = 0;  // r_x
    std::vector<BigUint> words;
};

// Canonical digits; only the top word may use the extra redundant bit.
// Requires v < 2^(r_x*word_count + 1).
RnsNumber rns_encode(const BigUint& v, unsigned r_x, std::size_t word_count);
BigUint rns_decode(const RnsNumber& n);

struct MontConfig {
    unsigned r1 = 16;  // word width of A digits and of the q path (equals r_w)
    unsigned r2 = 16;  // word width of the B / m_bar representation
    Arch vlcm_arch = Arch::Ct;
    unsigned vlcm_p = 0;  // partition parameter for the m_bar multiplier
    unsigned vlcm_r = 0;
};

// Cycle-level software model of the word-serial datapath: per iteration the
// q-word is taken from the low state words, the m_bar multiple comes from the
// generated multiplierless block as a sum/carry pair, the word-wise a_i*B
// product pair is folded in through a 4:2 compression step, and the state is
// re-bucketed into redundant radix-r2 words.
class MontDatapath {
  public:
    MontDatapath(const MontConfig& cfg, const MontgomeryParams& prm);

    const Dfg& vlcm_graph() const { return vlcm_; }
    const MontgomeryParams& params() const { return prm_; }
    const MontConfig& config() const { return cfg_; }
    unsigned m_a() const;  // ceil(modulus_bits / r1)
    unsigned m_b() const;  // ceil(modulus_bits / r2)

    // Runs one multiplication; when states is given it receives the decoded
    // S_0 .. S_{n_w+3} trace. Not safe for concurrent use of one instance.
    BigUint run(const BigUint& A, const BigUint& B, std::vector<BigUint>* states = nullptr);

  private:
    BigUint decode_state() const;
    BigUint low_word_q() const;

    MontConfig cfg_;
    MontgomeryParams prm_;
    Dfg vlcm_;
    std::unique_ptr<Evaluator> eval_;
    std::vector<BigUint> state_;  // radix-r2 redundant words
    std::size_t state_words_ = 0;
};

MontDatapath build_mont_datapath(const MontConfig& cfg, const MontgomeryParams& prm);

}  // namespace vlcm
