#include "montgomery.hpp"

namespace vlcm {

MontgomeryParams derive_params(const BigUint& M, unsigned r_w) {
    if (M < 3 || mpz_even_p(M.get_mpz_t()))
        throw ConfigError("the modulus must be an odd number >= 3");
    if (r_w < 1 || r_w > 512) throw ConfigError("word width out of range");

    MontgomeryParams prm;
    prm.modulus = M;
    prm.r_w = r_w;
    prm.modulus_bits = bit_width(M);

    BigUint word_mod = BigUint(1) << r_w;
    BigUint inv_low = mod_inverse(M, word_mod);          // M^-1 mod 2^r_w
    BigUint minus_inv_low = (word_mod - inv_low) % word_mod;
    prm.m_bar = minus_inv_low * M;

    // smallest word count with 4*m_bar < 2^(r_w*n_w)
    unsigned need = bit_width(BigUint(prm.m_bar << 2));
    prm.n_w = (need + r_w - 1) / r_w;
    prm.R = BigUint(1) << (r_w * (prm.n_w + 2));
    prm.m_prime = (prm.R - mod_inverse(M, prm.R)) % prm.R;

    // asserted invariants
    if ((prm.m_prime * M + 1) % prm.R != 0)
        throw Error("internal: m_prime * M != -1 (mod R)");
    if (prm.m_bar % M != 0) throw Error("internal: m_bar is not a multiple of M");
    if ((prm.m_bar + 1) % word_mod != 0)
        throw Error("internal: m_bar != -1 (mod 2^r_w)");
    if (BigUint(prm.m_bar << 2) >= (BigUint(1) << (r_w * prm.n_w)))
        throw Error("internal: word count violates 4*m_bar < 2^(r_w*n_w)");
    return prm;
}

static void check_operands(const BigUint& A, const BigUint& B, const MontgomeryParams& prm) {
    BigUint limit = prm.m_bar << 1;
    if (A < 0 || A >= limit || B < 0 || B >= limit)
        throw Error("operands must satisfy A, B < 2*m_bar");
}

std::vector<BigUint> mont_reference_states(const BigUint& A, const BigUint& B,
                                           const MontgomeryParams& prm) {
    check_operands(A, B, prm);
    BigUint mask = (BigUint(1) << prm.r_w) - 1;
    std::vector<BigUint> states;
    BigUint S = 0;
    states.push_back(S);
    for (unsigned i = 0; i <= prm.n_w + 2; ++i) {
        BigUint q = S & mask;
        BigUint t = S + q * prm.m_bar;
        if ((t & mask) != 0)
            throw Error("internal: iteration " + std::to_string(i) +
                        " division by 2^r_w is not exact");
        BigUint a_i = (A >> (i * prm.r_w)) & mask;
        S = (t >> prm.r_w) + a_i * B;
        states.push_back(S);
    }
    if (S >= (prm.m_bar << 1)) throw Error("internal: result bound S < 2*m_bar violated");
    return states;
}

BigUint mont_multiply_reference(const BigUint& A, const BigUint& B, const MontgomeryParams& prm) {
    return mont_reference_states(A, B, prm).back();
}

RnsNumber rns_encode(const BigUint& v, unsigned r_x, std::size_t word_count) {
    if (r_x == 0) throw ConfigError("radix must be at least 1 bit");
    if (v < 0) throw Error("cannot encode a negative value");
    if (word_count == 0) throw Error("word count must be at least 1");
    RnsNumber out;
    out.radix = r_x;
    BigUint mask = (BigUint(1) << r_x) - 1;
    for (std::size_t i = 0; i + 1 < word_count; ++i)
        out.words.push_back((v >> (i * r_x)) & mask);
    BigUint top = v >> ((word_count - 1) * r_x);
    if (top >= (BigUint(1) << (r_x + 1)))
        throw Error("value does not fit: top word overflows the redundant range");
    out.words.push_back(top);
    return out;
}

BigUint rns_decode(const RnsNumber& n) {
    BigUint limit = BigUint(1) << (n.radix + 1);
    BigUint acc = 0;
    for (std::size_t i = n.words.size(); i-- > 0;) {
        if (n.words[i] < 0 || n.words[i] >= limit)
            throw Error("word " + std::to_string(i) + " exceeds the redundant digit range");
        acc <<= n.radix;
        acc += n.words[i];
    }
    return acc;
}

MontDatapath::MontDatapath(const MontConfig& cfg, const MontgomeryParams& prm)
    : cfg_(cfg), prm_(prm) {
    if (cfg.r1 != prm.r_w)
        throw ConfigError("datapath word width r1 must equal the parameter word width r_w");
    if (cfg.r2 == 0) throw ConfigError("r2 must be at least 1");

    VlcmSpec vspec;
    vspec.constants = {prm.m_bar};
    vspec.arch = cfg.vlcm_arch;
    vspec.p = cfg.vlcm_p;
    vspec.r = cfg.vlcm_r;
    vspec.iw = cfg.r1;
    vspec.output_form = OutputForm::SumCarry;
    vlcm_ = build_vlcm(vspec);
    eval_ = std::make_unique<Evaluator>(vlcm_);

    // state capacity: S stays below m_bar * 2^(r1+1) + slack
    unsigned state_bits = bit_width(prm.m_bar) + cfg.r1 + 4;
    state_words_ = (state_bits + cfg.r2 - 1) / cfg.r2 + 1;
}

unsigned MontDatapath::m_a() const { return (prm_.modulus_bits + cfg_.r1 - 1) / cfg_.r1; }
unsigned MontDatapath::m_b() const { return (prm_.modulus_bits + cfg_.r2 - 1) / cfg_.r2; }

BigUint MontDatapath::decode_state() const {
    RnsNumber n{cfg_.r2, state_};
    return rns_decode(n);
}

// The modulo-2^r1 block: q depends only on the state words whose weight is
// below 2^r1.
BigUint MontDatapath::low_word_q() const {
    BigUint acc = 0;
    for (std::size_t j = 0; j < state_.size() && j * cfg_.r2 < cfg_.r1; ++j)
        acc += state_[j] << (j * cfg_.r2);
    return acc & ((BigUint(1) << cfg_.r1) - 1);
}

BigUint MontDatapath::run(const BigUint& A, const BigUint& B, std::vector<BigUint>* states) {
    check_operands(A, B, prm_);

    // B is held in canonical radix-r2 words for the word-wise multiplier
    std::size_t b_words = std::max<std::size_t>(1, (bit_width(B) + cfg_.r2 - 1) / cfg_.r2);
    RnsNumber b_reg = rns_encode(B, cfg_.r2, b_words);

    state_.assign(state_words_, BigUint(0));
    if (states) {
        states->clear();
        states->push_back(0);
    }

    BigUint a_mask = (BigUint(1) << cfg_.r1) - 1;
    BigUint redundant_limit = BigUint(1) << (cfg_.r2 + 1);

    for (unsigned i = 0; i <= prm_.n_w + 2; ++i) {
        // mod block: q_i from the canonicalized low word of the state
        BigUint q = low_word_q();

        // multiplierless block: q * m_bar as a sum/carry pair
        eval_->run({q});
        const OutputBinding& ob = vlcm_.outputs().front();
        BigUint vs = eval_->value_of(ob.sum.ref) << ob.sum.shift;
        BigUint vc = ob.carry ? BigUint(eval_->value_of(ob.carry->ref) << ob.carry->shift)
                              : BigUint(0);
        if (vs + vc != q * prm_.m_bar)
            throw Error("internal: multiplierless block disagrees with q*m_bar");

        // multiplication & accumulation: S + q*m_bar, kept as a pair
        BigUint mac_s = decode_state() + vs;
        BigUint mac_c = vc;

        // exact division by 2^r1
        BigUint t = mac_s + mac_c;
        if ((t & a_mask) != 0)
            throw Error("internal: datapath division by 2^r1 is not exact at iteration " +
                        std::to_string(i));
        t >>= cfg_.r1;

        // word-wise multiplication a_i * B, split into a lo/hi pair
        BigUint a_i = (A >> (i * cfg_.r1)) & a_mask;
        BigUint mult_s = 0, mult_c = 0;
        BigUint r2_mask = (BigUint(1) << cfg_.r2) - 1;
        for (std::size_t j = 0; j < b_reg.words.size(); ++j) {
            BigUint pj = a_i * b_reg.words[j];
            mult_s += (pj & r2_mask) << (j * cfg_.r2);
            mult_c += (pj >> cfg_.r2) << ((j + 1) * cfg_.r2);
        }
        if (mult_s + mult_c != a_i * B)
            throw Error("internal: word-wise multiplier pair disagrees with a_i*B");

        // 4:2 compression of the shifted pair and the product pair
        BigUint out_s = t + mult_s;
        BigUint out_c = mult_c;

        // base conversion back to redundant radix-r2 words: canonical digits
        // of both halves added word-wise, no carry propagation
        RnsNumber s_half = rns_encode(out_s, cfg_.r2, state_words_);
        RnsNumber c_half = rns_encode(out_c, cfg_.r2, state_words_);
        for (std::size_t j = 0; j < state_words_; ++j) {
            state_[j] = s_half.words[j] + c_half.words[j];
            if (state_[j] >= redundant_limit)
                throw Error("internal: state word exceeded the redundant digit range");
        }
        if (states) states->push_back(decode_state());
    }
    return decode_state();
}

MontDatapath build_mont_datapath(const MontConfig& cfg, const MontgomeryParams& prm) {
    return MontDatapath(cfg, prm);
}

}  // namespace vlcm
