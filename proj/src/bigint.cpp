#include "bigint.hpp"

#include <cctype>

namespace vlcm {

unsigned bit_width(const BigUint& v) {
    if (v == 0) return 0;
    return static_cast<unsigned>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

BigUint parse_hex(std::string_view text) {
    std::string_view body = text;
    if (body.size() >= 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X'))
        body.remove_prefix(2);
    if (body.empty())
        throw ParseError("hex constant is empty: \"" + std::string(text) + "\"");
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (!std::isxdigit(static_cast<unsigned char>(body[i]))) {
            std::size_t pos = text.size() - body.size() + i;
            throw ParseError("invalid hex digit '" + std::string(1, body[i]) +
                             "' at position " + std::to_string(pos) + " in \"" +
                             std::string(text) + "\"");
        }
    }
    BigUint out;
    out.set_str(std::string(body), 16);
    return out;
}

std::string to_hex(const BigUint& v) {
    return "0x" + v.get_str(16);
}

std::string to_dec(const BigUint& v) {
    return v.get_str(10);
}

BigUint SignedDigitString::value() const {
    BigUint acc = 0;
    for (std::size_t k = digits.size(); k-- > 0;) {
        acc <<= 1;
        acc += static_cast<int>(digits[k]);
    }
    return acc;
}

unsigned SignedDigitString::nonzero_count() const {
    unsigned n = 0;
    for (int8_t d : digits)
        if (d != 0) ++n;
    return n;
}

SignedDigitString binary_digits(const BigUint& c) {
    SignedDigitString out;
    unsigned w = bit_width(c);
    out.digits.reserve(w);
    for (unsigned k = 0; k < w; ++k)
        out.digits.push_back(mpz_tstbit(c.get_mpz_t(), k) ? 1 : 0);
    return out;
}

SignedDigitString csd_recode(const BigUint& c) {
    SignedDigitString out;
    BigUint v = c;
    while (v != 0) {
        if (mpz_odd_p(v.get_mpz_t())) {
            // digit = 2 - (v mod 4): +1 for v≡1, -1 for v≡3
            unsigned long low2 = mpz_fdiv_ui(v.get_mpz_t(), 4);
            int8_t d = (low2 == 1) ? int8_t{1} : int8_t{-1};
            out.digits.push_back(d);
            v -= d;
        } else {
            out.digits.push_back(0);
        }
        v >>= 1;
    }
    while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
    return out;
}

BigUint mod_inverse(const BigUint& a, const BigUint& modulus) {
    BigUint out;
    int ok = mpz_invert(out.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
    if (!ok)
        throw Error("value " + to_dec(a) + " is not invertible modulo " + to_dec(modulus));
    return out;
}

BigUint odd_part(const BigUint& v, unsigned& twos) {
    if (v == 0) {
        twos = 0;
        return v;
    }
    twos = static_cast<unsigned>(mpz_scan1(v.get_mpz_t(), 0));
    return v >> twos;
}

std::uint64_t SplitMix64::next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

BigUint random_bits(SplitMix64& rng, unsigned bits) {
    BigUint out = 0;
    unsigned produced = 0;
    while (produced < bits) {
        std::uint64_t word = rng.next();
        unsigned take = std::min(64u, bits - produced);
        if (take < 64) word &= (take == 64) ? ~0ull : ((1ull << take) - 1);
        BigUint chunk(static_cast<unsigned long>(word >> 32));
        chunk <<= 32;
        chunk += static_cast<unsigned long>(word & 0xffffffffull);
        out |= chunk << produced;
        produced += take;
    }
    return out;
}

BigUint random_exact_width(SplitMix64& rng, unsigned bits) {
    if (bits == 0) return 0;
    BigUint v = random_bits(rng, bits);
    mpz_setbit(v.get_mpz_t(), bits - 1);
    return v;
}

BigUint random_below(SplitMix64& rng, const BigUint& bound) {
    if (bound <= 0) throw Error("random_below: bound must be positive");
    unsigned bits = bit_width(bound);
    for (;;) {
        BigUint v = random_bits(rng, bits);
        if (v < bound) return v;
    }
}

}  // namespace vlcm
