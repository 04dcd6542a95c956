#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vlcm {

// Unbounded unsigned integer. Values are never truncated; RTL widths are
// tracked separately by the dataflow graph.
using BigUint = mpz_class;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct ParseError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct EvalError : Error {
    using Error::Error;
};
struct VerifyError : Error {
    using Error::Error;
};

// Position of the highest set bit + 1; 0 for the value 0.
unsigned bit_width(const BigUint& v);

// Accepts an optional 0x/0X prefix, case-insensitive hex digits.
BigUint parse_hex(std::string_view text);

std::string to_hex(const BigUint& v);  // 0x-prefixed, lowercase
std::string to_dec(const BigUint& v);

// Signed digit string, least-significant digit first, digits in {-1,0,+1}.
struct SignedDigitString {
    std::vector<int8_t> digits;

    BigUint value() const;
    unsigned nonzero_count() const;
    std::size_t length() const { return digits.size(); }
};

// Plain binary expansion: digits in {0,1}.
SignedDigitString binary_digits(const BigUint& c);

// Canonical signed digit (non-adjacent form): no two adjacent nonzero
// digits, nonzero count minimal over signed-digit representations.
SignedDigitString csd_recode(const BigUint& c);

// Modular inverse; throws Error when gcd(a, modulus) != 1.
BigUint mod_inverse(const BigUint& a, const BigUint& modulus);

// v = odd << twos for v > 0; returns v unchanged (twos = 0) for v == 0.
BigUint odd_part(const BigUint& v, unsigned& twos);

// splitmix64: tiny deterministic generator so that seeded artifacts are
// byte-identical across platforms and standard-library versions.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
};

// Uniform value < 2^bits.
BigUint random_bits(SplitMix64& rng, unsigned bits);
// Value of exactly the given bit width (MSB forced to 1).
BigUint random_exact_width(SplitMix64& rng, unsigned bits);
// Uniform value < bound (rejection sampling), bound > 0.
BigUint random_below(SplitMix64& rng, const BigUint& bound);

}  // namespace vlcm
