#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace selmer {

using Integer = mpz_class;
using Rational = mpq_class;

// Valuation of zero.
inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

long valuation(const Integer& n, const Integer& p);
long valuation(const Rational& x, const Integer& p);

// Least nonnegative residue.
Integer mod(const Integer& a, const Integer& m);

bool is_prime(const Integer& n);

// Prime factorization of |n| (n != 0), primes ascending.
std::vector<std::pair<Integer, long>> factor(const Integer& n);

// Number of roots in F_q of a*x^2 + b*x + c (not all coefficients zero mod q).
int count_quadratic_roots(const Integer& a, const Integer& b, const Integer& c, const Integer& q);

// Number of distinct roots in F_q of the monic cubic x^3 + b x^2 + c x + d.
int count_monic_cubic_roots(const Integer& b, const Integer& c, const Integer& d, const Integer& q);

bool is_perfect_square(const Integer& n);

// A power of an odd prime p with a signed exponent; negative exponents only
// arise from inconsistent inputs pushed through with an override.
struct PPower {
    Integer prime;
    long exponent = 0;

    static PPower one(const Integer& p) { return PPower{p, 0}; }

    // The p-part p^{v_p(n)} of a nonzero integer.
    static PPower p_part_of(const Integer& n, const Integer& p);

    // Parses a decimal string that must be exactly a power of p.
    static PPower parse(const std::string& decimal, const Integer& p);

    // Value when the exponent is nonnegative.
    Integer value() const;

    // "p^e" written out in decimal, or "1/<p^-e>" for negative exponents.
    std::string to_string() const;

    PPower operator*(const PPower& rhs) const { return PPower{prime, exponent + rhs.exponent}; }
    PPower operator/(const PPower& rhs) const { return PPower{prime, exponent - rhs.exponent}; }
    PPower squared() const { return PPower{prime, 2 * exponent}; }

    friend bool operator==(const PPower& a, const PPower& b) {
        return a.prime == b.prime && a.exponent == b.exponent;
    }
};

// Small modular arithmetic for residue fields of size below 2^32.
namespace modq {

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}
std::uint64_t pow(std::uint64_t base, std::uint64_t exp, std::uint64_t q);
std::uint64_t inv(std::uint64_t a, std::uint64_t q);
int legendre(std::uint64_t a, std::uint64_t q);
// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
std::uint64_t sqrt(std::uint64_t a, std::uint64_t q);
std::uint64_t from(const Integer& a, std::uint64_t q);

}  // namespace modq

}  // namespace selmer
