#include "selmer/arith.hpp"

#include "selmer/error.hpp"

#include <algorithm>
#include <map>

namespace selmer {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::SingularModel: return "SingularModel";
        case Errc::NonRational: return "NonRational";
        case Errc::NotIntegralAt: return "NotIntegralAt";
        case Errc::PrimeTooLarge: return "PrimeTooLarge";
        case Errc::SingularCurve: return "SingularCurve";
        case Errc::EvenOrCompositeP: return "EvenOrCompositeP";
        case Errc::SignLengthMismatch: return "SignLengthMismatch";
        case Errc::HypothesisFailure: return "HypothesisFailure";
        case Errc::NonPPower: return "NonPPower";
        case Errc::TooManySigns: return "TooManySigns";
        case Errc::NonFiniteInvariants: return "NonFiniteInvariants";
        case Errc::PrecisionExhausted: return "PrecisionExhausted";
        case Errc::SchemaViolation: return "SchemaViolation";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

long valuation(const Integer& n, const Integer& p) {
    if (n == 0) return kInfiniteValuation;
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rational& x, const Integer& p) {
    if (x == 0) return kInfiniteValuation;
    return valuation(Integer(x.get_num()), p) - valuation(Integer(x.get_den()), p);
}

Integer mod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

bool is_perfect_square(const Integer& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

namespace {

Integer brent_rho(const Integer& n, unsigned long seed) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    Integer c = seed, y = 2, g = 1, q = 1, x, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto step = [&](const Integer& v) { return mod(v * v + c, n); };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = step(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                y = step(y);
                q = mod(q * abs(Integer(x - y)), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = step(ys);
            g = gcd(abs(Integer(x - ys)), n);
        } while (g == 1);
    }
    return g;
}

void factor_into(const Integer& n, std::map<Integer, long>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Integer d = n;
    for (unsigned long seed = 1; d == n; ++seed) d = brent_rho(n, seed);
    factor_into(d, out);
    factor_into(Integer(n / d), out);
}

using Poly = std::vector<Integer>;  // low degree first

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, const Integer& q) {
    for (auto& c : a) c = mod(c, q);
    trim(a);
    Integer lead_inv;
    mpz_invert(lead_inv.get_mpz_t(), m.back().get_mpz_t(), q.get_mpz_t());
    while (a.size() >= m.size()) {
        const Integer factor = mod(a.back() * lead_inv, q);
        const std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = mod(a[shift + i] - factor * m[i], q);
        trim(a);
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, const Integer& q) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    for (auto& c : r) c = mod(c, q);
    trim(r);
    return r;
}

std::size_t poly_gcd_degree(Poly a, Poly b, const Integer& q) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, q);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// Distinct roots of f (degree >= 1, leading coefficient a unit) in F_q.
int count_roots(Poly f, const Integer& q) {
    for (auto& c : f) c = mod(c, q);
    trim(f);
    if (f.size() <= 1) return 0;
    if (q < 1000) {
        const unsigned long qs = q.get_ui();
        int roots = 0;
        for (unsigned long x = 0; x < qs; ++x) {
            Integer acc = 0;
            for (auto it = f.rbegin(); it != f.rend(); ++it) acc = mod(acc * x + *it, q);
            if (acc == 0) ++roots;
        }
        return roots;
    }
    // deg gcd(f, x^q - x) counts the distinct roots.
    Poly result{1}, base{0, 1};
    Integer e = q;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = poly_mod(poly_mul(result, base, q), f, q);
        base = poly_mod(poly_mul(base, base, q), f, q);
        e >>= 1;
    }
    result.resize(std::max<std::size_t>(result.size(), 2), 0);
    result[1] -= 1;
    for (auto& c : result) c = mod(c, q);
    trim(result);
    if (result.empty()) return static_cast<int>(f.size() - 1);
    return static_cast<int>(poly_gcd_degree(f, result, q));
}

}  // namespace

std::vector<std::pair<Integer, long>> factor(const Integer& n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "cannot factor zero");
    Integer m = abs(n);
    std::map<Integer, long> out;
    for (unsigned long p = 2; p < 1000 && m > 1; ++p) {
        if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            ++out[Integer(p)];
        }
    }
    factor_into(m, out);
    return {out.begin(), out.end()};
}

int count_quadratic_roots(const Integer& a, const Integer& b, const Integer& c, const Integer& q) {
    return count_roots(Poly{c, b, a}, q);
}

int count_monic_cubic_roots(const Integer& b, const Integer& c, const Integer& d, const Integer& q) {
    return count_roots(Poly{d, c, b, 1}, q);
}

PPower PPower::p_part_of(const Integer& n, const Integer& p) {
    if (n == 0) throw Error(Errc::InvalidArgument, "p-part of zero");
    return PPower{p, valuation(n, p)};
}

PPower PPower::parse(const std::string& decimal, const Integer& p) {
    Integer n;
    if (decimal.empty() || n.set_str(decimal, 10) != 0 || n <= 0)
        throw Error(Errc::NonPPower, "'" + decimal + "' is not a positive integer");
    const long e = valuation(n, p);
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    if (pe != n) throw Error(Errc::NonPPower, "'" + decimal + "' is not a power of " + p.get_str());
    return PPower{p, e};
}

Integer PPower::value() const {
    if (exponent < 0) throw Error(Errc::InvalidArgument, "negative exponent has no integer value");
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(exponent));
    return r;
}

std::string PPower::to_string() const {
    if (exponent >= 0) return value().get_str();
    return "1/" + PPower{prime, -exponent}.value().get_str();
}

namespace modq {

std::uint64_t pow(std::uint64_t base, std::uint64_t exp, std::uint64_t q) {
    std::uint64_t result = 1 % q;
    base %= q;
    while (exp > 0) {
        if (exp & 1) result = mul(result, base, q);
        base = mul(base, base, q);
        exp >>= 1;
    }
    return result;
}

std::uint64_t inv(std::uint64_t a, std::uint64_t q) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(q), new_r = static_cast<std::int64_t>(a % q);
    while (new_r != 0) {
        const std::int64_t quotient = r / new_r;
        t = std::exchange(new_t, t - quotient * new_t);
        r = std::exchange(new_r, r - quotient * new_r);
    }
    if (r != 1) throw Error(Errc::InvalidArgument, "residue not invertible");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(q) : t);
}

int legendre(std::uint64_t a, std::uint64_t q) {
    a %= q;
    if (a == 0) return 0;
    return pow(a, (q - 1) / 2, q) == 1 ? 1 : -1;
}

std::uint64_t sqrt(std::uint64_t a, std::uint64_t q) {
    a %= q;
    if (a == 0) return 0;
    if (q % 4 == 3) return pow(a, (q + 1) / 4, q);
    std::uint64_t s = q - 1;
    unsigned e = 0;
    while (s % 2 == 0) {
        s /= 2;
        ++e;
    }
    std::uint64_t z = 2;
    while (legendre(z, q) != -1) ++z;
    std::uint64_t x = pow(a, (s + 1) / 2, q);
    std::uint64_t b = pow(a, s, q);
    std::uint64_t g = pow(z, s, q);
    unsigned r = e;
    while (b != 1) {
        unsigned m = 0;
        for (std::uint64_t t = b; t != 1; t = mul(t, t, q)) ++m;
        const std::uint64_t gs = pow(g, std::uint64_t{1} << (r - m - 1), q);
        g = mul(gs, gs, q);
        x = mul(x, gs, q);
        b = mul(b, g, q);
        r = m;
    }
    return x;
}

std::uint64_t from(const Integer& a, std::uint64_t q) {
    return mod(a, Integer(static_cast<unsigned long>(q))).get_ui();
}

}  // namespace modq

}  // namespace selmer
