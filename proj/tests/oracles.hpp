#pragma once

// Test-side reference computations. Nothing here calls into the library's
// arithmetic: counts use literal enumeration, curves are plain integer tuples.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Coeffs = std::array<long long, 5>;  // a1, a2, a3, a4, a6

inline long long md(long long a, long long q) {
    a %= q;
    return a < 0 ? a + q : a;
}

// Points on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_q, literally
// trying every (x, y). Use for small q only.
inline std::uint64_t count_points_naive(const Coeffs& a, long long q) {
    std::uint64_t n = 1;
    for (long long x = 0; x < q; ++x) {
        const long long rhs = md(md(md(x * x, q) * x, q) + md(a[1], q) * md(x * x, q) + md(a[3], q) * x + md(a[4], q), q);
        for (long long y = 0; y < q; ++y) {
            const long long lhs = md(y * y + md(md(a[0], q) * x, q) * y + md(a[2], q) * y, q);
            if (lhs == rhs) ++n;
        }
    }
    return n;
}

// Same count for odd q in O(q): for each x the equation is a quadratic in y,
// whose root count is read off a table of squares built by squaring every y.
inline std::uint64_t count_points_table(const Coeffs& a, long long q) {
    std::vector<char> square(q, 0);
    for (long long y = 0; y < q; ++y) square[y * y % q] = 1;
    std::uint64_t n = 1;
    for (long long x = 0; x < q; ++x) {
        const long long lin = md(md(a[0], q) * x + a[2], q);
        const long long rhs = md(md(md(x * x, q) * x, q) + md(a[1], q) * md(x * x, q) + md(md(a[3], q) * x, q) + md(a[4], q), q);
        const long long disc = md(lin * lin + 4 * rhs, q);
        n += disc == 0 ? 1 : (square[disc] ? 2 : 0);
    }
    return n;
}

inline long long trace(const Coeffs& a, long long q) {
    return q + 1 - static_cast<long long>(count_points_table(a, q));
}

// Discriminant from the textbook b-invariants, in 128-bit.
inline __int128 discriminant(const Coeffs& a) {
    const __int128 a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
    const __int128 b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
    const __int128 b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

inline std::string decimal(__int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    std::string s;
    for (; v != 0; v /= 10) s.insert(s.begin(), char('0' + (neg ? -(v % 10) : v % 10)));
    return neg ? "-" + s : s;
}

inline bool is_prime_small(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<long long> primes_between(long long lo, long long hi) {
    std::vector<long long> out;
    for (long long n = lo; n < hi; ++n)
        if (is_prime_small(n)) out.push_back(n);
    return out;
}

inline std::string text(const Coeffs& a) {
    std::string s;
    for (std::size_t i = 0; i < 5; ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s;
}

// Random nonsingular integral models with small coefficients.
inline Coeffs random_curve(std::mt19937_64& rng, long long bound = 30) {
    std::uniform_int_distribution<long long> small(-1, 1), big(-bound, bound);
    for (;;) {
        Coeffs a{small(rng), small(rng), small(rng), big(rng), big(rng)};
        if (discriminant(a) != 0) return a;
    }
}

// Curves whose point counts are classical: y^2 = x^3 + k x and y^2 = x^3 + k are
// supersingular at q = 3 mod 4 and q = 2 mod 3 respectively (q not dividing 6k).
inline std::vector<Coeffs> cm_family() {
    std::vector<Coeffs> out;
    for (long long k : {-1, 1, 2, -2, 3, -5, 7, 11}) out.push_back({0, 0, 0, k, 0});
    for (long long k : {1, 2, -2, 5, -7, 17}) out.push_back({0, 0, 0, 0, k});
    return out;
}

// Components of the special fibre for each Kodaira symbol, as needed by Ogg's
// formula v(Delta_min) = f + m - 1.
inline long components(const std::string& kodaira) {
    if (kodaira == "I0") return 1;
    if (kodaira == "II" || kodaira == "II*") return kodaira == "II" ? 1 : 9;
    if (kodaira == "III") return 2;
    if (kodaira == "IV") return 3;
    if (kodaira == "I0*") return 5;
    if (kodaira == "IV*") return 7;
    if (kodaira == "III*") return 8;
    if (kodaira.size() > 1 && kodaira[0] == 'I' && kodaira.back() == '*')
        return 5 + std::stol(kodaira.substr(1, kodaira.size() - 2));
    if (kodaira.size() > 1 && kodaira[0] == 'I') return std::stol(kodaira.substr(1));
    return -1;
}

// Kubert's Tate normal form y^2 + (1-c)xy - by = x^3 - bx^2 with (0,0) of
// order n. Integer parameters chosen so the model is integral.
struct KubertCurve {
    long n;
    Coeffs a;
};

inline std::vector<KubertCurve> kubert_family() {
    std::vector<KubertCurve> out;
    auto add = [&](long n, long long b, long long c) {
        const Coeffs a{1 - c, -b, -b, 0, 0};
        if (discriminant(a) != 0) out.push_back({n, a});
    };
    for (long long d = 2; d <= 6; ++d) {
        add(4, d, 0);
        add(5, d, d);
        add(6, d + d * d, d);
        add(7, d * d * d - d * d, d * d - d);
        add(9, d * d * (d - 1) * (d * d - d + 1), d * d * (d - 1));
    }
    // Z/8 needs (2d-1)(d-1)/d integral: d = 1 is degenerate, d = -1 works.
    for (long long d : {-1LL}) add(8, (2 * d - 1) * (d - 1), (2 * d - 1) * (d - 1) / d);
    add(10, 24, 6);  // found by search; Kubert's N = 10 family has no small integral members
    return out;
}

// Curves with their conductor, read off the Cremona label (an external fact, not
// computed here). The product of q^f over bad primes must reproduce it.
inline const std::vector<std::pair<long, Coeffs>>& labelled_conductors() {
    static const std::vector<std::pair<long, Coeffs>> table{
        {11, {0, -1, 1, -10, -20}}, {14, {1, 0, 1, 4, -6}},   {15, {1, 1, 1, -10, -10}}, {17, {1, -1, 1, -1, -14}},
        {19, {0, 1, 1, -9, -15}},   {20, {0, 1, 0, 4, 4}},     {21, {1, 0, 0, -4, -1}},    {24, {0, -1, 0, -4, 4}},
        {26, {1, 0, 1, -5, -8}},    {27, {0, 0, 1, 0, -7}},    {30, {1, 0, 1, 1, 2}},      {32, {0, 0, 0, -1, 0}},
        {36, {0, 0, 0, 0, 1}},      {37, {0, 0, 1, -1, 0}},    {44, {0, 1, 0, 3, -1}},     {48, {0, 1, 0, -4, -4}},
        {52, {0, 0, 0, 1, -10}},    {54, {1, -1, 0, 12, 8}},   {64, {0, 0, 0, -4, 0}},     {64, {0, 0, 0, 1, 0}},
        {128, {0, 1, 0, 1, 1}},     {256, {0, 0, 0, -2, 0}},   {1728, {0, 0, 0, 0, -2}},
    };
    return table;
}

}  // namespace oracle
