#include "selmer/error.hpp"
#include "selmer/local_analysis.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace selmer {

namespace {

using u64 = std::uint64_t;

std::uint64_t small_prime(const Integer& q) {
    if (q > point_count::kMaxPrime) throw Error(Errc::PrimeTooLarge, q.get_str() + " exceeds 10^9");
    return q.get_ui();
}

// y^2 = x^3 + A x + B over F_q, q >= 5.
struct ShortCurve {
    u64 q, A, B;

    struct Point {
        u64 x = 0, y = 0;
        bool infinity = true;
    };

    Point neg(const Point& P) const { return P.infinity ? P : Point{P.x, (q - P.y) % q, false}; }

    Point add(const Point& P, const Point& Q) const {
        if (P.infinity) return Q;
        if (Q.infinity) return P;
        u64 lambda;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % q == 0) return {};
            const u64 num = (modq::mul(3, modq::mul(P.x, P.x, q), q) + A) % q;
            lambda = modq::mul(num, modq::inv(modq::mul(2, P.y, q), q), q);
        } else {
            const u64 num = (Q.y + q - P.y) % q;
            lambda = modq::mul(num, modq::inv((Q.x + q - P.x) % q, q), q);
        }
        const u64 x3 = (modq::mul(lambda, lambda, q) + 2 * q - P.x - Q.x) % q;
        const u64 y3 = (modq::mul(lambda, (P.x + q - x3) % q, q) + q - P.y) % q;
        return {x3, y3, false};
    }

    Point mul(u64 k, Point P) const {
        Point R;
        while (k > 0) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }

    u64 rhs(u64 x) const { return (modq::mul(modq::mul(x, x, q), x, q) + modq::mul(A, x, q) + B) % q; }

    Point random_point(std::mt19937_64& rng) const {
        std::uniform_int_distribution<u64> dist(0, q - 1);
        while (true) {
            const u64 x = dist(rng);
            const u64 v = rhs(x);
            if (v == 0) return {x, 0, false};
            if (modq::legendre(v, q) == 1) return {x, modq::sqrt(v, q), false};
        }
    }

    // Some positive M in [lo - m, hi + m] with M P = O, found by baby-step giant-step.
    u64 annihilating_multiple(const Point& P, u64 lo, u64 hi) const {
        const u64 width = hi - lo + 1;
        const u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(width))));
        std::unordered_map<u64, std::pair<u64, u64>> baby;
        baby.reserve(2 * m);
        Point jP;
        for (u64 j = 1; j <= m; ++j) {
            jP = add(jP, P);
            if (jP.infinity) return j;
            baby.emplace(jP.x, std::make_pair(j, jP.y));
        }
        const Point giant = mul(m, P);
        Point Q = mul(lo, P);
        for (u64 i = 0; i <= m + 1; ++i) {
            const u64 base = lo + i * m;
            if (Q.infinity) return base;
            if (auto it = baby.find(Q.x); it != baby.end()) {
                const auto [j, y] = it->second;
                return y == Q.y ? base - j : base + j;
            }
            Q = add(Q, giant);
        }
        throw std::logic_error("baby-step giant-step found no multiple in the Hasse interval");
    }

    u64 order(const Point& P, u64 lo, u64 hi) const {
        u64 ord = annihilating_multiple(P, lo, hi);
        u64 rest = ord;
        for (u64 ell = 2; ell * ell <= rest; ++ell) {
            if (rest % ell) continue;
            while (rest % ell == 0) rest /= ell;
            while (ord % ell == 0 && mul(ord / ell, P).infinity) ord /= ell;
        }
        if (rest > 1 && mul(ord / rest, P).infinity) ord /= rest;
        return ord;
    }
};

}  // namespace

namespace point_count {

std::uint64_t enumerate(const CurveOverFp& c) {
    const u64 q = small_prime(c.q);
    if (q % 2 == 0) throw Error(Errc::InvalidArgument, "point counting needs an odd prime");
    if (q > (u64{1} << 26)) throw Error(Errc::PrimeTooLarge, "enumeration limited to q < 2^26");
    if (c.singular) throw Error(Errc::SingularCurve, "reduction mod " + c.q.get_str() + " is singular");
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    const u64 b2 = modq::from(c.b2(), q), b4 = modq::from(c.b4(), q), b6 = modq::from(c.b6(), q);
    std::vector<signed char> chi(q, -1);
    chi[0] = 0;
    for (u64 y = 1; y <= q / 2; ++y) chi[modq::mul(y, y, q)] = 1;
    std::int64_t total = 0;
    for (u64 x = 0; x < q; ++x) {
        const u64 x2 = modq::mul(x, x, q);
        u64 g = modq::mul(4, modq::mul(x2, x, q), q);
        g = (g + modq::mul(b2, x2, q)) % q;
        g = (g + modq::mul(2 * b4 % q, x, q)) % q;
        g = (g + b6) % q;
        total += chi[g];
    }
    return static_cast<u64>(static_cast<std::int64_t>(q) + 1 + total);
}

std::uint64_t baby_giant(const CurveOverFp& c) {
    const u64 q = small_prime(c.q);
    if (q < kMinBabyGiantPrime) throw Error(Errc::InvalidArgument, "baby-step giant-step needs q >= 230");
    if (c.singular) throw Error(Errc::SingularCurve, "reduction mod " + c.q.get_str() + " is singular");
    const u64 A = modq::from(Integer(-27 * c.c4()), q);
    const u64 B = modq::from(Integer(-54 * c.c6()), q);
    u64 nonresidue = 2;
    while (modq::legendre(nonresidue, q) != -1) ++nonresidue;
    const u64 d2 = modq::mul(nonresidue, nonresidue, q);
    const ShortCurve curve{q, A, B};
    const ShortCurve twist{q, modq::mul(A, d2, q), modq::mul(B, modq::mul(d2, nonresidue, q), q)};

    const u64 bound = static_cast<u64>(std::sqrt(static_cast<double>(4 * q)));
    u64 width = bound;
    while ((width + 1) * (width + 1) <= 4 * q) ++width;
    while (width * width > 4 * q) --width;
    const u64 lo = q + 1 - width, hi = q + 1 + width;

    std::mt19937_64 rng(q * 0x9e3779b97f4a7c15ULL ^ (A << 21) ^ B);
    u64 lcm_curve = 1, lcm_twist = 1;
    for (int round = 0; round < 256; ++round) {
        lcm_curve = std::lcm(lcm_curve, curve.order(curve.random_point(rng), lo, hi));
        lcm_twist = std::lcm(lcm_twist, twist.order(twist.random_point(rng), lo, hi));
        u64 found = 0, candidates = 0;
        for (u64 n = (lo + lcm_curve - 1) / lcm_curve * lcm_curve; n <= hi; n += lcm_curve) {
            if ((2 * q + 2 - n) % lcm_twist == 0) {
                found = n;
                ++candidates;
            }
        }
        if (candidates == 1) return found;
    }
    throw std::logic_error("baby-step giant-step did not isolate the group order");
}

}  // namespace point_count

std::uint64_t count_points(const CurveOverFp& c) {
    if (c.q == 2) throw Error(Errc::InvalidArgument, "point counting excludes q = 2");
    const u64 q = small_prime(c.q);
    if (c.singular) throw Error(Errc::SingularCurve, "reduction mod " + c.q.get_str() + " is singular");
    if (q <= point_count::kEnumerationLimit) return point_count::enumerate(c);
    return point_count::baby_giant(c);
}

}  // namespace selmer
