#include "selmer/global_invariants.hpp"

#include "selmer/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace selmer {

bool on_curve(const WeierstrassCurve& c, const RationalPoint& P) {
    if (P.infinity) return true;
    const auto& [a1, a2, a3, a4, a6] = c.coefficients();
    const Rational& x = P.x;
    const Rational& y = P.y;
    return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6;
}

RationalPoint negate(const WeierstrassCurve& c, const RationalPoint& P) {
    if (P.infinity) return P;
    return {P.x, -P.y - c.a1() * P.x - c.a3(), false};
}

RationalPoint add(const WeierstrassCurve& c, const RationalPoint& P, const RationalPoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const auto& [a1, a2, a3, a4, a6] = c.coefficients();
    Rational lambda;
    if (P.x == Q.x) {
        const Rational denom = P.y + Q.y + a1 * Q.x + a3;
        if (denom == 0) return RationalPoint::identity();
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / (2 * P.y + a1 * P.x + a3);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    const Rational nu = P.y - lambda * P.x;
    const Rational x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    const Rational y3 = -(lambda + a1) * x3 - nu - a3;
    return {x3, y3, false};
}

RationalPoint multiply(const WeierstrassCurve& c, long n, const RationalPoint& P) {
    RationalPoint base = n < 0 ? negate(c, P) : P;
    unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
    RationalPoint acc = RationalPoint::identity();
    while (k > 0) {
        if (k & 1) acc = add(c, acc, base);
        base = add(c, base, base);
        k >>= 1;
    }
    return acc;
}

std::optional<long> order_up_to(const WeierstrassCurve& c, const RationalPoint& P, long bound) {
    RationalPoint acc = P;
    for (long n = 1; n <= bound; ++n) {
        if (acc.infinity) return n;
        acc = add(c, acc, P);
    }
    return std::nullopt;
}

std::string TorsionInfo::structure() const {
    if (invariants.empty()) return "trivial";
    std::string s;
    for (std::size_t i = 0; i < invariants.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(invariants[i]);
    return s;
}

std::vector<Integer> integer_roots_depressed_cubic(const Integer& a, const Integer& b) {
    auto g = [&](const Integer& x) -> Integer { return x * x * x + a * x + b; };
    const Integer bound = 1 + std::max(abs(a), abs(b));
    std::set<Integer> roots;
    // First integer in [lo, hi] where pred holds, pred monotone false -> true.
    auto search = [&](Integer lo, Integer hi, const std::function<bool(const Integer&)>& pred) {
        if (lo > hi || !pred(hi)) return;
        while (lo < hi) {
            Integer mid = lo + (hi - lo) / 2;
            if (mid > hi) mid = hi;
            if (pred(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        if (g(lo) == 0) roots.insert(lo);
    };
    auto increasing = [&](const Integer& x) { return g(x) >= 0; };
    auto decreasing = [&](const Integer& x) { return g(x) <= 0; };
    if (a >= 0) {
        search(-bound, bound, increasing);
    } else {
        Integer k;  // floor(sqrt(-a/3))
        const Integer third = (-a) / 3;
        mpz_sqrt(k.get_mpz_t(), third.get_mpz_t());
        search(-bound, -k - 1, increasing);
        search(-k, k, decreasing);
        search(k + 1, bound, increasing);
    }
    return {roots.begin(), roots.end()};
}

namespace {

// Positive y with y^2 | n.
std::vector<Integer> square_divisor_roots(const Integer& n) {
    std::vector<Integer> out{1};
    for (const auto& [ell, e] : factor(n)) {
        const std::size_t existing = out.size();
        Integer power = 1;
        for (long k = 1; k <= e / 2; ++k) {
            power *= ell;
            for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * power);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TorsionInfo torsion_subgroup(const WeierstrassCurve& c) {
    const WeierstrassCurve minimal = minimal_model(c).curve;
    const Integer c4 = minimal.c4().get_num(), c6 = minimal.c6().get_num();
    const Integer A = -27 * c4, B = -54 * c6;
    const WeierstrassCurve shortened({0, 0, 0, Rational(A), Rational(B)});
    const Integer disc = 4 * A * A * A + 27 * B * B;

    // Nagell-Lutz candidates.
    std::vector<RationalPoint> candidates;
    for (const Integer& x : integer_roots_depressed_cubic(A, B)) candidates.push_back({Rational(x), 0, false});
    for (const Integer& y : square_divisor_roots(disc)) {
        for (const Integer& x : integer_roots_depressed_cubic(A, Integer(B - y * y))) {
            candidates.push_back({Rational(x), Rational(y), false});
            candidates.push_back({Rational(x), Rational(-y), false});
        }
    }

    auto integral = [](const RationalPoint& P) {
        return P.infinity || (P.x.get_den() == 1 && P.y.get_den() == 1);
    };
    struct Found {
        RationalPoint short_point;
        long order;
    };
    std::vector<Found> torsion;
    for (const auto& P : candidates) {
        RationalPoint acc = P;
        for (long n = 1; n <= 12; ++n) {
            if (acc.infinity) {
                torsion.push_back({P, n});
                break;
            }
            if (!integral(acc)) break;  // torsion multiples stay integral
            acc = add(shortened, acc, P);
        }
    }

    // Back to the minimal model: X = 36x + 3 b2, Y = 108 (2y + a1 x + a3).
    auto to_minimal = [&](const RationalPoint& P) -> RationalPoint {
        const Rational x = (P.x - 3 * minimal.b2()) / 36;
        const Rational y = (P.y / 108 - minimal.a1() * x - minimal.a3()) / 2;
        return {x, y, false};
    };

    TorsionInfo info{minimal, {}, 1, {}, {}};
    info.order = static_cast<long>(torsion.size()) + 1;
    long two_torsion = 0;
    for (const auto& f : torsion) {
        info.points.push_back(to_minimal(f.short_point));
        if (f.order == 2) ++two_torsion;
    }
    if (info.order == 1) return info;

    auto max_it = std::max_element(torsion.begin(), torsion.end(),
                                   [](const Found& x, const Found& y) { return x.order < y.order; });
    const RationalPoint P = to_minimal(max_it->short_point);
    info.generators.push_back(P);
    if (two_torsion == 3) {
        info.invariants = {2, info.order / 2};
        const RationalPoint in_cyclic = multiply(minimal, max_it->order / 2, P);
        for (const auto& f : torsion) {
            if (f.order != 2) continue;
            const RationalPoint Q = to_minimal(f.short_point);
            if (!(Q == in_cyclic)) {
                info.generators.push_back(Q);
                break;
            }
        }
    } else {
        info.invariants = {info.order};
    }
    return info;
}

PPower torsion_p_part(const WeierstrassCurve& c, const Integer& p) { return torsion_subgroup(c).p_part(p); }

TorsionVanishingCheck check_torsion_vanishing(const WeierstrassCurve& c, const Integer& p) {
    if (p == 2 || !is_prime(p)) throw Error(Errc::EvenOrCompositeP, p.get_str() + " is not an odd prime");
    const LocalData local = local_packet(c, p, p);
    TorsionVanishingCheck out;
    out.reduction = local.reduction;
    out.a_p = local.a_q;
    out.torsion_p_part = torsion_p_part(c, p);
    out.applies = local.reduction == ReductionType::GoodSupersingular && local.a_q && *local.a_q == 0;
    out.consistent = !out.applies || out.torsion_p_part.exponent == 0;
    return out;
}

}  // namespace selmer
