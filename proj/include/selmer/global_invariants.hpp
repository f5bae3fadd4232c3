#pragma once

#include "selmer/arith.hpp"
#include "selmer/curve_model.hpp"
#include "selmer/local_analysis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace selmer {

struct RationalPoint {
    Rational x, y;
    bool infinity = false;

    static RationalPoint identity() { return {0, 0, true}; }
    friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
        return a.infinity == b.infinity && (a.infinity || (a.x == b.x && a.y == b.y));
    }
};

bool on_curve(const WeierstrassCurve& c, const RationalPoint& P);
RationalPoint negate(const WeierstrassCurve& c, const RationalPoint& P);
RationalPoint add(const WeierstrassCurve& c, const RationalPoint& P, const RationalPoint& Q);
RationalPoint multiply(const WeierstrassCurve& c, long n, const RationalPoint& P);
// Smallest n in 1..bound with nP = O, if any.
std::optional<long> order_up_to(const WeierstrassCurve& c, const RationalPoint& P, long bound);

// E(Q)_tors, listed on the global minimal model of the input curve.
struct TorsionInfo {
    WeierstrassCurve model;              // global minimal model the points live on
    std::vector<long> invariants;        // {} trivial, {n} cyclic, {2, 2m} otherwise
    long order = 1;
    std::vector<RationalPoint> generators;
    std::vector<RationalPoint> points;   // every torsion point except O

    // "trivial", "Z/5", "Z/2 x Z/4"
    std::string structure() const;
    PPower p_part(const Integer& p) const { return PPower::p_part_of(order, p); }
};

// Nagell-Lutz on y^2 = x^3 - 27 c4 x - 54 c6, finite-order check up to 12.
TorsionInfo torsion_subgroup(const WeierstrassCurve& c);

PPower torsion_p_part(const WeierstrassCurve& c, const Integer& p);

// Exact integer roots of x^3 + a x + b.
std::vector<Integer> integer_roots_depressed_cubic(const Integer& a, const Integer& b);

// A curve with good supersingular reduction and a_p = 0 at p has no rational
// p-torsion; `consistent` is false only if the computation contradicts that.
struct TorsionVanishingCheck {
    bool applies = false;  // supersingular at p with a_p = 0
    bool consistent = true;
    ReductionType reduction = ReductionType::GoodOrdinary;
    std::optional<std::int64_t> a_p;
    PPower torsion_p_part;
};

TorsionVanishingCheck check_torsion_vanishing(const WeierstrassCurve& c, const Integer& p);

}  // namespace selmer
