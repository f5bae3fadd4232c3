#pragma once

#include "selmer/arith.hpp"
#include "selmer/curve_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace selmer {

enum class ReductionType {
    GoodOrdinary,
    GoodSupersingular,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
};

std::string_view to_string(ReductionType t);
// Accepts the snake_case names used in the JSON formats ("good_ordinary", ...).
std::optional<ReductionType> parse_reduction_type(std::string_view s);
inline bool is_good(ReductionType t) {
    return t == ReductionType::GoodOrdinary || t == ReductionType::GoodSupersingular;
}
inline bool is_multiplicative(ReductionType t) {
    return t == ReductionType::SplitMultiplicative || t == ReductionType::NonsplitMultiplicative;
}

struct Kodaira {
    enum class Type { I0, In, II, III, IV, I0Star, InStar, IVStar, IIIStar, IIStar };
    Type type = Type::I0;
    long n = 0;  // only for In and In*

    std::string to_string() const;
    static std::optional<Kodaira> parse(std::string_view s);
    friend bool operator==(const Kodaira&, const Kodaira&) = default;
};

namespace point_count {

inline constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 17;
inline constexpr std::uint64_t kMaxPrime = 1'000'000'000;
// Below this the Hasse interval may hold several group orders compatible with
// every point of E and its twist.
inline constexpr std::uint64_t kMinBabyGiantPrime = 230;

// Sum of quadratic characters over all x; any odd q up to 2^26.
std::uint64_t enumerate(const CurveOverFp& c);
// Order finding in the Hasse interval on E and its quadratic twist;
// kMinBabyGiantPrime <= q <= kMaxPrime.
std::uint64_t baby_giant(const CurveOverFp& c);

}  // namespace point_count

// |E~(F_q)| including the point at infinity. q odd; Error{SingularCurve} for a
// singular reduction and Error{PrimeTooLarge} above 10^9.
std::uint64_t count_points(const CurveOverFp& c);

// Reduction type at an odd prime, read off the global minimal model.
ReductionType classify_reduction(const WeierstrassCurve& c, const Integer& q);

struct TateResult {
    Kodaira kodaira;
    long conductor_exponent = 0;
    Integer tamagawa = 1;
    long minimal_disc_valuation = 0;
    bool good = false;
    bool multiplicative = false;
    bool split = false;  // meaningful only when multiplicative
    int rescalings = 0;  // non-minimality restarts
};

// Tate's algorithm at any prime q (including 2) on an arbitrary model.
TateResult tate_algorithm(const WeierstrassCurve& c, const Integer& q);

struct LocalData {
    Integer q;
    ReductionType reduction = ReductionType::GoodOrdinary;
    std::optional<std::int64_t> a_q;          // good reduction only
    std::optional<std::uint64_t> point_count;  // good reduction only
    Kodaira kodaira;
    long conductor_exponent = 0;
    Integer tamagawa = 1;
    long minimal_disc_valuation = 0;
    std::optional<Integer> p;
    std::optional<PPower> tamagawa_p_part;
    std::optional<PPower> d_p_part;  // only when q = p and reduction is good

    friend bool operator==(const LocalData&, const LocalData&) = default;
};

// Everything known about E at q; p-parts filled in when p is given. q = 2 is
// accepted (point count over F_2 by direct enumeration).
LocalData local_packet(const WeierstrassCurve& c, const Integer& q, const std::optional<Integer>& p);

// Re-derive the p-dependent fields of a packet for another p.
LocalData with_p_parts(LocalData data, const std::optional<Integer>& p);

}  // namespace selmer
