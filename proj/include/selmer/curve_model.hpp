#pragma once

#include "selmer/arith.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace selmer {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q, with its standard
// invariants computed once at construction and checked against
//   4 b8 = b2 b6 - b4^2   and   1728 delta = c4^3 - c6^2.
class WeierstrassCurve {
public:
    using Coefficients = std::array<Rational, 5>;

    // Throws Error{SingularModel} when delta = 0.
    explicit WeierstrassCurve(Coefficients a, std::optional<std::string> label = std::nullopt);

    const Coefficients& coefficients() const { return a_; }
    const Rational& a1() const { return a_[0]; }
    const Rational& a2() const { return a_[1]; }
    const Rational& a3() const { return a_[2]; }
    const Rational& a4() const { return a_[3]; }
    const Rational& a6() const { return a_[4]; }

    const Rational& b2() const { return b2_; }
    const Rational& b4() const { return b4_; }
    const Rational& b6() const { return b6_; }
    const Rational& b8() const { return b8_; }
    const Rational& c4() const { return c4_; }
    const Rational& c6() const { return c6_; }
    const Rational& delta() const { return delta_; }

    const std::optional<std::string>& label() const { return label_; }
    WeierstrassCurve with_label(std::optional<std::string> label) const;

    bool is_integral() const;

    friend bool operator==(const WeierstrassCurve& x, const WeierstrassCurve& y) { return x.a_ == y.a_; }

private:
    Coefficients a_;
    Rational b2_, b4_, b6_, b8_, c4_, c6_, delta_;
    std::optional<std::string> label_;
};

WeierstrassCurve new_curve(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                           const Rational& a6);

// Parses "a1,a2,a3,a4,a6" with integer or "p/q" entries; Error{NonRational}
// on anything else.
WeierstrassCurve parse_curve(std::string_view text, std::optional<std::string> label = std::nullopt);
Rational parse_rational(std::string_view text);

// Canonical "a1,a2,a3,a4,a6" rendering (inverse of parse_curve).
std::string format_curve(const WeierstrassCurve& c);

// The substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct ModelTransform {
    Rational u{1}, r{0}, s{0}, t{0};

    static ModelTransform identity() { return {}; }
    bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }

    // Apply *this first, then `next`.
    ModelTransform then(const ModelTransform& next) const;
    ModelTransform inverse() const;

    friend bool operator==(const ModelTransform&, const ModelTransform&) = default;
};

WeierstrassCurve apply(const ModelTransform& transform, const WeierstrassCurve& c);

struct TransformedModel {
    WeierstrassCurve curve;
    ModelTransform transform;  // maps the input model to `curve`
};

// Scales away denominators (u = 1/D, r = s = t = 0).
TransformedModel integral_model(const WeierstrassCurve& c);

// Global minimal model over Q in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1}),
// via Kraus' conditions and Laska's scaling search.
TransformedModel minimal_model(const WeierstrassCurve& c);

// Residues of a model modulo a prime q.
struct CurveOverFp {
    Integer q;
    std::array<Integer, 5> a;
    bool singular = false;

    Integer b2() const;
    Integer b4() const;
    Integer b6() const;
    Integer c4() const;
    Integer c6() const;
};

// Error{NotIntegralAt} if some coefficient has negative q-valuation.
CurveOverFp reduce_mod(const WeierstrassCurve& c, const Integer& q);

}  // namespace selmer
