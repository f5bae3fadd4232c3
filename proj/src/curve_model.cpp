#include "selmer/curve_model.hpp"

#include "selmer/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace selmer {

namespace {

Rational pow_q(const Rational& x, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= x;
    return r;
}

Integer pow_z(const Integer& x, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
    return r;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

bool parse_integer(std::string_view s, Integer& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') return false;
    std::string digits(s.substr(s[0] == '+' ? 1 : 0));
    return out.set_str(digits, 10) == 0;
}

// Kraus' local condition at 2 or 3 for (c4, c6) to come from an integral model.
bool kraus_holds_at(const Integer& ell, const Integer& c4, const Integer& c6) {
    if (ell == 3) return valuation(c6, ell) != 2;
    if (ell == 2) {
        if (mod(c6, 4) == 3) return true;
        const Integer r = mod(c6, 32);
        return valuation(c4, ell) >= 4 && (r == 0 || r == 8);
    }
    return true;
}

// Reduced integral model with the given invariants (Kraus' conditions assumed).
WeierstrassCurve::Coefficients model_from_c4c6(const Integer& c4, const Integer& c6) {
    Integer b2 = mod(-c6, 12);
    if (b2 > 6) b2 -= 12;
    const Integer b4_num = b2 * b2 - c4;
    const Integer b4 = b4_num / 24;
    const Integer b6_num = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
    const Integer b6 = b6_num / 216;
    if (b4 * 24 != b4_num || b6 * 216 != b6_num)
        throw std::logic_error("Kraus reconstruction: non-integral b-invariants");
    const Integer a1 = mod(b2, 2);
    const Integer a3 = mod(b6, 2);
    const Integer a2 = (b2 - a1) / 4;
    const Integer a4 = (b4 - a1 * a3) / 2;
    const Integer a6 = (b6 - a3) / 4;
    return {Rational(a1), Rational(a2), Rational(a3), Rational(a4), Rational(a6)};
}

}  // namespace

WeierstrassCurve::WeierstrassCurve(Coefficients a, std::optional<std::string> label)
    : a_(std::move(a)), label_(std::move(label)) {
    for (auto& x : a_) x.canonicalize();
    const auto& [a1, a2, a3, a4, a6] = a_;
    b2_ = a1 * a1 + 4 * a2;
    b4_ = 2 * a4 + a1 * a3;
    b6_ = a3 * a3 + 4 * a6;
    b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    delta_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (4 * b8_ != b2_ * b6_ - b4_ * b4_ || 1728 * delta_ != c4_ * c4_ * c4_ - c6_ * c6_)
        throw std::logic_error("Weierstrass invariant identities violated");
    if (delta_ == 0) throw Error(Errc::SingularModel, "discriminant is zero");
}

WeierstrassCurve WeierstrassCurve::with_label(std::optional<std::string> label) const {
    WeierstrassCurve copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

bool WeierstrassCurve::is_integral() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

WeierstrassCurve new_curve(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                           const Rational& a6) {
    return WeierstrassCurve({a1, a2, a3, a4, a6});
}

Rational parse_rational(std::string_view text) {
    text = trim(text);
    const auto slash = text.find('/');
    Integer num, den = 1;
    bool ok = false;
    if (slash == std::string_view::npos) {
        ok = parse_integer(text, num);
    } else {
        const auto den_text = trim(text.substr(slash + 1));
        ok = parse_integer(trim(text.substr(0, slash)), num) && !den_text.empty() && den_text[0] != '-' &&
             den_text[0] != '+' && parse_integer(den_text, den) && den != 0;
    }
    if (!ok) throw Error(Errc::NonRational, "cannot parse '" + std::string(text) + "' as a rational");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

WeierstrassCurve parse_curve(std::string_view text, std::optional<std::string> label) {
    WeierstrassCurve::Coefficients a;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto field = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        if (count == 5) throw Error(Errc::NonRational, "expected exactly five coefficients");
        a[count++] = parse_rational(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (count != 5) throw Error(Errc::NonRational, "expected exactly five coefficients");
    return WeierstrassCurve(std::move(a), std::move(label));
}

std::string format_curve(const WeierstrassCurve& c) {
    std::ostringstream os;
    for (std::size_t i = 0; i < 5; ++i) os << (i ? "," : "") << c.coefficients()[i].get_str();
    return os.str();
}

ModelTransform ModelTransform::then(const ModelTransform& next) const {
    return ModelTransform{u * next.u, r + u * u * next.r, s + u * next.s,
                          t + u * u * s * next.r + u * u * u * next.t};
}

ModelTransform ModelTransform::inverse() const {
    return ModelTransform{1 / u, -r / (u * u), -s / u, (r * s - t) / (u * u * u)};
}

WeierstrassCurve apply(const ModelTransform& tr, const WeierstrassCurve& c) {
    const auto& [a1, a2, a3, a4, a6] = c.coefficients();
    const auto& [u, r, s, t] = tr;
    if (u == 0) throw Error(Errc::InvalidArgument, "transform with u = 0");
    WeierstrassCurve::Coefficients n{
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / pow_q(u, 2),
        (a3 + r * a1 + 2 * t) / pow_q(u, 3),
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / pow_q(u, 4),
        (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / pow_q(u, 6),
    };
    return WeierstrassCurve(std::move(n), c.label());
}

TransformedModel integral_model(const WeierstrassCurve& c) {
    std::map<Integer, long> scale;  // prime -> exponent of D
    for (std::size_t i = 0; i < 5; ++i) {
        static constexpr long weight[5] = {1, 2, 3, 4, 6};
        const Integer den = c.coefficients()[i].get_den();
        if (den == 1) continue;
        for (const auto& [ell, e] : factor(den)) {
            const long need = (e + weight[i] - 1) / weight[i];
            scale[ell] = std::max(scale[ell], need);
        }
    }
    if (scale.empty()) return {c, ModelTransform::identity()};
    Integer d = 1;
    for (const auto& [ell, e] : scale) d *= pow_z(ell, static_cast<unsigned long>(e));
    ModelTransform tr{Rational(1, 1) / Rational(d), 0, 0, 0};
    return {apply(tr, c), tr};
}

TransformedModel minimal_model(const WeierstrassCurve& c) {
    const auto [integral, to_integral] = integral_model(c);
    Integer c4 = integral.c4().get_num();
    Integer c6 = integral.c6().get_num();
    const Integer delta = integral.delta().get_num();

    Integer u = 1;
    for (const auto& [ell, e] : factor(delta)) {
        if (e < 12) continue;
        long d = e / 12;
        if (c4 != 0) d = std::min(d, valuation(c4, ell) / 4);
        if (c6 != 0) d = std::min(d, valuation(c6, ell) / 6);
        while (d > 0 && !kraus_holds_at(ell, Integer(c4 / pow_z(ell, 4 * d)), Integer(c6 / pow_z(ell, 6 * d))))
            --d;
        u *= pow_z(ell, static_cast<unsigned long>(d));
    }
    c4 /= pow_z(u, 4);
    c6 /= pow_z(u, 6);
    const WeierstrassCurve minimal(model_from_c4c6(c4, c6), c.label());
    if (minimal.c4() != c4 || minimal.c6() != c6) throw std::logic_error("minimal model invariants mismatch");

    // Recover r, s, t for the composite map input -> minimal.
    const Rational total_u = to_integral.u * Rational(u);
    const Rational s = (total_u * minimal.a1() - c.a1()) / 2;
    const Rational r = (total_u * total_u * minimal.a2() - c.a2() + s * c.a1() + s * s) / 3;
    const Rational t = (total_u * total_u * total_u * minimal.a3() - c.a3() - r * c.a1()) / 2;
    ModelTransform tr{total_u, r, s, t};
    if (!(apply(tr, c) == minimal)) throw std::logic_error("minimal model transform does not map input to output");
    return {minimal, tr};
}

Integer CurveOverFp::b2() const { return mod(a[0] * a[0] + 4 * a[1], q); }
Integer CurveOverFp::b4() const { return mod(2 * a[3] + a[0] * a[2], q); }
Integer CurveOverFp::b6() const { return mod(a[2] * a[2] + 4 * a[4], q); }
Integer CurveOverFp::c4() const {
    const Integer x = b2();
    return mod(x * x - 24 * b4(), q);
}
Integer CurveOverFp::c6() const {
    const Integer x = b2();
    return mod(-x * x * x + 36 * x * b4() - 216 * b6(), q);
}

CurveOverFp reduce_mod(const WeierstrassCurve& c, const Integer& q) {
    if (!is_prime(q)) throw Error(Errc::InvalidArgument, q.get_str() + " is not prime");
    CurveOverFp out;
    out.q = q;
    for (std::size_t i = 0; i < 5; ++i) {
        const Rational& x = c.coefficients()[i];
        if (valuation(x, q) < 0)
            throw Error(Errc::NotIntegralAt, "a-invariant " + x.get_str() + " is not integral at " + q.get_str());
        Integer den_inv;
        const Integer den = x.get_den();
        mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), q.get_mpz_t());
        out.a[i] = mod(Integer(x.get_num()) * (den == 1 ? Integer(1) : den_inv), q);
    }
    out.singular = valuation(c.delta(), q) > 0;
    return out;
}

}  // namespace selmer
