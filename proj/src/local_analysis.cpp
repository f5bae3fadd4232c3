#include "selmer/local_analysis.hpp"

#include "selmer/error.hpp"

#include <array>
#include <stdexcept>

namespace selmer {

std::string_view to_string(ReductionType t) {
    switch (t) {
        case ReductionType::GoodOrdinary: return "good_ordinary";
        case ReductionType::GoodSupersingular: return "good_supersingular";
        case ReductionType::SplitMultiplicative: return "split_multiplicative";
        case ReductionType::NonsplitMultiplicative: return "nonsplit_multiplicative";
        case ReductionType::Additive: return "additive";
    }
    return "unknown";
}

std::optional<ReductionType> parse_reduction_type(std::string_view s) {
    for (auto t : {ReductionType::GoodOrdinary, ReductionType::GoodSupersingular, ReductionType::SplitMultiplicative,
                   ReductionType::NonsplitMultiplicative, ReductionType::Additive})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::string Kodaira::to_string() const {
    switch (type) {
        case Type::I0: return "I0";
        case Type::In: return "I" + std::to_string(n);
        case Type::II: return "II";
        case Type::III: return "III";
        case Type::IV: return "IV";
        case Type::I0Star: return "I0*";
        case Type::InStar: return "I" + std::to_string(n) + "*";
        case Type::IVStar: return "IV*";
        case Type::IIIStar: return "III*";
        case Type::IIStar: return "II*";
    }
    return "?";
}

std::optional<Kodaira> Kodaira::parse(std::string_view s) {
    static constexpr std::array<std::pair<std::string_view, Type>, 7> fixed{{{"I0", Type::I0},
                                                                           {"II", Type::II},
                                                                           {"III", Type::III},
                                                                           {"IV", Type::IV},
                                                                           {"I0*", Type::I0Star},
                                                                           {"IV*", Type::IVStar},
                                                                           {"III*", Type::IIIStar}}};
    if (s == "II*") return Kodaira{Type::IIStar, 0};
    for (const auto& [name, type] : fixed)
        if (s == name) return Kodaira{type, 0};
    if (s.size() < 2 || s[0] != 'I') return std::nullopt;
    const bool star = s.back() == '*';
    const auto digits = s.substr(1, s.size() - 1 - (star ? 1 : 0));
    if (digits.empty() || digits[0] == '0') return std::nullopt;
    long n = 0;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') return std::nullopt;
        n = 10 * n + (ch - '0');
    }
    return Kodaira{star ? Type::InStar : Type::In, n};
}

namespace {

// Integral Weierstrass model with in-place unimodular substitutions.
struct IntModel {
    Integer a1, a2, a3, a4, a6;

    explicit IntModel(const WeierstrassCurve& c) {
        const auto& a = c.coefficients();
        for (const auto& x : a)
            if (x.get_den() != 1) throw std::logic_error("IntModel needs an integral model");
        a1 = a[0].get_num();
        a2 = a[1].get_num();
        a3 = a[2].get_num();
        a4 = a[3].get_num();
        a6 = a[4].get_num();
    }

    Integer b2() const { return a1 * a1 + 4 * a2; }
    Integer b4() const { return 2 * a4 + a1 * a3; }
    Integer b6() const { return a3 * a3 + 4 * a6; }
    Integer b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    Integer delta() const {
        const Integer x2 = b2(), x4 = b4(), x6 = b6(), x8 = b8();
        return -x2 * x2 * x8 - 8 * x4 * x4 * x4 - 27 * x6 * x6 + 9 * x2 * x4 * x6;
    }

    void rst(const Integer& r, const Integer& s, const Integer& t) {
        const Integer n1 = a1 + 2 * s;
        const Integer n2 = a2 - s * a1 + 3 * r - s * s;
        const Integer n3 = a3 + r * a1 + 2 * t;
        const Integer n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        const Integer n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        a1 = n1;
        a2 = n2;
        a3 = n3;
        a4 = n4;
        a6 = n6;
    }

    void scale_down(const Integer& q) {
        a1 /= q;
        a2 /= q * q;
        a3 /= q * q * q;
        a4 /= q * q * q * q;
        a6 /= q * q * q * q * q * q;
    }
};

Integer inv_mod(const Integer& a, const Integer& q) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), mod(a, q).get_mpz_t(), q.get_mpz_t()) == 0)
        throw std::logic_error("inverse of a non-unit");
    return r;
}

bool divisible(const Integer& n, const Integer& d) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

// Moves the singular point of the reduction mod q (q | delta) to (0, 0).
void move_singular_point_to_origin(IntModel& m, const Integer& q) {
    Integer r, t;
    if (q >= 5) {
        const Integer b2 = m.b2(), b4 = m.b4(), b6 = m.b6();
        const Integer c4 = b2 * b2 - 24 * b4;
        const Integer c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
        if (divisible(c4, q))
            r = mod(-b2 * inv_mod(12, q), q);
        else
            r = mod(-(c6 + b2 * c4) * inv_mod(Integer(12 * c4), q), q);
        t = mod(-(m.a1 * r + m.a3) * inv_mod(2, q), q);
    } else {
        bool found = false;
        const unsigned long qs = q.get_ui();
        for (unsigned long x = 0; x < qs && !found; ++x) {
            for (unsigned long y = 0; y < qs && !found; ++y) {
                const Integer X = x, Y = y;
                const Integer f = Y * Y + m.a1 * X * Y + m.a3 * Y - X * X * X - m.a2 * X * X - m.a4 * X - m.a6;
                const Integer fx = m.a1 * Y - 3 * X * X - 2 * m.a2 * X - m.a4;
                const Integer fy = 2 * Y + m.a1 * X + m.a3;
                if (divisible(f, q) && divisible(fx, q) && divisible(fy, q)) {
                    r = X;
                    t = Y;
                    found = true;
                }
            }
        }
        if (!found) throw std::logic_error("no singular point on a singular reduction");
    }
    m.rst(r, 0, t);
    if (!divisible(m.a3, q) || !divisible(m.a4, q) || !divisible(m.a6, q))
        throw std::logic_error("singular point not moved to the origin");
}

void require(bool condition, const char* what) {
    if (!condition) throw std::logic_error(what);
}

}  // namespace

TateResult tate_algorithm(const WeierstrassCurve& c, const Integer& q) {
    if (!is_prime(q)) throw Error(Errc::InvalidArgument, q.get_str() + " is not prime");
    IntModel m(integral_model(c).curve);
    TateResult out;
    const Integer half = (q + 1) / 2;  // inverse of 2 mod odd q

    while (true) {
        const long n = valuation(m.delta(), q);
        out.minimal_disc_valuation = n;
        if (n == 0) {
            out.good = true;
            out.kodaira = {Kodaira::Type::I0, 0};
            out.conductor_exponent = 0;
            out.tamagawa = 1;
            return out;
        }
        move_singular_point_to_origin(m, q);

        if (!divisible(m.b2(), q)) {
            out.multiplicative = true;
            out.kodaira = {Kodaira::Type::In, n};
            out.conductor_exponent = 1;
            out.split = count_quadratic_roots(1, m.a1, -m.a2, q) > 0;
            out.tamagawa = out.split ? Integer(n) : Integer(n % 2 == 0 ? 2 : 1);
            return out;
        }
        if (valuation(m.a6, q) < 2) {
            out.kodaira = {Kodaira::Type::II, 0};
            out.tamagawa = 1;
            out.conductor_exponent = n;
            return out;
        }
        if (valuation(m.b8(), q) < 3) {
            out.kodaira = {Kodaira::Type::III, 0};
            out.tamagawa = 2;
            out.conductor_exponent = n - 1;
            return out;
        }
        if (valuation(m.b6(), q) < 3) {
            out.kodaira = {Kodaira::Type::IV, 0};
            out.tamagawa = count_quadratic_roots(1, Integer(m.a3 / q), Integer(-m.a6 / (q * q)), q) > 0 ? 3 : 1;
            out.conductor_exponent = n - 2;
            return out;
        }

        // Arrange q | a1, a2; q^2 | a3, a4; q^3 | a6.
        if (q == 2)
            m.rst(0, mod(m.a2, 2), 2 * mod(Integer(m.a6 / 4), 2));
        else
            m.rst(0, -m.a1 * half, -m.a3 * half);
        const Integer q2 = q * q, q3 = q2 * q;
        require(divisible(m.a1, q) && divisible(m.a2, q) && divisible(m.a3, q2) && divisible(m.a4, q2) &&
                    divisible(m.a6, q3),
                "Tate step 6 normalization failed");

        // P(T) = T^3 + b T^2 + c T + d
        const Integer b = m.a2 / q, cc = m.a4 / q2, d = m.a6 / q3;
        const Integer w = 27 * d * d - b * b * cc * cc + 4 * b * b * b * d - 18 * b * cc * d + 4 * cc * cc * cc;
        const Integer x = 3 * cc - b * b;

        if (!divisible(w, q)) {
            out.kodaira = {Kodaira::Type::I0Star, 0};
            out.tamagawa = 1 + count_monic_cubic_roots(b, cc, d, q);
            out.conductor_exponent = n - 4;
            return out;
        }

        if (!divisible(x, q)) {
            // Double root of P: move it to 0.
            Integer r;
            if (q == 2)
                r = cc;
            else if (q == 3)
                r = b * cc;
            else
                r = (b * cc - 9 * d) * inv_mod(Integer(2 * x), q);
            m.rst(q * mod(r, q), 0, 0);

            long ix = 3, iy = 3;
            Integer mx = q2, my = q2;
            while (true) {
                Integer a2t = m.a2 / q, a3t = m.a3 / my, a4t = m.a4 / (q * mx), a6t = m.a6 / (mx * my);
                if (!divisible(Integer(a3t * a3t + 4 * a6t), q)) {
                    out.tamagawa = count_quadratic_roots(1, a3t, -a6t, q) > 0 ? 4 : 2;
                    break;
                }
                const Integer t = my * (q == 2 ? mod(a6t, 2) : mod(Integer(-a3t * half), q));
                m.rst(0, 0, t);
                my *= q;
                ++iy;
                a2t = m.a2 / q;
                a3t = m.a3 / my;
                a4t = m.a4 / (q * mx);
                a6t = m.a6 / (mx * my);
                if (!divisible(Integer(a4t * a4t - 4 * a6t * a2t), q)) {
                    out.tamagawa = count_quadratic_roots(a2t, a4t, a6t, q) > 0 ? 4 : 2;
                    break;
                }
                const Integer r2 =
                    mx * (q == 2 ? mod(Integer(a6t * a2t), 2) : mod(Integer(-a4t * inv_mod(Integer(2 * a2t), q)), q));
                m.rst(r2, 0, 0);
                mx *= q;
                ++ix;
            }
            out.kodaira = {Kodaira::Type::InStar, ix + iy - 5};
            out.conductor_exponent = n - ix - iy + 1;
            return out;
        }

        // Triple root of P: move it to 0.
        Integer r;
        if (q == 2)
            r = b;
        else if (q == 3)
            r = -d;
        else
            r = -b * inv_mod(3, q);
        m.rst(q * mod(r, q), 0, 0);
        const Integer q4 = q3 * q;
        require(divisible(m.a2, q2) && divisible(m.a4, q3) && divisible(m.a6, q4), "Tate step 8 translation failed");

        const Integer x3 = m.a3 / q2, x6 = m.a6 / q4;
        if (!divisible(Integer(x3 * x3 + 4 * x6), q)) {
            out.kodaira = {Kodaira::Type::IVStar, 0};
            out.tamagawa = count_quadratic_roots(1, x3, -x6, q) > 0 ? 3 : 1;
            out.conductor_exponent = n - 6;
            return out;
        }
        const Integer t = q2 * (q == 2 ? mod(x6, 2) : mod(Integer(-x3 * half), q));
        m.rst(0, 0, t);
        require(divisible(m.a3, q3) && divisible(m.a6, q4 * q), "Tate step 9 translation failed");
        if (valuation(m.a4, q) < 4) {
            out.kodaira = {Kodaira::Type::IIIStar, 0};
            out.tamagawa = 2;
            out.conductor_exponent = n - 7;
            return out;
        }
        if (valuation(m.a6, q) < 6) {
            out.kodaira = {Kodaira::Type::IIStar, 0};
            out.tamagawa = 1;
            out.conductor_exponent = n - 8;
            return out;
        }
        // Not minimal at q: scale by q and start again.
        m.scale_down(q);
        ++out.rescalings;
    }
}

namespace {

struct Classification {
    ReductionType type;
    std::optional<std::uint64_t> point_count;
};

// Over F_2 by listing the affine solutions.
std::uint64_t count_points_f2(const CurveOverFp& c) {
    std::uint64_t n = 1;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const Integer f = y * y + c.a[0] * x * y + c.a[2] * y - x * x * x - c.a[1] * x * x - c.a[3] * x - c.a[4];
            if (mod(f, 2) == 0) ++n;
        }
    return n;
}

Classification classify_minimal(const WeierstrassCurve& minimal, const Integer& q) {
    if (valuation(minimal.delta(), q) == 0) {
        const CurveOverFp reduced = reduce_mod(minimal, q);
        const std::uint64_t n = q == 2 ? count_points_f2(reduced) : count_points(reduced);
        const Integer a = q + 1 - Integer(static_cast<unsigned long>(n));
        const bool supersingular = divisible(a, q);
        return {supersingular ? ReductionType::GoodSupersingular : ReductionType::GoodOrdinary, n};
    }
    if (valuation(minimal.c4(), q) > 0) return {ReductionType::Additive, std::nullopt};
    IntModel m(minimal);
    move_singular_point_to_origin(m, q);
    // Tangent cone y^2 + a1 xy - a2 x^2 at the node.
    const bool split = count_quadratic_roots(1, m.a1, -m.a2, q) > 0;
    return {split ? ReductionType::SplitMultiplicative : ReductionType::NonsplitMultiplicative, std::nullopt};
}

void require_prime(const Integer& q) {
    if (!is_prime(q)) throw Error(Errc::InvalidArgument, q.get_str() + " is not prime");
}

}  // namespace

ReductionType classify_reduction(const WeierstrassCurve& c, const Integer& q) {
    require_prime(q);
    if (q == 2) throw Error(Errc::InvalidArgument, "classify_reduction needs an odd prime");
    return classify_minimal(minimal_model(c).curve, q).type;
}

LocalData with_p_parts(LocalData data, const std::optional<Integer>& p) {
    data.p = p;
    data.tamagawa_p_part.reset();
    data.d_p_part.reset();
    if (!p) return data;
    data.tamagawa_p_part = PPower::p_part_of(data.tamagawa, *p);
    if (data.q == *p && data.point_count)
        data.d_p_part = PPower::p_part_of(Integer(static_cast<unsigned long>(*data.point_count)), *p);
    return data;
}

LocalData local_packet(const WeierstrassCurve& c, const Integer& q, const std::optional<Integer>& p) {
    require_prime(q);
    if (p && (!is_prime(*p) || *p == 2)) throw Error(Errc::EvenOrCompositeP, p->get_str() + " is not an odd prime");
    const WeierstrassCurve minimal = minimal_model(c).curve;
    const TateResult tate = tate_algorithm(minimal, q);
    const Classification cls = classify_minimal(minimal, q);
    if (tate.good != is_good(cls.type) || tate.multiplicative != is_multiplicative(cls.type) ||
        (tate.multiplicative && tate.split != (cls.type == ReductionType::SplitMultiplicative)))
        throw std::logic_error("Tate's algorithm and reduction classification disagree");

    LocalData out;
    out.q = q;
    out.reduction = cls.type;
    out.kodaira = tate.kodaira;
    out.conductor_exponent = tate.conductor_exponent;
    out.tamagawa = tate.tamagawa;
    out.minimal_disc_valuation = tate.minimal_disc_valuation;
    if (cls.point_count) {
        out.point_count = cls.point_count;
        const Integer a = q + 1 - Integer(static_cast<unsigned long>(*cls.point_count));
        out.a_q = a.get_si();
    }
    return with_p_parts(std::move(out), p);
}

}  // namespace selmer
