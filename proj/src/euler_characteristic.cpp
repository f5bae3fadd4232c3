#include "selmer/euler_characteristic.hpp"

#include <algorithm>
#include <set>

namespace selmer {

SignVector SignVector::parse(std::string_view text) {
    std::vector<Sign> signs;
    for (char ch : text) {
        if (ch == '+')
            signs.push_back(Sign::Plus);
        else if (ch == '-')
            signs.push_back(Sign::Minus);
        else
            throw Error(Errc::InvalidArgument, "sign vector may only contain '+' and '-'");
    }
    return SignVector(std::move(signs));
}

std::vector<SignVector> SignVector::enumerate(std::size_t r) {
    std::vector<SignVector> out;
    out.reserve(std::size_t{1} << r);
    for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
        std::vector<Sign> signs(r);
        for (std::size_t i = 0; i < r; ++i) signs[i] = (mask >> (r - 1 - i)) & 1 ? Sign::Minus : Sign::Plus;
        out.emplace_back(std::move(signs));
    }
    return out;
}

bool SignVector::is_all_minus() const {
    return std::all_of(signs_.begin(), signs_.end(), [](Sign s) { return s == Sign::Minus; });
}

std::string SignVector::to_string() const {
    std::string s;
    for (Sign x : signs_) s += x == Sign::Plus ? '+' : '-';
    return s;
}

std::size_t FieldLocalData::supersingular_count() const {
    return static_cast<std::size_t>(std::count_if(primes_above_p.begin(), primes_above_p.end(), [](const auto& w) {
        return w.reduction == ReductionType::GoodSupersingular;
    }));
}

void FieldLocalData::validate() const {
    auto check_power = [&](const PPower& x, const std::string& what) {
        if (x.prime != p) throw Error(Errc::SchemaViolation, what + " is not a power of p");
        if (x.exponent < 0) throw Error(Errc::SchemaViolation, what + " must be a positive integer");
    };
    if (primes_above_p.empty()) throw Error(Errc::SchemaViolation, "at least one prime above p is required");
    for (std::size_t i = 0; i < primes_above_p.size(); ++i) {
        const auto& w = primes_above_p[i];
        const std::string name = "prime above p #" + std::to_string(i + 1);
        if (w.ramification_index < 1 || w.residue_degree < 1)
            throw Error(Errc::SchemaViolation, name + ": e and f must be positive");
        if (is_good(w.reduction) != w.d_p_part.has_value())
            throw Error(Errc::SchemaViolation, name + ": d_p_part must be present exactly for good reduction");
        if (w.d_p_part) check_power(*w.d_p_part, name + " d_p_part");
    }
    for (const auto& c : away_tamagawa_p_parts) check_power(c.value, "Tamagawa p-part '" + c.label + "'");
    check_power(torsion_p_part, "torsion_p_part");
    check_power(sha_p_order, "sha_p_order");
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Waived: return "waived";
    }
    return "?";
}

HypothesisFailure::HypothesisFailure(HypothesisReport report)
    : Error(Errc::HypothesisFailure,
            [&] {
                std::string why;
                for (const Condition* c : {&report.s1, &report.s2, &report.s3, &report.s4})
                    if (c->status == Status::Fail) why += (why.empty() ? "" : "; ") + c->reason;
                if (!report.selmer_finite_asserted)
                    why += std::string(why.empty() ? "" : "; ") + "finiteness of Sel(E/F) not asserted";
                return why;
            }()),
      report_(std::move(report)) {}

bool EulerCharResult::breakdown_identity_holds() const {
    return chi * breakdown.torsion_p_sq ==
           breakdown.sha_p * breakdown.tamagawa_product_p_part * breakdown.ordinary_d_sq_product;
}

void require_odd_prime(const Integer& p) {
    if (p == 2 || !is_prime(p)) throw Error(Errc::EvenOrCompositeP, p.get_str() + " is not an odd prime");
}

HypothesisReport check_hypotheses(const FieldLocalData& data, const SignVector& signs) {
    require_odd_prime(data.p);
    data.validate();
    const std::size_t r = data.supersingular_count();
    if (signs.size() != r)
        throw Error(Errc::SignLengthMismatch, "sign vector has length " + std::to_string(signs.size()) + " but there " +
                                                  (r == 1 ? "is 1 supersingular prime" :
                                                            "are " + std::to_string(r) + " supersingular primes"));
    HypothesisReport report;
    auto fail = [](Condition& c, const std::string& why) {
        c.status = Status::Fail;
        c.reason += (c.reason.empty() ? "" : "; ") + why;
    };
    const auto& primes = data.primes_above_p;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const auto& w = primes[i];
        const std::string name = "prime #" + std::to_string(i + 1) + " above p";
        if (!is_good(w.reduction)) fail(report.s1, "bad reduction (" + std::string(to_string(w.reduction)) + ") at " + name);
        if (w.reduction != ReductionType::GoodSupersingular) continue;
        if (!w.base_is_qp) fail(report.s2, "completion of the base field at " + name + " is not Q_p");
        if (!w.a)
            fail(report.s2, "a_w not supplied at supersingular " + name);
        else if (*w.a != 0)
            fail(report.s2, "a_w = " + w.a->get_str() + " != 0 at " + name);
        if (!w.unramified) fail(report.s3, name + " ramifies in F/F'");
    }

    if (r == 0) {
        report.ordinary_case = true;
        report.notes.push_back("no supersingular primes above p: the classical ordinary formula applies");
        if (report.s2.status == Status::Pass) report.s2.reason = "no supersingular primes above p";
        if (report.s3.status == Status::Pass) report.s3.reason = "no supersingular primes above p";
        report.s4.reason = "no supersingular primes above p";
    } else if (signs.is_all_minus()) {
        report.s4 = {Status::Waived, "all signs are '-', the degree condition is not needed"};
    } else {
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const auto& w = primes[i];
            if (w.reduction != ReductionType::GoodSupersingular) continue;
            if (w.local_degree() % 4 == 0)
                fail(report.s4, "[F_w:Q_p] = " + std::to_string(w.local_degree()) + " = 0 mod 4 at prime #" +
                                    std::to_string(i + 1) + " above p");
        }
        bool has_minus = false;
        for (std::size_t i = 0; i < signs.size(); ++i) has_minus = has_minus || signs[i] == Sign::Minus;
        if (has_minus && report.s4.status == Status::Fail)
            report.notes.push_back(
                "mixed signs: the degree condition is enforced at every supersingular prime, including '-' ones");
    }

    report.selmer_finite_asserted = data.selmer_finite;
    if (!data.selmer_finite) report.notes.push_back("finiteness of Sel(E/F) was not asserted");
    const bool any_fail = report.s1.status == Status::Fail || report.s2.status == Status::Fail ||
                          report.s3.status == Status::Fail || report.s4.status == Status::Fail;
    report.overall = !any_fail && report.selmer_finite_asserted;
    return report;
}

EulerCharResult euler_char(const FieldLocalData& data, const SignVector& signs, bool override_hypotheses) {
    HypothesisReport report = check_hypotheses(data, signs);
    if (!report.overall && !override_hypotheses) throw HypothesisFailure(std::move(report));

    const Integer& p = data.p;
    EulerCharResult out;
    out.sign_vector_used = signs;
    out.overridden = !report.overall;
    out.breakdown.sha_p = data.sha_p_order;
    out.breakdown.torsion_p_sq = data.torsion_p_part.squared();
    out.breakdown.tamagawa_product_p_part = PPower::one(p);
    for (const auto& c : data.away_tamagawa_p_parts)
        out.breakdown.tamagawa_product_p_part = out.breakdown.tamagawa_product_p_part * c.value;
    out.breakdown.ordinary_d_sq_product = PPower::one(p);
    for (const auto& w : data.primes_above_p)
        if (w.reduction == ReductionType::GoodOrdinary)
            out.breakdown.ordinary_d_sq_product = out.breakdown.ordinary_d_sq_product * w.d_p_part->squared();
    const auto& b = out.breakdown;
    out.chi = b.sha_p * b.tamagawa_product_p_part * b.ordinary_d_sq_product / b.torsion_p_sq;

    out.notes.push_back("the value does not depend on the sign vector");
    out.notes.push_back("|Sha(E/F)(p)| = " + data.sha_p_order.to_string() + " is a user-supplied input");
    if (report.ordinary_case) out.notes.push_back("classical ordinary case: no supersingular primes above p");
    if (out.overridden) out.notes.push_back("WARNING: hypotheses overridden; the formula may not apply");
    if (out.chi.exponent < 0)
        out.notes.push_back("WARNING: negative exponent; a true Euler characteristic is a positive integer");
    return out;
}

LocalData compute_local_data(const WeierstrassCurve& minimal, const Integer& q) {
    return local_packet(minimal, q, std::nullopt);
}

CurveAnalysis analyze_curve(const WeierstrassCurve& c, const Integer& p, const PPower& sha_p_order,
                            bool selmer_finite, const LocalDataProvider& provider) {
    require_odd_prime(p);
    if (sha_p_order.prime != p || sha_p_order.exponent < 0)
        throw Error(Errc::NonPPower, "Sha order must be a power of p");
    const WeierstrassCurve minimal = minimal_model(c).curve;

    std::set<Integer> primes{p};
    for (const auto& [q, e] : factor(minimal.delta().get_num())) primes.insert(q);

    CurveAnalysis out{minimal, {}, torsion_subgroup(minimal), {}};
    out.field.p = p;
    for (const Integer& q : primes) {
        LocalData local = with_p_parts(provider(minimal, q), p);
        if (q == p) {
            PrimeAboveP w;
            w.reduction = local.reduction;
            if (local.a_q) w.a = Integer(static_cast<long>(*local.a_q));
            w.d_p_part = local.d_p_part;
            out.field.primes_above_p.push_back(w);
        }
        if (!is_good(local.reduction)) out.field.away_tamagawa_p_parts.push_back({q.get_str(), *local.tamagawa_p_part});
        out.local.push_back(std::move(local));
    }
    out.field.torsion_p_part = out.torsion.p_part(p);
    out.field.sha_p_order = sha_p_order;
    out.field.selmer_finite = selmer_finite;
    return out;
}

HypothesisReport check_hypotheses(const WeierstrassCurve& c, const Integer& p, const SignVector& signs,
                                  bool selmer_finite) {
    return check_hypotheses(analyze_curve(c, p, PPower::one(p), selmer_finite).field, signs);
}

EulerCharResult euler_char(const WeierstrassCurve& c, const Integer& p, const SignVector& signs,
                           const PPower& sha_p_order, bool selmer_finite, bool override_hypotheses) {
    return euler_char(analyze_curve(c, p, sha_p_order, selmer_finite).field, signs, override_hypotheses);
}

SignSweep sign_independence(const FieldLocalData& data) {
    const std::size_t r = data.supersingular_count();
    if (r == 0) throw Error(Errc::InvalidArgument, "no supersingular primes above p, nothing to sweep");
    if (r > kMaxSweepSigns) throw Error(Errc::TooManySigns, std::to_string(r) + " supersingular primes (limit 10)");
    SignSweep sweep;
    for (SignVector& s : SignVector::enumerate(r)) {
        SignSweep::Entry entry{s, check_hypotheses(data, s), std::nullopt};
        if (entry.report.overall) {
            entry.chi = euler_char(data, s).chi;
            if (!sweep.common_chi)
                sweep.common_chi = entry.chi;
            else if (!(*sweep.common_chi == *entry.chi))
                sweep.consistent = false;
        }
        sweep.entries.push_back(std::move(entry));
    }
    return sweep;
}

VanishingConclusion propagate_vanishing(const FieldLocalData& data, const SignVector& asserted) {
    const std::size_t r = data.supersingular_count();
    const HypothesisReport asserted_report = check_hypotheses(data, asserted);
    if (r == 0) {
        HypothesisReport failing = asserted_report;
        failing.s1 = {Status::Fail, "no supersingular primes above p"};
        throw HypothesisFailure(std::move(failing));
    }
    if (r > kMaxSweepSigns) throw Error(Errc::TooManySigns, std::to_string(r) + " supersingular primes (limit 10)");
    VanishingConclusion out;
    out.asserted = asserted;
    for (SignVector& s : SignVector::enumerate(r)) {
        HypothesisReport report = check_hypotheses(data, s);
        for (const Condition* c : {&report.s1, &report.s2, &report.s3, &report.s4})
            if (c->status == Status::Fail) throw HypothesisFailure(std::move(report));
        out.vanishing.push_back(std::move(s));
    }
    PPower local = PPower::one(data.p);
    for (const auto& c : data.away_tamagawa_p_parts) local = local * c.value;
    for (const auto& w : data.primes_above_p)
        if (w.reduction == ReductionType::GoodOrdinary) local = local * w.d_p_part->squared();
    out.local_factors_trivial = local.exponent == 0;
    out.notes.push_back("inferred from the user's assertion that the '" + asserted.to_string() +
                        "' signed Selmer group vanishes; the assertion itself is not verified");
    if (!out.local_factors_trivial)
        out.notes.push_back("WARNING: the local factors have p-part " + local.to_string() +
                            " != 1, which is incompatible with the asserted vanishing");
    return out;
}

PPower lambda_euler_char(const LambdaSeries& f) {
    require_odd_prime(f.p);
    if (f.precision && *f.precision < 1) throw Error(Errc::InvalidArgument, "precision must be positive");
    const bool nonzero = std::any_of(f.coefficients.begin(), f.coefficients.end(), [&](const Integer& c) {
        return c != 0 && (!f.precision || valuation(c, f.p) < *f.precision);
    });
    if (!nonzero) throw Error(Errc::InvalidArgument, "the series is zero at the declared precision");
    const Integer& constant = f.coefficients.front();
    if (constant == 0) throw Error(Errc::NonFiniteInvariants, "f(0) = 0: the Euler characteristic is undefined");
    const long v = valuation(constant, f.p);
    if (f.precision && v >= *f.precision)
        throw Error(Errc::PrecisionExhausted,
                    "v_p(f(0)) >= " + std::to_string(*f.precision) + ", beyond the declared precision");
    return PPower{f.p, v};
}

}  // namespace selmer
