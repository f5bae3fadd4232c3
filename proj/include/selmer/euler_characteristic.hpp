#pragma once

#include "selmer/arith.hpp"
#include "selmer/curve_model.hpp"
#include "selmer/error.hpp"
#include "selmer/global_invariants.hpp"
#include "selmer/local_analysis.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selmer {

enum class Sign { Plus, Minus };

// One sign per supersingular prime above p, in the order the primes are listed.
class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::vector<Sign> signs) : signs_(std::move(signs)) {}

    // "+-+" style; the empty string is the empty vector. Error{InvalidArgument}
    // on any other character.
    static SignVector parse(std::string_view text);
    static SignVector all_minus(std::size_t r) { return SignVector(std::vector<Sign>(r, Sign::Minus)); }
    // All 2^r vectors, "+" before "-" lexicographically.
    static std::vector<SignVector> enumerate(std::size_t r);

    std::size_t size() const { return signs_.size(); }
    bool empty() const { return signs_.empty(); }
    bool is_all_minus() const;
    Sign operator[](std::size_t i) const { return signs_[i]; }
    std::string to_string() const;

    friend bool operator==(const SignVector&, const SignVector&) = default;

private:
    std::vector<Sign> signs_;
};

// A prime w of F above p.
struct PrimeAboveP {
    long ramification_index = 1;  // e_w
    long residue_degree = 1;      // f_w
    ReductionType reduction = ReductionType::GoodOrdinary;
    std::optional<Integer> a;        // 1 + p - |E~(F_p)| where known
    std::optional<PPower> d_p_part;  // p-part of |E~(f_w)|, good reduction only
    bool base_is_qp = true;          // the completion of the base field at v is Q_p
    bool unramified = true;          // v is unramified in F/F'

    long local_degree() const { return ramification_index * residue_degree; }
    friend bool operator==(const PrimeAboveP&, const PrimeAboveP&) = default;
};

struct LabeledPPower {
    std::string label;
    PPower value;
    friend bool operator==(const LabeledPPower&, const LabeledPPower&) = default;
};

// Local arithmetic of E over a base field F, supplied directly or derived from a
// curve over Q.
struct FieldLocalData {
    Integer p;
    std::vector<PrimeAboveP> primes_above_p;
    std::vector<LabeledPPower> away_tamagawa_p_parts;  // c_w^(p) for w not above p
    PPower torsion_p_part;
    PPower sha_p_order;
    bool selmer_finite = false;

    std::size_t supersingular_count() const;
    // Error{SchemaViolation} when an invariant of the data is broken.
    void validate() const;
    friend bool operator==(const FieldLocalData&, const FieldLocalData&) = default;
};

enum class Status { Pass, Fail, Waived };
std::string_view to_string(Status s);

struct Condition {
    Status status = Status::Pass;
    std::string reason;
    friend bool operator==(const Condition&, const Condition&) = default;
};

struct HypothesisReport {
    Condition s1, s2, s3, s4;
    bool selmer_finite_asserted = false;
    bool overall = false;
    bool ordinary_case = false;  // no supersingular primes above p
    std::vector<std::string> notes;
    friend bool operator==(const HypothesisReport&, const HypothesisReport&) = default;
};

class HypothesisFailure : public Error {
public:
    explicit HypothesisFailure(HypothesisReport report);
    const HypothesisReport& report() const { return report_; }

private:
    HypothesisReport report_;
};

struct EulerBreakdown {
    PPower sha_p;
    PPower torsion_p_sq;  // denominator
    PPower tamagawa_product_p_part;
    PPower ordinary_d_sq_product;
    friend bool operator==(const EulerBreakdown&, const EulerBreakdown&) = default;
};

struct EulerCharResult {
    PPower chi;
    EulerBreakdown breakdown;
    SignVector sign_vector_used;
    bool overridden = false;
    std::vector<std::string> notes;

    // chi * torsion^2 == sha * tamagawa * d^2
    bool breakdown_identity_holds() const;
    friend bool operator==(const EulerCharResult&, const EulerCharResult&) = default;
};

void require_odd_prime(const Integer& p);

HypothesisReport check_hypotheses(const FieldLocalData& data, const SignVector& signs);

// chi = |Sha(p)| / |E(F)(p)|^2 * prod c_w^(p) * prod_{ordinary w | p} (d_w^(p))^2.
// Throws HypothesisFailure unless the hypotheses hold or `override_hypotheses`.
EulerCharResult euler_char(const FieldLocalData& data, const SignVector& signs, bool override_hypotheses = false);

// Everything computed for a curve over Q at p.
struct CurveAnalysis {
    WeierstrassCurve minimal;
    std::vector<LocalData> local;  // bad primes of the minimal model and p, ascending
    TorsionInfo torsion;
    FieldLocalData field;
};

using LocalDataProvider = std::function<LocalData(const WeierstrassCurve& minimal, const Integer& q)>;

// Default provider: local_packet without p-parts.
LocalData compute_local_data(const WeierstrassCurve& minimal, const Integer& q);

CurveAnalysis analyze_curve(const WeierstrassCurve& c, const Integer& p, const PPower& sha_p_order,
                            bool selmer_finite, const LocalDataProvider& provider = compute_local_data);

HypothesisReport check_hypotheses(const WeierstrassCurve& c, const Integer& p, const SignVector& signs,
                                  bool selmer_finite = false);
EulerCharResult euler_char(const WeierstrassCurve& c, const Integer& p, const SignVector& signs,
                           const PPower& sha_p_order, bool selmer_finite, bool override_hypotheses = false);

inline constexpr std::size_t kMaxSweepSigns = 10;

struct SignSweep {
    struct Entry {
        SignVector signs;
        HypothesisReport report;
        std::optional<PPower> chi;  // set when the hypotheses pass
    };
    std::vector<Entry> entries;
    bool consistent = true;  // all produced chi values agree
    std::optional<PPower> common_chi;
};

// Evaluates every sign vector; Error{TooManySigns} for more than 10 supersingular
// primes, Error{InvalidArgument} when there are none.
SignSweep sign_independence(const FieldLocalData& data);

struct VanishingConclusion {
    SignVector asserted;
    std::vector<SignVector> vanishing;  // all 2^r vectors
    bool local_factors_trivial = true;  // prod c^(p) * prod d^(p)^2 == 1, as the inference requires
    std::vector<std::string> notes;
};

// From a user assertion that one signed Selmer group over the cyclotomic
// Z_p-extension vanishes, conclude that all of them do. Needs (S1)-(S4) for
// every sign vector; throws HypothesisFailure otherwise.
VanishingConclusion propagate_vanishing(const FieldLocalData& data, const SignVector& asserted);

// A power series in T = gamma - 1 with p-adic integer coefficients known
// modulo p^precision (exact when precision is absent).
struct LambdaSeries {
    Integer p;
    std::vector<Integer> coefficients;  // constant term first
    std::optional<long> precision;
};

// p^{v_p(f(0))}: the Gamma-Euler characteristic of a torsion module with
// characteristic series f and finite Gamma-invariants.
// Error{NonFiniteInvariants} when f(0) = 0, Error{PrecisionExhausted} when
// v_p(f(0)) reaches the precision.
PPower lambda_euler_char(const LambdaSeries& f);

}  // namespace selmer
