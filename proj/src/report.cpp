#include "selmer/report.hpp"

#include <iomanip>
#include <sstream>

namespace selmer {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(Errc::SchemaViolation, what); }

Integer integer_from_string(const std::string& s, const std::string& what) {
    Integer n;
    const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos || n.set_str(s, 10) != 0)
        schema_error(what + ": '" + s + "' is not a decimal integer");
    return n;
}

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string require_string(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_string()) schema_error(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

bool require_bool(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_boolean()) schema_error(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

long require_long(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number_integer()) schema_error(std::string("field '") + key + "' must be an integer");
    return v.get<long>();
}

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_string(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

PPower ppower_from_string(const std::string& s, const Integer& p) {
    if (s.rfind("1/", 0) == 0) {
        const PPower inv = PPower::parse(s.substr(2), p);
        return PPower{p, -inv.exponent};
    }
    return PPower::parse(s, p);
}

json to_json(const Condition& c) { return {{"status", std::string(to_string(c.status))}, {"reason", c.reason}}; }

Condition condition_from_json(const json& j) {
    const std::string status = require_string(j, "status");
    Condition c;
    if (status == "pass")
        c.status = Status::Pass;
    else if (status == "fail")
        c.status = Status::Fail;
    else if (status == "waived")
        c.status = Status::Waived;
    else
        schema_error("unknown status '" + status + "'");
    c.reason = require_string(j, "reason");
    return c;
}

json to_json(const HypothesisReport& r) {
    return {{"s1", to_json(r.s1)},
            {"s2", to_json(r.s2)},
            {"s3", to_json(r.s3)},
            {"s4", to_json(r.s4)},
            {"selmer_finiteness", r.selmer_finite_asserted ? "asserted" : "not_asserted"},
            {"overall", r.overall},
            {"ordinary_case", r.ordinary_case},
            {"notes", r.notes}};
}

HypothesisReport hypotheses_from_json(const json& j) {
    HypothesisReport r;
    r.s1 = condition_from_json(require(j, "s1"));
    r.s2 = condition_from_json(require(j, "s2"));
    r.s3 = condition_from_json(require(j, "s3"));
    r.s4 = condition_from_json(require(j, "s4"));
    r.selmer_finite_asserted = require_string(j, "selmer_finiteness") == "asserted";
    r.overall = require_bool(j, "overall");
    r.ordinary_case = require_bool(j, "ordinary_case");
    r.notes = require(j, "notes").get<std::vector<std::string>>();
    return r;
}

json to_json(const EulerCharResult& r) {
    const auto& b = r.breakdown;
    return {{"chi", r.chi.to_string()},
            {"chi_exponent", r.chi.exponent},
            {"breakdown",
             {{"sha_p", b.sha_p.to_string()},
              {"torsion_p_sq", b.torsion_p_sq.to_string()},
              {"tamagawa_product_p_part", b.tamagawa_product_p_part.to_string()},
              {"ordinary_d_sq_product", b.ordinary_d_sq_product.to_string()}}},
            {"sign_vector", r.sign_vector_used.to_string()},
            {"overridden", r.overridden},
            {"notes", r.notes}};
}

EulerCharResult result_from_json(const json& j, const Integer& p) {
    EulerCharResult r;
    r.chi = ppower_from_string(require_string(j, "chi"), p);
    const json& b = require(j, "breakdown");
    r.breakdown.sha_p = ppower_from_string(require_string(b, "sha_p"), p);
    r.breakdown.torsion_p_sq = ppower_from_string(require_string(b, "torsion_p_sq"), p);
    r.breakdown.tamagawa_product_p_part = ppower_from_string(require_string(b, "tamagawa_product_p_part"), p);
    r.breakdown.ordinary_d_sq_product = ppower_from_string(require_string(b, "ordinary_d_sq_product"), p);
    r.sign_vector_used = SignVector::parse(require_string(j, "sign_vector"));
    r.overridden = require_bool(j, "overridden");
    r.notes = require(j, "notes").get<std::vector<std::string>>();
    return r;
}

json to_json(const TorsionSummary& t) {
    return {{"structure", t.structure},
            {"order", t.order},
            {"generators", t.generators},
            {"p_part", t.p_part.to_string()},
            {"vanishing_applies", t.vanishing_applies},
            {"vanishing_consistent", t.vanishing_consistent}};
}

TorsionSummary torsion_from_json(const json& j, const Integer& p) {
    TorsionSummary t;
    t.structure = require_string(j, "structure");
    t.order = require_long(j, "order");
    t.generators = require(j, "generators").get<std::vector<std::string>>();
    t.p_part = ppower_from_string(require_string(j, "p_part"), p);
    t.vanishing_applies = require_bool(j, "vanishing_applies");
    t.vanishing_consistent = require_bool(j, "vanishing_consistent");
    return t;
}

std::string point_string(const RationalPoint& P) { return P.x.get_str() + "," + P.y.get_str(); }

}  // namespace

json to_json(const LocalData& d) {
    json j;
    j["q"] = d.q.get_str();
    j["reduction"] = std::string(to_string(d.reduction));
    j["a_q"] = d.a_q ? json(*d.a_q) : json(nullptr);
    j["point_count"] = d.point_count ? json(*d.point_count) : json(nullptr);
    j["kodaira"] = d.kodaira.to_string();
    j["conductor_exponent"] = d.conductor_exponent;
    j["tamagawa"] = d.tamagawa.get_str();
    j["minimal_disc_valuation"] = d.minimal_disc_valuation;
    j["p"] = d.p ? json(d.p->get_str()) : json(nullptr);
    j["tamagawa_p_part"] = d.tamagawa_p_part ? json(d.tamagawa_p_part->to_string()) : json(nullptr);
    j["d_p_part"] = d.d_p_part ? json(d.d_p_part->to_string()) : json(nullptr);
    return j;
}

LocalData local_data_from_json(const json& j) {
    LocalData d;
    d.q = integer_from_string(require_string(j, "q"), "q");
    const auto reduction = parse_reduction_type(require_string(j, "reduction"));
    if (!reduction) schema_error("unknown reduction type");
    d.reduction = *reduction;
    if (!require(j, "a_q").is_null()) d.a_q = j.at("a_q").get<std::int64_t>();
    if (!require(j, "point_count").is_null()) d.point_count = j.at("point_count").get<std::uint64_t>();
    const auto kodaira = Kodaira::parse(require_string(j, "kodaira"));
    if (!kodaira) schema_error("unknown Kodaira symbol");
    d.kodaira = *kodaira;
    d.conductor_exponent = require_long(j, "conductor_exponent");
    d.tamagawa = integer_from_string(require_string(j, "tamagawa"), "tamagawa");
    d.minimal_disc_valuation = require_long(j, "minimal_disc_valuation");
    if (const auto p = read_optional_string(j, "p")) {
        d.p = integer_from_string(*p, "p");
        if (const auto c = read_optional_string(j, "tamagawa_p_part")) d.tamagawa_p_part = ppower_from_string(*c, *d.p);
        if (const auto dp = read_optional_string(j, "d_p_part")) d.d_p_part = ppower_from_string(*dp, *d.p);
    }
    return d;
}

json to_json(const FieldLocalData& d) {
    json primes = json::array();
    for (const auto& w : d.primes_above_p) {
        json a = nullptr;
        if (w.a) a = w.a->fits_slong_p() ? json(w.a->get_si()) : json(w.a->get_str());
        primes.push_back({{"e", w.ramification_index},
                          {"f", w.residue_degree},
                          {"reduction", std::string(to_string(w.reduction))},
                          {"a", a},
                          {"d_p_part", w.d_p_part ? json(w.d_p_part->to_string()) : json(nullptr)},
                          {"base_is_qp", w.base_is_qp},
                          {"unramified", w.unramified}});
    }
    json away = json::array();
    for (const auto& c : d.away_tamagawa_p_parts) away.push_back({{"label", c.label}, {"value", c.value.to_string()}});
    return {{"p", d.p.get_str()},
            {"primes_above_p", primes},
            {"away_tamagawa_p_parts", away},
            {"torsion_p_part", d.torsion_p_part.to_string()},
            {"sha_p_order", d.sha_p_order.to_string()},
            {"selmer_finite", d.selmer_finite}};
}

FieldLocalData field_data_from_json(const json& j) {
    if (!j.is_object()) schema_error("local data must be a JSON object");
    FieldLocalData d;
    const json& p = require(j, "p");
    if (p.is_string())
        d.p = integer_from_string(p.get<std::string>(), "p");
    else if (p.is_number_unsigned())
        d.p = Integer(p.get<unsigned long>());
    else
        schema_error("field 'p' must be a decimal string or a positive integer");
    require_odd_prime(d.p);

    const json& primes = require(j, "primes_above_p");
    if (!primes.is_array()) schema_error("'primes_above_p' must be an array");
    for (const json& w : primes) {
        PrimeAboveP prime;
        prime.ramification_index = require_long(w, "e");
        prime.residue_degree = require_long(w, "f");
        const auto reduction = parse_reduction_type(require_string(w, "reduction"));
        if (!reduction) schema_error("unknown reduction type '" + w.at("reduction").get<std::string>() + "'");
        prime.reduction = *reduction;
        if (w.contains("a") && !w.at("a").is_null()) {
            const json& a = w.at("a");
            if (a.is_number_integer())
                prime.a = Integer(a.get<long>());
            else if (a.is_string())
                prime.a = integer_from_string(a.get<std::string>(), "a");
            else
                schema_error("field 'a' must be an integer");
        }
        if (w.contains("d_p_part") && !w.at("d_p_part").is_null()) {
            if (!w.at("d_p_part").is_string()) schema_error("field 'd_p_part' must be a decimal string");
            prime.d_p_part = PPower::parse(w.at("d_p_part").get<std::string>(), d.p);
        }
        prime.base_is_qp = require_bool(w, "base_is_qp");
        prime.unramified = require_bool(w, "unramified");
        d.primes_above_p.push_back(std::move(prime));
    }
    const json& away = require(j, "away_tamagawa_p_parts");
    if (!away.is_array()) schema_error("'away_tamagawa_p_parts' must be an array");
    for (const json& c : away) d.away_tamagawa_p_parts.push_back({require_string(c, "label"),
                                                                  PPower::parse(require_string(c, "value"), d.p)});
    d.torsion_p_part = PPower::parse(require_string(j, "torsion_p_part"), d.p);
    d.sha_p_order = PPower::parse(require_string(j, "sha_p_order"), d.p);
    d.selmer_finite = require_bool(j, "selmer_finite");
    d.validate();
    return d;
}

AnalysisReport build_curve_report(const CurveRequest& request, const LocalDataProvider& provider) {
    const Integer& p = request.p;
    require_odd_prime(p);
    const PPower sha = request.sha_p.value_or(PPower::one(p));
    if (sha.prime != p) throw Error(Errc::NonPPower, "Sha order is not a power of p");

    AnalysisReport r;
    r.mode = "curve";
    r.label = request.curve.label();
    r.curve = format_curve(request.curve);
    r.p = p;
    CurveAnalysis analysis = analyze_curve(request.curve, p, sha, request.selmer_finite, provider);
    r.minimal_curve = format_curve(analysis.minimal);
    r.local = analysis.local;
    r.field = analysis.field;

    TorsionSummary t;
    t.structure = analysis.torsion.structure();
    t.order = analysis.torsion.order;
    for (const auto& g : analysis.torsion.generators) t.generators.push_back(point_string(g));
    t.p_part = analysis.torsion.p_part(p);
    for (const auto& d : analysis.local)
        if (d.q == p)
            t.vanishing_applies = d.reduction == ReductionType::GoodSupersingular && d.a_q && *d.a_q == 0;
    t.vanishing_consistent = !t.vanishing_applies || t.p_part.exponent == 0;
    r.torsion = t;

    const SignVector signs = request.signs.value_or(SignVector::all_minus(r.field.supersingular_count()));
    r.input = {sha.to_string(), !request.sha_p.has_value(), request.selmer_finite, signs.to_string(),
               request.override_hypotheses};
    r.hypotheses = check_hypotheses(r.field, signs);
    if (r.hypotheses.overall || request.override_hypotheses)
        r.result = euler_char(r.field, signs, request.override_hypotheses);
    else
        r.failure = HypothesisFailure(r.hypotheses).what();
    return r;
}

AnalysisReport build_field_report(const FieldLocalData& data, const std::optional<SignVector>& signs,
                                  bool override_hypotheses) {
    AnalysisReport r;
    r.mode = "field";
    r.p = data.p;
    r.field = data;
    const SignVector s = signs.value_or(SignVector::all_minus(data.supersingular_count()));
    r.input = {data.sha_p_order.to_string(), false, data.selmer_finite, s.to_string(), override_hypotheses};
    r.hypotheses = check_hypotheses(data, s);
    if (r.hypotheses.overall || override_hypotheses)
        r.result = euler_char(data, s, override_hypotheses);
    else
        r.failure = HypothesisFailure(r.hypotheses).what();
    return r;
}

json to_json(const AnalysisReport& r) {
    json local = json::array();
    for (const auto& d : r.local) local.push_back(to_json(d));
    return {{"tool_version", r.tool_version},
            {"mode", r.mode},
            {"label", optional_string(r.label)},
            {"curve", optional_string(r.curve)},
            {"minimal_curve", optional_string(r.minimal_curve)},
            {"p", r.p.get_str()},
            {"local", local},
            {"torsion", r.torsion ? to_json(*r.torsion) : json(nullptr)},
            {"field", to_json(r.field)},
            {"hypotheses", to_json(r.hypotheses)},
            {"result", r.result ? to_json(*r.result) : json(nullptr)},
            {"failure", optional_string(r.failure)},
            {"input",
             {{"sha_p", r.input.sha_p},
              {"sha_defaulted", r.input.sha_defaulted},
              {"selmer_finite_asserted", r.input.selmer_finite_asserted},
              {"signs", r.input.signs},
              {"override_hypotheses", r.input.override_hypotheses}}}};
}

AnalysisReport report_from_json(const json& j) {
    AnalysisReport r;
    r.tool_version = require_string(j, "tool_version");
    r.mode = require_string(j, "mode");
    r.label = read_optional_string(j, "label");
    r.curve = read_optional_string(j, "curve");
    r.minimal_curve = read_optional_string(j, "minimal_curve");
    r.p = integer_from_string(require_string(j, "p"), "p");
    for (const json& d : require(j, "local")) r.local.push_back(local_data_from_json(d));
    if (!require(j, "torsion").is_null()) r.torsion = torsion_from_json(j.at("torsion"), r.p);
    r.field = field_data_from_json(require(j, "field"));
    r.hypotheses = hypotheses_from_json(require(j, "hypotheses"));
    if (!require(j, "result").is_null()) r.result = result_from_json(j.at("result"), r.p);
    r.failure = read_optional_string(j, "failure");
    const json& in = require(j, "input");
    r.input = {require_string(in, "sha_p"), require_bool(in, "sha_defaulted"), require_bool(in, "selmer_finite_asserted"),
               require_string(in, "signs"), require_bool(in, "override_hypotheses")};
    return r;
}

std::string render_local_table(const std::vector<LocalData>& rows) {
    std::ostringstream os;
    os << std::left << "  " << std::setw(12) << "q" << std::setw(25) << "reduction" << std::setw(8) << "a_q"
       << std::setw(12) << "#E(F_q)" << std::setw(9) << "Kodaira" << std::setw(4) << "f" << std::setw(8) << "c_q"
       << std::setw(10) << "c_q^(p)" << "d^(p)" << '\n';
    for (const auto& d : rows) {
        os << "  " << std::setw(12) << d.q.get_str() << std::setw(25) << to_string(d.reduction) << std::setw(8)
           << (d.a_q ? std::to_string(*d.a_q) : "-") << std::setw(12)
           << (d.point_count ? std::to_string(*d.point_count) : "-") << std::setw(9) << d.kodaira.to_string()
           << std::setw(4) << d.conductor_exponent << std::setw(8) << d.tamagawa.get_str() << std::setw(10)
           << (d.tamagawa_p_part ? d.tamagawa_p_part->to_string() : "-")
           << (d.d_p_part ? d.d_p_part->to_string() : "-") << '\n';
    }
    return os.str();
}

std::string render_table(const AnalysisReport& r) {
    std::ostringstream os;
    auto line = [&](const std::string& key, const std::string& value) {
        os << std::left << std::setw(22) << key << ": " << value << '\n';
    };
    os << "selmer-euler " << r.tool_version << '\n';
    if (r.label) line("label", *r.label);
    if (r.curve) line("curve", *r.curve);
    if (r.minimal_curve) line("minimal model", *r.minimal_curve);
    line("p", r.p.get_str());
    line("signs", r.input.signs.empty() ? "(none)" : r.input.signs);
    line("|Sha(E/F)(p)|", r.input.sha_p + (r.input.sha_defaulted ? " (default, user-supplied value assumed)" :
                                                                   " (user-supplied)"));
    line("Sel(E/F) finite", r.input.selmer_finite_asserted ? "asserted" : "not asserted");

    if (!r.local.empty()) {
        os << "\nLocal data\n" << render_local_table(r.local);
    }
    if (r.mode == "field") {
        os << "\nPrimes above p\n";
        os << "  " << std::left << std::setw(4) << "#" << std::setw(6) << "e" << std::setw(6) << "f" << std::setw(25)
           << "reduction" << std::setw(8) << "a" << "d^(p)" << '\n';
        for (std::size_t i = 0; i < r.field.primes_above_p.size(); ++i) {
            const auto& w = r.field.primes_above_p[i];
            os << "  " << std::setw(4) << (i + 1) << std::setw(6) << w.ramification_index << std::setw(6)
               << w.residue_degree << std::setw(25) << to_string(w.reduction) << std::setw(8)
               << (w.a ? w.a->get_str() : "-") << (w.d_p_part ? w.d_p_part->to_string() : "-") << '\n';
        }
        line("\naway Tamagawa parts", std::to_string(r.field.away_tamagawa_p_parts.size()) + " supplied");
        line("|E(F)(p)|", r.field.torsion_p_part.to_string());
    }
    if (r.torsion) {
        os << '\n';
        line("torsion", r.torsion->structure + " (order " + std::to_string(r.torsion->order) + ")");
        std::string gens;
        for (const auto& g : r.torsion->generators) gens += (gens.empty() ? "(" : ", (") + g + ")";
        if (!gens.empty()) line("generators", gens);
        line("torsion p-part", r.torsion->p_part.to_string());
        line("torsion vanishing", !r.torsion->vanishing_applies ? "not applicable (not supersingular with a_p = 0)"
                                  : r.torsion->vanishing_consistent ? "consistent (p-part is 1)"
                                                                    : "INCONSISTENT");
    }

    os << "\nHypotheses\n";
    auto cond = [&](const char* name, const Condition& c) {
        os << "  " << std::left << std::setw(5) << name << std::setw(8) << to_string(c.status) << c.reason << '\n';
    };
    cond("S1", r.hypotheses.s1);
    cond("S2", r.hypotheses.s2);
    cond("S3", r.hypotheses.s3);
    cond("S4", r.hypotheses.s4);
    os << "  Selmer finiteness: " << (r.hypotheses.selmer_finite_asserted ? "asserted" : "not asserted") << '\n';
    os << "  overall: " << (r.hypotheses.overall ? "pass" : "fail") << '\n';
    for (const auto& n : r.hypotheses.notes) os << "  note: " << n << '\n';

    os << "\nEuler characteristic\n";
    if (r.result) {
        const auto& b = r.result->breakdown;
        auto row = [&](const std::string& k, const std::string& v) { os << "  " << std::setw(20) << k << v << '\n'; };
        row("chi", r.result->chi.to_string());
        row("|Sha(E/F)(p)|", b.sha_p.to_string());
        row("|E(F)(p)|^2", b.torsion_p_sq.to_string());
        row("prod c_v^(p)", b.tamagawa_product_p_part.to_string());
        row("prod d_v^(p)^2", b.ordinary_d_sq_product.to_string());
        for (const auto& n : r.result->notes) os << "  note: " << n << '\n';
    } else {
        os << "  not computed: " << r.failure.value_or("") << '\n';
    }
    return os.str();
}

}  // namespace selmer
