#include "selmer/cli.hpp"

#include "selmer/cache.hpp"
#include "selmer/report.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

namespace selmer {

namespace {

using nlohmann::json;

struct CommonCacheOptions {
    bool no_cache = false;
};

std::unique_ptr<LocalDataCache> open_cache(const CommonCacheOptions& opts) {
    if (opts.no_cache) return nullptr;
    const auto dir = LocalDataCache::default_directory();
    if (!dir) return nullptr;
    return std::make_unique<LocalDataCache>(*dir);
}

LocalDataProvider provider_for(LocalDataCache* cache) {
    if (!cache) return compute_local_data;
    return [cache](const WeierstrassCurve& minimal, const Integer& q) { return cache->get_or_compute(minimal, q); };
}

Integer parse_prime_flag(const std::string& text, bool odd) {
    Integer n;
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || n.set_str(text, 10) != 0)
        throw Error(odd ? Errc::EvenOrCompositeP : Errc::InvalidArgument, "'" + text + "' is not a prime");
    if (odd) {
        require_odd_prime(n);
    } else if (!is_prime(n)) {
        throw Error(Errc::InvalidArgument, "'" + text + "' is not a prime");
    }
    return n;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

int print_report(const AnalysisReport& r, const std::string& format, std::ostream& out) {
    if (format == "json")
        out << to_json(r).dump(2) << '\n';
    else
        out << render_table(r);
    return r.result ? kExitOk : kExitHypothesisFailure;
}

// --- analyze -------------------------------------------------------------

struct AnalyzeOptions {
    std::string curve, p, signs, sha, format = "table", label;
    bool signs_given = false, sha_given = false, assert_finite = false, override_hyp = false;
    CommonCacheOptions cache;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
    const Integer p = parse_prime_flag(o.p, true);
    CurveRequest req{parse_curve(o.curve, o.label.empty() ? std::nullopt : std::optional(o.label)), p, {}, {}};
    if (o.signs_given) req.signs = SignVector::parse(o.signs);
    if (o.sha_given)
        req.sha_p = PPower::parse(o.sha, p);
    else
        err << "warning: --sha-p not given; assuming |Sha(E/F)(p)| = 1\n";
    req.selmer_finite = o.assert_finite;
    req.override_hypotheses = o.override_hyp;
    const auto cache = open_cache(o.cache);
    const AnalysisReport r = build_curve_report(req, provider_for(cache.get()));
    if (!r.result) err << "hypotheses not satisfied: " << r.failure.value_or("") << '\n';
    return print_report(r, o.format, out);
}

// --- local ---------------------------------------------------------------

struct LocalOptions {
    std::string curve, q, p, format = "table";
    CommonCacheOptions cache;
};

int cmd_local(const LocalOptions& o, std::ostream& out) {
    const WeierstrassCurve curve = parse_curve(o.curve);
    const Integer q = parse_prime_flag(o.q, false);
    std::optional<Integer> p;
    if (!o.p.empty()) p = parse_prime_flag(o.p, true);
    const WeierstrassCurve minimal = minimal_model(curve).curve;
    const auto cache = open_cache(o.cache);
    const LocalData d = with_p_parts(provider_for(cache.get())(minimal, q), p);
    if (o.format == "json") {
        json j = to_json(d);
        j["minimal_curve"] = format_curve(minimal);
        out << j.dump(2) << '\n';
    } else {
        out << "minimal model : " << format_curve(minimal) << '\n';
        out << "reduction     : " << to_string(d.reduction) << '\n';
        out << "Kodaira       : " << d.kodaira.to_string() << '\n';
        out << "c_q           : " << d.tamagawa.get_str() << '\n';
        out << "f_q           : " << d.conductor_exponent << '\n';
        if (d.a_q) out << "a_q           : " << *d.a_q << '\n';
        if (d.point_count) out << "#E(F_q)       : " << *d.point_count << '\n';
        if (d.tamagawa_p_part) out << "c_q^(p)       : " << d.tamagawa_p_part->to_string() << '\n';
        if (d.d_p_part) out << "d^(p)         : " << d.d_p_part->to_string() << '\n';
    }
    return kExitOk;
}

// --- batch ---------------------------------------------------------------

struct BatchOptions {
    std::string input, output, p;
    unsigned jobs = 1;
    bool assert_finite = false, override_hyp = false;
    CommonCacheOptions cache;
};

int cmd_batch(const BatchOptions& o, std::ostream& out, std::ostream& err) {
    const Integer p = parse_prime_flag(o.p, true);
    std::ifstream in(o.input);
    if (!in) throw Error(Errc::InvalidArgument, "cannot read '" + o.input + "'");

    struct Row {
        std::size_t line;
        std::vector<std::string> fields;
    };
    std::vector<Row> rows;
    std::string text;
    for (std::size_t line = 1; std::getline(in, text); ++line) {
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos || text[first] == '#') continue;
        auto fields = split_csv(text);
        if (rows.empty() && !fields.empty() && fields[0] == "label") continue;
        rows.push_back({line, std::move(fields)});
    }

    struct Outcome {
        std::optional<AnalysisReport> report;
        std::string skip_reason;
    };
    std::vector<Outcome> outcomes(rows.size());
    const auto cache = open_cache(o.cache);
    const LocalDataProvider provider = provider_for(cache.get());

    auto process = [&](std::size_t i) {
        const auto& f = rows[i].fields;
        try {
            if (f.size() != 6 && f.size() != 7)
                throw Error(Errc::NonRational, "expected label,a1,a2,a3,a4,a6[,sha_p], got " +
                                                   std::to_string(f.size()) + " fields");
            const std::string curve_text = f[1] + "," + f[2] + "," + f[3] + "," + f[4] + "," + f[5];
            CurveRequest req{parse_curve(curve_text, f[0].empty() ? std::nullopt : std::optional(f[0])), p, {}, {}};
            if (f.size() == 7 && !f[6].empty()) req.sha_p = PPower::parse(f[6], p);
            req.selmer_finite = o.assert_finite;
            req.override_hypotheses = o.override_hyp;
            outcomes[i].report = build_curve_report(req, provider);
        } catch (const std::exception& e) {
            outcomes[i].skip_reason = e.what();
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(rows.size())));
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++) process(i);
            });
    }

    json reports = json::array(), skipped = json::array();
    std::size_t passed = 0, failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (outcomes[i].report) {
            reports.push_back(to_json(*outcomes[i].report));
            ++(outcomes[i].report->result ? passed : failed);
        } else {
            err << "skipping line " << rows[i].line << ": " << outcomes[i].skip_reason << '\n';
            skipped.push_back({{"line", rows[i].line}, {"reason", outcomes[i].skip_reason}});
        }
    }
    const json summary{{"rows", rows.size()},
                       {"passed", passed},
                       {"failed", failed},
                       {"skipped", skipped.size()},
                       {"skipped_rows", skipped}};
    const json doc{{"tool_version", std::string(kToolVersion)}, {"p", p.get_str()}, {"reports", reports},
                   {"summary", summary}};
    std::ofstream file(o.output, std::ios::trunc);
    if (!file) throw Error(Errc::InvalidArgument, "cannot write '" + o.output + "'");
    file << doc.dump(2) << '\n';
    out << rows.size() << " rows: " << passed << " passed, " << failed << " failed, " << skipped.size()
        << " skipped\n";
    return kExitOk;
}

// --- field ---------------------------------------------------------------

struct FieldOptions {
    std::string local_data, p, signs, format = "table";
    bool signs_given = false, override_hyp = false;
};

int cmd_field(const FieldOptions& o, std::ostream& out, std::ostream& err) {
    std::ifstream in(o.local_data);
    if (!in) throw Error(Errc::InvalidArgument, "cannot read '" + o.local_data + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaViolation, std::string("invalid JSON: ") + e.what());
    }
    FieldLocalData data;
    try {
        data = field_data_from_json(j);
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaViolation, e.what());
    }
    if (!o.p.empty() && parse_prime_flag(o.p, true) != data.p)
        throw Error(Errc::SchemaViolation, "--p does not match the prime in the local data");
    std::optional<SignVector> signs;
    if (o.signs_given) signs = SignVector::parse(o.signs);
    const AnalysisReport r = build_field_report(data, signs, o.override_hyp);
    if (!r.result) err << "hypotheses not satisfied: " << r.failure.value_or("") << '\n';
    return print_report(r, o.format, out);
}

// --- lambda --------------------------------------------------------------

struct LambdaOptions {
    std::string p, coeffs, format = "table";
    long precision = 0;
};

int cmd_lambda(const LambdaOptions& o, std::ostream& out, std::ostream& err) {
    LambdaSeries f;
    f.p = parse_prime_flag(o.p, true);
    for (const auto& c : split_csv(o.coeffs)) {
        const Rational r = parse_rational(c);
        if (r.get_den() != 1) throw Error(Errc::InvalidArgument, "coefficients must be integers");
        f.coefficients.push_back(r.get_num());
    }
    if (f.coefficients.empty()) throw Error(Errc::InvalidArgument, "no coefficients given");
    if (o.precision > 0) f.precision = o.precision;
    try {
        const PPower chi = lambda_euler_char(f);
        if (o.format == "json")
            out << json{{"p", f.p.get_str()}, {"chi", chi.to_string()}, {"exponent", chi.exponent}}.dump(2) << '\n';
        else
            out << "chi = " << chi.to_string() << "  (p^" << chi.exponent << ")\n";
        return kExitOk;
    } catch (const Error& e) {
        if (e.code() != Errc::NonFiniteInvariants && e.code() != Errc::PrecisionExhausted) throw;
        err << e.what() << '\n';
        return kExitHypothesisFailure;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Euler characteristics of signed Selmer groups: local data, hypotheses, formula"};
    app.name("selmer-euler");
    app.require_subcommand(1);
    const std::vector<std::string> formats{"table", "json"};

    AnalyzeOptions ao;
    auto* analyze = app.add_subcommand("analyze", "full pipeline for a curve over Q at p");
    analyze->add_option("--curve", ao.curve, "a1,a2,a3,a4,a6 (integers or p/q)")->required();
    analyze->add_option("--p", ao.p, "odd prime p")->required();
    auto* signs_opt = analyze->add_option("--signs", ao.signs, "sign vector, e.g. '-' or '+'; default all '-'");
    auto* sha_opt = analyze->add_option("--sha-p", ao.sha, "|Sha(E/F)(p)| as a power of p (default 1)");
    analyze->add_option("--label", ao.label, "curve label");
    analyze->add_flag("--assert-selmer-finite", ao.assert_finite, "assert that Sel(E/F) is finite");
    analyze->add_flag("--override-hypotheses", ao.override_hyp, "assemble the formula even if hypotheses fail");
    analyze->add_option("--format", ao.format)->check(CLI::IsMember(formats));
    analyze->add_flag("--no-cache", ao.cache.no_cache, "bypass the local-data cache");

    LocalOptions lo;
    auto* local = app.add_subcommand("local", "local data of a curve at one prime");
    local->add_option("--curve", lo.curve)->required();
    local->add_option("--q", lo.q, "prime q")->required();
    local->add_option("--p", lo.p, "odd prime for p-part columns");
    local->add_option("--format", lo.format)->check(CLI::IsMember(formats));
    local->add_flag("--no-cache", lo.cache.no_cache);

    BatchOptions bo;
    auto* batch = app.add_subcommand("batch", "analyze every row of a CSV file");
    batch->add_option("--input", bo.input, "CSV with label,a1,a2,a3,a4,a6[,sha_p]")->required();
    batch->add_option("--p", bo.p)->required();
    batch->add_option("--output", bo.output, "JSON results file")->required();
    batch->add_option("--jobs", bo.jobs)->check(CLI::Range(1u, 256u));
    batch->add_flag("--assert-selmer-finite", bo.assert_finite);
    batch->add_flag("--override-hypotheses", bo.override_hyp);
    batch->add_flag("--no-cache", bo.cache.no_cache);

    FieldOptions fo;
    auto* field = app.add_subcommand("field", "hypotheses and formula from supplied local data");
    field->add_option("--local-data", fo.local_data, "JSON local data file")->required();
    field->add_option("--p", fo.p);
    auto* field_signs = field->add_option("--signs", fo.signs);
    field->add_flag("--override-hypotheses", fo.override_hyp);
    field->add_option("--format", fo.format)->check(CLI::IsMember(formats));

    LambdaOptions lm;
    auto* lambda = app.add_subcommand("lambda", "Euler characteristic from a characteristic series");
    lambda->add_option("--p", lm.p)->required();
    lambda->add_option("--coeffs", lm.coeffs, "c0,c1,... constant term first")->required();
    lambda->add_option("--precision", lm.precision, "coefficients known modulo p^precision")
        ->check(CLI::PositiveNumber);
    lambda->add_option("--format", lm.format)->check(CLI::IsMember(formats));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        if (analyze->parsed()) {
            ao.signs_given = signs_opt->count() > 0;
            ao.sha_given = sha_opt->count() > 0;
            return cmd_analyze(ao, out, err);
        }
        if (local->parsed()) return cmd_local(lo, out);
        if (batch->parsed()) return cmd_batch(bo, out, err);
        if (field->parsed()) {
            fo.signs_given = field_signs->count() > 0;
            return cmd_field(fo, out, err);
        }
        if (lambda->parsed()) return cmd_lambda(lm, out, err);
    } catch (const HypothesisFailure& e) {
        err << "error: " << e.what() << '\n';
        return kExitHypothesisFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace selmer
