#pragma once

#include "selmer/euler_characteristic.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selmer {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct TorsionSummary {
    std::string structure;
    long order = 1;
    std::vector<std::string> generators;  // "x,y" on the minimal model
    PPower p_part;
    bool vanishing_applies = false;  // supersingular at p with a_p = 0
    bool vanishing_consistent = true;
    friend bool operator==(const TorsionSummary&, const TorsionSummary&) = default;
};

struct InputEcho {
    std::string sha_p = "1";
    bool sha_defaulted = false;
    bool selmer_finite_asserted = false;
    std::string signs;
    bool override_hypotheses = false;
    friend bool operator==(const InputEcho&, const InputEcho&) = default;
};

struct AnalysisReport {
    std::string tool_version{kToolVersion};
    std::string mode = "curve";  // "curve" or "field"
    std::optional<std::string> label;
    std::optional<std::string> curve;
    std::optional<std::string> minimal_curve;
    Integer p;
    std::vector<LocalData> local;
    std::optional<TorsionSummary> torsion;
    FieldLocalData field;
    HypothesisReport hypotheses;
    std::optional<EulerCharResult> result;
    std::optional<std::string> failure;
    InputEcho input;

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

struct CurveRequest {
    WeierstrassCurve curve;
    Integer p;
    std::optional<SignVector> signs;  // defaults to all '-'
    std::optional<PPower> sha_p;      // defaults to 1
    bool selmer_finite = false;
    bool override_hypotheses = false;
};

// Full pipeline over Q. Input errors propagate as Error; a hypothesis failure is
// recorded in the report (`result` empty, `failure` set).
AnalysisReport build_curve_report(const CurveRequest& request,
                                  const LocalDataProvider& provider = compute_local_data);

AnalysisReport build_field_report(const FieldLocalData& data, const std::optional<SignVector>& signs,
                                  bool override_hypotheses);

nlohmann::json to_json(const LocalData& d);
LocalData local_data_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);

// FieldLocalData in its external schema; Error{SchemaViolation} or
// Error{NonPPower} on malformed input.
nlohmann::json to_json(const FieldLocalData& d);
FieldLocalData field_data_from_json(const nlohmann::json& j);

// Plain fixed-width text.
std::string render_table(const AnalysisReport& r);
std::string render_local_table(const std::vector<LocalData>& rows);

}  // namespace selmer
