#pragma once

#include "levy_emm/approximation.hpp"
#include "levy_emm/esscher.hpp"
#include "levy_emm/mc_oracle.hpp"
#include "levy_emm/mgf_analysis.hpp"
#include "levy_emm/triplet.hpp"

#include <json.hpp>

#include <string>

namespace levy_emm::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSpecVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct ModelSpec {
    std::string name;
    MarketKind market = MarketKind::Linear;
    /// Initial price; geometric markets only.
    double S0 = 1.0;
    double T = 1.0;
    /// (b, sigma^2, ν) of L for linear markets and of X for geometric ones.
    LevyTriplet triplet;
};

/// Parses and validates a model spec. Unknown or missing fields, bad
/// versions and invalid parameters throw InvalidArgument (or the triplet
/// validation errors). Numbers may be given as decimal strings.
ModelSpec parse_spec(const Json& j);
ModelSpec load_spec(const std::string& path);

Json spec_to_json(const ModelSpec& s);
/// Throws UnsupportedMeasure for generic densities and custom penalties.
Json measure_to_json(const LevyMeasure& nu);
LevyMeasure measure_from_json(const Json& j);
Json triplet_to_json(const LevyTriplet& t);

PenaltyFamily parse_penalty(const std::string& text);
std::string penalty_to_string(const PenaltyFamily& p);

/// Finite numbers as JSON numbers, infinities as "inf" / "-inf", NaN as null.
Json number(double v);
Json number(const ExtendedReal& v);

Json interval_to_json(const ExpMomentInterval& I);
Json parameter_status_to_json(const EsscherParameterStatus& s);
Json minimum_to_json(const MinimumPoint& m);
Json esscher_result_to_json(const EsscherResult& r);
Json memm_report_to_json(const MemmReport& r);
Json trace_to_json(const ApproxTrace& tr);
std::string trace_to_csv(const ApproxTrace& tr);
Json settings_to_json(const QuadratureSettings& q, const RootSettings& r);

} // namespace levy_emm::io
