#pragma once

#include <string>

#include "json.hpp"

#include "degstein/harness.hpp"
#include "degstein/oracle.hpp"

namespace degstein {

inline constexpr const char* kToolVersion = "1.0.0";

/// Provenance block embedded in every JSON output (or written as a sidecar
/// for CSV-only outputs). Only the duration/timestamp fields may differ
/// between identical runs.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    double duration_seconds = 0.0;
    std::int64_t started_at_unix = 0;
};

nlohmann::json to_json(const RunManifest& manifest);
nlohmann::json to_json(const ExactDist& dist);
nlohmann::json to_json(const RationalDist& dist);  // u128 values as decimal strings
nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const std::vector<RatioRow>& rows);

/// One row per cell, header first, doubles at 17 significant digits.
std::string rate_report_csv(const RateReport& report);
std::string audit_report_csv(const AuditReport& report);
std::string ratio_table_csv(const std::vector<RatioRow>& rows);

std::string format_double(double v);  // %.17g

}  // namespace degstein
