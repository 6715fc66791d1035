#pragma once

#include "engine/resolution.hpp"

#include <string>
#include <vector>

namespace cppa {

inline constexpr int kReportSchemaVersion = 1;

/// Completed analysis plus the per-anomaly resolution proposals, ready for
/// rendering.
struct ReportDocument {
    AnalysisResult analysis;
    std::vector<std::vector<Resolution>> resolutions; // parallel to anomalies
    std::size_t node_count = 0;
    bool strict_asymmetric = false;

    static ReportDocument build(const Scenario& scenario, const AnalysisResult& analysis);
};

enum class ReportFormat { Text, Json, DotBundle };

/// Text: grouped by effect category. Json: the full structured document.
std::string emit_report_text(const ReportDocument& report);
std::string emit_report_json(const ReportDocument& report);

/// Parses a serialized JSON report back into a comparable document (used for
/// round-trip checks and by the CLI).
bool report_json_roundtrips(const std::string& json_text);

} // namespace cppa
