#pragma once

#include "engine/anomaly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cppa {

enum class ResolutionAction {
    DeletePi,
    ReplaceWithLub,
    SplitTunnels,
    RaiseCoefficients,
    RedeployPi,
    EditFilterRule,
    ChangeTechnology,
    RemoveCycleEdges,
    SelectPreferredPath,
    ManualReview,
};

std::string_view to_string(ResolutionAction a);

/// A concrete, applicable proposal. Applying a resolution removes
/// `delete_pis`, inserts `replacement_pis` and, for EDIT_FILTER_RULE, drops
/// the named firewall rule. MANUAL_REVIEW entries may carry the same payload
/// as a default proposal for the administrator; without one they are no-ops.
struct Resolution {
    ResolutionAction action = ResolutionAction::ManualReview;
    AnomalyKind anomaly_kind = AnomalyKind::InternalLoop;
    std::vector<std::string> anomaly_subjects;

    std::vector<std::string> delete_pis;
    std::vector<PolicyImplementation> replacement_pis;
    std::string filter_node;          // EDIT_FILTER_RULE
    std::optional<std::size_t> filter_rule_index;
    std::string rationale;
};

/// Kind-specific suggestions for one detected anomaly, strongest first.
/// The first entry is always enactable (it eliminates the instance when
/// applied); advisory-only notes come after it.
std::vector<Resolution> suggest(const Anomaly& anomaly, const Scenario& scenario);

/// Applies a resolution to a copy of the scenario.
/// Throws std::invalid_argument when a referenced subject is missing.
Scenario apply_resolution(const Scenario& scenario, const Resolution& resolution);

struct ResolutionReport {
    bool anomaly_eliminated = false;
    std::vector<Anomaly> new_anomalies; // present after, absent before
};

/// Applies the resolution to a scenario copy, re-runs the analysis and
/// reports whether the originating instance disappeared plus any anomalies
/// that were not present before.
ResolutionReport verify_resolution(const Resolution& resolution, const Scenario& scenario,
                                   const AnalysisOptions& options = {});

} // namespace cppa
