#pragma once

#include "engine/paths.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cppa {

enum class AnomalyKind {
    InternalLoop,
    OutOfPlace,
    NonEnforceability,
    Inadequacy,
    Shadowing,
    Redundancy,
    Exception,
    Correlation,
    Inclusion,
    Affinity,
    Contradiction,
    Superfluous,
    SkewedChannel,
    FilteredChannel,
    L2,
    AsymmetricChannel,
    CyclicPath,
    Monitorability,
    AlternativePath,
};

inline constexpr std::size_t kAnomalyKindCount = 19;

/// Consequence-oriented grouping of the kinds.
enum class EffectCategory {
    Insecure,
    Unfeasible,
    PotentialError,
    SuboptimalImplementation,
    SuboptimalWalk,
};

/// Grouping by the information scope a detector needs.
enum class InfoCategory {
    PiLevelIrrelevant,
    PiLevelUnsuitable,
    NodeIntraTech,
    NodeInterTech,
    NetworkChannel,
    NetworkPath,
};

std::string_view to_string(AnomalyKind k);
std::optional<AnomalyKind> anomaly_kind_from_string(const std::string& name);
std::string_view to_string(EffectCategory c);
std::string_view to_string(InfoCategory c);
EffectCategory effect_category(AnomalyKind k);
InfoCategory info_category(AnomalyKind k);

/// One satisfied (or decisive) formula clause, replayable through the
/// standalone operators for auditing.
struct EvidenceClause {
    std::string text;              // display line
    std::string check;             // machine tag, see replay_clause
    std::vector<std::string> args; // pi ids / entity names / node ids
    std::string observed;          // verdict token ("DOMINATES", "true", ...)
};

struct Anomaly {
    AnomalyKind kind = AnomalyKind::InternalLoop;
    std::vector<std::string> subject_pis;                // ordered per formula role
    std::vector<std::vector<std::string>> subject_paths; // path-level kinds
    std::string endpoint_from, endpoint_to;              // dotted entities (path kinds)
    std::vector<EvidenceClause> evidence;
    std::string message;
};

/// Re-runs one evidence clause against the scenario; nullopt when the tag or
/// arguments are malformed. Self-consistency means the recomputed token
/// equals clause.observed.
std::optional<std::string> replay_clause(const Scenario& scenario, const EvidenceClause& clause);

struct AnalysisOptions {
    std::size_t path_cap = kDefaultPathCap;
    std::size_t cycle_cap = kDefaultPathCap;
    /// Literal reading of the asymmetric-channel formula: flag every PI with
    /// no matching reverse. The default only flags PIs for which some
    /// reverse-direction channel exists but none matches, which keeps
    /// one-way-only policies out of the report.
    bool strict_asymmetric = false;
};

struct AnalysisResult {
    std::vector<Anomaly> anomalies; // deterministically sorted
    AnalysisStats stats;
    std::vector<std::string> notes; // informational, e.g. incomparable C_min
};

/// Thrown when the scenario fails structural validation.
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(std::vector<std::string> problems_in)
        : std::runtime_error(problems_in.empty() ? "invalid scenario" : problems_in.front()),
          problems(std::move(problems_in)) {}
    std::vector<std::string> problems;
};

// --- single-PI detectors ---
std::optional<Anomaly> detect_internal_loop(const Scenario& s, const PolicyImplementation& pi);
std::optional<Anomaly> detect_out_of_place(const Scenario& s, const PolicyImplementation& pi);
std::optional<Anomaly> detect_non_enforceability(const Scenario& s,
                                                 const PolicyImplementation& pi);
std::optional<Anomaly> detect_inadequacy(const Scenario& s, const PolicyImplementation& pi,
                                         std::string* note = nullptr);

// --- node-level, same PI set (ordered unless stated) ---
std::optional<Anomaly> detect_shadowing(const Scenario& s, const PolicyImplementation& i1,
                                        const PolicyImplementation& i2);
std::optional<Anomaly> detect_redundancy(const Scenario& s, const PolicyImplementation& i1,
                                         const PolicyImplementation& i2);
std::optional<Anomaly> detect_exception(const Scenario& s, const PolicyImplementation& i1,
                                        const PolicyImplementation& i2);
/// Unordered; excludes pairs already explained by the three detectors above.
std::optional<Anomaly> detect_correlation(const Scenario& s, const PolicyImplementation& i1,
                                          const PolicyImplementation& i2);

// --- node-level, different technologies ---
std::optional<Anomaly> detect_inclusion(const Scenario& s, const PolicyImplementation& i1,
                                        const PolicyImplementation& i2);
std::optional<Anomaly> detect_affinity(const Scenario& s, const PolicyImplementation& i1,
                                       const PolicyImplementation& i2);
std::optional<Anomaly> detect_contradiction(const Scenario& s, const PolicyImplementation& i1,
                                            const PolicyImplementation& i2);
/// Thresholds extension: a confidential PI whose selector overlaps a
/// declared inspection zone contradicts the monitorability requirement even
/// without an explicit NULL PI.
std::optional<Anomaly> detect_inspection_contradiction(const Scenario& s,
                                                       const PolicyImplementation& pi);

// --- channel-level ---
bool is_tunnel(const Scenario& s, const PolicyImplementation& pi);
std::optional<Anomaly> detect_superfluous(const Scenario& s, const PolicyImplementation& pi);
std::optional<Anomaly> detect_skewed(const Scenario& s, const PolicyImplementation& i1,
                                     const PolicyImplementation& i2);
std::optional<Anomaly> detect_filtered(const Scenario& s, const PolicyImplementation& pi);
std::optional<Anomaly> detect_l2(const Scenario& s, const PolicyImplementation& pi);
std::optional<Anomaly> detect_asymmetric(const Scenario& s, const PolicyImplementation& pi,
                                         bool strict = false);

// --- path-level ---
std::vector<Anomaly> detect_cyclic_paths(const Scenario& s, std::size_t cycle_cap = kDefaultPathCap);
std::optional<Anomaly> detect_monitorability(const Scenario& s, EntityId e1, EntityId e2,
                                             const std::vector<const Path*>& paths);
std::vector<Anomaly> detect_alternative_paths(const Scenario& s, EntityId e1, EntityId e2,
                                              const std::vector<const Path*>& paths);

/// Full pipeline: validation, pre-computation (forest, routes, connection
/// graph, path enumeration), then every detector family, with the result
/// sorted by (kind, subjects). Throws ScenarioError on invalid input.
AnalysisResult run_analysis(const Scenario& scenario, const AnalysisOptions& options = {});

} // namespace cppa
