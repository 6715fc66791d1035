#pragma once

#include "core/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cppa {

/// A chained sequence of PIs carrying one traffic description from a source
/// entity to a destination entity. Consecutive PIs join at a common node and
/// the running selector intersection stays non-empty.
struct Path {
    EntityId source_entity = kNoEntity;
    EntityId destination_entity = kNoEntity;
    std::vector<std::size_t> pi_indices;
    Selector traffic; // intersection of all member selectors

    std::vector<std::string> pi_ids(const Scenario& scenario) const {
        std::vector<std::string> out;
        out.reserve(pi_indices.size());
        for (std::size_t i : pi_indices) out.push_back(scenario.pis[i].id);
        return out;
    }
};

/// Node-level digraph: one directed edge per PI hop through G*.
/// Doubles as a plain digraph container for the graph algorithms.
struct ConnectionGraph {
    std::vector<std::string> vertices;
    struct Edge {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
        std::optional<std::size_t> pi_index; // attribution, when built from PIs
    };
    std::vector<Edge> edges;

    std::uint32_t add_vertex(const std::string& name);
    void add_edge(std::uint32_t from, std::uint32_t to,
                  std::optional<std::size_t> pi_index = std::nullopt);
    std::optional<std::uint32_t> vertex(const std::string& name) const;

    static ConnectionGraph from_scenario(const Scenario& scenario);
};

struct AnalysisStats {
    std::size_t entity_count = 0;
    std::size_t pi_count = 0;
    std::size_t connection_count = 0;
    std::size_t enumerated_paths = 0;
    bool paths_truncated = false;
    double pre_computation_ms = 0.0;
    double analysis_ms = 0.0;
};

/// Crossed-gateway lookup for a node pair: the declared routing walk with
/// both end nodes stripped. Unroutable pairs are reported distinctly.
struct CrossedGateways {
    bool routable = false;
    std::vector<std::string> gateways;
};
CrossedGateways crossed_gateways(const std::string& src_node, const std::string& dst_node,
                                 const TopologyGraph& topology);

inline constexpr std::size_t kDefaultPathCap = 1024;

struct PathEnumeration {
    std::vector<Path> paths; // deterministic order (lexicographic by PI ids)
    bool truncated = false;
};

/// All simple paths (no repeated nodes, counting crossed gateways) between
/// two entities, bounded by `cap`.
PathEnumeration enumerate_simple_paths(const Scenario& scenario, EntityId from, EntityId to,
                                       std::size_t cap = kDefaultPathCap);

/// All simple paths in the scenario; the orchestrator's pre-computation
/// step. With include_singletons = false only chained (multi-PI) paths are
/// enumerated; every PI is trivially its own one-hop path and the analysis
/// phase accounts for those separately.
PathEnumeration enumerate_all_paths(const Scenario& scenario, std::size_t cap = kDefaultPathCap,
                                    bool include_singletons = true);

/// Elementary cycles of a digraph (Johnson-style bounded search). Every
/// elementary cycle's vertex sequence is reported at least once; empty iff
/// the graph is acyclic.
std::vector<std::vector<std::uint32_t>> detect_cycles(const ConnectionGraph& graph,
                                                      std::size_t cap = kDefaultPathCap);

/// PI-succession digraph: vertex per PI, edge i -> j when j can carry i's
/// traffic onward (junction node shared, selector intersection non-empty).
/// Cycles in this graph are the traffic loops behind the cyclic-path check.
ConnectionGraph chain_graph(const Scenario& scenario);

/// F_e: true iff node `node_id`'s filtering rules drop the entire
/// matched-traffic set of the PI's selector before any ALLOW applies.
/// Partial drops and empty selectors return false.
bool is_filtered(const Scenario& scenario, const std::string& node_id,
                 const PolicyImplementation& pi);

} // namespace cppa
