#pragma once

#include "core/entity.hpp"
#include "core/network.hpp"
#include "core/policy.hpp"
#include "core/technology.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cppa {

enum class NodeKind { Host, Gateway };

/// Predicate side of a C_min rule. All present conditions must hold.
struct MinCoefficientMatch {
    std::set<std::string> technologies;  // empty = any
    std::set<std::string> crosses_zones; // zone names; matched against the route
    std::optional<Selector> selector;    // intersects the PI selector
    std::set<std::string> deployed_at;   // empty = any
};

struct MinCoefficientRule {
    MinCoefficientMatch match;
    CoefficientTriple minimum;
};

/// Corporate thresholds: first-match C_min rules (default (0,0,0)) and the
/// traffic regions that must stay monitorable.
struct PolicyThresholds {
    std::map<std::string, std::set<std::string>> zones; // zone name -> node set
    std::vector<MinCoefficientRule> min_coefficients;
    std::vector<Selector> inspection_zones;
};

/// Record of one synthetic conflict injection (generated scenarios only).
struct InjectedAnomaly {
    std::string kind;
    std::vector<std::string> subject_pis;
};

/// The full analyzable world.
struct Scenario {
    TechnologyRegistry technologies = TechnologyRegistry::with_defaults();
    std::vector<std::string> preferred_technologies;

    EntityForest forest;
    std::map<std::string, NodeKind> node_kinds;
    TopologyGraph topology;
    std::map<std::string, CapabilityProfile> profiles;

    std::vector<PolicyImplementation> pis;
    PolicyThresholds thresholds;

    std::vector<InjectedAnomaly> manifest; // empty unless generated

    NodeKind kind_of(const std::string& node_id) const {
        auto it = node_kinds.find(node_id);
        return it == node_kinds.end() ? NodeKind::Host : it->second;
    }

    const CapabilityProfile* profile(const std::string& node_id) const {
        auto it = profiles.find(node_id);
        return it == profiles.end() ? nullptr : &it->second;
    }

    const PolicyImplementation* find_pi(const std::string& id) const {
        for (const PolicyImplementation& pi : pis)
            if (pi.id == id) return &pi;
        return nullptr;
    }

    std::string node_of(EntityId e) const { return forest.entity(e).node_id; }

    /// PI sets grouped by (deployment node, technology), members ordered by
    /// ascending priority value.
    std::vector<PISet> pi_sets() const;

    /// World-side validation: forest invariants, topology/routing checks,
    /// capability profiles, threshold references.
    std::vector<std::string> validate_world() const;

    /// PI-side validation: per-PI structure, id uniqueness, priority
    /// uniqueness within each PI set, deployment/gateway node references.
    std::vector<std::string> validate_pis(PiValidation mode = PiValidation::Strict) const;

    /// Full structural validation (both halves). Returns diagnostics.
    std::vector<std::string> validate(PiValidation mode = PiValidation::Strict) const;

    /// Non-fatal consistency notes (e.g. declared gateways that disagree
    /// with the routing table).
    std::vector<std::string> warnings() const;

    /// C_min(i): first matching thresholds rule, default all-zero.
    CoefficientTriple min_coefficients_for(const PolicyImplementation& pi) const;

    /// Route intermediates between two nodes (crossed gateways); nullopt when
    /// no routing entry exists.
    std::optional<std::vector<std::string>> crossed_gateways(const std::string& src_node,
                                                             const std::string& dst_node) const;

    bool route_crosses_zone(const PolicyImplementation& pi, const std::string& zone) const;
};

} // namespace cppa
