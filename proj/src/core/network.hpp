#pragma once

#include "core/coefficients.hpp"
#include "core/selector.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cppa {

enum class FilterAction { Allow, Deny };

/// One entry of a node's ordered filtering ruleset. Evaluation is first
/// match wins with an implicit trailing ALLOW.
struct FirewallRule {
    Selector selector;
    FilterAction action = FilterAction::Allow;
};

/// Per-node capability description: which protection technologies the node
/// can run (T(e)), which of them at the data-link layer (T2(e)), the
/// strongest coefficients its cipher suites can enforce per technology, and
/// its filtering rules (backing F_e).
struct CapabilityProfile {
    std::string node_id;
    std::set<std::string> supported_technologies;
    std::set<std::string> layer2_technologies;
    std::map<std::string, CoefficientTriple> max_coefficients;
    std::vector<FirewallRule> firewall_rules;

    bool supports(const std::string& technology) const {
        return technology == "NULL" || supported_technologies.count(technology) > 0;
    }
};

/// Physical/virtual links plus the declared static routing table. Routes are
/// ingested, not computed; each entry must be a connected walk.
class TopologyGraph {
public:
    void add_node(const std::string& node_id) { nodes_.insert(node_id); }
    void add_edge(const std::string& a, const std::string& b);
    void add_route(const std::string& from, const std::string& to,
                   std::vector<std::string> walk);

    bool has_node(const std::string& n) const { return nodes_.count(n) > 0; }
    bool has_edge(const std::string& a, const std::string& b) const;

    const std::set<std::string>& nodes() const { return nodes_; }
    const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }

    const std::vector<std::string>* route(const std::string& from, const std::string& to) const;
    const std::map<std::pair<std::string, std::string>, std::vector<std::string>>& routes() const {
        return routing_;
    }

    /// Checks every routing entry: endpoints match the key and consecutive
    /// hops are linked. Returns problem descriptions, empty when valid.
    std::vector<std::string> validate() const;

private:
    std::set<std::string> nodes_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> routing_;
};

/// Outcome of a C_max lookup for a technology over a node pair.
struct MaxCoefficients {
    bool supported = false;         // technology known to both profiles
    CoefficientTriple coefficients; // component-wise minimum of the two ends
};

/// C_max for a channel: a channel is only as strong as its weaker end, so the
/// per-technology maxima of the two profiles are combined component-wise.
MaxCoefficients max_coefficients(const CapabilityProfile& src, const CapabilityProfile& dst,
                                 const std::string& technology);

} // namespace cppa
