#include "core/scenario.hpp"

#include <algorithm>
#include <map>

namespace cppa {

std::vector<PISet> Scenario::pi_sets() const {
    std::map<std::pair<std::string, std::string>, PISet> sets;
    for (std::size_t i = 0; i < pis.size(); ++i) {
        const PolicyImplementation& pi = pis[i];
        auto key = std::make_pair(pi.deployed_at, pi.technology);
        auto& set = sets[key];
        set.node_id = pi.deployed_at;
        set.technology = pi.technology;
        set.pi_indices.push_back(i);
    }
    std::vector<PISet> out;
    out.reserve(sets.size());
    for (auto& [key, set] : sets) {
        std::sort(set.pi_indices.begin(), set.pi_indices.end(), [&](std::size_t a, std::size_t b) {
            if (pis[a].priority != pis[b].priority) return pis[a].priority < pis[b].priority;
            return pis[a].id < pis[b].id;
        });
        out.push_back(std::move(set));
    }
    return out;
}

std::vector<std::string> Scenario::validate_pis(PiValidation mode) const {
    std::vector<std::string> problems;
    std::set<std::string> seen_ids;
    for (const PolicyImplementation& pi : pis) {
        for (const auto& p : validate_pi(pi, forest, technologies, mode)) problems.push_back(p);
        if (!seen_ids.insert(pi.id).second) problems.push_back("duplicate PI id: " + pi.id);
        if (!pi.deployed_at.empty() && !topology.has_node(pi.deployed_at))
            problems.push_back("PI " + pi.id + ": deployed on unknown node " + pi.deployed_at);
        for (const std::string& g : pi.gateways) {
            if (!topology.has_node(g))
                problems.push_back("PI " + pi.id + ": unknown gateway " + g);
        }
    }

    // Priorities must be unique within each (node, technology) set; grouping
    // by sort keeps this linear in memory.
    std::vector<std::size_t> order(pis.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const PolicyImplementation& x = pis[a];
        const PolicyImplementation& y = pis[b];
        if (x.deployed_at != y.deployed_at) return x.deployed_at < y.deployed_at;
        if (x.technology != y.technology) return x.technology < y.technology;
        return x.priority < y.priority;
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const PolicyImplementation& x = pis[order[i]];
        const PolicyImplementation& y = pis[order[i + 1]];
        if (x.deployed_at == y.deployed_at && x.technology == y.technology &&
            x.priority == y.priority)
            problems.push_back("duplicate priority " + std::to_string(x.priority) +
                               " in PI set (" + x.deployed_at + ", " + x.technology + ")");
    }
    return problems;
}

std::vector<std::string> Scenario::validate_world() const {
    std::vector<std::string> problems;

    for (const auto& problem : forest.verify()) problems.push_back(problem);
    for (const auto& problem : topology.validate()) problems.push_back(problem);

    for (const auto& [node, profile] : profiles) {
        if (!topology.has_node(node))
            problems.push_back("capability profile for unknown node " + node);
        for (const std::string& t : profile.layer2_technologies) {
            if (!profile.supported_technologies.count(t))
                problems.push_back("node " + node + ": layer-2 technology " + t +
                                   " missing from supported set");
            const Technology* tech = technologies.find(t);
            if (tech && !tech->is_layer2())
                problems.push_back("node " + node + ": " + t + " is not a layer-2 technology");
        }
        for (const auto& [t, c] : profile.max_coefficients) {
            if (!profile.supported_technologies.count(t))
                problems.push_back("node " + node + ": max coefficients for unsupported " + t);
        }
    }

    for (const auto& rule : thresholds.min_coefficients) {
        for (const std::string& zone : rule.match.crosses_zones) {
            if (!thresholds.zones.count(zone))
                problems.push_back("threshold rule references unknown zone " + zone);
        }
    }
    return problems;
}

std::vector<std::string> Scenario::validate(PiValidation mode) const {
    std::vector<std::string> problems = validate_world();
    for (auto& p : validate_pis(mode)) problems.push_back(std::move(p));
    return problems;
}

std::vector<std::string> Scenario::warnings() const {
    std::vector<std::string> notes;
    for (const PolicyImplementation& pi : pis) {
        if (pi.gateways.empty()) continue;
        const std::string src = node_of(pi.source);
        const std::string dst = node_of(pi.destination);
        auto crossed = crossed_gateways(src, dst);
        if (crossed && *crossed != pi.gateways)
            notes.push_back("PI " + pi.id + ": declared gateways disagree with the routing table");
    }
    return notes;
}

CoefficientTriple Scenario::min_coefficients_for(const PolicyImplementation& pi) const {
    for (const MinCoefficientRule& rule : thresholds.min_coefficients) {
        const MinCoefficientMatch& m = rule.match;
        if (!m.technologies.empty() && !m.technologies.count(pi.technology)) continue;
        if (!m.deployed_at.empty() && !m.deployed_at.count(pi.deployed_at)) continue;
        if (m.selector && !selectors_intersect(pi.selector, *m.selector)) continue;
        bool crosses = true;
        for (const std::string& zone : m.crosses_zones) {
            if (!route_crosses_zone(pi, zone)) {
                crosses = false;
                break;
            }
        }
        if (!crosses) continue;
        return rule.minimum;
    }
    return {};
}

std::optional<std::vector<std::string>> Scenario::crossed_gateways(
    const std::string& src_node, const std::string& dst_node) const {
    const std::vector<std::string>* walk = topology.route(src_node, dst_node);
    if (!walk) return std::nullopt;
    if (walk->size() < 2) return std::vector<std::string>{};
    std::vector<std::string> out(walk->begin() + 1, walk->end() - 1);
    return out;
}

bool Scenario::route_crosses_zone(const PolicyImplementation& pi, const std::string& zone) const {
    auto it = thresholds.zones.find(zone);
    if (it == thresholds.zones.end()) return false;
    const std::set<std::string>& members = it->second;
    auto crossed = crossed_gateways(node_of(pi.source), node_of(pi.destination));
    if (crossed) {
        for (const std::string& hop : *crossed)
            if (members.count(hop)) return true;
    }
    // Declared gateways count as crossings too.
    for (const std::string& g : pi.gateways)
        if (members.count(g)) return true;
    return false;
}

} // namespace cppa
