#include "core/policy.hpp"

#include "core/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace cppa {

std::vector<std::string> PolicyImplementation::chain_nodes(const EntityForest& forest) const {
    std::vector<std::string> out;
    out.reserve(gateways.size() + 2);
    out.push_back(forest.entity(source).node_id);
    for (const std::string& g : gateways) out.push_back(g);
    out.push_back(forest.entity(destination).node_id);
    return out;
}

std::vector<std::string> validate_pi(const PolicyImplementation& pi, const EntityForest& forest,
                                     const TechnologyRegistry& technologies,
                                     PiValidation mode) {
    std::vector<std::string> problems;
    auto complain = [&](const std::string& what) { problems.push_back("PI " + pi.id + ": " + what); };

    if (pi.id.empty()) problems.push_back("PI with empty id");
    if (pi.source >= forest.size() || pi.destination >= forest.size()) {
        complain("dangling entity reference");
        return problems;
    }
    const Technology* tech = technologies.find(pi.technology);
    if (!tech) {
        complain("unregistered technology " + pi.technology);
        return problems;
    }

    const NetworkEntity& s = forest.entity(pi.source);
    const NetworkEntity& d = forest.entity(pi.destination);

    if (tech->is_null()) {
        if (!pi.coefficients.is_zero())
            complain("NULL technology requires zero coefficients");
    } else {
        // A layer-L technology attaches at entities living at layer L or
        // above it in the stack; the bare node root is not an attach point.
        for (const NetworkEntity* e : {&s, &d}) {
            if (!e->layer.has_value())
                complain("technology " + pi.technology + " cannot attach at node root " +
                         e->node_id);
            else if (mode == PiValidation::Strict && *e->layer < tech->osi_layer)
                complain("technology " + pi.technology + " (layer " +
                         std::to_string(tech->osi_layer) + ") cannot attach at layer " +
                         std::to_string(*e->layer) + " entity " + forest.dotted_name(
                             e == &s ? pi.source : pi.destination));
        }
    }

    for (const std::string& g : pi.gateways) {
        if (g == s.node_id || g == d.node_id)
            complain("gateway list must exclude the end-point nodes (" + g + ")");
    }
    if (pi.selector.empty()) complain("selector matches no traffic");
    if (pi.deployed_at.empty()) complain("missing deployment node");
    return problems;
}

PolicyImplementation least_upper_bound_pi(const PolicyImplementation& i1,
                                          const PolicyImplementation& i2,
                                          const EntityForest& forest,
                                          const TechnologyRegistry& technologies,
                                          const LubOptions& options) {
    if (entity_relation(forest, i1.source, i2.source) == Relation::Disjoint)
        throw std::invalid_argument("LUB needs non-disjoint sources");
    if (entity_relation(forest, i1.destination, i2.destination) == Relation::Disjoint)
        throw std::invalid_argument("LUB needs non-disjoint destinations");
    if (i1.gateways != i2.gateways)
        throw std::invalid_argument("LUB needs identical gateway lists");

    PolicyImplementation out;
    out.id = "lub(" + i1.id + "," + i2.id + ")";
    out.source = forest.lowest_common_ancestor(i1.source, i2.source);
    out.destination = forest.lowest_common_ancestor(i1.destination, i2.destination);

    const Technology& t1 = technologies.get(i1.technology);
    const Technology& t2 = technologies.get(i2.technology);
    switch (technology_relation(t1, t2)) {
    case Relation::Equivalent:
    case Relation::Dominates:
        out.technology = t1.name;
        break;
    case Relation::DominatedBy:
        out.technology = t2.name;
        break;
    case Relation::Disjoint:
        // One side is NULL; the real protocol dominates it.
        out.technology = t1.is_null() ? t2.name : t1.name;
        break;
    case Relation::Kin: {
        // Same layer: the model defines no LUB, resolve via the declared
        // preference order, falling back to the lexicographically smaller
        // name so the choice stays deterministic.
        out.technology = std::min(t1.name, t2.name);
        for (const std::string& pref : options.preferred_technologies) {
            if (pref == t1.name || pref == t2.name) {
                out.technology = pref;
                break;
            }
        }
        break;
    }
    }

    out.coefficients = CoefficientTriple::component_max(i1.coefficients, i2.coefficients);
    out.selector = selector_lub(i1.selector, i2.selector);
    out.gateways = i1.gateways;
    out.deployed_at = i1.deployed_at;
    out.priority = std::min(i1.priority, i2.priority);
    return out;
}

std::optional<bool> source_in_selector_scope_checked(const EntityForest& forest, EntityId e,
                                                     const Selector& s) {
    const auto ip = forest.resolve_ip(e);
    if (!ip) return std::nullopt;
    if (!s.ip_src.members.contains(*ip)) return false;
    if (const auto port = forest.resolve_port(e); port && !s.p_src.members.contains(*port))
        return false;
    return true;
}

bool source_in_selector_scope(const EntityForest& forest, EntityId e, const Selector& s) {
    return source_in_selector_scope_checked(forest, e, s).value_or(false);
}

} // namespace cppa
