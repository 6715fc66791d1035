#include "report/dot.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

namespace cppa {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string sanitized(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

/// Entity where the PI's protection is applied graphically: the end-point's
/// ancestor (or itself) at the technology's layer; NULL channels stay at the
/// end-point.
EntityId anchor(const Scenario& s, EntityId endpoint, const Technology& tech) {
    if (tech.is_null()) return endpoint;
    EntityId cur = endpoint;
    while (cur != kNoEntity) {
        const NetworkEntity& e = s.forest.entity(cur);
        if (e.layer.has_value() && *e.layer == tech.osi_layer) return cur;
        cur = e.parent;
    }
    return endpoint;
}

/// Representative entity of a crossed gateway at the technology's layer.
EntityId gateway_anchor(const Scenario& s, const std::string& node, const Technology& tech) {
    EntityId best = kNoEntity;
    for (EntityId id : s.forest.entities_of(node)) {
        const NetworkEntity& e = s.forest.entity(id);
        if (!tech.is_null() && e.layer.has_value() && *e.layer == tech.osi_layer) {
            if (best == kNoEntity || e.name < s.forest.entity(best).name) best = id;
        }
    }
    if (best != kNoEntity) return best;
    return s.forest.root_of(node).value();
}

std::string edge_style(const Scenario& s, const PolicyImplementation& pi) {
    if (pi.coefficients.is_zero() || s.technologies.get(pi.technology).is_null())
        return "style=dashed";
    if (is_tunnel(s, pi)) return "color=\"black:invis:black\""; // doubled tunnel stroke
    return "style=solid";
}

} // namespace

std::string emit_dot(const Anomaly& anomaly, const Scenario& s) {
    if (anomaly.kind == AnomalyKind::OutOfPlace)
        throw std::invalid_argument("out-of-place anomalies have no graphical representation");

    std::vector<const PolicyImplementation*> pis;
    std::set<std::string> seen_ids;
    for (const std::string& id : anomaly.subject_pis) {
        if (!seen_ids.insert(id).second) continue;
        if (const PolicyImplementation* pi = s.find_pi(id)) pis.push_back(pi);
    }

    // Involved nodes: both end-points plus every crossed gateway.
    std::vector<std::string> nodes;
    auto note_node = [&](const std::string& n) {
        if (std::find(nodes.begin(), nodes.end(), n) == nodes.end()) nodes.push_back(n);
    };
    for (const PolicyImplementation* pi : pis)
        for (const std::string& n : pi->chain_nodes(s.forest)) note_node(n);

    std::ostringstream out;
    out << "digraph " << sanitized(std::string(to_string(anomaly.kind))) << " {\n";
    out << "  rankdir=LR;\n";
    out << "  label=" << quoted(std::string(to_string(anomaly.kind)) + ": " + anomaly.message)
        << ";\n";
    out << "  node [shape=circle, fontsize=10];\n";

    for (const std::string& node : nodes) {
        out << "  subgraph cluster_" << sanitized(node) << " {\n";
        out << "    label=" << quoted(node) << ";\n";
        out << "    color=gray;\n";
        const EntityId root = s.forest.root_of(node).value();
        out << "    " << quoted(s.forest.dotted_name(root)) << " [shape=box, label="
            << quoted(node) << "];\n";
        for (EntityId id : s.forest.entities_of(node)) {
            const NetworkEntity& e = s.forest.entity(id);
            if (e.is_root()) continue;
            out << "    " << quoted(s.forest.dotted_name(id)) << " [label="
                << quoted(e.name) << "];\n";
        }
        // Tree structure drawn as plain lines.
        for (EntityId id : s.forest.entities_of(node)) {
            const NetworkEntity& e = s.forest.entity(id);
            if (e.is_root()) continue;
            out << "    " << quoted(s.forest.dotted_name(e.parent)) << " -> "
                << quoted(s.forest.dotted_name(id)) << " [arrowhead=none, color=gray];\n";
        }
        out << "  }\n";
    }

    for (const PolicyImplementation* pi : pis) {
        const Technology& tech = s.technologies.get(pi->technology);
        const std::string label =
            pi->technology + ": " + pi->coefficients.str() + "\\n" + pi->selector.str();
        std::vector<EntityId> hops;
        hops.push_back(anchor(s, pi->source, tech));
        for (const std::string& gw : pi->gateways) hops.push_back(gateway_anchor(s, gw, tech));
        hops.push_back(anchor(s, pi->destination, tech));
        for (std::size_t h = 0; h + 1 < hops.size(); ++h) {
            out << "  " << quoted(s.forest.dotted_name(hops[h])) << " -> "
                << quoted(s.forest.dotted_name(hops[h + 1])) << " [" << edge_style(s, *pi);
            if (h == 0) out << ", label=" << quoted(label);
            out << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::vector<DotFile> emit_dot_bundle(const std::vector<Anomaly>& anomalies,
                                     const Scenario& scenario) {
    std::vector<DotFile> out;
    for (std::size_t i = 0; i < anomalies.size(); ++i) {
        if (anomalies[i].kind == AnomalyKind::OutOfPlace) continue;
        char index[8];
        std::snprintf(index, sizeof index, "%03zu", i);
        out.push_back({std::string(index) + "_" + std::string(to_string(anomalies[i].kind)) +
                           ".dot",
                       emit_dot(anomalies[i], scenario)});
    }
    return out;
}

} // namespace cppa
