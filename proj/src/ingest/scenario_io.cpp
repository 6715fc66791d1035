#include "ingest/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cppa {

using nlohmann::json;

namespace {

struct Diagnostics {
    std::vector<std::string> problems;
    void add(const std::string& where, const std::string& what) {
        problems.push_back(where + ": " + what);
    }
    void raise_if_any() const {
        if (!problems.empty()) throw ParseError(problems);
    }
};

Rational rational_from_json(const json& j, const std::string& where, Diagnostics& diag) {
    try {
        if (j.is_number_unsigned() || j.is_number_integer()) {
            const std::int64_t v = j.get<std::int64_t>();
            if (v >= 0) return Rational(v);
        } else if (j.is_string()) {
            if (auto r = Rational::parse(j.get<std::string>())) return *r;
        }
    } catch (const std::exception&) {
    }
    diag.add(where, "expected a non-negative integer or rational string");
    return Rational(0);
}

CoefficientTriple coefficients_from_json(const json& j, const std::string& where,
                                         Diagnostics& diag) {
    if (!j.is_array() || j.size() != 3) {
        diag.add(where, "coefficients must be a [hi, pi, c] triple");
        return {};
    }
    return {rational_from_json(j[0], where + "[0]", diag),
            rational_from_json(j[1], where + "[1]", diag),
            rational_from_json(j[2], where + "[2]", diag)};
}

FieldSet field_from_json(const json& j, FieldKind kind, const std::string& where,
                         Diagnostics& diag) {
    FieldSet fs = FieldSet::wildcard(kind);
    if (j.is_null()) return fs;
    if (!j.is_string()) {
        diag.add(where, "selector fields are strings (\"*\", value, range or comma union)");
        return fs;
    }
    const std::string text = j.get<std::string>();
    std::optional<IntervalSet> parsed;
    switch (kind) {
    case FieldKind::IpSet: parsed = parse_ip_set(text); break;
    case FieldKind::PortSet: parsed = parse_port_set(text); break;
    case FieldKind::ProtoSet: parsed = parse_proto_set(text); break;
    }
    if (!parsed) {
        diag.add(where, "cannot parse field value '" + text + "'");
        return fs;
    }
    fs.members = *parsed;
    return fs;
}

Selector selector_from_json(const json& j, const std::string& where, Diagnostics& diag) {
    Selector s;
    if (j.is_null()) return s;
    if (!j.is_object()) {
        diag.add(where, "selector must be an object");
        return s;
    }
    if (j.contains("ip_src")) s.ip_src = field_from_json(j["ip_src"], FieldKind::IpSet, where + ".ip_src", diag);
    if (j.contains("p_src")) s.p_src = field_from_json(j["p_src"], FieldKind::PortSet, where + ".p_src", diag);
    if (j.contains("ip_dst")) s.ip_dst = field_from_json(j["ip_dst"], FieldKind::IpSet, where + ".ip_dst", diag);
    if (j.contains("p_dst")) s.p_dst = field_from_json(j["p_dst"], FieldKind::PortSet, where + ".p_dst", diag);
    if (j.contains("prt")) s.prt = field_from_json(j["prt"], FieldKind::ProtoSet, where + ".prt", diag);
    if (j.contains("extras")) {
        for (std::size_t i = 0; i < j["extras"].size(); ++i) {
            const json& e = j["extras"][i];
            const std::string ewhere = where + ".extras[" + std::to_string(i) + "]";
            if (!e.is_object() || !e.contains("name") || !e.contains("kind")) {
                diag.add(ewhere, "extras need name/kind/set");
                continue;
            }
            const std::string kind_name = e["kind"].get<std::string>();
            FieldKind kind = FieldKind::PortSet;
            if (kind_name == "ip") kind = FieldKind::IpSet;
            else if (kind_name == "port") kind = FieldKind::PortSet;
            else if (kind_name == "proto") kind = FieldKind::ProtoSet;
            else diag.add(ewhere, "unknown extra field kind " + kind_name);
            s.extras.emplace_back(e["name"].get<std::string>(),
                                  field_from_json(e.value("set", json(nullptr)), kind, ewhere, diag));
        }
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "ip_src" && key != "p_src" && key != "ip_dst" && key != "p_dst" &&
            key != "prt" && key != "extras")
            diag.add(where, "unknown selector field '" + key + "'");
    }
    return s;
}

json field_to_json(const FieldSet& fs) { return field_set_to_string(fs); }

json selector_to_json(const Selector& s) {
    json out = json::object();
    if (!s.ip_src.is_wildcard()) out["ip_src"] = field_to_json(s.ip_src);
    if (!s.p_src.is_wildcard()) out["p_src"] = field_to_json(s.p_src);
    if (!s.ip_dst.is_wildcard()) out["ip_dst"] = field_to_json(s.ip_dst);
    if (!s.p_dst.is_wildcard()) out["p_dst"] = field_to_json(s.p_dst);
    if (!s.prt.is_wildcard()) out["prt"] = field_to_json(s.prt);
    if (!s.extras.empty()) {
        json extras = json::array();
        for (const auto& [name, fs] : s.extras) {
            json e;
            e["name"] = name;
            e["kind"] = fs.kind == FieldKind::IpSet ? "ip"
                        : fs.kind == FieldKind::PortSet ? "port"
                                                        : "proto";
            e["set"] = field_to_json(fs);
            extras.push_back(e);
        }
        out["extras"] = extras;
    }
    return out;
}

json coefficients_to_json(const CoefficientTriple& c) {
    json out = json::array();
    for (const Rational& r : c.components()) {
        if (r.den() == 1) out.push_back(r.num());
        else out.push_back(r.str());
    }
    return out;
}

} // namespace

Selector selector_from_json_text(const std::string& json_text) {
    Diagnostics diag;
    Selector s = selector_from_json(json::parse(json_text), "selector", diag);
    diag.raise_if_any();
    return s;
}

Scenario parse_scenario(const std::string& json_text) {
    Diagnostics diag;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        diag.add("document", e.what());
        diag.raise_if_any();
    }
    if (!doc.is_object()) {
        diag.add("document", "top level must be an object");
        diag.raise_if_any();
    }

    Scenario s;
    if (doc.contains("schema_version") && doc["schema_version"].get<int>() != kScenarioSchemaVersion)
        diag.add("schema_version", "unsupported version");

    if (doc.contains("technologies")) {
        for (const json& t : doc["technologies"]) {
            try {
                Technology tech{t.at("name").get<std::string>(), t.value("layer", kNoLayer)};
                if (!s.technologies.find(tech.name)) s.technologies.register_technology(tech);
            } catch (const std::exception& e) {
                diag.add("technologies", e.what());
            }
        }
    }
    if (doc.contains("preferred_technologies"))
        for (const json& t : doc["preferred_technologies"])
            s.preferred_technologies.push_back(t.get<std::string>());

    for (std::size_t ni = 0; ni < doc.value("nodes", json::array()).size(); ++ni) {
        const json& n = doc["nodes"][ni];
        const std::string where = "nodes[" + std::to_string(ni) + "]";
        if (!n.contains("id")) {
            diag.add(where, "missing id");
            continue;
        }
        const std::string id = n["id"].get<std::string>();
        try {
            s.forest.add_node(id);
        } catch (const std::exception& e) {
            diag.add(where, e.what());
            continue;
        }
        s.topology.add_node(id);
        s.node_kinds[id] = n.value("kind", std::string("host")) == "gateway" ? NodeKind::Gateway
                                                                             : NodeKind::Host;
        for (const json& e : n.value("entities", json::array())) {
            const std::string ewhere = where + ".entities";
            try {
                EntityId parent = kNoEntity;
                if (e.contains("parent") && !e["parent"].is_null()) {
                    auto p = s.forest.find(id + "." + e["parent"].get<std::string>());
                    if (!p) throw std::invalid_argument("unknown parent " +
                                                        e["parent"].get<std::string>());
                    parent = *p;
                }
                const EntityId eid = s.forest.add_entity(id, e.at("name").get<std::string>(),
                                                         e.at("layer").get<int>(), parent,
                                                         e.value("label", std::string()));
                if (e.contains("ip") && !e["ip"].is_null()) {
                    auto ip = parse_ipv4(e["ip"].get<std::string>());
                    if (!ip) throw std::invalid_argument("bad ip " + e["ip"].get<std::string>());
                    s.forest.bind_ip(eid, *ip);
                }
                if (e.contains("port") && !e["port"].is_null())
                    s.forest.bind_port(eid, e["port"].get<std::uint16_t>());
            } catch (const std::exception& ex) {
                diag.add(ewhere, ex.what());
            }
        }
    }

    if (doc.contains("topology")) {
        const json& topo = doc["topology"];
        for (const json& e : topo.value("edges", json::array())) {
            try {
                s.topology.add_edge(e.at(0).get<std::string>(), e.at(1).get<std::string>());
            } catch (const std::exception& ex) {
                diag.add("topology.edges", ex.what());
            }
        }
        for (const json& r : topo.value("routing", json::array())) {
            try {
                std::vector<std::string> walk;
                for (const json& hop : r.at("walk")) walk.push_back(hop.get<std::string>());
                s.topology.add_route(r.at("from").get<std::string>(),
                                     r.at("to").get<std::string>(), std::move(walk));
            } catch (const std::exception& ex) {
                diag.add("topology.routing", ex.what());
            }
        }
    }

    for (const json& c : doc.value("capabilities", json::array())) {
        try {
            CapabilityProfile profile;
            profile.node_id = c.at("node").get<std::string>();
            for (const json& t : c.value("technologies", json::array()))
                profile.supported_technologies.insert(t.get<std::string>());
            for (const json& t : c.value("layer2_technologies", json::array()))
                profile.layer2_technologies.insert(t.get<std::string>());
            if (c.contains("max_coefficients")) {
                for (const auto& [tech, triple] : c["max_coefficients"].items())
                    profile.max_coefficients[tech] = coefficients_from_json(
                        triple, "capabilities." + profile.node_id + ".max_coefficients", diag);
            }
            for (const json& r : c.value("firewall_rules", json::array())) {
                FirewallRule rule;
                const std::string action = r.value("action", std::string("ALLOW"));
                rule.action = action == "DENY" ? FilterAction::Deny : FilterAction::Allow;
                rule.selector = selector_from_json(
                    r.value("selector", json(nullptr)),
                    "capabilities." + profile.node_id + ".firewall_rules", diag);
                profile.firewall_rules.push_back(std::move(rule));
            }
            s.profiles[profile.node_id] = std::move(profile);
        } catch (const std::exception& ex) {
            diag.add("capabilities", ex.what());
        }
    }

    std::map<std::pair<std::string, std::string>, std::uint32_t> next_priority;
    for (std::size_t pi_idx = 0; pi_idx < doc.value("pis", json::array()).size(); ++pi_idx) {
        const json& p = doc["pis"][pi_idx];
        const std::string where = "pis[" + std::to_string(pi_idx) + "]";
        try {
            PolicyImplementation pi;
            pi.id = p.at("id").get<std::string>();
            pi.source = s.forest.require(p.at("source").get<std::string>());
            pi.destination = s.forest.require(p.at("destination").get<std::string>());
            pi.technology = p.at("technology").get<std::string>();
            pi.coefficients =
                coefficients_from_json(p.value("coefficients", json::array({0, 0, 0})),
                                       where + ".coefficients", diag);
            pi.selector = selector_from_json(p.value("selector", json(nullptr)),
                                             where + ".selector", diag);
            for (const json& g : p.value("gateways", json::array()))
                pi.gateways.push_back(g.get<std::string>());
            pi.deployed_at = p.value("deployed_at", s.node_of(pi.source));
            const auto set_key = std::make_pair(pi.deployed_at, pi.technology);
            if (p.contains("priority")) {
                pi.priority = p["priority"].get<std::uint32_t>();
                next_priority[set_key] = std::max(next_priority[set_key], pi.priority + 1);
            } else {
                // Dense list-order priorities when the input omits them.
                pi.priority = next_priority[set_key]++;
            }
            s.pis.push_back(std::move(pi));
        } catch (const std::exception& ex) {
            diag.add(where, ex.what());
        }
    }

    if (doc.contains("thresholds")) {
        const json& th = doc["thresholds"];
        for (const json& z : th.value("zones", json::array())) {
            try {
                std::set<std::string> members;
                for (const json& n : z.at("nodes")) members.insert(n.get<std::string>());
                s.thresholds.zones[z.at("name").get<std::string>()] = std::move(members);
            } catch (const std::exception& ex) {
                diag.add("thresholds.zones", ex.what());
            }
        }
        for (std::size_t ri = 0; ri < th.value("min_coefficients", json::array()).size(); ++ri) {
            const json& r = th["min_coefficients"][ri];
            const std::string where = "thresholds.min_coefficients[" + std::to_string(ri) + "]";
            try {
                MinCoefficientRule rule;
                const json& m = r.value("match", json::object());
                for (const json& t : m.value("technologies", json::array()))
                    rule.match.technologies.insert(t.get<std::string>());
                for (const json& z : m.value("crosses_zones", json::array()))
                    rule.match.crosses_zones.insert(z.get<std::string>());
                for (const json& d : m.value("deployed_at", json::array()))
                    rule.match.deployed_at.insert(d.get<std::string>());
                if (m.contains("selector"))
                    rule.match.selector =
                        selector_from_json(m["selector"], where + ".match.selector", diag);
                rule.minimum = coefficients_from_json(r.at("min"), where + ".min", diag);
                s.thresholds.min_coefficients.push_back(std::move(rule));
            } catch (const std::exception& ex) {
                diag.add(where, ex.what());
            }
        }
        for (const json& z : th.value("inspection_zones", json::array()))
            s.thresholds.inspection_zones.push_back(
                selector_from_json(z, "thresholds.inspection_zones", diag));
    }

    for (const json& m : doc.value("manifest", json::array())) {
        try {
            InjectedAnomaly injected;
            injected.kind = m.at("kind").get<std::string>();
            for (const json& id : m.value("subjects", json::array()))
                injected.subject_pis.push_back(id.get<std::string>());
            s.manifest.push_back(std::move(injected));
        } catch (const std::exception& ex) {
            diag.add("manifest", ex.what());
        }
    }

    diag.raise_if_any();
    for (const std::string& problem : s.validate()) diag.problems.push_back(problem);
    diag.raise_if_any();
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError({"cannot open " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    json doc;
    doc["schema_version"] = kScenarioSchemaVersion;

    const TechnologyRegistry defaults = TechnologyRegistry::with_defaults();
    json techs = json::array();
    for (const std::string& name : s.technologies.names()) {
        if (defaults.find(name)) continue;
        const Technology& t = s.technologies.get(name);
        techs.push_back({{"name", t.name}, {"layer", t.osi_layer}});
    }
    if (!techs.empty()) doc["technologies"] = techs;
    if (!s.preferred_technologies.empty())
        doc["preferred_technologies"] = s.preferred_technologies;

    json nodes = json::array();
    for (const std::string& node_id : s.forest.node_ids()) {
        json n;
        n["id"] = node_id;
        if (s.kind_of(node_id) == NodeKind::Gateway) n["kind"] = "gateway";
        json entities = json::array();
        for (EntityId eid : s.forest.entities_of(node_id)) {
            const NetworkEntity& e = s.forest.entity(eid);
            if (e.is_root()) continue;
            json je;
            je["name"] = e.name;
            je["layer"] = *e.layer;
            const NetworkEntity& parent = s.forest.entity(e.parent);
            if (!parent.is_root()) je["parent"] = parent.name;
            if (e.label != node_id + "." + e.name) je["label"] = e.label;
            if (e.ip) je["ip"] = ipv4_to_string(*e.ip);
            if (e.port) je["port"] = *e.port;
            entities.push_back(je);
        }
        n["entities"] = entities;
        nodes.push_back(n);
    }
    doc["nodes"] = nodes;

    json topo;
    json edges = json::array();
    for (const auto& [a, b] : s.topology.edges()) edges.push_back({a, b});
    topo["edges"] = edges;
    json routing = json::array();
    for (const auto& [key, walk] : s.topology.routes())
        routing.push_back({{"from", key.first}, {"to", key.second}, {"walk", walk}});
    topo["routing"] = routing;
    doc["topology"] = topo;

    json capabilities = json::array();
    for (const auto& [node, profile] : s.profiles) {
        json c;
        c["node"] = node;
        c["technologies"] = profile.supported_technologies;
        if (!profile.layer2_technologies.empty())
            c["layer2_technologies"] = profile.layer2_technologies;
        if (!profile.max_coefficients.empty()) {
            json mc = json::object();
            for (const auto& [tech, triple] : profile.max_coefficients)
                mc[tech] = coefficients_to_json(triple);
            c["max_coefficients"] = mc;
        }
        if (!profile.firewall_rules.empty()) {
            json rules = json::array();
            for (const FirewallRule& r : profile.firewall_rules)
                rules.push_back({{"action", r.action == FilterAction::Deny ? "DENY" : "ALLOW"},
                                 {"selector", selector_to_json(r.selector)}});
            c["firewall_rules"] = rules;
        }
        capabilities.push_back(c);
    }
    doc["capabilities"] = capabilities;

    json pis = json::array();
    for (const PolicyImplementation& pi : s.pis) {
        json p;
        p["id"] = pi.id;
        p["source"] = s.forest.dotted_name(pi.source);
        p["destination"] = s.forest.dotted_name(pi.destination);
        p["technology"] = pi.technology;
        p["coefficients"] = coefficients_to_json(pi.coefficients);
        p["selector"] = selector_to_json(pi.selector);
        if (!pi.gateways.empty()) p["gateways"] = pi.gateways;
        p["deployed_at"] = pi.deployed_at;
        p["priority"] = pi.priority;
        pis.push_back(p);
    }
    doc["pis"] = pis;

    if (!s.thresholds.zones.empty() || !s.thresholds.min_coefficients.empty() ||
        !s.thresholds.inspection_zones.empty()) {
        json th;
        if (!s.thresholds.zones.empty()) {
            json zones = json::array();
            for (const auto& [name, members] : s.thresholds.zones)
                zones.push_back({{"name", name}, {"nodes", members}});
            th["zones"] = zones;
        }
        if (!s.thresholds.min_coefficients.empty()) {
            json rules = json::array();
            for (const MinCoefficientRule& rule : s.thresholds.min_coefficients) {
                json m = json::object();
                if (!rule.match.technologies.empty()) m["technologies"] = rule.match.technologies;
                if (!rule.match.crosses_zones.empty()) m["crosses_zones"] = rule.match.crosses_zones;
                if (!rule.match.deployed_at.empty()) m["deployed_at"] = rule.match.deployed_at;
                if (rule.match.selector) m["selector"] = selector_to_json(*rule.match.selector);
                rules.push_back({{"match", m}, {"min", coefficients_to_json(rule.minimum)}});
            }
            th["min_coefficients"] = rules;
        }
        if (!s.thresholds.inspection_zones.empty()) {
            json zones = json::array();
            for (const Selector& z : s.thresholds.inspection_zones)
                zones.push_back(selector_to_json(z));
            th["inspection_zones"] = zones;
        }
        doc["thresholds"] = th;
    }

    if (!s.manifest.empty()) {
        json manifest = json::array();
        for (const InjectedAnomaly& m : s.manifest)
            manifest.push_back({{"kind", m.kind}, {"subjects", m.subject_pis}});
        doc["manifest"] = manifest;
    }
    return doc.dump(2) + "\n";
}

void save_scenario_file(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError({"cannot write " + path});
    out << serialize_scenario(scenario);
}

} // namespace cppa
