#pragma once

// Small scenario-construction helpers shared by the engine tests.

#include "core/scenario.hpp"

#include <string>
#include <vector>

namespace cppa::testing {

/// Adds a node with the standard host stack root/l2/l3/l5/l7 and a
/// permissive profile capped at (5,5,5).
inline void add_host(Scenario& s, const std::string& id, const std::string& ip,
                     NodeKind kind = NodeKind::Host) {
    s.forest.add_node(id);
    s.topology.add_node(id);
    s.node_kinds[id] = kind;
    const EntityId l2 = s.forest.add_entity(id, "l2", 2);
    const EntityId l3 = s.forest.add_entity(id, "l3", 3, l2);
    s.forest.bind_ip(l3, parse_ipv4(ip).value());
    const EntityId l5 = s.forest.add_entity(id, "l5", 5, l3);
    s.forest.add_entity(id, "l7", 7, l5);

    CapabilityProfile profile;
    profile.node_id = id;
    const CoefficientTriple ceiling{Rational(5), Rational(5), Rational(5)};
    for (const char* t : {"IPsec", "TLS", "SSH", "WS-Security", "WPA2", "MACsec"}) {
        profile.supported_technologies.insert(t);
        profile.max_coefficients[t] = ceiling;
    }
    profile.layer2_technologies = {"WPA2", "MACsec"};
    s.profiles[id] = profile;
}

inline void add_gateway(Scenario& s, const std::string& id, const std::string& ip,
                        const std::string& ip2 = "") {
    s.forest.add_node(id);
    s.topology.add_node(id);
    s.node_kinds[id] = NodeKind::Gateway;
    const EntityId l2 = s.forest.add_entity(id, "l2", 2);
    const EntityId l3 = s.forest.add_entity(id, "l3", 3, l2);
    s.forest.bind_ip(l3, parse_ipv4(ip).value());
    if (!ip2.empty()) {
        const EntityId l3b = s.forest.add_entity(id, "l3'", 3, l2);
        s.forest.bind_ip(l3b, parse_ipv4(ip2).value());
    }
    s.forest.add_entity(id, "l5", 5, l3);

    CapabilityProfile profile;
    profile.node_id = id;
    const CoefficientTriple ceiling{Rational(5), Rational(5), Rational(5)};
    for (const char* t : {"IPsec", "TLS", "SSH", "WS-Security", "WPA2", "MACsec"}) {
        profile.supported_technologies.insert(t);
        profile.max_coefficients[t] = ceiling;
    }
    profile.layer2_technologies = {"WPA2", "MACsec"};
    s.profiles[id] = profile;
}

inline Selector sel(const std::string& ip_src, const std::string& p_src,
                    const std::string& ip_dst, const std::string& p_dst,
                    const std::string& prt) {
    Selector out;
    out.ip_src.members = parse_ip_set(ip_src).value();
    out.p_src.members = parse_port_set(p_src).value();
    out.ip_dst.members = parse_ip_set(ip_dst).value();
    out.p_dst.members = parse_port_set(p_dst).value();
    out.prt.members = parse_proto_set(prt).value();
    return out;
}

inline CoefficientTriple coeff(int hi, int pi, int c) {
    return {Rational(hi), Rational(pi), Rational(c)};
}

inline PolicyImplementation& add_pi(Scenario& s, const std::string& id, const std::string& src,
                                    const std::string& dst, const std::string& tech,
                                    CoefficientTriple c, Selector selector,
                                    std::vector<std::string> gateways = {},
                                    std::string deployed_at = "",
                                    std::uint32_t priority = UINT32_MAX) {
    PolicyImplementation pi;
    pi.id = id;
    pi.source = s.forest.require(src);
    pi.destination = s.forest.require(dst);
    pi.technology = tech;
    pi.coefficients = std::move(c);
    pi.selector = std::move(selector);
    pi.gateways = std::move(gateways);
    pi.deployed_at = deployed_at.empty() ? s.node_of(pi.source) : deployed_at;
    if (priority == UINT32_MAX) {
        std::uint32_t next = 0;
        for (const PolicyImplementation& other : s.pis)
            if (other.deployed_at == pi.deployed_at && other.technology == pi.technology)
                next = std::max(next, other.priority + 1);
        pi.priority = next;
    } else {
        pi.priority = priority;
    }
    s.pis.push_back(std::move(pi));
    return s.pis.back();
}

} // namespace cppa::testing
