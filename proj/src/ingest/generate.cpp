#include "ingest/generate.hpp"

#include "engine/anomaly.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace cppa {

namespace {

struct Builder {
    const GenerationParams& params;
    Scenario s;
    std::mt19937_64 rng;

    std::size_t node_counter = 0;
    std::size_t pi_counter = 0;
    std::uint32_t next_ip = 0x0A000001; // 10.0.0.1 onwards
    std::uint16_t next_window = 1024;   // disjoint 16-port selector windows

    std::vector<std::string> client_pool;
    std::vector<std::string> server_pool;
    struct Cluster {
        std::string client, server;
        std::vector<std::string> gateways;
    };
    std::vector<Cluster> cluster_pool;
    std::set<std::pair<EntityId, EntityId>> used_pairs;
    std::map<std::pair<std::string, std::string>, std::uint32_t> priorities;

    // Shared phase-2 infrastructure, created on first use.
    std::vector<std::string> skew_trio, cycle_trio;
    std::string mon_gw, alt_gw, filter_gw, l2_gw, overlay_client;

    std::size_t pair_cursor = 0;

    explicit Builder(const GenerationParams& p) : params(p), rng(p.seed) {}

    // -- primitives --

    std::uint32_t take_ip() { return next_ip++; }

    /// 16-port window unique to one PI or injection; keeps every generated
    /// selector disjoint from all the others.
    IntervalSet take_window() {
        if (next_window > 65000) throw std::invalid_argument("selector window space exhausted");
        const std::uint16_t base = next_window;
        next_window = static_cast<std::uint16_t>(next_window + 16);
        return IntervalSet(base, base + 15u);
    }

    std::uint32_t take_priority(const std::string& node, const std::string& tech) {
        return priorities[{node, tech}]++;
    }

    std::string pi_name() { return "p" + std::to_string(pi_counter++); }

    CapabilityProfile default_profile(const std::string& node) {
        CapabilityProfile p;
        p.node_id = node;
        const CoefficientTriple ceiling{Rational(5), Rational(5), Rational(5)};
        for (const char* t : {"IPsec", "TLS", "SSH", "WS-Security", "WPA2", "MACsec"}) {
            p.supported_technologies.insert(t);
            p.max_coefficients[t] = ceiling;
        }
        p.layer2_technologies = {"WPA2", "MACsec"};
        return p;
    }

    std::string new_host(const char* prefix, bool with_l7_port) {
        const std::string id = prefix + std::to_string(node_counter++);
        s.forest.add_node(id);
        s.topology.add_node(id);
        s.node_kinds[id] = NodeKind::Host;
        const EntityId l2 = s.forest.add_entity(id, "l2", 2);
        const EntityId l3 = s.forest.add_entity(id, "l3", 3, l2);
        s.forest.bind_ip(l3, take_ip());
        const EntityId l5 = s.forest.add_entity(id, "l5", 5, l3);
        const EntityId l7 = s.forest.add_entity(id, "l7", 7, l5);
        if (with_l7_port) s.forest.bind_port(l7, 443);
        s.profiles[id] = default_profile(id);
        return id;
    }

    std::string new_client() { return new_host("c", false); }
    std::string new_server() { return new_host("s", true); }

    std::string new_gateway() {
        const std::string id = "g" + std::to_string(node_counter++);
        s.forest.add_node(id);
        s.topology.add_node(id);
        s.node_kinds[id] = NodeKind::Gateway;
        const EntityId l2 = s.forest.add_entity(id, "l2", 2);
        const EntityId l3 = s.forest.add_entity(id, "l3", 3, l2);
        s.forest.bind_ip(l3, take_ip());
        const EntityId l3b = s.forest.add_entity(id, "l3'", 3, l2);
        s.forest.bind_ip(l3b, take_ip());
        s.forest.add_entity(id, "l5", 5, l3);
        s.profiles[id] = default_profile(id);
        return id;
    }

    EntityId entity(const std::string& node, const std::string& name) {
        return s.forest.require(node + "." + name);
    }

    std::uint32_t ip_of(const std::string& node) {
        return *s.forest.resolve_ip(entity(node, "l3"));
    }

    Selector window_selector(const std::string& src_node, const std::string& dst_node,
                             const IntervalSet& window) {
        Selector sel;
        sel.ip_src.members = IntervalSet::single(ip_of(src_node));
        sel.ip_dst.members = IntervalSet::single(ip_of(dst_node));
        sel.p_dst.members = window;
        sel.prt.members = IntervalSet::single(6);
        return sel;
    }

    bool claim_pair(EntityId a, EntityId b) { return used_pairs.insert({a, b}).second; }

    std::string add_pi(EntityId src, EntityId dst, const std::string& tech,
                       CoefficientTriple c, Selector sel, std::vector<std::string> gateways,
                       const std::string& deployed_at) {
        PolicyImplementation pi;
        pi.id = pi_name();
        pi.source = src;
        pi.destination = dst;
        pi.technology = tech;
        pi.coefficients = std::move(c);
        pi.selector = std::move(sel);
        pi.gateways = std::move(gateways);
        pi.deployed_at = deployed_at;
        pi.priority = take_priority(deployed_at, tech);
        used_pairs.insert({src, dst});
        std::string id = pi.id;
        s.pis.push_back(std::move(pi));
        return id;
    }

    Rational rand_coeff(int lo, int hi) {
        std::uniform_int_distribution<int> dist(lo, hi);
        return Rational(dist(rng));
    }

    std::size_t entity_count() const { return s.forest.size(); }

    // -- phase 1 schemes --

    std::size_t scheme_end_to_end_cost() const { return 10; }

    void scheme_end_to_end() {
        const std::string c = new_client();
        const std::string v = new_server();
        s.topology.add_edge(c, v);
        client_pool.push_back(c);
        server_pool.push_back(v);
        emit_end_to_end_pi(c, v);
    }

    void emit_end_to_end_pi(const std::string& c, const std::string& v) {
        // Unique entity pair on the two nodes, technology chosen to fit the
        // end-point layers.
        static const std::pair<const char*, const char*> combos[] = {
            {"l5", "l5"}, {"l5", "l7"}, {"l7", "l5"}, {"l7", "l7"}};
        for (const auto& [sn, dn] : combos) {
            const EntityId src = entity(c, sn);
            const EntityId dst = entity(v, dn);
            if (used_pairs.count({src, dst})) continue;
            std::vector<std::string> techs = {"TLS", "SSH"};
            if (std::string(sn) == "l7" && std::string(dn) == "l7") techs.push_back("WS-Security");
            std::uniform_int_distribution<std::size_t> pick(0, techs.size() - 1);
            const std::string tech = techs[pick(rng)];
            CoefficientTriple coeff{rand_coeff(1, 5), rand_coeff(1, 5), rand_coeff(0, 5)};
            add_pi(src, dst, tech, coeff, window_selector(c, v, take_window()), {}, c);
            return;
        }
        // All four combos taken: add a fresh service entity under l5.
        std::size_t suffix = 1;
        while (s.forest.find(v + ".l7x" + std::to_string(suffix))) ++suffix;
        const EntityId dst = s.forest.add_entity(v, "l7x" + std::to_string(suffix), 7,
                                                 entity(v, "l5"));
        add_pi(entity(c, "l5"), dst, "TLS",
               {rand_coeff(1, 5), rand_coeff(1, 5), rand_coeff(0, 5)},
               window_selector(c, v, take_window()), {}, c);
    }

    std::size_t scheme_site_to_site_cost(std::size_t n_g) const { return 10 + 5 * n_g; }

    void scheme_site_to_site(std::size_t n_g) {
        const std::string c = new_client();
        const std::string v = new_server();
        std::vector<std::string> gws;
        for (std::size_t i = 0; i < n_g; ++i) gws.push_back(new_gateway());
        std::vector<std::string> walk = {c};
        for (const std::string& g : gws) walk.push_back(g);
        walk.push_back(v);
        for (std::size_t i = 0; i + 1 < walk.size(); ++i)
            s.topology.add_edge(walk[i], walk[i + 1]);
        s.topology.add_route(c, v, walk);

        Selector traffic;
        traffic.ip_src.members = IntervalSet::single(ip_of(c));
        traffic.ip_dst.members = IntervalSet::single(ip_of(v));

        // The encapsulated communication: NULL or a weak protected channel,
        // always strictly below every tunnel so no tunnel turns superfluous.
        std::uniform_int_distribution<int> coin(0, 1);
        if (coin(rng)) {
            add_pi(entity(c, "l3"), entity(v, "l3"), "NULL", {}, traffic, gws, c);
        } else {
            add_pi(entity(c, "l3"), entity(v, "l3"), "IPsec",
                   {Rational(1), Rational(1), Rational(1)}, traffic, gws, c);
        }
        for (std::size_t i = 0; i + 1 < gws.size(); ++i) {
            add_pi(entity(gws[i], "l3"), entity(gws[i + 1], "l3"), "IPsec",
                   {rand_coeff(2, 5), rand_coeff(2, 5), rand_coeff(2, 5)}, traffic, {}, gws[i]);
        }
        client_pool.push_back(c);
        server_pool.push_back(v);
        cluster_pool.push_back({c, v, gws});
    }

    std::size_t scheme_remote_access_cost(std::size_t n_h) const { return 10 + 5 * n_h; }

    void scheme_remote_access(std::size_t n_h) {
        const std::string c = new_client();
        const std::string v = new_server();
        std::vector<std::string> gws;
        for (std::size_t i = 0; i < n_h; ++i) gws.push_back(new_gateway());
        std::vector<std::string> walk = {c};
        for (const std::string& g : gws) walk.push_back(g);
        walk.push_back(v);
        for (std::size_t i = 0; i + 1 < walk.size(); ++i)
            s.topology.add_edge(walk[i], walk[i + 1]);
        s.topology.add_route(c, v, walk);

        Selector traffic;
        traffic.ip_src.members = IntervalSet::single(ip_of(c));
        traffic.ip_dst.members = IntervalSet::single(ip_of(v));

        add_pi(entity(c, "l3"), entity(v, "l3"), "NULL", {}, traffic, gws, c);
        // Session-layer tunnels from the client to each gateway; integrity
        // only, so overlapping client-side chains stay skew-free.
        for (std::size_t i = 0; i < gws.size(); ++i) {
            std::vector<std::string> crossed(gws.begin(),
                                             gws.begin() + static_cast<long>(i));
            add_pi(entity(c, "l5"), entity(gws[i], "l5"), "TLS",
                   {rand_coeff(3, 5), rand_coeff(3, 5), Rational(0)}, traffic, crossed, c);
        }
        client_pool.push_back(c);
        server_pool.push_back(v);
    }

    // -- phase 2 injections --

    /// Entity cost of the shared infrastructure a kind may have to build.
    std::size_t injection_reserve(AnomalyKind kind) const {
        switch (kind) {
        case AnomalyKind::Superfluous: return overlay_client.empty() ? 5 : 0;
        case AnomalyKind::SkewedChannel: return skew_trio.empty() ? 15 : 0;
        case AnomalyKind::CyclicPath: return cycle_trio.empty() ? 15 : 0;
        case AnomalyKind::Monitorability: return mon_gw.empty() ? 5 : 0;
        case AnomalyKind::AlternativePath: return alt_gw.empty() ? 5 : 0;
        case AnomalyKind::FilteredChannel: return filter_gw.empty() ? 5 : 0;
        case AnomalyKind::L2: return l2_gw.empty() ? 5 : 0;
        default: return 0;
        }
    }

    std::size_t injection_pi_count(AnomalyKind kind) const {
        switch (kind) {
        case AnomalyKind::InternalLoop:
        case AnomalyKind::OutOfPlace:
        case AnomalyKind::NonEnforceability:
        case AnomalyKind::Inadequacy:
        case AnomalyKind::FilteredChannel:
        case AnomalyKind::L2:
        case AnomalyKind::Superfluous: return kind == AnomalyKind::Superfluous ? 2 : 1;
        case AnomalyKind::CyclicPath:
        case AnomalyKind::AlternativePath: return 3;
        default: return 2;
        }
    }

    /// A (client, server) node pair for an injection; entity pairs are
    /// claimed individually, so pairs can be revisited for different shapes.
    std::pair<std::string, std::string> take_pair() {
        if (client_pool.empty() || server_pool.empty()) {
            const std::string c = new_client();
            const std::string v = new_server();
            s.topology.add_edge(c, v);
            client_pool.push_back(c);
            server_pool.push_back(v);
        }
        const std::size_t total = client_pool.size() * server_pool.size();
        const std::size_t at = pair_cursor++ % total;
        return {client_pool[at % client_pool.size()], server_pool[at / client_pool.size()]};
    }

    /// First node pair offering all the requested unclaimed entity pairs.
    struct Endpoints {
        std::string client, server;
        std::vector<std::pair<EntityId, EntityId>> pairs;
    };
    Endpoints take_endpoints(const std::vector<std::pair<const char*, const char*>>& shapes) {
        for (std::size_t attempt = 0; attempt < 4 * (client_pool.size() * server_pool.size() + 1);
             ++attempt) {
            auto [c, v] = take_pair();
            Endpoints out{c, v, {}};
            bool ok = true;
            for (const auto& [sn, dn] : shapes) {
                const EntityId a = entity(c, sn);
                const EntityId b = entity(v, dn);
                if (used_pairs.count({a, b})) {
                    ok = false;
                    break;
                }
                out.pairs.emplace_back(a, b);
            }
            if (ok) return out;
        }
        // Fall back to a fresh pair; its combos are virgin by construction.
        const std::string c = new_client();
        const std::string v = new_server();
        s.topology.add_edge(c, v);
        client_pool.push_back(c);
        server_pool.push_back(v);
        Endpoints out{c, v, {}};
        for (const auto& [sn, dn] : shapes) out.pairs.emplace_back(entity(c, sn), entity(v, dn));
        return out;
    }

    void record(AnomalyKind kind, std::vector<std::string> subjects) {
        s.manifest.push_back({std::string(to_string(kind)), std::move(subjects)});
    }

    void inject(AnomalyKind kind) {
        switch (kind) {
        case AnomalyKind::InternalLoop: {
            auto [c, v] = take_pair();
            (void)c;
            const std::string pi = add_pi(entity(v, "l5"), entity(v, "l7"), "TLS",
                                    {Rational(0), Rational(3), Rational(0)},
                                    window_selector(v, v, take_window()), {}, v);
            record(kind, {pi});
            break;
        }
        case AnomalyKind::OutOfPlace: {
            auto ep = take_endpoints({{"l5", "l5"}});
            std::string other = ep.client;
            for (const std::string& cand : client_pool) {
                if (cand != ep.client) {
                    other = cand;
                    break;
                }
            }
            if (other == ep.client) other = ep.server;
            const std::string pi = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                    {Rational(0), Rational(3), Rational(0)},
                                    window_selector(ep.client, ep.server, take_window()), {},
                                    other);
            record(kind, {pi});
            break;
        }
        case AnomalyKind::NonEnforceability: {
            auto ep = take_endpoints({{"l5", "l5"}});
            const std::string pi = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                    {Rational(6), Rational(6), Rational(6)},
                                    window_selector(ep.client, ep.server, take_window()), {},
                                    ep.client);
            record(kind, {pi});
            break;
        }
        case AnomalyKind::Inadequacy: {
            auto ep = take_endpoints({{"l5", "l5"}});
            const IntervalSet window = take_window();
            const std::string pi = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                    {Rational(1), Rational(1), Rational(1)},
                                    window_selector(ep.client, ep.server, window), {}, ep.client);
            MinCoefficientRule rule;
            rule.match.technologies = {"TLS"};
            rule.match.deployed_at = {ep.client};
            Selector match;
            match.p_dst.members = window;
            rule.match.selector = match;
            rule.minimum = {Rational(2), Rational(2), Rational(2)};
            s.thresholds.min_coefficients.push_back(std::move(rule));
            record(kind, {pi});
            break;
        }
        case AnomalyKind::Shadowing: {
            auto ep = take_endpoints({{"l5", "l5"}, {"l5", "l7"}});
            const IntervalSet window = take_window();
            Selector s1 = window_selector(ep.client, ep.server, window);
            Selector s2 = s1;
            s2.p_src.members = IntervalSet(1024, 65535);
            const std::string i1 = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                    {Rational(0), Rational(3), Rational(0)}, s1, {}, ep.client);
            const std::string i2 = add_pi(ep.pairs[1].first, ep.pairs[1].second, "TLS",
                                    {Rational(0), Rational(0), Rational(3)}, s2, {}, ep.client);
            record(kind, {i1, i2});
            break;
        }
        case AnomalyKind::Redundancy: {
            auto ep = take_endpoints({{"l5", "l5"}, {"l5", "l7"}});
            const IntervalSet window = take_window();
            Selector s1 = window_selector(ep.client, ep.server, window);
            Selector s2 = s1;
            s2.p_src.members = IntervalSet(1024, 65535);
            const std::string i1 = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                    {Rational(3), Rational(3), Rational(3)}, s1, {}, ep.client);
            const std::string i2 = add_pi(ep.pairs[1].first, ep.pairs[1].second, "TLS",
                                    {Rational(1), Rational(1), Rational(1)}, s2, {}, ep.client);
            record(kind, {i1, i2});
            break;
        }
        case AnomalyKind::Exception: {
            auto ep = take_endpoints({{"l7", "l7"}, {"l5", "l5"}});
            const IntervalSet window = take_window();
            Selector narrow = window_selector(ep.client, ep.server, window);
            narrow.p_src.members = IntervalSet(30000, 40000);
            Selector broad = window_selector(ep.client, ep.server, window);
            const std::string i1 = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                    {Rational(0), Rational(3), Rational(0)}, narrow, {},
                                    ep.client);
            const std::string i2 = add_pi(ep.pairs[1].first, ep.pairs[1].second, "TLS",
                                    {Rational(0), Rational(0), Rational(3)}, broad, {},
                                    ep.client);
            record(kind, {i1, i2});
            break;
        }
        case AnomalyKind::Correlation: {
            auto ep = take_endpoints({{"l7", "l5"}, {"l5", "l7"}});
            const IntervalSet window = take_window();
            Selector s1 = window_selector(ep.client, ep.server, window);
            s1.p_src.members = IntervalSet(1000, 3000);
            Selector s2 = window_selector(ep.client, ep.server, window);
            s2.p_src.members = IntervalSet(2000, 4000);
            const std::string i1 = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                    {Rational(0), Rational(0), Rational(3)}, s1, {}, ep.client);
            const std::string i2 = add_pi(ep.pairs[1].first, ep.pairs[1].second, "TLS",
                                    {Rational(0), Rational(3), Rational(3)}, s2, {}, ep.client);
            record(kind, {i1, i2});
            break;
        }
        case AnomalyKind::Inclusion: {
            auto ep = take_endpoints({{"l3", "l3"}, {"l5", "l5"}});
            const IntervalSet window = take_window();
            Selector outer = window_selector(ep.client, ep.server, window);
            Selector inner = outer;
            inner.p_src.members = IntervalSet(1024, 65535);
            const std::string i1 = add_pi(ep.pairs[0].first, ep.pairs[0].second, "IPsec",
                                    {Rational(3), Rational(3), Rational(3)}, outer, {},
                                    ep.client);
            const std::string i2 = add_pi(ep.pairs[1].first, ep.pairs[1].second, "TLS",
                                    {Rational(1), Rational(1), Rational(1)}, inner, {},
                                    ep.client);
            record(kind, {i1, i2});
            break;
        }
        case AnomalyKind::Affinity: {
            auto ep = take_endpoints({{"l3", "l3"}, {"l5", "l5"}});
            const Selector sel = window_selector(ep.client, ep.server, take_window());
            const std::string i1 = add_pi(ep.pairs[0].first, ep.pairs[0].second, "IPsec",
                                    {Rational(0), Rational(0), Rational(3)}, sel, {}, ep.client);
            const std::string i2 = add_pi(ep.pairs[1].first, ep.pairs[1].second, "TLS",
                                    {Rational(0), Rational(3), Rational(0)}, sel, {}, ep.client);
            record(kind, {i1, i2});
            break;
        }
        case AnomalyKind::Contradiction: {
            auto ep = take_endpoints({{"l3", "l3"}, {"l2", "l2"}});
            const IntervalSet window = take_window();
            Selector prot = window_selector(ep.client, ep.server, window);
            prot.p_src.members = IntervalSet(1024, 65535);
            Selector plain = window_selector(ep.client, ep.server, window);
            plain.p_src.members = IntervalSet(1, 2000);
            const std::string i1 = add_pi(ep.pairs[0].first, ep.pairs[0].second, "IPsec",
                                    {Rational(3), Rational(3), Rational(3)}, prot, {},
                                    ep.client);
            const std::string i2 = add_pi(s.forest.root_of(ep.client).value(),
                                    s.forest.root_of(ep.server).value(), "NULL", {}, plain, {},
                                    ep.client);
            record(kind, {i1, i2});
            break;
        }
        case AnomalyKind::Superfluous: {
            if (cluster_pool.empty()) scheme_site_to_site(2);
            if (overlay_client.empty()) {
                overlay_client = new_client();
                client_pool.push_back(overlay_client);
            }
            std::uniform_int_distribution<std::size_t> pick(0, cluster_pool.size() - 1);
            const Cluster& cluster = cluster_pool[pick(rng)];
            s.topology.add_edge(overlay_client, cluster.gateways.front());
            const IntervalSet window = take_window();
            Selector inner_sel = window_selector(overlay_client, cluster.server, window);
            const auto& inner =
                add_pi(entity(overlay_client, "l3"), entity(cluster.server, "l3"), "IPsec",
                       {Rational(3), Rational(3), Rational(3)}, inner_sel, cluster.gateways,
                       overlay_client);
            Selector outer_sel = inner_sel; // same scope, weaker protection
            const auto& outer =
                add_pi(entity(cluster.gateways[0], "l3'"), entity(cluster.gateways[1], "l3"),
                       "IPsec", {Rational(1), Rational(1), Rational(1)}, outer_sel, {},
                       cluster.gateways[0]);
            (void)inner;
            record(kind, {outer});
            break;
        }
        case AnomalyKind::SkewedChannel: {
            if (skew_trio.empty()) {
                skew_trio = {new_gateway(), new_gateway(), new_gateway()};
                s.topology.add_edge(skew_trio[0], skew_trio[1]);
                s.topology.add_edge(skew_trio[1], skew_trio[2]);
                s.topology.add_route(skew_trio[0], skew_trio[2], skew_trio);
            }
            const IntervalSet window = take_window();
            Selector sel;
            sel.ip_src.members = IntervalSet::single(ip_of(skew_trio[0]));
            sel.p_dst.members = window;
            sel.prt.members = IntervalSet::single(6);
            const std::string shorter = add_pi(entity(skew_trio[0], "l3"), entity(skew_trio[1], "l3"),
                                         "IPsec", {Rational(1), Rational(1), Rational(3)}, sel,
                                         {}, skew_trio[0]);
            const std::string longer = add_pi(entity(skew_trio[0], "l3"), entity(skew_trio[2], "l3"),
                                        "IPsec", {Rational(0), Rational(0), Rational(3)}, sel,
                                        {skew_trio[1]}, skew_trio[0]);
            record(kind, {shorter, longer});
            break;
        }
        case AnomalyKind::FilteredChannel: {
            if (filter_gw.empty()) filter_gw = new_gateway();
            auto ep = take_endpoints({{"l3", "l3"}});
            s.topology.add_edge(ep.client, filter_gw);
            s.topology.add_edge(filter_gw, ep.server);
            s.topology.add_route(ep.client, ep.server, {ep.client, filter_gw, ep.server});
            const Selector sel = window_selector(ep.client, ep.server, take_window());
            const std::string pi = add_pi(ep.pairs[0].first, ep.pairs[0].second, "IPsec",
                                    {Rational(2), Rational(2), Rational(2)}, sel, {filter_gw},
                                    ep.client);
            s.profiles[filter_gw].firewall_rules.push_back({sel, FilterAction::Deny});
            record(kind, {pi});
            break;
        }
        case AnomalyKind::L2: {
            if (l2_gw.empty()) {
                l2_gw = new_gateway();
                s.profiles[l2_gw].layer2_technologies = {"MACsec"};
            }
            auto ep = take_endpoints({{"l2", "l2"}});
            s.topology.add_edge(ep.client, l2_gw);
            s.topology.add_edge(l2_gw, ep.server);
            const std::string pi = add_pi(ep.pairs[0].first, ep.pairs[0].second, "WPA2",
                                    {Rational(2), Rational(2), Rational(0)},
                                    window_selector(ep.client, ep.server, take_window()),
                                    {l2_gw}, ep.client);
            record(kind, {pi});
            break;
        }
        case AnomalyKind::AsymmetricChannel: {
            auto ep = take_endpoints({{"l5", "l5"}});
            const IntervalSet window = take_window();
            Selector fwd_sel = window_selector(ep.client, ep.server, window);
            const std::string fwd = add_pi(ep.pairs[0].first, ep.pairs[0].second, "TLS",
                                     {Rational(3), Rational(3), Rational(3)}, fwd_sel, {},
                                     ep.client);
            add_pi(ep.pairs[0].second, ep.pairs[0].first, "TLS",
                   {Rational(1), Rational(1), Rational(1)}, reverse_selector(fwd_sel), {},
                   ep.server);
            record(kind, {fwd});
            break;
        }
        case AnomalyKind::CyclicPath: {
            if (cycle_trio.empty()) {
                cycle_trio = {new_gateway(), new_gateway(), new_gateway()};
                s.topology.add_edge(cycle_trio[0], cycle_trio[1]);
                s.topology.add_edge(cycle_trio[1], cycle_trio[2]);
                s.topology.add_edge(cycle_trio[2], cycle_trio[0]);
            }
            Selector sel;
            sel.p_dst.members = take_window();
            sel.prt.members = IntervalSet::single(6);
            std::vector<std::string> ids;
            for (std::size_t i = 0; i < 3; ++i) {
                const std::string pi = add_pi(
                    entity(cycle_trio[i], "l3"), entity(cycle_trio[(i + 1) % 3], "l3"), "IPsec",
                    {Rational(2), Rational(2), Rational(0)}, sel, {}, cycle_trio[i]);
                ids.push_back(pi);
            }
            record(kind, ids);
            break;
        }
        case AnomalyKind::Monitorability: {
            if (mon_gw.empty()) mon_gw = new_gateway();
            auto ep = take_endpoints({{"l3", "l3"}});
            s.topology.add_edge(ep.client, mon_gw);
            s.topology.add_edge(mon_gw, ep.server);
            const Selector sel = window_selector(ep.client, ep.server, take_window());
            const std::string hop1 = add_pi(ep.pairs[0].first, entity(mon_gw, "l3"), "IPsec",
                                      {Rational(3), Rational(3), Rational(3)}, sel, {},
                                      ep.client);
            const std::string hop2 = add_pi(entity(mon_gw, "l3'"), ep.pairs[0].second, "IPsec",
                                      {Rational(3), Rational(3), Rational(3)}, sel, {}, mon_gw);
            record(kind, {hop1, hop2});
            break;
        }
        case AnomalyKind::AlternativePath: {
            if (alt_gw.empty()) alt_gw = new_gateway();
            auto ep = take_endpoints({{"l3", "l3"}});
            s.topology.add_edge(ep.client, ep.server);
            s.topology.add_edge(ep.client, alt_gw);
            s.topology.add_edge(alt_gw, ep.server);
            const Selector sel = window_selector(ep.client, ep.server, take_window());
            const std::string direct = add_pi(ep.pairs[0].first, ep.pairs[0].second, "IPsec",
                                        {Rational(0), Rational(0), Rational(3)}, sel, {},
                                        ep.client);
            const std::string leg1 = add_pi(ep.pairs[0].first, entity(alt_gw, "l3"), "IPsec",
                                      {Rational(0), Rational(0), Rational(3)}, sel, {},
                                      ep.client);
            const std::string leg2 = add_pi(entity(alt_gw, "l3'"), ep.pairs[0].second, "IPsec",
                                      {Rational(0), Rational(0), Rational(3)}, sel, {}, alt_gw);
            record(kind, {direct, leg1, leg2});
            break;
        }
        }
    }

    // -- phase 3 --

    void pad_entities() {
        if (entity_count() > params.n_entities)
            throw std::invalid_argument(
                "n_entities too small: the requested PIs already need " +
                std::to_string(entity_count()) + " entities");
        std::string previous;
        while (entity_count() < params.n_entities) {
            const std::size_t missing = params.n_entities - entity_count();
            const std::string id = "f" + std::to_string(node_counter++);
            s.forest.add_node(id);
            s.topology.add_node(id);
            s.node_kinds[id] = NodeKind::Host;
            if (missing >= 3) {
                const EntityId l2 = s.forest.add_entity(id, "l2", 2);
                const EntityId l3 = s.forest.add_entity(id, "l3", 3, l2);
                s.forest.bind_ip(l3, take_ip());
            } else if (missing == 2) {
                s.forest.add_entity(id, "l2", 2);
            }
            // Bare minimum connectivity: chain the filler nodes onto the
            // first real node (or each other).
            const std::string anchor =
                !previous.empty() ? previous
                : !client_pool.empty() ? client_pool.front()
                                       : (s.forest.node_ids().front() == id
                                              ? ""
                                              : s.forest.node_ids().front());
            if (!anchor.empty() && anchor != id) s.topology.add_edge(anchor, id);
            previous = id;
        }
    }

    Scenario build() {
        // Plan phase 2 first so phase 1 can leave room for it.
        std::vector<AnomalyKind> plan;
        std::size_t planned_pis = 0;
        std::uniform_int_distribution<std::size_t> kind_dist(0, kAnomalyKindCount - 1);
        while (planned_pis < params.n_conflict) {
            const auto kind = static_cast<AnomalyKind>(kind_dist(rng));
            const std::size_t count = injection_pi_count(kind);
            if (planned_pis + count > params.n_conflict) {
                // Close the gap with single-PI kinds.
                const AnomalyKind filler = AnomalyKind::InternalLoop;
                plan.push_back(filler);
                planned_pis += 1;
                continue;
            }
            plan.push_back(kind);
            planned_pis += count;
        }
        std::size_t reserve = 40; // head-room for injection fallbacks
        {
            // Count the shared infrastructure the plan will lazily build.
            std::set<AnomalyKind> planned_kinds(plan.begin(), plan.end());
            for (AnomalyKind k : planned_kinds) reserve += injection_reserve(k);
            if (planned_kinds.count(AnomalyKind::Superfluous) && params.n_pi == 0)
                reserve += 22; // it will have to grow its own site-to-site cluster
        }

        // Phase 1: schemes while the entity budget allows fresh nodes, then
        // reuse of pooled end-points at (almost) zero entity cost.
        std::size_t made = 0;
        std::discrete_distribution<int> scheme_dist(
            {params.w_end_to_end, params.w_site_to_site, params.w_remote_access});
        std::uniform_int_distribution<std::size_t> gw_count(2, 3);
        std::uniform_int_distribution<std::size_t> hop_count(1, 2);
        bool seeded_cluster = false;
        while (made < params.n_pi) {
            const std::size_t before = s.pis.size();
            const std::size_t budget =
                params.n_entities > entity_count() + reserve
                    ? params.n_entities - entity_count() - reserve
                    : 0;
            int scheme = scheme_dist(rng);
            if (!seeded_cluster && params.n_conflict > 0 && params.n_pi - made >= 2 &&
                budget >= scheme_site_to_site_cost(2)) {
                scheme = 1; // make sure a gateway cluster exists for injections
                seeded_cluster = true;
            }
            const std::size_t remaining = params.n_pi - made;
            if (scheme == 1 && remaining >= 2 && budget >= scheme_site_to_site_cost(2)) {
                std::size_t n_g = std::min(gw_count(rng), remaining);
                n_g = std::max<std::size_t>(2, std::min(n_g, remaining));
                while (n_g > 2 && (n_g > remaining || scheme_site_to_site_cost(n_g) > budget))
                    --n_g;
                scheme_site_to_site(n_g);
            } else if (scheme == 2 && remaining >= 2 &&
                       budget >= scheme_remote_access_cost(1)) {
                std::size_t n_h = std::min(hop_count(rng), remaining - 1);
                n_h = std::max<std::size_t>(1, n_h);
                while (n_h > 1 && scheme_remote_access_cost(n_h) > budget) --n_h;
                scheme_remote_access(n_h);
            } else if (budget >= scheme_end_to_end_cost()) {
                scheme_end_to_end();
            } else {
                // Budget exhausted: reuse pooled end-points.
                if (client_pool.empty() || server_pool.empty()) {
                    scheme_end_to_end(); // will blow the budget check later if truly infeasible
                } else {
                    const std::size_t total = client_pool.size() * server_pool.size();
                    const std::size_t at = pair_cursor++ % total;
                    emit_end_to_end_pi(client_pool[at % client_pool.size()],
                                       server_pool[at / client_pool.size()]);
                }
            }
            const std::size_t created = s.pis.size() - before;
            made += created;
            if (made > params.n_pi) {
                // Trim overshoot (possible when a scheme emitted more than
                // the remaining quota).
                while (made > params.n_pi) {
                    s.pis.pop_back();
                    --made;
                }
            }
        }

        // Phase 2.
        for (AnomalyKind kind : plan) inject(kind);

        // Phase 3.
        pad_entities();
        return std::move(s);
    }
};

} // namespace

Scenario generate_scenario(const GenerationParams& params) {
    const double total = params.w_end_to_end + params.w_site_to_site + params.w_remote_access;
    if (total <= 0.0) throw std::invalid_argument("scheme weights must not all be zero");
    Builder builder(params);
    return builder.build();
}

} // namespace cppa
