#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "engine/paths.hpp"
#include "support/builders.hpp"
#include "support/mini_domain.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <set>

using namespace cppa;
using namespace cppa::testing;

namespace {

/// Scenario whose PIs mirror a digraph: one wildcard PI per edge, so path
/// chaining is purely structural.
Scenario digraph_scenario(std::size_t n, const std::set<std::pair<int, int>>& edges) {
    Scenario s;
    for (std::size_t i = 0; i < n; ++i)
        add_gateway(s, "n" + std::to_string(i), ipv4_to_string(0x0A000001u + (std::uint32_t)i));
    int k = 0;
    for (const auto& [a, b] : edges) {
        add_pi(s, "e" + std::to_string(k++), "n" + std::to_string(a) + ".l3",
               "n" + std::to_string(b) + ".l3", "IPsec", coeff(1, 1, 1), Selector::wildcard());
        if (!s.topology.has_edge("n" + std::to_string(a), "n" + std::to_string(b)))
            s.topology.add_edge("n" + std::to_string(a), "n" + std::to_string(b));
    }
    return s;
}

/// Independent oracle: vertex-simple paths between two vertices by DFS over
/// the adjacency relation alone.
void oracle_paths(int from, int to, const std::vector<std::vector<int>>& adj,
                  std::vector<int>& stack, std::vector<bool>& visited,
                  std::vector<std::vector<int>>& out) {
    if (from == to && !stack.empty()) {
        out.push_back(stack);
        return;
    }
    for (int next : adj[static_cast<std::size_t>(from)]) {
        if (visited[static_cast<std::size_t>(next)]) continue;
        visited[static_cast<std::size_t>(next)] = true;
        stack.push_back(next);
        oracle_paths(next, to, adj, stack, visited, out);
        stack.pop_back();
        visited[static_cast<std::size_t>(next)] = false;
    }
}

bool oracle_has_cycle(std::size_t n, const std::set<std::pair<int, int>>& edges) {
    // DFS back-edge detection, written independently of detect_cycles.
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) adj[static_cast<std::size_t>(a)].push_back(b);
    std::vector<int> state(n, 0);
    std::function<bool(int)> visit = [&](int v) {
        state[static_cast<std::size_t>(v)] = 1;
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (state[static_cast<std::size_t>(w)] == 1) return true;
            if (state[static_cast<std::size_t>(w)] == 0 && visit(w)) return true;
        }
        state[static_cast<std::size_t>(v)] = 2;
        return false;
    };
    for (std::size_t v = 0; v < n; ++v)
        if (state[v] == 0 && visit(static_cast<int>(v))) return true;
    return false;
}

} // namespace

TEST_CASE("crossed gateways strip the end nodes from the routing walk") {
    Scenario s;
    add_host(s, "c_a1", "10.1.0.1");
    add_gateway(s, "g_a1", "10.1.0.254");
    add_gateway(s, "g_c1", "10.3.0.1");
    add_gateway(s, "g_c2", "10.3.0.2");
    add_host(s, "s_c1", "10.3.1.1");
    s.topology.add_edge("c_a1", "g_a1");
    s.topology.add_edge("g_a1", "g_c1");
    s.topology.add_edge("g_c1", "g_c2");
    s.topology.add_edge("g_c2", "s_c1");
    s.topology.add_route("c_a1", "s_c1", {"c_a1", "g_a1", "g_c1", "g_c2", "s_c1"});
    s.topology.add_route("c_a1", "g_a1", {"c_a1", "g_a1"});

    const CrossedGateways crossed = crossed_gateways("c_a1", "s_c1", s.topology);
    CHECK(crossed.routable);
    CHECK(crossed.gateways == std::vector<std::string>{"g_a1", "g_c1", "g_c2"});

    const CrossedGateways adjacent = crossed_gateways("c_a1", "g_a1", s.topology);
    CHECK(adjacent.routable);
    CHECK(adjacent.gateways.empty());

    const CrossedGateways missing = crossed_gateways("s_c1", "c_a1", s.topology);
    CHECK_FALSE(missing.routable); // unroutable is reported, not silently empty

    // Every returned hop lies on a connected walk.
    const auto* walk = s.topology.route("c_a1", "s_c1");
    for (std::size_t i = 0; i + 1 < walk->size(); ++i)
        CHECK(s.topology.has_edge((*walk)[i], (*walk)[i + 1]));
}

TEST_CASE("the tunnel chain example enumerates as one three-hop path") {
    // c_c2 -> g_c3 (plain), g_c3 -> g_c2 (tunnel), g_c2 -> s_c2 (plain).
    Scenario s;
    add_host(s, "c_c2", "10.3.2.2");
    add_gateway(s, "g_c3", "10.3.0.3");
    add_gateway(s, "g_c2", "10.3.0.2");
    add_host(s, "s_c2", "10.3.1.2");
    s.topology.add_edge("c_c2", "g_c3");
    s.topology.add_edge("g_c3", "g_c2");
    s.topology.add_edge("g_c2", "s_c2");

    add_pi(s, "i1", "c_c2", "g_c3", "NULL", coeff(0, 0, 0), Selector::wildcard());
    add_pi(s, "i2", "g_c3.l3", "g_c2.l3", "IPsec", coeff(3, 3, 3),
           sel("10.3.2.0/24", "*", "10.3.1.0/24", "*", "*"));
    add_pi(s, "i3", "g_c2", "s_c2", "NULL", coeff(0, 0, 0), Selector::wildcard());

    const auto result = enumerate_simple_paths(s, s.forest.require("c_c2"),
                                               s.forest.require("s_c2"));
    REQUIRE(result.paths.size() == 1);
    CHECK(result.paths[0].pi_ids(s) == std::vector<std::string>{"i1", "i2", "i3"});
    CHECK_FALSE(result.truncated);
}

TEST_CASE("no self-path without an internal-loop PI") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    add_host(s, "b", "10.0.0.2");
    add_pi(s, "p", "a.l5", "b.l5", "TLS", coeff(1, 1, 1), Selector::wildcard());
    const EntityId e = s.forest.require("a.l5");
    CHECK(enumerate_simple_paths(s, e, e).paths.empty());
}

TEST_CASE("selector-incompatible PIs do not chain") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    add_gateway(s, "m", "10.0.0.254");
    add_host(s, "b", "10.0.0.2");
    add_pi(s, "h1", "a.l3", "m.l3", "IPsec", coeff(1, 1, 1),
           sel("10.0.0.1", "*", "10.0.0.2", "80", "TCP"));
    add_pi(s, "h2", "m.l3", "b.l3", "IPsec", coeff(1, 1, 1),
           sel("10.0.0.1", "*", "10.0.0.2", "443", "TCP"));
    CHECK(enumerate_simple_paths(s, s.forest.require("a.l3"), s.forest.require("b.l3"))
              .paths.empty());
}

TEST_CASE("path count matches the DFS oracle on random digraphs") {
    std::mt19937_64 rng(123);
    for (int round = 0; round < 120; ++round) {
        std::uniform_int_distribution<std::size_t> node_count(2, 7);
        const std::size_t n = node_count(rng);
        std::uniform_int_distribution<int> coin(0, 3);
        std::set<std::pair<int, int>> edges;
        for (int a = 0; a < static_cast<int>(n); ++a)
            for (int b = 0; b < static_cast<int>(n); ++b)
                if (a != b && coin(rng) == 0) edges.insert({a, b});

        const Scenario s = digraph_scenario(n, edges);
        std::vector<std::vector<int>> adj(n);
        for (const auto& [a, b] : edges) adj[static_cast<std::size_t>(a)].push_back(b);

        std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
        const int from = pick(rng);
        const int to = pick(rng);
        if (from == to) continue;

        std::vector<std::vector<int>> expected;
        std::vector<int> stack;
        std::vector<bool> visited(n, false);
        visited[static_cast<std::size_t>(from)] = true;
        oracle_paths(from, to, adj, stack, visited, expected);

        const auto got = enumerate_simple_paths(
            s, s.forest.require("n" + std::to_string(from) + ".l3"),
            s.forest.require("n" + std::to_string(to) + ".l3"), 100000);
        CAPTURE(round);
        CHECK(got.paths.size() == expected.size());
    }
}

TEST_CASE("enumeration order is deterministic and lexicographic by PI ids") {
    Scenario s = digraph_scenario(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}, {0, 3}});
    const auto a = enumerate_all_paths(s);
    const auto b = enumerate_all_paths(s);
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t i = 0; i < a.paths.size(); ++i)
        CHECK(a.paths[i].pi_ids(s) == b.paths[i].pi_ids(s));
    for (std::size_t i = 0; i + 1 < a.paths.size(); ++i)
        CHECK(a.paths[i].pi_ids(s) <= a.paths[i + 1].pi_ids(s));
}

TEST_CASE("path cap truncates with a flag") {
    // Dense 6-vertex digraph: lots of simple paths.
    std::set<std::pair<int, int>> edges;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            if (a != b) edges.insert({a, b});
    const Scenario s = digraph_scenario(6, edges);
    const auto capped = enumerate_all_paths(s, 10);
    CHECK(capped.paths.size() == 10);
    CHECK(capped.truncated);
}

TEST_CASE("constructed three-cycle is detected once, DAGs are clean") {
    ConnectionGraph g;
    const auto a = g.add_vertex("g_c1");
    const auto b = g.add_vertex("g_c2");
    const auto c = g.add_vertex("g_c3");
    g.add_edge(a, b);
    g.add_edge(b, c);
    g.add_edge(c, a);
    const auto cycles = detect_cycles(g);
    REQUIRE(cycles.size() == 1);
    CHECK(std::set<std::uint32_t>(cycles[0].begin(), cycles[0].end()) ==
          std::set<std::uint32_t>{a, b, c});

    ConnectionGraph dag;
    const auto x = dag.add_vertex("x");
    const auto y = dag.add_vertex("y");
    const auto z = dag.add_vertex("z");
    dag.add_edge(x, y);
    dag.add_edge(y, z);
    dag.add_edge(x, z);
    CHECK(detect_cycles(dag).empty());
}

TEST_CASE("cycle detection stays near-linear on acyclic graphs") {
    // A layered DAG with heavy branching has exponentially many simple
    // paths; only a linear-time scan finishes these sizes instantly.
    auto layered_dag = [](std::size_t layers, std::size_t width) {
        ConnectionGraph g;
        for (std::size_t l = 0; l < layers; ++l)
            for (std::size_t w = 0; w < width; ++w)
                g.add_vertex("v" + std::to_string(l) + "_" + std::to_string(w));
        for (std::size_t l = 0; l + 1 < layers; ++l)
            for (std::size_t a = 0; a < width; ++a)
                for (std::size_t b = 0; b < width; ++b)
                    g.add_edge(static_cast<std::uint32_t>(l * width + a),
                               static_cast<std::uint32_t>((l + 1) * width + b));
        return g;
    };
    auto timed = [](const ConnectionGraph& g) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto cycles = detect_cycles(g);
        const auto t1 = std::chrono::steady_clock::now();
        CHECK(cycles.empty());
        return std::chrono::duration<double, std::milli>(t1 - t0).count();
    };
    const double small = timed(layered_dag(100, 8));  // ~6.3k edges
    const double large = timed(layered_dag(400, 8));  // ~25.5k edges
    CHECK(large < 1000.0); // exponential behaviour would hang here
    // Four times the edges should cost far less than quadratically more.
    CHECK(large <= 50.0 * std::max(small, 0.01));
}

TEST_CASE("self loops are single-vertex cycles, reported once") {
    ConnectionGraph g;
    const auto a = g.add_vertex("a");
    const auto b = g.add_vertex("b");
    g.add_edge(a, a);
    g.add_edge(a, b);
    g.add_edge(b, a);
    const auto cycles = detect_cycles(g);
    std::size_t self_loops = 0, pairs = 0;
    for (const auto& c : cycles) {
        if (c == std::vector<std::uint32_t>{a}) ++self_loops;
        if (c.size() == 2) ++pairs;
    }
    CHECK(cycles.size() == 2);
    CHECK(self_loops == 1);
    CHECK(pairs == 1);
}

TEST_CASE("acyclicity verdict matches the DFS back-edge oracle") {
    std::mt19937_64 rng(321);
    for (int round = 0; round < 300; ++round) {
        std::uniform_int_distribution<std::size_t> node_count(2, 8);
        const std::size_t n = node_count(rng);
        std::uniform_int_distribution<int> coin(0, 4);
        std::set<std::pair<int, int>> edges;
        for (int a = 0; a < static_cast<int>(n); ++a)
            for (int b = 0; b < static_cast<int>(n); ++b)
                if (a != b && coin(rng) == 0) edges.insert({a, b});

        ConnectionGraph g;
        for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
        for (const auto& [a, b] : edges)
            g.add_edge(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));

        CAPTURE(round);
        CHECK(detect_cycles(g, 100000).empty() == !oracle_has_cycle(n, edges));
    }
}

TEST_CASE("is_filtered demands a full drop") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    add_gateway(s, "w", "10.0.0.254");
    add_host(s, "b", "10.0.0.2");
    const auto& pi = add_pi(s, "p", "a.l3", "b.l3", "IPsec", coeff(1, 1, 1),
                            sel("10.0.0.1", "*", "10.0.0.2", "1-100", "TCP"), {"w"});

    SUBCASE("no rules: default allow") { CHECK_FALSE(is_filtered(s, "w", pi)); }
    SUBCASE("universal deny drops everything") {
        s.profiles["w"].firewall_rules = {{Selector::wildcard(), FilterAction::Deny}};
        CHECK(is_filtered(s, "w", pi));
    }
    SUBCASE("partial drops do not count") {
        s.profiles["w"].firewall_rules = {
            {sel("*", "*", "*", "1-50", "*"), FilterAction::Deny}};
        CHECK_FALSE(is_filtered(s, "w", pi));
    }
    SUBCASE("an earlier allow wins over a later deny") {
        s.profiles["w"].firewall_rules = {
            {sel("*", "*", "*", "40-60", "*"), FilterAction::Allow},
            {Selector::wildcard(), FilterAction::Deny}};
        CHECK_FALSE(is_filtered(s, "w", pi));
    }
    SUBCASE("two denies can cover the set together") {
        s.profiles["w"].firewall_rules = {
            {sel("*", "*", "*", "1-50", "*"), FilterAction::Deny},
            {sel("*", "*", "*", "51-100", "*"), FilterAction::Deny}};
        CHECK(is_filtered(s, "w", pi));
    }
    SUBCASE("unknown node throws") { CHECK_THROWS(is_filtered(s, "zz", pi)); }
}

TEST_CASE("rule order matters") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    add_gateway(s, "w", "10.0.0.254");
    add_host(s, "b", "10.0.0.2");
    const auto& pi = add_pi(s, "p", "a.l3", "b.l3", "IPsec", coeff(1, 1, 1),
                            sel("10.0.0.1", "*", "10.0.0.2", "80", "TCP"), {"w"});
    const FirewallRule allow{Selector::wildcard(), FilterAction::Allow};
    const FirewallRule deny{Selector::wildcard(), FilterAction::Deny};
    s.profiles["w"].firewall_rules = {allow, deny};
    CHECK_FALSE(is_filtered(s, "w", pi));
    s.profiles["w"].firewall_rules = {deny, allow};
    CHECK(is_filtered(s, "w", pi));
}

TEST_CASE("is_filtered agrees with the packet-enumeration oracle") {
    const MiniDomain domain;
    std::mt19937_64 rng(777);
    Scenario s;
    add_host(s, "a", "0.0.0.1");
    add_gateway(s, "w", "0.0.0.14");
    add_host(s, "b", "0.0.0.2");

    for (int round = 0; round < 300; ++round) {
        PolicyImplementation pi;
        pi.id = "p";
        pi.source = s.forest.require("a.l3");
        pi.destination = s.forest.require("b.l3");
        pi.technology = "IPsec";
        pi.selector = random_selector(rng, domain);
        pi.gateways = {"w"};
        pi.deployed_at = "a";

        std::uniform_int_distribution<int> rule_count(0, 3);
        std::uniform_int_distribution<int> action(0, 1);
        auto& rules = s.profiles["w"].firewall_rules;
        rules.clear();
        const int n = rule_count(rng);
        for (int i = 0; i < n; ++i)
            rules.push_back({random_selector(rng, domain),
                             action(rng) ? FilterAction::Deny : FilterAction::Allow});

        // Oracle: walk every packet of the selector through the rule list.
        bool any_packet = false;
        bool all_denied = true;
        for (std::uint64_t a = 0; a < domain.ips && all_denied; ++a)
            for (std::uint64_t ap = 0; ap < domain.ports && all_denied; ++ap)
                for (std::uint64_t b = 0; b < domain.ips && all_denied; ++b)
                    for (std::uint64_t bp = 0; bp < domain.ports && all_denied; ++bp)
                        for (std::uint64_t pr = 0; pr < domain.protos; ++pr) {
                            const Packet packet{a, ap, b, bp, pr};
                            if (!selector_matches(pi.selector, packet)) continue;
                            any_packet = true;
                            bool denied = false; // default allow
                            for (const FirewallRule& rule : rules) {
                                if (selector_matches(rule.selector, packet)) {
                                    denied = rule.action == FilterAction::Deny;
                                    break;
                                }
                            }
                            if (!denied) {
                                all_denied = false;
                                break;
                            }
                        }
        const bool expected = any_packet && all_denied;
        CAPTURE(round);
        CHECK(is_filtered(s, "w", pi) == expected);
    }
}
