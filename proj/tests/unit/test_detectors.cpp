#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "engine/anomaly.hpp"
#include "support/builders.hpp"
#include "support/oracle.hpp"

#include <random>

using namespace cppa;
using namespace cppa::testing;

namespace {

std::vector<OracleFinding> engine_findings(const Scenario& s) {
    static const std::set<std::string> node_level_kinds = {
        "INTERNAL_LOOP", "OUT_OF_PLACE", "NON_ENFORCEABILITY", "INADEQUACY",
        "SHADOWING",     "REDUNDANCY",   "EXCEPTION",          "CORRELATION",
        "INCLUSION",     "AFFINITY",     "CONTRADICTION"};
    std::vector<OracleFinding> out;
    for (const Anomaly& a : run_analysis(s).anomalies) {
        const std::string kind(to_string(a.kind));
        if (node_level_kinds.count(kind)) out.push_back({kind, a.subject_pis});
    }
    std::sort(out.begin(), out.end());
    return out;
}

Scenario two_hosts() {
    Scenario s;
    add_host(s, "c_a1", "10.1.0.1");
    add_host(s, "s_c1", "10.3.1.1");
    s.topology.add_edge("c_a1", "s_c1");
    return s;
}

} // namespace

TEST_CASE("internal loop fires on same-tree end-points") {
    Scenario s = two_hosts();
    s.forest.add_entity("s_c1", "l7'", 7, s.forest.require("s_c1.l5"));
    add_pi(s, "loop", "s_c1.l5", "s_c1.l7'", "TLS", coeff(0, 1, 0), Selector::wildcard());
    add_pi(s, "ok", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 1, 0), Selector::wildcard());
    CHECK(detect_internal_loop(s, s.pis[0]).has_value());
    CHECK_FALSE(detect_internal_loop(s, s.pis[1]).has_value());
}

TEST_CASE("out of place fires when deployed off the source node") {
    Scenario s = two_hosts();
    add_host(s, "g_b1", "10.2.0.254");
    add_pi(s, "misplaced", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 1, 0), Selector::wildcard(),
           {}, "g_b1");
    add_pi(s, "ok", "c_a1.l5", "s_c1.l7", "TLS", coeff(0, 1, 0), Selector::wildcard(), {},
           "c_a1");
    CHECK(detect_out_of_place(s, s.pis[0]).has_value());
    CHECK_FALSE(detect_out_of_place(s, s.pis[1]).has_value());
}

TEST_CASE("non-enforceability: missing technology or excessive coefficients") {
    Scenario s = two_hosts();
    add_host(s, "s_c2", "10.3.1.2");
    s.profiles["s_c2"].supported_technologies.erase("TLS");
    s.profiles["s_c2"].max_coefficients.erase("TLS");

    // web_2 -> db with TLS while the hosting node lacks a TLS stack.
    add_pi(s, "ne", "s_c2.l7", "s_c1.l7", "TLS", coeff(0, 0, 3), Selector::wildcard());
    const auto found = detect_non_enforceability(s, s.pis[0]);
    REQUIRE(found.has_value());
    CHECK(found->kind == AnomalyKind::NonEnforceability);

    // Exactly at the ceiling is enforceable; the clause needs strict excess.
    add_pi(s, "at_max", "c_a1.l5", "s_c1.l5", "TLS", coeff(5, 5, 5), Selector::wildcard());
    CHECK_FALSE(detect_non_enforceability(s, s.pis[1]).has_value());
    add_pi(s, "above", "c_a1.l5", "s_c1.l7", "TLS", coeff(6, 6, 6), Selector::wildcard());
    CHECK(detect_non_enforceability(s, s.pis[2]).has_value());
}

TEST_CASE("inadequacy uses strict dominance of the minimum") {
    Scenario s = two_hosts();
    MinCoefficientRule rule;
    rule.match.technologies = {"TLS"};
    rule.minimum = coeff(1, 4, 1);
    s.thresholds.min_coefficients.push_back(rule);

    add_pi(s, "weak", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 3, 0), Selector::wildcard());
    CHECK(detect_inadequacy(s, s.pis[0]).has_value());

    // Incomparable with the minimum: no anomaly, but an informational note.
    s.thresholds.min_coefficients[0].minimum = coeff(1, 1, 1);
    std::string note;
    CHECK_FALSE(detect_inadequacy(s, s.pis[0], &note).has_value());
    CHECK_FALSE(note.empty());

    // Zero threshold never fires.
    s.thresholds.min_coefficients.clear();
    CHECK_FALSE(detect_inadequacy(s, s.pis[0]).has_value());
}

TEST_CASE("shadowing: higher priority, broader match, incomparable protection") {
    Scenario s = two_hosts();
    const Selector broad = sel("10.1.0.1", "*", "10.3.1.1", "443", "TCP");
    Selector narrow = broad;
    narrow.p_src.members = IntervalSet(10000, 20000);
    add_pi(s, "sh1", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 3, 0), broad, {}, "", 0);
    add_pi(s, "sh2", "c_a1.l5", "s_c1.l7", "TLS", coeff(0, 0, 3), narrow, {}, "", 1);

    CHECK(detect_shadowing(s, s.pis[0], s.pis[1]).has_value());
    // Swapped priorities: shadowing is gone (the reversed containment would
    // be exception territory, but here the broader PI is the lower one).
    CHECK_FALSE(detect_shadowing(s, s.pis[1], s.pis[0]).has_value());
    CHECK_FALSE(detect_correlation(s, s.pis[0], s.pis[1]).has_value());
    CHECK_FALSE(detect_redundancy(s, s.pis[0], s.pis[1]).has_value());
}

TEST_CASE("redundancy needs dominating-or-equal coefficients and priority") {
    Scenario s = two_hosts();
    add_pi(s, "r1", "c_a1.l5", "s_c1.l5", "TLS", coeff(3, 3, 3), Selector::wildcard(), {}, "",
           0);
    add_pi(s, "r2", "c_a1.l5", "s_c1.l7", "TLS", coeff(1, 1, 1), Selector::wildcard(), {}, "",
           1);
    CHECK(detect_redundancy(s, s.pis[0], s.pis[1]).has_value());
    CHECK_FALSE(detect_redundancy(s, s.pis[1], s.pis[0]).has_value());

    // Identical PIs under different ids: the higher-priority one wins.
    Scenario t = two_hosts();
    add_pi(t, "a", "c_a1.l5", "s_c1.l5", "TLS", coeff(2, 2, 2), Selector::wildcard(), {}, "", 0);
    add_pi(t, "b", "c_a1.l5", "s_c1.l5", "TLS", coeff(2, 2, 2), Selector::wildcard(), {}, "", 1);
    CHECK(detect_redundancy(t, t.pis[0], t.pis[1]).has_value());
    CHECK_FALSE(detect_redundancy(t, t.pis[1], t.pis[0]).has_value());

    // Disjoint coefficients are shadowing territory, not redundancy.
    Scenario u = two_hosts();
    add_pi(u, "a", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 3, 0), Selector::wildcard(), {}, "", 0);
    add_pi(u, "b", "c_a1.l5", "s_c1.l7", "TLS", coeff(0, 0, 3), Selector::wildcard(), {}, "", 1);
    CHECK_FALSE(detect_redundancy(u, u.pis[0], u.pis[1]).has_value());
    CHECK(detect_shadowing(u, u.pis[0], u.pis[1]).has_value());
}

TEST_CASE("exception needs strict containment the other way") {
    Scenario s = two_hosts();
    Selector narrow = sel("10.1.0.1", "30000-40000", "10.3.1.1", "443", "TCP");
    Selector broad = sel("10.1.0.1", "*", "10.3.1.1", "443", "TCP");
    add_pi(s, "e1", "c_a1.l7", "s_c1.l7", "TLS", coeff(0, 3, 0), narrow, {}, "", 0);
    add_pi(s, "e2", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 0, 3), broad, {}, "", 1);
    CHECK(detect_exception(s, s.pis[0], s.pis[1]).has_value());

    // Equality anywhere breaks the strictness.
    Scenario t = two_hosts();
    add_pi(t, "e1", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 3, 0), broad, {}, "", 0);
    add_pi(t, "e2", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 0, 3), broad, {}, "", 1);
    CHECK_FALSE(detect_exception(t, t.pis[0], t.pis[1]).has_value());
}

TEST_CASE("correlation: overlapping pair excluded by nothing else") {
    Scenario s = two_hosts();
    // web_2 -> s_c1 and s_c2 -> db style mixed-dominance pair.
    s.forest.add_entity("s_c1", "l7'", 7, s.forest.require("s_c1.l5"));
    add_pi(s, "co1", "c_a1.l7", "s_c1.l5", "TLS", coeff(0, 0, 3),
           sel("10.1.0.1", "1000-3000", "10.3.1.1", "5432", "TCP"), {}, "", 0);
    add_pi(s, "co2", "c_a1.l5", "s_c1.l7'", "TLS", coeff(0, 3, 3),
           sel("10.1.0.1", "2000-4000", "10.3.1.1", "5432", "TCP"), {}, "", 1);
    CHECK(detect_correlation(s, s.pis[0], s.pis[1]).has_value());

    // A pair already flagged as redundancy is excluded.
    Scenario t = two_hosts();
    add_pi(t, "a", "c_a1.l5", "s_c1.l5", "TLS", coeff(3, 3, 3), Selector::wildcard(), {}, "", 0);
    add_pi(t, "b", "c_a1.l5", "s_c1.l7", "TLS", coeff(1, 1, 1), Selector::wildcard(), {}, "", 1);
    CHECK(detect_redundancy(t, t.pis[0], t.pis[1]).has_value());
    CHECK_FALSE(detect_correlation(t, t.pis[0], t.pis[1]).has_value());
}

TEST_CASE("inclusion demands one strictly dominant field") {
    Scenario s = two_hosts();
    Selector outer = sel("10.1.0.1", "*", "10.3.1.1", "*", "TCP");
    Selector inner = sel("10.1.0.1", "*", "10.3.1.1", "443", "TCP");
    add_pi(s, "ipsec", "c_a1.l3", "s_c1.l3", "IPsec", coeff(0, 3, 3), outer);
    add_pi(s, "tls", "c_a1.l5", "s_c1.l7", "TLS", coeff(0, 0, 3), inner);
    CHECK(detect_inclusion(s, s.pis[0], s.pis[1]).has_value());
    CHECK_FALSE(detect_inclusion(s, s.pis[1], s.pis[0]).has_value());
    CHECK_FALSE(detect_affinity(s, s.pis[0], s.pis[1]).has_value()); // excluded by inclusion
}

TEST_CASE("affinity: the affine transport/session pair") {
    Scenario s = two_hosts();
    add_pi(s, "af1", "c_a1.l3", "s_c1.l3", "IPsec", coeff(0, 0, 3), Selector::wildcard());
    add_pi(s, "af2", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 3, 0), Selector::wildcard());
    const auto found = detect_affinity(s, s.pis[0], s.pis[1]);
    REQUIRE(found.has_value());
    CHECK(found->kind == AnomalyKind::Affinity);

    // With a NULL partner the technologies are disjoint: contradiction land.
    Scenario t = two_hosts();
    add_pi(t, "af1", "c_a1.l3", "s_c1.l3", "IPsec", coeff(0, 0, 3), Selector::wildcard());
    add_pi(t, "null", "c_a1", "s_c1", "NULL", coeff(0, 0, 0), Selector::wildcard());
    CHECK_FALSE(detect_affinity(t, t.pis[0], t.pis[1]).has_value());
    CHECK(detect_contradiction(t, t.pis[0], t.pis[1]).has_value());
}

TEST_CASE("contradiction requires exactly one NULL side and overlap") {
    Scenario s = two_hosts();
    add_pi(s, "prot", "c_a1.l3", "s_c1.l3", "IPsec", coeff(0, 3, 3),
           sel("10.1.0.1", "1024-65535", "10.3.1.1", "*", "TCP"));
    add_pi(s, "plain", "c_a1", "s_c1", "NULL", coeff(0, 0, 0),
           sel("10.1.0.1", "1-2000", "10.3.1.1", "*", "TCP"));
    CHECK(detect_contradiction(s, s.pis[0], s.pis[1]).has_value());

    Scenario t = two_hosts();
    add_pi(t, "a", "c_a1.l3", "s_c1.l3", "IPsec", coeff(0, 3, 3), Selector::wildcard());
    add_pi(t, "b", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 0, 3), Selector::wildcard());
    CHECK_FALSE(detect_contradiction(t, t.pis[0], t.pis[1]).has_value());
}

TEST_CASE("inspection zones raise threshold-sourced contradictions") {
    Scenario s = two_hosts();
    add_pi(s, "enc", "c_a1.l3", "s_c1.l3", "IPsec", coeff(0, 3, 3),
           sel("10.1.0.1", "*", "10.3.1.1", "*", "TCP"));
    CHECK_FALSE(detect_inspection_contradiction(s, s.pis[0]).has_value());
    s.thresholds.inspection_zones.push_back(sel("10.1.0.0/16", "*", "*", "*", "*"));
    const auto found = detect_inspection_contradiction(s, s.pis[0]);
    REQUIRE(found.has_value());
    CHECK(found->subject_pis == std::vector<std::string>{"enc"});
    // Integrity-only PIs stay monitorable: no contradiction.
    add_pi(s, "int", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 3, 0),
           sel("10.1.0.1", "*", "10.3.1.1", "*", "TCP"));
    CHECK_FALSE(detect_inspection_contradiction(s, s.pis[1]).has_value());
}

TEST_CASE("superfluous: outer tunnel over a stronger inner channel") {
    Scenario s;
    add_host(s, "c_c1", "10.3.2.1");
    add_gateway(s, "g_c3", "10.3.0.3");
    add_gateway(s, "g_c2", "10.3.0.2");
    add_host(s, "s_c1", "10.3.1.1");
    s.topology.add_edge("c_c1", "g_c3");
    s.topology.add_edge("g_c3", "g_c2");
    s.topology.add_edge("g_c2", "s_c1");

    add_pi(s, "outer", "g_c3.l3", "g_c2.l3", "IPsec", coeff(1, 1, 1),
           sel("10.3.2.0/24", "*", "10.3.1.0/24", "*", "*"));
    add_pi(s, "inner", "c_c1.l3", "s_c1.l3", "IPsec", coeff(3, 3, 3),
           sel("10.3.2.1", "*", "10.3.1.1", "*", "*"), {"g_c3", "g_c2"});

    const auto found = detect_superfluous(s, s.pis[0]);
    REQUIRE(found.has_value());
    CHECK(found->subject_pis == std::vector<std::string>{"outer"});
    CHECK_FALSE(detect_superfluous(s, s.pis[1]).has_value());

    // A weaker inner channel legitimizes the tunnel.
    s.pis[1].coefficients = coeff(0, 0, 0);
    s.pis[1].technology = "NULL";
    CHECK_FALSE(detect_superfluous(s, s.pis[0]).has_value());

    // Equal protection still counts toward superfluity of the outer tunnel.
    s.pis[1].technology = "IPsec";
    s.pis[1].coefficients = coeff(1, 1, 1);
    CHECK(detect_superfluous(s, s.pis[0]).has_value());
}

TEST_CASE("skewed channel: overlapping confidential tunnels") {
    Scenario s;
    add_gateway(s, "g_c3", "10.3.0.3");
    add_gateway(s, "g_c1", "10.3.0.1");
    add_gateway(s, "g_a1", "10.1.0.254");
    s.topology.add_edge("g_c3", "g_c1");
    s.topology.add_edge("g_c1", "g_a1");
    s.topology.add_route("g_c3", "g_a1", {"g_c3", "g_c1", "g_a1"});

    const Selector carried = sel("10.3.0.3,10.3.2.0/24", "*", "10.1.0.0/16", "*", "*");
    add_pi(s, "far", "g_c3.l3", "g_a1.l3", "IPsec", coeff(0, 0, 3), carried, {"g_c1"});
    add_pi(s, "near", "g_c3.l3", "g_c1.l3", "IPsec", coeff(1, 1, 3), carried);

    CHECK(detect_skewed(s, s.pis[1], s.pis[0]).has_value()); // near vs far fires
    CHECK_FALSE(detect_skewed(s, s.pis[0], s.pis[1]).has_value());

    // Disjoint chains cannot skew.
    Scenario t;
    add_gateway(t, "a", "10.0.0.1");
    add_gateway(t, "b", "10.0.0.2");
    add_gateway(t, "c", "10.0.0.3");
    add_gateway(t, "d", "10.0.0.4");
    add_pi(t, "t1", "a.l3", "b.l3", "IPsec", coeff(0, 0, 3), Selector::wildcard());
    add_pi(t, "t2", "c.l3", "d.l3", "IPsec", coeff(0, 0, 3), Selector::wildcard());
    CHECK_FALSE(detect_skewed(t, t.pis[0], t.pis[1]).has_value());
    CHECK_FALSE(detect_skewed(t, t.pis[1], t.pis[0]).has_value());
}

TEST_CASE("filtered channel walks the gateway chain") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    add_gateway(s, "w", "10.0.0.254");
    add_host(s, "b", "10.0.0.2");
    add_pi(s, "p", "a.l3", "b.l3", "IPsec", coeff(1, 1, 1),
           sel("10.0.0.1", "*", "10.0.0.2", "*", "*"), {"w"});
    CHECK_FALSE(detect_filtered(s, s.pis[0]).has_value());
    s.profiles["w"].firewall_rules = {{Selector::wildcard(), FilterAction::Deny}};
    CHECK(detect_filtered(s, s.pis[0]).has_value());

    // Empty gateway list: vacuous existential.
    add_pi(s, "direct", "a.l5", "b.l5", "TLS", coeff(1, 1, 1), Selector::wildcard());
    CHECK_FALSE(detect_filtered(s, s.pis[1]).has_value());
}

TEST_CASE("L2 anomaly on a wired-only hop") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    add_gateway(s, "w", "10.0.0.254");
    add_host(s, "b", "10.0.0.2");
    add_pi(s, "wifi", "a.l2", "b.l2", "WPA2", coeff(2, 2, 0), Selector::wildcard(), {"w"});
    CHECK_FALSE(detect_l2(s, s.pis[0]).has_value()); // everyone speaks WPA2
    s.profiles["w"].layer2_technologies = {"MACsec"};
    const auto found = detect_l2(s, s.pis[0]);
    REQUIRE(found.has_value());
    // Higher-layer technologies are out of scope for this detector.
    add_pi(s, "tls", "a.l5", "b.l5", "TLS", coeff(1, 1, 1), Selector::wildcard(), {"w"});
    CHECK_FALSE(detect_l2(s, s.pis[1]).has_value());
}

TEST_CASE("asymmetric channel, gated and strict readings") {
    Scenario s = two_hosts();
    const Selector fwd = sel("10.1.0.1", "*", "10.3.1.1", "443", "TCP");
    add_pi(s, "fwd", "c_a1.l5", "s_c1.l5", "TLS", coeff(3, 3, 3), fwd);

    // Lone PI: the default reading keeps quiet, the strict one flags it.
    CHECK_FALSE(detect_asymmetric(s, s.pis[0], false).has_value());
    CHECK(detect_asymmetric(s, s.pis[0], true).has_value());

    // A weaker reverse channel opens the gate in both readings.
    add_pi(s, "rev", "s_c1.l5", "c_a1.l5", "TLS", coeff(1, 1, 1), reverse_selector(fwd));
    CHECK(detect_asymmetric(s, s.pis[0], false).has_value());
    CHECK(detect_asymmetric(s, s.pis[1], false).has_value());

    // An exact mirror satisfies both directions.
    s.pis[1].coefficients = coeff(3, 3, 3);
    CHECK_FALSE(detect_asymmetric(s, s.pis[0], false).has_value());
    CHECK_FALSE(detect_asymmetric(s, s.pis[0], true).has_value());
    CHECK_FALSE(detect_asymmetric(s, s.pis[1], false).has_value());
}

TEST_CASE("monitorability and alternative paths over enumerated chains") {
    Scenario s;
    add_host(s, "s_c1", "10.3.1.1");
    add_gateway(s, "g_c1", "10.3.0.1", "203.0.113.3");
    add_host(s, "c_a1", "10.1.0.1");
    s.topology.add_edge("s_c1", "g_c1");
    s.topology.add_edge("g_c1", "c_a1");
    const Selector carried = sel("10.3.1.1", "*", "10.1.0.1", "*", "*");
    add_pi(s, "mo1", "s_c1.l3", "g_c1.l3", "IPsec", coeff(3, 3, 3), carried);
    add_pi(s, "mo2", "g_c1.l3'", "c_a1.l3", "IPsec", coeff(3, 3, 3), carried);

    const auto result = run_analysis(s);
    REQUIRE(result.anomalies.size() == 1);
    CHECK(result.anomalies[0].kind == AnomalyKind::Monitorability);
    CHECK(result.anomalies[0].subject_pis == std::vector<std::string>{"mo1", "mo2"});

    // A direct confidential channel suppresses the finding.
    add_pi(s, "direct", "s_c1.l3", "c_a1.l3", "IPsec", coeff(3, 3, 3), carried);
    const auto fixed = run_analysis(s);
    bool monitorability = false;
    for (const Anomaly& a : fixed.anomalies)
        if (a.kind == AnomalyKind::Monitorability) monitorability = true;
    CHECK_FALSE(monitorability);
    // ... but now two distinct paths connect the pair.
    bool alternative = false;
    for (const Anomaly& a : fixed.anomalies)
        if (a.kind == AnomalyKind::AlternativePath) alternative = true;
    CHECK(alternative);
}

TEST_CASE("alternative path count is the number of unordered path pairs") {
    Scenario s;
    add_gateway(s, "g_c2", "10.3.0.2");
    add_gateway(s, "g_c1", "10.3.0.1", "203.0.113.99");
    add_gateway(s, "g_c3", "10.3.0.3");
    s.topology.add_edge("g_c2", "g_c3");
    s.topology.add_edge("g_c2", "g_c1");
    s.topology.add_edge("g_c1", "g_c3");
    const Selector carried = sel("10.3.1.128/25", "*", "10.3.2.0/24", "*", "*");
    add_pi(s, "ap1", "g_c2.l3", "g_c3.l3", "IPsec", coeff(1, 1, 1), carried);
    add_pi(s, "ap2", "g_c2.l3", "g_c1.l3", "IPsec", coeff(1, 1, 1), carried);
    add_pi(s, "ap3", "g_c1.l3'", "g_c3.l3", "IPsec", coeff(1, 1, 1), carried);

    std::size_t alternatives = 0;
    for (const Anomaly& a : run_analysis(s).anomalies)
        if (a.kind == AnomalyKind::AlternativePath) ++alternatives;
    CHECK(alternatives == 1); // C(2,2): exactly one unordered pair
}

TEST_CASE("cyclic paths need chainable selectors") {
    Scenario s;
    add_gateway(s, "r1", "10.0.0.1");
    add_gateway(s, "r2", "10.0.0.2");
    add_gateway(s, "r3", "10.0.0.3");
    s.topology.add_edge("r1", "r2");
    s.topology.add_edge("r2", "r3");
    s.topology.add_edge("r3", "r1");
    const Selector shared = sel("*", "*", "*", "9000-9015", "TCP");
    add_pi(s, "p1", "r1.l3", "r2.l3", "IPsec", coeff(2, 2, 0), shared);
    add_pi(s, "p2", "r2.l3", "r3.l3", "IPsec", coeff(2, 2, 0), shared);
    add_pi(s, "p3", "r3.l3", "r1.l3", "IPsec", coeff(2, 2, 0), shared);

    const auto cycles = detect_cyclic_paths(s);
    REQUIRE(cycles.size() == 1);
    CHECK(std::set<std::string>(cycles[0].subject_pis.begin(), cycles[0].subject_pis.end()) ==
          std::set<std::string>{"p1", "p2", "p3"});

    // Break the traffic compatibility: the loop disappears.
    s.pis[2].selector = sel("*", "*", "*", "9100-9115", "TCP");
    CHECK(detect_cyclic_paths(s).empty());
}

TEST_CASE("taxonomy labels match both classifications") {
    CHECK(effect_category(AnomalyKind::SkewedChannel) == EffectCategory::Insecure);
    CHECK(info_category(AnomalyKind::SkewedChannel) == InfoCategory::NetworkChannel);
    CHECK(effect_category(AnomalyKind::Superfluous) ==
          EffectCategory::SuboptimalImplementation);
    CHECK(info_category(AnomalyKind::Superfluous) == InfoCategory::NetworkChannel);
    CHECK(effect_category(AnomalyKind::Redundancy) ==
          EffectCategory::SuboptimalImplementation);
    CHECK(info_category(AnomalyKind::Redundancy) == InfoCategory::NodeIntraTech);
    CHECK(effect_category(AnomalyKind::Shadowing) == EffectCategory::PotentialError);
    CHECK(effect_category(AnomalyKind::InternalLoop) ==
          EffectCategory::SuboptimalImplementation);
    CHECK(info_category(AnomalyKind::InternalLoop) == InfoCategory::PiLevelIrrelevant);
    CHECK(effect_category(AnomalyKind::Monitorability) == EffectCategory::Insecure);
    CHECK(info_category(AnomalyKind::Monitorability) == InfoCategory::NetworkPath);
    CHECK(effect_category(AnomalyKind::OutOfPlace) == EffectCategory::Unfeasible);
    CHECK(info_category(AnomalyKind::Contradiction) == InfoCategory::NodeInterTech);
    CHECK(effect_category(AnomalyKind::CyclicPath) == EffectCategory::SuboptimalWalk);
}

TEST_CASE("detectors agree with the formula-replay oracle on random scenarios") {
    const MiniDomain domain;
    std::mt19937_64 rng(20240809);
    for (int round = 0; round < 150; ++round) {
        const Scenario s = random_mini_scenario(rng, domain);
        const FormulaOracle oracle(s, domain);
        CAPTURE(round);
        CHECK(engine_findings(s) == oracle.replay());
    }
}

TEST_CASE("at most one intra-technology verdict per ordered pair") {
    const MiniDomain domain;
    std::mt19937_64 rng(5150);
    for (int round = 0; round < 80; ++round) {
        const Scenario s = random_mini_scenario(rng, domain);
        const auto result = run_analysis(s);
        std::map<std::pair<std::string, std::string>, int> ordered;
        std::set<std::pair<std::string, std::string>> correlated;
        for (const Anomaly& a : result.anomalies) {
            if (a.kind == AnomalyKind::Shadowing || a.kind == AnomalyKind::Redundancy ||
                a.kind == AnomalyKind::Exception)
                ++ordered[{a.subject_pis[0], a.subject_pis[1]}];
            if (a.kind == AnomalyKind::Correlation)
                correlated.insert({a.subject_pis[0], a.subject_pis[1]});
        }
        for (const auto& [pair, count] : ordered) {
            CHECK(count == 1);
            CHECK_FALSE(correlated.count(pair));
            CHECK_FALSE(correlated.count({pair.second, pair.first}));
        }
    }
}

TEST_CASE("evidence replays to its recorded verdicts") {
    const MiniDomain domain;
    std::mt19937_64 rng(9);
    for (int round = 0; round < 40; ++round) {
        const Scenario s = random_mini_scenario(rng, domain);
        for (const Anomaly& a : run_analysis(s).anomalies) {
            for (const EvidenceClause& clause : a.evidence) {
                const auto replayed = replay_clause(s, clause);
                REQUIRE_MESSAGE(replayed.has_value(), clause.check);
                CHECK_MESSAGE(*replayed == clause.observed,
                              clause.check << " " << clause.text);
            }
        }
    }
}

TEST_CASE("analysis output is invariant under PI id renaming") {
    const MiniDomain domain;
    std::mt19937_64 rng(1313);
    for (int round = 0; round < 20; ++round) {
        Scenario s = random_mini_scenario(rng, domain);
        auto original = engine_findings(s);

        // Rename every id through a fixed bijection, then map the findings
        // back: the multiset of findings must be unchanged.
        auto renamed_id = [](const std::string& id) { return "zz_" + id; };
        for (PolicyImplementation& pi : s.pis) pi.id = renamed_id(pi.id);
        auto renamed = engine_findings(s);
        for (OracleFinding& f : renamed)
            for (std::string& subject : f.subjects) subject = subject.substr(3);
        // Subject order inside unordered pairs follows id order, which the
        // bijection preserves here; compare as sets of subject sets.
        auto normalize = [](std::vector<OracleFinding> findings) {
            std::multiset<std::pair<std::string, std::set<std::string>>> out;
            for (const OracleFinding& f : findings)
                out.insert({f.kind, {f.subjects.begin(), f.subjects.end()}});
            return out;
        };
        CHECK(normalize(original) == normalize(renamed));
    }
}

TEST_CASE("analysis output is invariant under PI reordering") {
    const MiniDomain domain;
    std::mt19937_64 rng(77);
    for (int round = 0; round < 30; ++round) {
        Scenario s = random_mini_scenario(rng, domain);
        const auto baseline = engine_findings(s);
        std::shuffle(s.pis.begin(), s.pis.end(), rng);
        CHECK(engine_findings(s) == baseline);
    }
}
