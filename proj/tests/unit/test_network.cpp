#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/network.hpp"
#include "support/builders.hpp"

#include <random>

using namespace cppa;
using namespace cppa::testing;

TEST_CASE("max coefficients are the component-wise minimum of the ends") {
    CapabilityProfile src, dst;
    src.supported_technologies = {"IPsec"};
    dst.supported_technologies = {"IPsec"};
    src.max_coefficients["IPsec"] = coeff(5, 5, 5);
    dst.max_coefficients["IPsec"] = coeff(3, 3, 3);
    const MaxCoefficients a = max_coefficients(src, dst, "IPsec");
    CHECK(a.supported);
    CHECK(a.coefficients == coeff(3, 3, 3));

    src.max_coefficients["IPsec"] = coeff(5, 3, 5);
    dst.max_coefficients["IPsec"] = coeff(3, 5, 5);
    CHECK(max_coefficients(src, dst, "IPsec").coefficients == coeff(3, 3, 5));
}

TEST_CASE("unsupported technology is a distinguished outcome") {
    CapabilityProfile src, dst;
    src.supported_technologies = {"IPsec", "TLS"};
    dst.supported_technologies = {"IPsec"};
    CHECK_FALSE(max_coefficients(src, dst, "TLS").supported);
    CHECK_FALSE(max_coefficients(dst, src, "TLS").supported);
    // NULL needs no support entry anywhere.
    CHECK(max_coefficients(src, dst, "NULL").supported);
}

TEST_CASE("randomized: the combined ceiling never exceeds either end") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> v(0, 5);
    for (int round = 0; round < 300; ++round) {
        CapabilityProfile src, dst;
        src.supported_technologies = {"TLS"};
        dst.supported_technologies = {"TLS"};
        src.max_coefficients["TLS"] = coeff(v(rng), v(rng), v(rng));
        dst.max_coefficients["TLS"] = coeff(v(rng), v(rng), v(rng));
        const MaxCoefficients m = max_coefficients(src, dst, "TLS");
        for (const CapabilityProfile* p : {&src, &dst}) {
            const Relation r =
                coefficient_relation(m.coefficients, p->max_coefficients.at("TLS"));
            CHECK((r == Relation::Equivalent || r == Relation::DominatedBy));
        }
    }
}

TEST_CASE("routing validation") {
    TopologyGraph topo;
    topo.add_node("a");
    topo.add_node("b");
    topo.add_node("c");
    topo.add_edge("a", "b");
    topo.add_edge("b", "c");

    SUBCASE("a valid walk passes") {
        topo.add_route("a", "c", {"a", "b", "c"});
        CHECK(topo.validate().empty());
    }
    SUBCASE("routes must start and end at their key nodes") {
        topo.add_route("a", "c", {"b", "c"});
        CHECK_FALSE(topo.validate().empty());
    }
    SUBCASE("every hop must be a topology edge") {
        topo.add_route("a", "c", {"a", "c"});
        CHECK_FALSE(topo.validate().empty());
    }
    SUBCASE("unknown nodes are rejected") {
        CHECK_THROWS(topo.add_edge("a", "zz"));
    }
}

TEST_CASE("profile invariants surface as scenario diagnostics") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    SUBCASE("layer-2 set must be a subset of the supported set") {
        s.profiles["a"].supported_technologies.erase("WPA2");
        CHECK_FALSE(s.validate().empty());
    }
    SUBCASE("max coefficients only for supported technologies") {
        s.profiles["a"].supported_technologies.erase("TLS");
        CHECK_FALSE(s.validate().empty());
    }
    SUBCASE("layer-2 set rejects higher-layer technologies") {
        s.profiles["a"].layer2_technologies.insert("TLS");
        CHECK_FALSE(s.validate().empty());
    }
}

TEST_CASE("gateway lists disagreeing with routing are warnings, not errors") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    add_host(s, "b", "10.0.0.2");
    add_gateway(s, "g", "10.0.0.254");
    s.topology.add_edge("a", "g");
    s.topology.add_edge("g", "b");
    s.topology.add_route("a", "b", {"a", "g", "b"});
    add_pi(s, "p", "a.l5", "b.l5", "TLS", coeff(1, 1, 1), Selector::wildcard(), {"g"});
    CHECK(s.validate().empty());
    CHECK(s.warnings().empty());

    s.pis[0].gateways = {"g", "g"}; // nonsense chain: differs from the routing walk
    CHECK_FALSE(s.warnings().empty());
}
