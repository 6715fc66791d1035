#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ingest/generate.hpp"
#include "ingest/scenario_io.hpp"
#include "report/dot.hpp"
#include "report/report.hpp"
#include "support/builders.hpp"
#include "support/dot_checker.hpp"

#include <json.hpp>

#include <set>

using namespace cppa;
using namespace cppa::testing;

namespace {

Scenario affinity_scenario() {
    // The affine pair: IPsec at layer 3 with (0,0,3) against TLS at layer 5
    // with (0,3,0), wildcard selectors.
    Scenario s;
    add_host(s, "c_a1", "10.1.0.1");
    add_host(s, "s_c1", "10.3.1.1");
    s.topology.add_edge("c_a1", "s_c1");
    add_pi(s, "af1", "c_a1.l3", "s_c1.l3", "IPsec", coeff(0, 0, 3), Selector::wildcard());
    add_pi(s, "af2", "c_a1.l5", "s_c1.l5", "TLS", coeff(0, 3, 0), Selector::wildcard());
    return s;
}

Scenario tunnel_scenario() {
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
    return s;
}

} // namespace

TEST_CASE("affinity rendering: two parallel edges at their layers") {
    const Scenario s = affinity_scenario();
    const AnalysisResult result = run_analysis(s);
    REQUIRE(result.anomalies.size() == 1);
    const std::string dot = emit_dot(result.anomalies[0], s);

    const DotChecker checker(dot);
    CHECK_MESSAGE(checker.valid(), checker.error());
    // IPsec attaches at the layer-3 vertices, TLS at layer 5.
    CHECK(dot.find("\"c_a1.l3\" -> \"s_c1.l3\"") != std::string::npos);
    CHECK(dot.find("\"c_a1.l5\" -> \"s_c1.l5\"") != std::string::npos);
    CHECK(dot.find("IPsec: (0,0,3)") != std::string::npos);
    CHECK(dot.find("TLS: (0,3,0)") != std::string::npos);
    CHECK(dot.find("(*,*,*,*,*)") != std::string::npos); // selector label
}

TEST_CASE("superfluous rendering: tunnel crosses the gateway trees") {
    const Scenario s = tunnel_scenario();
    const AnalysisResult result = run_analysis(s);
    REQUIRE(result.anomalies.size() == 1);
    REQUIRE(result.anomalies[0].kind == AnomalyKind::Superfluous);
    // Render with both PIs for context: the anomaly subject plus the inner
    // channel referenced in its evidence.
    Anomaly enriched = result.anomalies[0];
    enriched.subject_pis.push_back("inner");
    const std::string dot = emit_dot(enriched, s);

    const DotChecker checker(dot);
    CHECK_MESSAGE(checker.valid(), checker.error());
    CHECK(dot.find("IPsec: (1,1,1)") != std::string::npos);
    CHECK(dot.find("IPsec: (3,3,3)") != std::string::npos);
    // The tunnel stroke is doubled, the inner chain crosses both gateways.
    CHECK(dot.find("black:invis:black") != std::string::npos);
    CHECK(dot.find("\"c_c1.l3\" -> \"g_c3.l3\"") != std::string::npos);
    CHECK(dot.find("\"g_c3.l3\" -> \"g_c2.l3\"") != std::string::npos);
    CHECK(dot.find("\"g_c2.l3\" -> \"s_c1.l3\"") != std::string::npos);
}

TEST_CASE("out of place has no graphical form") {
    Scenario s = affinity_scenario();
    add_host(s, "g_b1", "10.2.0.254");
    add_pi(s, "misplaced", "c_a1.l7", "s_c1.l7", "TLS", coeff(0, 1, 0), Selector::wildcard(),
           {}, "g_b1");
    const AnalysisResult result = run_analysis(s);
    const Anomaly* oop = nullptr;
    for (const Anomaly& a : result.anomalies)
        if (a.kind == AnomalyKind::OutOfPlace) oop = &a;
    REQUIRE(oop != nullptr);
    CHECK_THROWS_AS(emit_dot(*oop, s), std::invalid_argument);

    // The bundle silently skips it but renders everything else.
    const auto bundle = emit_dot_bundle(result.anomalies, s);
    CHECK(bundle.size() == result.anomalies.size() - 1);
    for (const DotFile& file : bundle) {
        CHECK(file.name.find("OUT_OF_PLACE") == std::string::npos);
        const DotChecker checker(file.content);
        CHECK_MESSAGE(checker.valid(), file.name << ": " << checker.error());
    }
}

TEST_CASE("every renderable anomaly kind produces grammatical DOT") {
    // A scenario provoking several kinds at once, plus dedicated ones.
    const Scenario s = tunnel_scenario();
    const AnalysisResult result = run_analysis(s);
    for (const DotFile& file : emit_dot_bundle(result.anomalies, s)) {
        const DotChecker checker(file.content);
        CHECK_MESSAGE(checker.valid(), file.name << ": " << checker.error());
    }
}

TEST_CASE("unprotected channels are dashed") {
    Scenario s = affinity_scenario();
    add_pi(s, "plain", "c_a1", "s_c1", "NULL", coeff(0, 0, 0),
           sel("10.1.0.1", "*", "10.3.1.1", "80", "TCP"));
    Anomaly synthetic;
    synthetic.kind = AnomalyKind::Contradiction;
    synthetic.subject_pis = {"plain", "af1"};
    synthetic.message = "synthetic";
    const std::string dot = emit_dot(synthetic, s);
    CHECK(dot.find("style=dashed") != std::string::npos);
}

TEST_CASE("report text groups anomalies by effect category") {
    const Scenario s = tunnel_scenario();
    const ReportDocument report = ReportDocument::build(s, run_analysis(s));
    const std::string text = emit_report_text(report);
    CHECK(text.find("== SUBOPTIMAL_IMPLEMENTATION ==") != std::string::npos);
    CHECK(text.find("SUPERFLUOUS") != std::string::npos);
    CHECK(text.find("resolution:") != std::string::npos);
    CHECK(text.find("evidence:") != std::string::npos);
}

TEST_CASE("report json is lossless and structured") {
    const Scenario s = affinity_scenario();
    const ReportDocument report = ReportDocument::build(s, run_analysis(s));
    const std::string json_text = emit_report_json(report);
    CHECK(report_json_roundtrips(json_text));

    const auto doc = nlohmann::json::parse(json_text);
    CHECK(doc["schema_version"] == kReportSchemaVersion);
    REQUIRE(doc["anomalies"].size() == 1);
    CHECK(doc["anomalies"][0]["kind"] == "AFFINITY");
    CHECK(doc["anomalies"][0]["effect_category"] == "POTENTIAL_ERROR");
    CHECK(doc["anomalies"][0]["info_category"] == "NODE_INTER_TECH");
    CHECK(doc["anomalies"][0]["resolutions"][0]["action"] == "REPLACE_WITH_LUB");
    CHECK(doc["stats"]["pi_count"] == 2);
}

TEST_CASE("the reference fixture renders a grammatical bundle for every kind") {
    const Scenario s =
        load_scenario_file(std::string(CPPA_SCENARIO_DIR) + "/fixture_f.json");
    const AnalysisResult result = run_analysis(s);
    const auto bundle = emit_dot_bundle(result.anomalies, s);
    REQUIRE(bundle.size() == result.anomalies.size()); // nothing out-of-place here
    std::set<std::string> kinds;
    for (const DotFile& file : bundle) {
        const DotChecker checker(file.content);
        CHECK_MESSAGE(checker.valid(), file.name << ": " << checker.error());
        kinds.insert(file.name.substr(4));
    }
    CHECK(kinds.size() == 11);
}

TEST_CASE("generated scenarios render grammatical bundles too") {
    GenerationParams params;
    params.n_pi = 30;
    params.n_conflict = 30;
    params.n_entities = 400;
    params.seed = 5;
    const Scenario s = generate_scenario(params);
    const AnalysisResult result = run_analysis(s);
    for (const DotFile& file : emit_dot_bundle(result.anomalies, s)) {
        const DotChecker checker(file.content);
        CHECK_MESSAGE(checker.valid(), file.name << ": " << checker.error());
    }
}

TEST_CASE("empty results render in every format") {
    Scenario s;
    add_host(s, "a", "10.0.0.1");
    const AnalysisResult result = run_analysis(s);
    REQUIRE(result.anomalies.empty());
    const ReportDocument report = ReportDocument::build(s, result);
    CHECK(report_json_roundtrips(emit_report_json(report)));
    CHECK(emit_report_text(report).find("anomalies: 0") != std::string::npos);
    CHECK(emit_dot_bundle(result.anomalies, s).empty());
}
