#include "report/report.hpp"

#include <json.hpp>

#include <sstream>

namespace cppa {

using nlohmann::json;

ReportDocument ReportDocument::build(const Scenario& scenario, const AnalysisResult& analysis) {
    ReportDocument doc;
    doc.analysis = analysis;
    doc.node_count = scenario.forest.node_ids().size();
    doc.resolutions.reserve(analysis.anomalies.size());
    for (const Anomaly& a : analysis.anomalies) doc.resolutions.push_back(suggest(a, scenario));
    return doc;
}

namespace {

json anomaly_to_json(const Anomaly& a, const std::vector<Resolution>& resolutions) {
    json out;
    out["kind"] = std::string(to_string(a.kind));
    out["effect_category"] = std::string(to_string(effect_category(a.kind)));
    out["info_category"] = std::string(to_string(info_category(a.kind)));
    out["subjects"] = a.subject_pis;
    if (!a.subject_paths.empty()) out["paths"] = a.subject_paths;
    if (!a.endpoint_from.empty()) {
        out["endpoints"] = {{"from", a.endpoint_from}, {"to", a.endpoint_to}};
    }
    out["message"] = a.message;
    json evidence = json::array();
    for (const EvidenceClause& c : a.evidence)
        evidence.push_back(
            {{"clause", c.text}, {"check", c.check}, {"args", c.args}, {"observed", c.observed}});
    out["evidence"] = evidence;
    json res = json::array();
    for (const Resolution& r : resolutions) {
        json jr;
        jr["action"] = std::string(to_string(r.action));
        jr["rationale"] = r.rationale;
        if (!r.delete_pis.empty()) jr["delete"] = r.delete_pis;
        if (!r.replacement_pis.empty()) {
            json reps = json::array();
            for (const PolicyImplementation& pi : r.replacement_pis) {
                reps.push_back({{"id", pi.id},
                                {"technology", pi.technology},
                                {"coefficients", pi.coefficients.str()},
                                {"selector", pi.selector.str()},
                                {"gateways", pi.gateways},
                                {"deployed_at", pi.deployed_at},
                                {"priority", pi.priority}});
            }
            jr["replacements"] = reps;
        }
        if (r.filter_rule_index)
            jr["filter_rule"] = {{"node", r.filter_node}, {"index", *r.filter_rule_index}};
        res.push_back(jr);
    }
    out["resolutions"] = res;
    return out;
}

} // namespace

std::string emit_report_json(const ReportDocument& report) {
    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["scenario"] = {{"nodes", report.node_count},
                       {"entities", report.analysis.stats.entity_count},
                       {"pis", report.analysis.stats.pi_count}};
    doc["stats"] = {{"entity_count", report.analysis.stats.entity_count},
                    {"pi_count", report.analysis.stats.pi_count},
                    {"connection_count", report.analysis.stats.connection_count},
                    {"enumerated_paths", report.analysis.stats.enumerated_paths},
                    {"paths_truncated", report.analysis.stats.paths_truncated},
                    {"pre_computation_ms", report.analysis.stats.pre_computation_ms},
                    {"analysis_ms", report.analysis.stats.analysis_ms}};
    json anomalies = json::array();
    for (std::size_t i = 0; i < report.analysis.anomalies.size(); ++i)
        anomalies.push_back(
            anomaly_to_json(report.analysis.anomalies[i], report.resolutions[i]));
    doc["anomalies"] = anomalies;
    doc["notes"] = report.analysis.notes;
    return doc.dump(2) + "\n";
}

std::string emit_report_text(const ReportDocument& report) {
    std::ostringstream out;
    const auto& stats = report.analysis.stats;
    out << "communication protection policy analysis\n";
    out << "  nodes: " << report.node_count << "  entities: " << stats.entity_count
        << "  PIs: " << stats.pi_count << "  connections: " << stats.connection_count
        << "  paths: " << stats.enumerated_paths << (stats.paths_truncated ? " (truncated)" : "")
        << "\n";
    out << "  pre-computation: " << stats.pre_computation_ms
        << " ms  analysis: " << stats.analysis_ms << " ms\n";
    out << "  anomalies: " << report.analysis.anomalies.size() << "\n";

    static const EffectCategory categories[] = {
        EffectCategory::Insecure, EffectCategory::Unfeasible, EffectCategory::PotentialError,
        EffectCategory::SuboptimalImplementation, EffectCategory::SuboptimalWalk};
    for (EffectCategory cat : categories) {
        bool any = false;
        for (const Anomaly& a : report.analysis.anomalies)
            if (effect_category(a.kind) == cat) any = true;
        if (!any) continue;
        out << "\n== " << to_string(cat) << " ==\n";
        for (std::size_t i = 0; i < report.analysis.anomalies.size(); ++i) {
            const Anomaly& a = report.analysis.anomalies[i];
            if (effect_category(a.kind) != cat) continue;
            out << "- " << to_string(a.kind) << " [" << to_string(info_category(a.kind)) << "]";
            if (!a.subject_pis.empty()) {
                out << " subjects:";
                for (const std::string& id : a.subject_pis) out << " " << id;
            }
            out << "\n    " << a.message << "\n";
            for (const EvidenceClause& c : a.evidence)
                out << "    evidence: " << c.text << " -> " << c.observed << "\n";
            for (const Resolution& r : report.resolutions[i]) {
                out << "    resolution: " << to_string(r.action) << " — " << r.rationale << "\n";
            }
        }
    }
    if (!report.analysis.notes.empty()) {
        out << "\n== notes ==\n";
        for (const std::string& note : report.analysis.notes) out << "- " << note << "\n";
    }
    return out.str();
}

bool report_json_roundtrips(const std::string& json_text) {
    try {
        const json parsed = json::parse(json_text);
        return json::parse(parsed.dump()) == parsed;
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace cppa
