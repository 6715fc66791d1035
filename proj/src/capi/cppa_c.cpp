#include "cppa/cppa.h"

#include "engine/resolution.hpp"
#include "ingest/config_map.hpp"
#include "ingest/generate.hpp"
#include "ingest/scenario_io.hpp"
#include "report/dot.hpp"
#include "report/report.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct cppa_scenario {
    cppa::Scenario value;
};

struct cppa_report {
    cppa::Scenario scenario; // DOT rendering needs the world the report came from
    cppa::ReportDocument document;
    std::vector<cppa::DotFile> dots;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

cppa_status fail(cppa_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
cppa_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const cppa::ParseError& e) {
        std::string all;
        for (const std::string& p : e.problems) all += (all.empty() ? "" : "\n") + p;
        return fail(CPPA_ERR_PARSE, all);
    } catch (const cppa::ScenarioError& e) {
        std::string all;
        for (const std::string& p : e.problems) all += (all.empty() ? "" : "\n") + p;
        return fail(CPPA_ERR_PARSE, all);
    } catch (const cppa::ConfigMapError& e) {
        return fail(CPPA_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CPPA_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CPPA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CPPA_ERR_INTERNAL, e.what());
    }
}

cppa::MapContext context_from_json(const char* context_json) {
    cppa::MapContext ctx;
    if (!context_json || !*context_json) return ctx;
    const nlohmann::json doc = nlohmann::json::parse(context_json);
    if (doc.contains("client_address")) ctx.client_address = doc["client_address"];
    if (doc.contains("ciphers")) {
        for (const auto& [suite, triple] : doc["ciphers"].items()) {
            cppa::CoefficientTriple c{cppa::Rational(triple.at(0).get<std::int64_t>()),
                                      cppa::Rational(triple.at(1).get<std::int64_t>()),
                                      cppa::Rational(triple.at(2).get<std::int64_t>())};
            ctx.ciphers.add(suite, c);
        }
    }
    return ctx;
}

cppa_status map_common(std::vector<cppa::MappedPi> (*mapper)(const std::string&,
                                                             const cppa::MapContext&),
                       const char* text, const char* context_json, char** out) {
    return guarded([&]() {
        if (!text || !out) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        const auto pis = mapper(text, context_from_json(context_json));
        *out = dup_string(cppa::mapped_pis_to_json(pis));
        return CPPA_OK;
    });
}

} // namespace

extern "C" {

const char* cppa_version(void) { return "1.0.0"; }

const char* cppa_last_error(void) { return g_last_error.c_str(); }

cppa_status cppa_scenario_parse(const char* json_text, cppa_scenario** out) {
    return guarded([&]() {
        if (!json_text || !out) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        auto* handle = new cppa_scenario{cppa::parse_scenario(json_text)};
        *out = handle;
        return CPPA_OK;
    });
}

cppa_status cppa_scenario_load(const char* path, cppa_scenario** out) {
    return guarded([&]() {
        if (!path || !out) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        auto* handle = new cppa_scenario{cppa::load_scenario_file(path)};
        *out = handle;
        return CPPA_OK;
    });
}

cppa_status cppa_scenario_to_json(const cppa_scenario* scenario, char** out_json) {
    return guarded([&]() {
        if (!scenario || !out_json) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        *out_json = dup_string(cppa::serialize_scenario(scenario->value));
        return CPPA_OK;
    });
}

cppa_status cppa_scenario_save(const cppa_scenario* scenario, const char* path) {
    return guarded([&]() {
        if (!scenario || !path) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        try {
            cppa::save_scenario_file(scenario->value, path);
        } catch (const cppa::ParseError& e) {
            return fail(CPPA_ERR_IO, e.what());
        }
        return CPPA_OK;
    });
}

void cppa_scenario_free(cppa_scenario* scenario) { delete scenario; }

cppa_status cppa_scenario_generate(const cppa_generation_params* params, cppa_scenario** out) {
    return guarded([&]() {
        if (!params || !out) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        cppa::GenerationParams gp;
        gp.n_pi = params->n_pi;
        gp.n_conflict = params->n_conflict;
        gp.n_entities = params->n_entities;
        gp.seed = params->seed;
        if (params->w_end_to_end > 0 || params->w_site_to_site > 0 ||
            params->w_remote_access > 0) {
            gp.w_end_to_end = params->w_end_to_end;
            gp.w_site_to_site = params->w_site_to_site;
            gp.w_remote_access = params->w_remote_access;
        }
        auto* handle = new cppa_scenario{cppa::generate_scenario(gp)};
        *out = handle;
        return CPPA_OK;
    });
}

cppa_status cppa_analyze(const cppa_scenario* scenario, const cppa_analysis_options* options,
                         cppa_report** out) {
    return guarded([&]() {
        if (!scenario || !out) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        cppa::AnalysisOptions opts;
        if (options) {
            if (options->path_cap) opts.path_cap = options->path_cap;
            opts.strict_asymmetric = options->strict_asymmetric != 0;
        }
        const cppa::AnalysisResult result = cppa::run_analysis(scenario->value, opts);
        auto* report = new cppa_report{scenario->value,
                                       cppa::ReportDocument::build(scenario->value, result),
                                       {}};
        report->dots = cppa::emit_dot_bundle(result.anomalies, scenario->value);
        *out = report;
        return CPPA_OK;
    });
}

void cppa_report_free(cppa_report* report) { delete report; }

size_t cppa_report_anomaly_count(const cppa_report* report) {
    return report ? report->document.analysis.anomalies.size() : 0;
}

cppa_status cppa_report_stats(const cppa_report* report, cppa_stats* out) {
    return guarded([&]() {
        if (!report || !out) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        const cppa::AnalysisStats& s = report->document.analysis.stats;
        out->entity_count = s.entity_count;
        out->pi_count = s.pi_count;
        out->connection_count = s.connection_count;
        out->enumerated_paths = s.enumerated_paths;
        out->paths_truncated = s.paths_truncated ? 1 : 0;
        out->pre_computation_ms = s.pre_computation_ms;
        out->analysis_ms = s.analysis_ms;
        return CPPA_OK;
    });
}

cppa_status cppa_report_to_text(const cppa_report* report, char** out_text) {
    return guarded([&]() {
        if (!report || !out_text) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        *out_text = dup_string(cppa::emit_report_text(report->document));
        return CPPA_OK;
    });
}

cppa_status cppa_report_to_json(const cppa_report* report, char** out_json) {
    return guarded([&]() {
        if (!report || !out_json) return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        *out_json = dup_string(cppa::emit_report_json(report->document));
        return CPPA_OK;
    });
}

size_t cppa_report_dot_count(const cppa_report* report) {
    return report ? report->dots.size() : 0;
}

cppa_status cppa_report_dot(const cppa_report* report, size_t index, char** out_name,
                            char** out_dot) {
    return guarded([&]() {
        if (!report || !out_name || !out_dot)
            return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        if (index >= report->dots.size())
            return fail(CPPA_ERR_INVALID_ARGUMENT, "dot index out of range");
        *out_name = dup_string(report->dots[index].name);
        *out_dot = dup_string(report->dots[index].content);
        return CPPA_OK;
    });
}

cppa_status cppa_map_strongswan(const char* conf_text, const char* context_json,
                                char** out_pis_json) {
    return map_common(&cppa::map_strongswan, conf_text, context_json, out_pis_json);
}

cppa_status cppa_map_openvpn(const char* client_text, const char* server_text,
                             const char* context_json, char** out_pis_json) {
    return guarded([&]() {
        if (!client_text || !out_pis_json)
            return fail(CPPA_ERR_INVALID_ARGUMENT, "null argument");
        const auto pis = cppa::map_openvpn(client_text, server_text ? server_text : "",
                                           context_from_json(context_json));
        *out_pis_json = dup_string(cppa::mapped_pis_to_json(pis));
        return CPPA_OK;
    });
}

cppa_status cppa_map_ssh(const char* conf_text, const char* context_json, char** out_pis_json) {
    return map_common(&cppa::map_ssh, conf_text, context_json, out_pis_json);
}

void cppa_string_free(char* text) { std::free(text); }

} // extern "C"
