// cppa command line front end. Talks to the engine exclusively through the
// public C API.

#include <cppa/cppa.h>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitClean = 0;
constexpr int kExitAnomalies = 1;
constexpr int kExitError = 2;

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { cppa_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

int complain(const std::string& what) {
    std::cerr << "error: " << what;
    const char* detail = cppa_last_error();
    if (detail && *detail) std::cerr << "\n" << detail;
    std::cerr << "\n";
    return kExitError;
}

std::string read_file(const std::string& path, bool& ok) {
    std::ifstream in(path);
    if (!in) {
        ok = false;
        return "";
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ok = true;
    return buf.str();
}

int run_analyze(const std::string& scenario_path, const std::string& format,
                std::size_t path_cap, bool strict_asymmetric, const std::string& out_dir) {
    cppa_scenario* scenario = nullptr;
    if (cppa_scenario_load(scenario_path.c_str(), &scenario) != CPPA_OK)
        return complain("cannot load scenario " + scenario_path);

    cppa_analysis_options options{};
    options.path_cap = path_cap;
    options.strict_asymmetric = strict_asymmetric ? 1 : 0;

    cppa_report* report = nullptr;
    const cppa_status status = cppa_analyze(scenario, &options, &report);
    cppa_scenario_free(scenario);
    if (status != CPPA_OK) return complain("analysis failed");

    int exit_code = cppa_report_anomaly_count(report) ? kExitAnomalies : kExitClean;

    if (format == "json") {
        OwnedString text;
        if (cppa_report_to_json(report, &text.ptr) != CPPA_OK) exit_code = complain("report");
        else std::cout << text.str();
    } else if (format == "dot-bundle") {
        const std::string dir = out_dir.empty() ? "." : out_dir;
        std::filesystem::create_directories(dir);
        const std::size_t count = cppa_report_dot_count(report);
        for (std::size_t i = 0; i < count; ++i) {
            OwnedString name, dot;
            if (cppa_report_dot(report, i, &name.ptr, &dot.ptr) != CPPA_OK) {
                exit_code = complain("dot rendering");
                break;
            }
            std::ofstream out(dir + "/" + name.str());
            out << dot.str();
            std::cout << dir + "/" + name.str() << "\n";
        }
    } else {
        OwnedString text;
        if (cppa_report_to_text(report, &text.ptr) != CPPA_OK) exit_code = complain("report");
        else std::cout << text.str();
    }
    cppa_report_free(report);
    return exit_code;
}

int run_generate(std::size_t pis, std::size_t conflicts, std::size_t entities,
                 unsigned long long seed, const std::string& out_path) {
    cppa_generation_params params{};
    params.n_pi = pis;
    params.n_conflict = conflicts;
    params.n_entities = entities;
    params.seed = seed;

    cppa_scenario* scenario = nullptr;
    if (cppa_scenario_generate(&params, &scenario) != CPPA_OK)
        return complain("generation failed");
    cppa_status status;
    if (out_path.empty() || out_path == "-") {
        OwnedString text;
        status = cppa_scenario_to_json(scenario, &text.ptr);
        if (status == CPPA_OK) std::cout << text.str();
    } else {
        status = cppa_scenario_save(scenario, out_path.c_str());
    }
    cppa_scenario_free(scenario);
    if (status != CPPA_OK) return complain("cannot write scenario");
    return kExitClean;
}

int run_map(const std::string& kind, const std::vector<std::string>& files,
            const std::string& client_address, const std::string& out_path) {
    if (files.empty()) return complain("map needs at least one configuration file");
    bool ok = true;
    const std::string first = read_file(files[0], ok);
    if (!ok) return complain("cannot read " + files[0]);
    std::string second;
    if (files.size() > 1) {
        second = read_file(files[1], ok);
        if (!ok) return complain("cannot read " + files[1]);
    }

    std::string context = "{}";
    if (!client_address.empty()) context = "{\"client_address\":\"" + client_address + "\"}";

    OwnedString json;
    cppa_status status = CPPA_ERR_INVALID_ARGUMENT;
    if (kind == "strongswan") {
        status = cppa_map_strongswan(first.c_str(), context.c_str(), &json.ptr);
    } else if (kind == "openvpn") {
        status = cppa_map_openvpn(first.c_str(), second.empty() ? nullptr : second.c_str(),
                                  context.c_str(), &json.ptr);
    } else if (kind == "ssh") {
        status = cppa_map_ssh(first.c_str(), context.c_str(), &json.ptr);
    }
    if (status != CPPA_OK) return complain("mapping failed");

    if (out_path.empty() || out_path == "-") {
        std::cout << json.str();
    } else {
        std::ofstream out(out_path);
        if (!out) return complain("cannot write " + out_path);
        out << json.str();
    }
    return kExitClean;
}

struct BenchPoint {
    std::size_t x = 0;
    bool feasible = false;
    std::string note;
    double precomputation_ms = 0;
    double analysis_ms = 0;
};

int run_bench(const std::string& sweep, std::size_t fixed, unsigned long long seed,
              int repetitions) {
    const std::vector<std::size_t> points = {100, 250, 500};
    std::vector<BenchPoint> results;
    for (std::size_t value : points) {
        cppa_generation_params params{};
        // Half the PIs conflict, mirroring the test methodology the model
        // was validated with.
        const std::size_t pis = sweep == "pis" ? value : fixed;
        const std::size_t entities = sweep == "pis" ? fixed : value;
        params.n_pi = pis / 2;
        params.n_conflict = pis - pis / 2;
        params.n_entities = entities;
        params.seed = seed;

        BenchPoint point;
        point.x = value;

        cppa_scenario* scenario = nullptr;
        if (cppa_scenario_generate(&params, &scenario) != CPPA_OK) {
            // Typically "n_entities too small": report the point and go on.
            point.note = cppa_last_error();
            results.push_back(point);
            continue;
        }

        double best_total = -1;
        bool analyzed = true;
        for (int rep = 0; rep < repetitions; ++rep) {
            cppa_report* report = nullptr;
            if (cppa_analyze(scenario, nullptr, &report) != CPPA_OK) {
                point.note = cppa_last_error();
                analyzed = false;
                break;
            }
            cppa_stats stats{};
            cppa_report_stats(report, &stats);
            const double total = stats.pre_computation_ms + stats.analysis_ms;
            if (best_total < 0 || total < best_total) {
                best_total = total;
                point.precomputation_ms = stats.pre_computation_ms;
                point.analysis_ms = stats.analysis_ms;
            }
            cppa_report_free(report);
        }
        cppa_scenario_free(scenario);
        point.feasible = analyzed;
        results.push_back(point);
    }

    std::printf("# sweep=%s fixed=%zu seed=%llu\n", sweep.c_str(), fixed, seed);
    std::printf("%-10s %20s %16s %16s\n", sweep.c_str(), "pre-computation[ms]", "analysis[ms]",
                "total[ms]");
    bool any = false;
    for (const BenchPoint& p : results) {
        if (p.feasible) {
            any = true;
            std::printf("%-10zu %20.3f %16.3f %16.3f\n", p.x, p.precomputation_ms,
                        p.analysis_ms, p.precomputation_ms + p.analysis_ms);
        } else {
            std::printf("%-10zu skipped: %s\n", p.x, p.note.c_str());
        }
    }
    return any ? kExitClean : kExitError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cppa — communication protection policy analyzer"};
    app.require_subcommand(1);

    // analyze
    std::string scenario_path, format = "text", out_dir;
    std::size_t path_cap = 1024;
    bool strict_asymmetric = false;
    CLI::App* analyze = app.add_subcommand("analyze", "detect anomalies in a scenario file");
    analyze->add_option("scenario", scenario_path, "scenario JSON file")->required();
    analyze->add_option("--format", format, "text | json | dot-bundle")
        ->check(CLI::IsMember({"text", "json", "dot-bundle"}));
    analyze->add_option("--path-cap", path_cap, "maximum enumerated paths (default 1024)");
    analyze->add_flag("--strict-asymmetric", strict_asymmetric,
                      "flag every PI without a mirror, even one-way-only channels");
    analyze->add_option("--out", out_dir, "output directory for dot-bundle");

    // generate
    std::size_t gen_pis = 0, gen_conflicts = 0, gen_entities = 0;
    unsigned long long gen_seed = 0;
    std::string gen_out;
    CLI::App* generate = app.add_subcommand("generate", "produce a synthetic scenario");
    generate->add_option("--pis", gen_pis, "number of non-conflicting PIs")->required();
    generate->add_option("--conflicts", gen_conflicts, "number of conflicting PIs")->required();
    generate->add_option("--entities", gen_entities, "total entity count")->required();
    generate->add_option("--seed", gen_seed, "RNG seed")->required();
    generate->add_option("--out", gen_out, "output file (default stdout)");

    // map
    std::string map_kind, map_client, map_out;
    std::vector<std::string> map_files;
    CLI::App* map = app.add_subcommand("map", "translate security-control configuration into PIs");
    map->add_option("kind", map_kind, "strongswan | openvpn | ssh")
        ->required()
        ->check(CLI::IsMember({"strongswan", "openvpn", "ssh"}));
    map->add_option("files", map_files, "configuration file(s)")->required()->expected(1, 2);
    map->add_option("--client-address", map_client,
                    "client address for openvpn/ssh mappings (not present in the files)");
    map->add_option("--out", map_out, "output file (default stdout)");

    // bench
    std::string bench_sweep;
    std::size_t bench_fixed = 500;
    unsigned long long bench_seed = 1;
    int bench_reps = 3;
    CLI::App* bench = app.add_subcommand("bench", "timing sweeps over generated scenarios");
    bench->add_option("--sweep", bench_sweep, "pis | entities")
        ->required()
        ->check(CLI::IsMember({"pis", "entities"}));
    bench->add_option("--fixed", bench_fixed, "value of the non-swept dimension (default 500)");
    bench->add_option("--seed", bench_seed, "RNG seed (default 1)");
    bench->add_option("--repetitions", bench_reps, "analysis repetitions per point (default 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitClean : kExitError;
    }

    if (*analyze) return run_analyze(scenario_path, format, path_cap, strict_asymmetric, out_dir);
    if (*generate) return run_generate(gen_pis, gen_conflicts, gen_entities, gen_seed, gen_out);
    if (*map) return run_map(map_kind, map_files, map_client, map_out);
    if (*bench) return run_bench(bench_sweep, bench_fixed, bench_seed, bench_reps);
    return kExitError;
}
