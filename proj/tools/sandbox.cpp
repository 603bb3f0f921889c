// Command-line front end: demand tooling, single runs, the (S, f) optimizer,
// batch sweeps and report comparison.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "transit/config.hpp"
#include "transit/demand.hpp"
#include "transit/engine.hpp"
#include "transit/fixed_cost.hpp"
#include "transit/metrics.hpp"
#include "transit/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace transit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

void write_summary(const fs::path& out_dir, json summary) {
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
}

json report_json(const RunReport& r) {
    json j;
    j["design_id"] = r.design_id;
    j["scenario_id"] = r.scenario_id;
    j["seed"] = r.seed;
    j["fingerprint"] = r.fingerprint;
    j["ridership"] = r.total_ridership;
    j["rejected"] = r.rejected;
    if (r.avg_weighted_travel_time_min) j["avg_wtt_min"] = *r.avg_weighted_travel_time_min;
    else j["avg_wtt_min"] = nullptr;
    j["vmt_mi"] = r.total_vmt_mi;
    j["vmt_km"] = r.total_vmt_km;
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    r.design_id = j.at("design_id").get<std::string>();
    r.scenario_id = j.at("scenario_id").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.fingerprint = j.at("fingerprint").get<std::string>();
    r.total_ridership = j.at("ridership").get<long long>();
    r.rejected = j.at("rejected").get<long long>();
    if (!j.at("avg_wtt_min").is_null())
        r.avg_weighted_travel_time_min = j.at("avg_wtt_min").get<double>();
    r.total_vmt_mi = j.at("vmt_mi").get<double>();
    return r;
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    int scenario = 0;
    std::int64_t seed = -1;
};

ScenarioParams pick_scenario(const Config& cfg, const CommonOpts& o) {
    if (o.scenario < 0 || o.scenario >= static_cast<int>(cfg.scenarios.size()))
        throw std::invalid_argument("--scenario index out of range");
    ScenarioParams s = cfg.scenarios[static_cast<std::size_t>(o.scenario)];
    if (o.seed >= 0) s.seed = static_cast<std::uint64_t>(o.seed);
    return s;
}

int cmd_gen_demand(const CommonOpts& o) {
    Config cfg = load_config(o.config_path);
    ScenarioParams s = pick_scenario(cfg, o);
    auto pax = generate_passengers(s, 0.0, s.sim_length);
    fs::path out = fs::path(o.out_dir) /
                   ("demand_" + s.id + "_seed" + std::to_string(s.seed) + ".csv");
    write_file(out, demand_to_csv(pax));
    json summary = {{"command", "gen-demand"},
                    {"ok", true},
                    {"scenario_id", s.id},
                    {"seed", s.seed},
                    {"count", pax.size()},
                    {"fingerprint", demand_fingerprint(pax)},
                    {"outputs", {out.string()}}};
    write_summary(o.out_dir, summary);
    std::cout << out.string() << " (" << pax.size() << " passengers)\n";
    return kExitOk;
}

int cmd_run(const CommonOpts& o, const std::string& design_id, const std::string& demand_path,
            bool trace) {
    Config cfg = load_config(o.config_path);
    ScenarioParams s = pick_scenario(cfg, o);
    int d = cfg.design_index(design_id);
    const SystemDesign& design = cfg.designs[d][static_cast<std::size_t>(o.scenario)];

    std::vector<Passenger> demand;
    if (!demand_path.empty()) {
        DemandLoadOptions lo;
        lo.window_length = s.sim_length;
        lo.zeta_a = s.zeta_a;
        lo.warnings = &std::cerr;
        demand = read_demand_csv(demand_path, lo);
    } else {
        demand = generate_passengers(s, 0.0, s.sim_length);
    }

    RunOptions ro;
    ro.record_trace = trace || cfg.trace;
    RunResult rr = run_simulation(s, design, demand, ro);
    RunReport rep = aggregate(rr, s, design);

    fs::path dir(o.out_dir);
    write_file(dir / "report.csv", report_csv_header() + report_csv_row(rep));
    write_file(dir / "per_passenger.csv", per_passenger_csv(rep));
    json summary = report_json(rep);
    summary["command"] = "run";
    summary["ok"] = true;
    json outputs = {(dir / "report.csv").string(), (dir / "per_passenger.csv").string()};
    if (ro.record_trace) {
        write_file(dir / "events.csv", events_csv(rr.events));
        write_file(dir / "trace.csv", trace_csv(rr.trace));
        outputs.push_back((dir / "events.csv").string());
        outputs.push_back((dir / "trace.csv").string());
    }
    summary["outputs"] = outputs;
    write_summary(dir, summary);
    std::cout << report_csv_header() << report_csv_row(rep);
    return kExitOk;
}

int cmd_optimize(const CommonOpts& o) {
    Config cfg = load_config(o.config_path);
    const OptimizerSpec& sp = cfg.optimizer;
    auto grid = frequency_grid(sp.f_min, sp.f_max, sp.f_step);
    OptimalDesign best = optimize_design(cfg.cost, sp.S_min, sp.S_max, grid);
    fs::path dir(o.out_dir);
    write_file(dir / "cost_surface.csv", cost_surface_csv(cfg.cost, sp.S_min, sp.S_max, grid));
    json summary = {{"command", "optimize-fixed"},
                    {"ok", true},
                    {"S_star", best.S},
                    {"f_star", best.f},
                    {"C_t", best.cost.C_t},
                    {"C_o", best.cost.C_o},
                    {"C_u", best.cost.C_u},
                    {"t_c_h", best.cost.t_c},
                    {"outputs", {(dir / "cost_surface.csv").string()}}};
    write_summary(dir, summary);
    std::cout << "S*=" << best.S << " f*=" << best.f << " C_t=" << best.cost.C_t << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOpts& o, int parallelism) {
    Config cfg = load_config(o.config_path);
    SweepResult res = run_sweep(cfg, parallelism);
    fs::path dir(o.out_dir);
    write_file(dir / "reports.csv", res.reports_csv());
    write_file(dir / "table_ridership.csv", res.table_csv(cfg, "ridership"));
    write_file(dir / "table_avg_wtt.csv", res.table_csv(cfg, "avg_wtt"));
    write_file(dir / "table_vmt.csv", res.table_csv(cfg, "vmt"));

    json runs = json::array();
    for (const auto& r : res.runs) {
        json jr;
        jr["scenario"] = cfg.scenarios[r.scenario].id;
        jr["design"] = cfg.design_ids[r.design];
        jr["seed"] = cfg.seeds[r.seed_idx];
        jr["ok"] = r.ok;
        if (r.ok) jr["report"] = report_json(r.report);
        else jr["error"] = r.error;
        runs.push_back(jr);
    }
    json summary = {{"command", "sweep"},
                    {"ok", res.failures == 0},
                    {"total_runs", res.expected_runs},
                    {"failures", res.failures},
                    {"runs", runs},
                    {"outputs",
                     {(dir / "reports.csv").string(), (dir / "table_ridership.csv").string(),
                      (dir / "table_avg_wtt.csv").string(), (dir / "table_vmt.csv").string()}}};
    write_summary(dir, summary);
    std::cout << res.reports_csv();
    if (res.failures > 0) {
        for (const auto& r : res.runs)
            if (!r.ok)
                std::cerr << "run failed (" << cfg.scenarios[r.scenario].id << ", "
                          << cfg.design_ids[r.design] << ", seed " << cfg.seeds[r.seed_idx]
                          << "): " << r.error << "\n";
        return kExitRun;
    }
    return kExitOk;
}

int cmd_compare(const CommonOpts& o, const std::vector<std::string>& report_paths) {
    std::vector<RunReport> reports;
    for (const auto& p : report_paths) {
        std::ifstream f(p);
        if (!f) throw std::invalid_argument("cannot open report json: " + p);
        json j = json::parse(f);
        reports.push_back(report_from_json(j));
    }
    std::string csv = compare_csv(reports);
    fs::path dir(o.out_dir);
    write_file(dir / "comparison.csv", csv);
    json summary = {{"command", "compare"},
                    {"ok", true},
                    {"baseline", reports.front().design_id},
                    {"outputs", {(dir / "comparison.csv").string()}}};
    write_summary(dir, summary);
    std::cout << csv;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transit operating-policy simulation sandbox"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string design_id;
    std::string demand_path;
    bool trace = false;
    int parallelism = 1;
    std::vector<std::string> report_paths;

    auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
        auto* opt = cmd->add_option("--config", common.config_path, "configuration file");
        if (needs_config) opt->required();
        cmd->add_option("--out-dir", common.out_dir, "output directory");
        cmd->add_option("--scenario", common.scenario, "scenario index (default 0)");
        cmd->add_option("--seed", common.seed, "override the scenario seed");
    };

    auto* gen = app.add_subcommand("gen-demand", "generate a passenger CSV");
    add_common(gen);

    auto* run = app.add_subcommand("run", "run one design against one demand stream");
    add_common(run);
    run->add_option("--design", design_id, "design id from the config")->required();
    run->add_option("--demand", demand_path, "demand CSV (default: generate in-process)");
    run->add_flag("--trace", trace, "write event and vehicle trace CSVs");

    auto* opt = app.add_subcommand("optimize-fixed", "enumerate the (S, f) cost surface");
    add_common(opt);

    auto* sweep = app.add_subcommand("sweep", "run every scenario x design x seed");
    add_common(sweep);
    sweep->add_option("--parallelism", parallelism, "worker threads (default 1)");

    auto* cmp = app.add_subcommand("compare", "compare run summary JSONs against the first");
    add_common(cmp, false);
    cmp->add_option("reports", report_paths, "summary.json files")->required()->expected(-2);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_demand(common);
        if (run->parsed()) return cmd_run(common, design_id, demand_path, trace);
        if (opt->parsed()) return cmd_optimize(common);
        if (sweep->parsed()) return cmd_sweep(common, parallelism);
        if (cmp->parsed()) return cmd_compare(common, report_paths);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRun;
    }
    return kExitConfig;
}
