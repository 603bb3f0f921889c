#include "transit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace transit {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw std::invalid_argument("unknown key '" + key + "' in " + ctx);
}

double num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw std::invalid_argument(std::string(key) + " must be a number");
    return obj[key].get<double>();
}

int integer(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw std::invalid_argument(std::string(key) + " must be an integer");
    return obj[key].get<int>();
}

void apply_scenario_keys(ScenarioParams& s, const json& obj, const std::string& ctx) {
    check_keys(obj,
               {"id", "L", "W", "lambda", "v_w", "zeta_a", "v_o", "gamma_v", "gamma_w",
                "gamma_a", "sim_length", "time_step", "seed", "metric"},
               ctx);
    if (obj.contains("id")) s.id = obj["id"].get<std::string>();
    s.L = num(obj, "L", s.L);
    s.W = num(obj, "W", s.W);
    s.lambda = num(obj, "lambda", s.lambda);
    s.v_w = num(obj, "v_w", s.v_w);
    s.zeta_a = num(obj, "zeta_a", s.zeta_a);
    s.v_o = num(obj, "v_o", s.v_o);
    s.gamma_v = num(obj, "gamma_v", s.gamma_v);
    s.gamma_w = num(obj, "gamma_w", s.gamma_w);
    s.gamma_a = num(obj, "gamma_a", s.gamma_a);
    s.sim_length = num(obj, "sim_length", s.sim_length);
    s.time_step = num(obj, "time_step", s.time_step);
    if (obj.contains("seed")) s.seed = obj["seed"].get<std::uint64_t>();
    if (obj.contains("metric")) {
        std::string m = obj["metric"].get<std::string>();
        if (m == "rectilinear") s.metric = Metric::Rectilinear;
        else if (m == "euclidean") s.metric = Metric::Euclidean;
        else throw std::invalid_argument("metric must be 'rectilinear' or 'euclidean'");
    }
}

void apply_design_keys(SystemDesign& d, const json& obj, const std::string& ctx) {
    if (auto* f = std::get_if<FixedDesign>(&d.params)) {
        check_keys(obj, {"id", "type", "scenario", "S", "f", "V", "K", "t_d", "t_c", "stop_x"},
                   ctx);
        f->S = integer(obj, "S", f->S);
        f->f = num(obj, "f", f->f);
        f->V = integer(obj, "V", f->V);
        f->K = integer(obj, "K", f->K);
        f->t_d = num(obj, "t_d", f->t_d);
        f->t_c = num(obj, "t_c", f->t_c);
        if (obj.contains("stop_x")) f->stop_x = obj["stop_x"].get<std::vector<double>>();
    } else if (auto* x = std::get_if<FlexDesign>(&d.params)) {
        check_keys(obj,
                   {"id", "type", "scenario", "S_c", "f", "V", "K", "t_d", "t_c", "zeta_w",
                    "zeta_b", "walking"},
                   ctx);
        x->S_c = integer(obj, "S_c", x->S_c);
        x->f = num(obj, "f", x->f);
        x->V = integer(obj, "V", x->V);
        x->K = integer(obj, "K", x->K);
        x->t_d = num(obj, "t_d", x->t_d);
        x->t_c = num(obj, "t_c", x->t_c);
        x->zeta_w = num(obj, "zeta_w", x->zeta_w);
        x->zeta_b = num(obj, "zeta_b", x->zeta_b);
        if (obj.contains("walking")) x->walking_enabled = obj["walking"].get<bool>();
    } else {
        auto* o = std::get_if<OnDemandDesign>(&d.params);
        check_keys(obj,
                   {"id", "type", "scenario", "S_d", "V", "K", "t_d", "zeta_w", "zeta_d",
                    "mu_s", "objective"},
                   ctx);
        o->S_d = integer(obj, "S_d", o->S_d);
        o->V = integer(obj, "V", o->V);
        o->K = integer(obj, "K", o->K);
        o->t_d = num(obj, "t_d", o->t_d);
        o->zeta_w = num(obj, "zeta_w", o->zeta_w);
        o->zeta_d = num(obj, "zeta_d", o->zeta_d);
        if (obj.contains("mu_s")) o->mu_s = obj["mu_s"].get<std::vector<int>>();
        if (obj.contains("objective")) {
            std::string v = obj["objective"].get<std::string>();
            if (v == "vehicle_time") o->objective = InsertionObjective::VehicleTime;
            else if (v == "weighted_passenger_time")
                o->objective = InsertionObjective::WeightedPassengerTime;
            else
                throw std::invalid_argument(
                    "objective must be 'vehicle_time' or 'weighted_passenger_time'");
        }
    }
}

}  // namespace

int Config::design_index(const std::string& id) const {
    for (std::size_t i = 0; i < design_ids.size(); ++i)
        if (design_ids[i] == id) return static_cast<int>(i);
    throw std::invalid_argument("unknown design id '" + id + "'");
}

Config parse_config(const std::string& text) {
    json root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    check_keys(root,
               {"simulation", "scenario", "scenarios", "designs", "seeds", "fixed_cost",
                "optimizer", "trace"},
               "config root");
    Config cfg;

    ScenarioParams base;
    if (root.contains("simulation")) {
        const json& sim = root["simulation"];
        check_keys(sim, {"sim_length", "time_step", "seed"}, "simulation");
        base.sim_length = num(sim, "sim_length", base.sim_length);
        base.time_step = num(sim, "time_step", base.time_step);
        if (sim.contains("seed")) base.seed = sim["seed"].get<std::uint64_t>();
    }
    if (root.contains("scenario")) apply_scenario_keys(base, root["scenario"], "scenario");

    if (root.contains("scenarios")) {
        int idx = 0;
        for (const json& o : root["scenarios"]) {
            ScenarioParams s = base;
            s.id = "scenario" + std::to_string(idx);
            apply_scenario_keys(s, o, "scenarios[" + std::to_string(idx) + "]");
            s.validate();
            cfg.scenarios.push_back(std::move(s));
            ++idx;
        }
    } else {
        base.validate();
        cfg.scenarios.push_back(base);
    }

    if (!root.contains("designs") || root["designs"].empty())
        throw std::invalid_argument("config must define at least one design");
    int d_idx = 0;
    for (const json& o : root["designs"]) {
        std::string ctx = "designs[" + std::to_string(d_idx) + "]";
        if (!o.contains("type"))
            throw std::invalid_argument(ctx + " is missing 'type'");
        std::string type = o["type"].get<std::string>();
        SystemDesign d;
        if (type == "fixed") d.params = FixedDesign{};
        else if (type == "flex") d.params = FlexDesign{};
        else if (type == "ondemand") d.params = OnDemandDesign{};
        else
            throw std::invalid_argument(ctx + ": type must be fixed, flex or ondemand");
        d.id = o.contains("id") ? o["id"].get<std::string>() : "design" + std::to_string(d_idx);

        json base_keys = o;
        base_keys.erase("per_scenario");
        if (o.contains("per_scenario") && !o["per_scenario"].is_array())
            throw std::invalid_argument(ctx + ": per_scenario must be an array");

        std::vector<SystemDesign> per_scenario;
        for (const auto& sc : cfg.scenarios) {
            SystemDesign ds = d;
            ds.id = d.id;
            apply_design_keys(ds, base_keys, ctx);
            if (o.contains("per_scenario")) {
                for (const json& ov : o["per_scenario"]) {
                    if (!ov.contains("scenario"))
                        throw std::invalid_argument(ctx + ": per_scenario entry needs 'scenario'");
                    if (ov["scenario"].get<std::string>() != sc.id) continue;
                    apply_design_keys(ds, ov, ctx + ".per_scenario");
                }
            }
            try {
                ds.validate();
            } catch (const std::exception& e) {
                throw std::invalid_argument(ctx + " (" + d.id + ", scenario " + sc.id +
                                            "): " + e.what());
            }
            per_scenario.push_back(std::move(ds));
        }
        cfg.design_ids.push_back(d.id);
        cfg.designs.push_back(std::move(per_scenario));
        ++d_idx;
    }

    if (root.contains("seeds")) {
        cfg.seeds = root["seeds"].get<std::vector<std::uint64_t>>();
        if (cfg.seeds.empty()) throw std::invalid_argument("seeds must not be empty");
    } else {
        cfg.seeds = {cfg.scenarios.front().seed};
    }

    cfg.cost.L = cfg.scenarios.front().L;
    cfg.cost.v_w = cfg.scenarios.front().v_w;
    cfg.cost.v_o = cfg.scenarios.front().v_o;
    cfg.cost.N = cfg.scenarios.front().lambda;
    cfg.cost.l = cfg.cost.L / 2.0;
    if (root.contains("fixed_cost")) {
        const json& c = root["fixed_cost"];
        check_keys(c, {"c", "P_a", "P_w", "P_v", "beta", "t_s", "l", "N"}, "fixed_cost");
        cfg.cost.c = num(c, "c", cfg.cost.c);
        cfg.cost.P_a = num(c, "P_a", cfg.cost.P_a);
        cfg.cost.P_w = num(c, "P_w", cfg.cost.P_w);
        cfg.cost.P_v = num(c, "P_v", cfg.cost.P_v);
        cfg.cost.beta = num(c, "beta", cfg.cost.beta * 3600.0) / 3600.0;  // seconds in config
        cfg.cost.t_s = num(c, "t_s", cfg.cost.t_s * 3600.0) / 3600.0;
        cfg.cost.l = num(c, "l", cfg.cost.l);
        cfg.cost.N = num(c, "N", cfg.cost.N);
    }
    cfg.cost.validate();

    if (root.contains("optimizer")) {
        const json& op = root["optimizer"];
        check_keys(op, {"S_min", "S_max", "f_min", "f_max", "f_step"}, "optimizer");
        cfg.optimizer.S_min = integer(op, "S_min", cfg.optimizer.S_min);
        cfg.optimizer.S_max = integer(op, "S_max", cfg.optimizer.S_max);
        cfg.optimizer.f_min = num(op, "f_min", cfg.optimizer.f_min);
        cfg.optimizer.f_max = num(op, "f_max", cfg.optimizer.f_max);
        cfg.optimizer.f_step = num(op, "f_step", cfg.optimizer.f_step);
    }
    if (root.contains("trace")) cfg.trace = root["trace"].get<bool>();

    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
    }
}

}  // namespace transit
