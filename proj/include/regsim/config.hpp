#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "regsim/scenario.hpp"

namespace regsim {

/// Raised for malformed or semantically invalid configs; the CLI maps it to
/// exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace cfgdetail {

using nlohmann::json;

inline void check_keys(const json& j, std::initializer_list<const char*> known,
                       const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ConfigError("config: unknown field '" + where + "." + it.key() + "'");
    }
}

inline double num(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw ConfigError("config: field '" + where + "." + key + "' must be a number");
    return j[key].get<double>();
}

inline int integer(const json& j, const char* key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer())
        throw ConfigError("config: field '" + where + "." + key + "' must be an integer");
    return j[key].get<int>();
}

inline std::string str(const json& j, const char* key, const std::string& fallback,
                       const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string())
        throw ConfigError("config: field '" + where + "." + key + "' must be a string");
    return j[key].get<std::string>();
}

inline bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean())
        throw ConfigError("config: field '" + where + "." + key + "' must be a boolean");
    return j[key].get<bool>();
}

}  // namespace cfgdetail

inline ScenarioConfig parse_config(const std::string& text, const std::string& source = "config") {
    using nlohmann::json;
    using namespace cfgdetail;

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // turn the byte offset into a line/column for the diagnostic
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
        }
        std::ostringstream msg;
        msg << source << ":" << line << ":" << col << ": " << e.what();
        throw ConfigError(msg.str());
    }
    if (!j.is_object()) throw ConfigError(source + ": top level must be an object");
    check_keys(j, {"schema_version", "system", "plant", "controller", "disturbances", "loop",
                   "budget", "stochastic", "compare", "output"}, source);

    const int version = integer(j, "schema_version", 0, source);
    if (version != 1)
        throw ConfigError(source + ": unsupported schema_version (expected 1)");

    ScenarioConfig cfg;
    const std::string system = str(j, "system", "lfc", source);
    if (system == "lfc") cfg.system = SystemKind::lfc;
    else if (system == "avr") cfg.system = SystemKind::avr;
    else throw ConfigError(source + ": field 'system' must be \"lfc\" or \"avr\"");

    if (j.contains("plant")) {
        const json& p = j["plant"];
        check_keys(p, {"preset", "thermal", "power_system", "pv_chain", "avr"}, "plant");
        cfg.plant_preset = str(p, "preset", cfg.plant_preset, "plant");
        cfg.plant = plant_preset(cfg.plant_preset);
        if (p.contains("thermal")) {
            const json& t = p["thermal"];
            check_keys(t, {"governor_gain", "governor_time", "turbine_gain", "turbine_time",
                           "droop", "rated_power_mw", "nominal_load_mw"}, "plant.thermal");
            auto& th = cfg.plant.thermal;
            th.governor_gain = num(t, "governor_gain", th.governor_gain, "plant.thermal");
            th.governor_time = num(t, "governor_time", th.governor_time, "plant.thermal");
            th.turbine_gain = num(t, "turbine_gain", th.turbine_gain, "plant.thermal");
            th.turbine_time = num(t, "turbine_time", th.turbine_time, "plant.thermal");
            th.droop = num(t, "droop", th.droop, "plant.thermal");
            th.rated_power_mw = num(t, "rated_power_mw", th.rated_power_mw, "plant.thermal");
            th.nominal_load_mw = num(t, "nominal_load_mw", th.nominal_load_mw, "plant.thermal");
        }
        if (p.contains("power_system")) {
            const json& q = p["power_system"];
            check_keys(q, {"damping", "inertia", "nominal_freq"}, "plant.power_system");
            auto& ps = cfg.plant.power_system;
            ps.damping = num(q, "damping", ps.damping, "plant.power_system");
            ps.inertia = num(q, "inertia", ps.inertia, "plant.power_system");
            ps.nominal_freq = num(q, "nominal_freq", ps.nominal_freq, "plant.power_system");
        }
        if (p.contains("pv_chain")) {
            const json& q = p["pv_chain"];
            check_keys(q, {"inverter_time", "filter_time", "rated_power_mw", "operating_point_pu"},
                       "plant.pv_chain");
            auto& pv = cfg.plant.pv_chain;
            pv.inverter_time = num(q, "inverter_time", pv.inverter_time, "plant.pv_chain");
            pv.filter_time = num(q, "filter_time", pv.filter_time, "plant.pv_chain");
            pv.rated_power_mw = num(q, "rated_power_mw", pv.rated_power_mw, "plant.pv_chain");
            pv.operating_point_pu =
                num(q, "operating_point_pu", pv.operating_point_pu, "plant.pv_chain");
        }
        if (p.contains("avr")) {
            const json& q = p["avr"];
            check_keys(q, {"amplifier_gain", "amplifier_time", "exciter_gain", "exciter_time",
                           "generator_gain", "generator_time", "sensor_gain", "sensor_time"},
                       "plant.avr");
            auto& a = cfg.plant.avr;
            a.amplifier_gain = num(q, "amplifier_gain", a.amplifier_gain, "plant.avr");
            a.amplifier_time = num(q, "amplifier_time", a.amplifier_time, "plant.avr");
            a.exciter_gain = num(q, "exciter_gain", a.exciter_gain, "plant.avr");
            a.exciter_time = num(q, "exciter_time", a.exciter_time, "plant.avr");
            a.generator_gain = num(q, "generator_gain", a.generator_gain, "plant.avr");
            a.generator_time = num(q, "generator_time", a.generator_time, "plant.avr");
            a.sensor_gain = num(q, "sensor_gain", a.sensor_gain, "plant.avr");
            a.sensor_time = num(q, "sensor_time", a.sensor_time, "plant.avr");
        }
    } else {
        cfg.plant = plant_preset(cfg.plant_preset);
    }

    if (j.contains("controller")) {
        const json& c = j["controller"];
        check_keys(c, {"preset", "gains", "dobc", "dobc_lambda", "dobc_filter_order", "dobc_gain"},
                   "controller");
        auto& ctl = cfg.controller;
        ctl.preset = str(c, "preset", "", "controller");
        if (c.contains("gains")) {
            const json& g = c["gains"];
            check_keys(g, {"kp", "ki", "kd", "derivative_filter"}, "controller.gains");
            ctl.gains.kp = num(g, "kp", 0.0, "controller.gains");
            ctl.gains.ki = num(g, "ki", 0.0, "controller.gains");
            ctl.gains.kd = num(g, "kd", 0.0, "controller.gains");
            ctl.gains.derivative_filter =
                num(g, "derivative_filter", ctl.gains.derivative_filter, "controller.gains");
        } else if (ctl.preset.empty()) {
            throw ConfigError("config: controller needs a 'preset' or explicit 'gains'");
        }
        ctl.dobc = boolean(c, "dobc", false, "controller");
        ctl.dobc_lambda = num(c, "dobc_lambda", ctl.dobc_lambda, "controller");
        ctl.dobc_filter_order = integer(c, "dobc_filter_order", ctl.dobc_filter_order, "controller");
        ctl.dobc_gain = num(c, "dobc_gain", ctl.dobc_gain, "controller");
        if (!ctl.preset.empty()) {
            try {
                controller_preset(cfg.system, ctl.preset);  // reject unknown names here
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
        }
    } else {
        throw ConfigError("config: missing 'controller' section");
    }

    if (j.contains("disturbances")) {
        if (!j["disturbances"].is_array())
            throw ConfigError("config: 'disturbances' must be an array");
        int idx = 0;
        for (const json& e : j["disturbances"]) {
            const std::string where = "disturbances[" + std::to_string(idx++) + "]";
            check_keys(e, {"time", "channel", "kind", "magnitude", "noise_sigma"}, where);
            DisturbanceEvent ev;
            ev.time = num(e, "time", 0.0, where);
            const std::string ch = str(e, "channel", "load", where);
            if (ch == "pv") ev.channel = DisturbanceChannel::pv;
            else if (ch == "load") ev.channel = DisturbanceChannel::load;
            else if (ch == "vref") ev.channel = DisturbanceChannel::vref;
            else throw ConfigError("config: " + where + ".channel must be pv|load|vref");
            const std::string kind = str(e, "kind", "step", where);
            if (kind == "step") ev.kind = DisturbanceKind::step;
            else if (kind == "white-noise-on") ev.kind = DisturbanceKind::white_noise_on;
            else throw ConfigError("config: " + where + ".kind must be step|white-noise-on");
            ev.magnitude = num(e, "magnitude", 0.0, where);
            ev.noise_sigma = num(e, "noise_sigma", 0.0, where);
            cfg.disturbances.events.push_back(ev);
        }
    }

    if (j.contains("loop")) {
        const json& l = j["loop"];
        check_keys(l, {"dt", "t_end", "comm_delay", "noise_seed", "delay_location"}, "loop");
        cfg.loop.dt = num(l, "dt", cfg.loop.dt, "loop");
        cfg.loop.t_end = num(l, "t_end", cfg.loop.t_end, "loop");
        cfg.loop.comm_delay = num(l, "comm_delay", cfg.loop.comm_delay, "loop");
        if (l.contains("noise_seed")) {
            if (!l["noise_seed"].is_number_integer() ||
                (l["noise_seed"].is_number_integer() && !l["noise_seed"].is_number_unsigned() &&
                 l["noise_seed"].get<long long>() < 0))
                throw ConfigError("config: field 'loop.noise_seed' must be a non-negative integer");
            cfg.loop.noise_seed = l["noise_seed"].get<std::uint64_t>();
        }
        const std::string loc = str(l, "delay_location", "measurement", "loop");
        if (loc == "measurement") cfg.loop.delay_location = DelayLocation::measurement;
        else if (loc == "control") cfg.loop.delay_location = DelayLocation::control;
        else throw ConfigError("config: loop.delay_location must be measurement|control");
    }

    if (j.contains("budget")) {
        const json& b = j["budget"];
        check_keys(b, {"test_condition", "pv_lo", "pv_hi", "load_lo", "load_hi",
                       "ratio_lo", "ratio_hi"}, "budget");
        if (b.contains("test_condition")) {
            const int tc = integer(b, "test_condition", 12, "budget");
            const auto all = test_condition_budgets();
            if (tc < 1 || tc > static_cast<int>(all.size()))
                throw ConfigError("config: budget.test_condition must be 1..12");
            cfg.budget = all[static_cast<std::size_t>(tc - 1)];
        }
        cfg.budget.pv_lo = num(b, "pv_lo", cfg.budget.pv_lo, "budget");
        cfg.budget.pv_hi = num(b, "pv_hi", cfg.budget.pv_hi, "budget");
        cfg.budget.load_lo = num(b, "load_lo", cfg.budget.load_lo, "budget");
        cfg.budget.load_hi = num(b, "load_hi", cfg.budget.load_hi, "budget");
        cfg.budget.ratio_lo = num(b, "ratio_lo", cfg.budget.ratio_lo, "budget");
        cfg.budget.ratio_hi = num(b, "ratio_hi", cfg.budget.ratio_hi, "budget");
    }

    if (j.contains("stochastic")) {
        const json& s = j["stochastic"];
        check_keys(s, {"samples", "reduce_to", "beta_alpha", "beta_beta", "load_sigma_fraction",
                       "scenarios_csv"}, "stochastic");
        cfg.stochastic.samples = integer(s, "samples", cfg.stochastic.samples, "stochastic");
        cfg.stochastic.reduce_to = integer(s, "reduce_to", cfg.stochastic.reduce_to, "stochastic");
        cfg.stochastic.pv_dist.alpha =
            num(s, "beta_alpha", cfg.stochastic.pv_dist.alpha, "stochastic");
        cfg.stochastic.pv_dist.beta =
            num(s, "beta_beta", cfg.stochastic.pv_dist.beta, "stochastic");
        cfg.stochastic.load_sigma_fraction =
            num(s, "load_sigma_fraction", cfg.stochastic.load_sigma_fraction, "stochastic");
        cfg.stochastic.scenarios_csv =
            str(s, "scenarios_csv", cfg.stochastic.scenarios_csv, "stochastic");
    }

    if (j.contains("compare")) {
        const json& c = j["compare"];
        check_keys(c, {"presets", "condition"}, "compare");
        if (c.contains("presets")) {
            if (!c["presets"].is_array())
                throw ConfigError("config: compare.presets must be an array of names");
            for (const json& p : c["presets"]) {
                if (!p.is_string())
                    throw ConfigError("config: compare.presets entries must be strings");
                cfg.compare_presets.push_back(p.get<std::string>());
            }
        }
        cfg.compare_condition = str(c, "condition", cfg.compare_condition, "compare");
        if (cfg.compare_condition != "clean" && cfg.compare_condition != "delay" &&
            cfg.compare_condition != "noise")
            throw ConfigError("config: compare.condition must be clean|delay|noise");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, {"dir"}, "output");
        cfg.out_dir = str(o, "dir", cfg.out_dir, "output");
    }

    try {
        validate(cfg.disturbances);
        validate(cfg.loop);
        validate(cfg.budget);
        validate(cfg.plant.thermal);
        validate(cfg.plant.power_system);
        validate(cfg.plant.pv_chain, cfg.plant.thermal);
        validate(cfg.plant.avr);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

inline std::string serialize_config(const ScenarioConfig& cfg) {
    using nlohmann::json;
    json j;
    j["schema_version"] = 1;
    j["system"] = cfg.system == SystemKind::lfc ? "lfc" : "avr";
    j["plant"] = {
        {"preset", cfg.plant_preset},
        {"thermal",
         {{"governor_gain", cfg.plant.thermal.governor_gain},
          {"governor_time", cfg.plant.thermal.governor_time},
          {"turbine_gain", cfg.plant.thermal.turbine_gain},
          {"turbine_time", cfg.plant.thermal.turbine_time},
          {"droop", cfg.plant.thermal.droop},
          {"rated_power_mw", cfg.plant.thermal.rated_power_mw},
          {"nominal_load_mw", cfg.plant.thermal.nominal_load_mw}}},
        {"power_system",
         {{"damping", cfg.plant.power_system.damping},
          {"inertia", cfg.plant.power_system.inertia},
          {"nominal_freq", cfg.plant.power_system.nominal_freq}}},
        {"pv_chain",
         {{"inverter_time", cfg.plant.pv_chain.inverter_time},
          {"filter_time", cfg.plant.pv_chain.filter_time},
          {"rated_power_mw", cfg.plant.pv_chain.rated_power_mw},
          {"operating_point_pu", cfg.plant.pv_chain.operating_point_pu}}},
        {"avr",
         {{"amplifier_gain", cfg.plant.avr.amplifier_gain},
          {"amplifier_time", cfg.plant.avr.amplifier_time},
          {"exciter_gain", cfg.plant.avr.exciter_gain},
          {"exciter_time", cfg.plant.avr.exciter_time},
          {"generator_gain", cfg.plant.avr.generator_gain},
          {"generator_time", cfg.plant.avr.generator_time},
          {"sensor_gain", cfg.plant.avr.sensor_gain},
          {"sensor_time", cfg.plant.avr.sensor_time}}}};
    j["controller"] = {{"preset", cfg.controller.preset},
                       {"gains",
                        {{"kp", cfg.controller.gains.kp},
                         {"ki", cfg.controller.gains.ki},
                         {"kd", cfg.controller.gains.kd},
                         {"derivative_filter", cfg.controller.gains.derivative_filter}}},
                       {"dobc", cfg.controller.dobc},
                       {"dobc_lambda", cfg.controller.dobc_lambda},
                       {"dobc_filter_order", cfg.controller.dobc_filter_order},
                       {"dobc_gain", cfg.controller.dobc_gain}};
    j["disturbances"] = json::array();
    for (const auto& e : cfg.disturbances.events) {
        const char* ch = e.channel == DisturbanceChannel::pv      ? "pv"
                         : e.channel == DisturbanceChannel::load ? "load"
                                                                 : "vref";
        const char* kind = e.kind == DisturbanceKind::step ? "step" : "white-noise-on";
        j["disturbances"].push_back({{"time", e.time},
                                     {"channel", ch},
                                     {"kind", kind},
                                     {"magnitude", e.magnitude},
                                     {"noise_sigma", e.noise_sigma}});
    }
    j["loop"] = {{"dt", cfg.loop.dt},
                 {"t_end", cfg.loop.t_end},
                 {"comm_delay", cfg.loop.comm_delay},
                 {"noise_seed", cfg.loop.noise_seed},
                 {"delay_location",
                  cfg.loop.delay_location == DelayLocation::measurement ? "measurement"
                                                                        : "control"}};
    j["budget"] = {{"pv_lo", cfg.budget.pv_lo},     {"pv_hi", cfg.budget.pv_hi},
                   {"load_lo", cfg.budget.load_lo}, {"load_hi", cfg.budget.load_hi},
                   {"ratio_lo", cfg.budget.ratio_lo}, {"ratio_hi", cfg.budget.ratio_hi}};
    j["stochastic"] = {{"samples", cfg.stochastic.samples},
                       {"reduce_to", cfg.stochastic.reduce_to},
                       {"beta_alpha", cfg.stochastic.pv_dist.alpha},
                       {"beta_beta", cfg.stochastic.pv_dist.beta},
                       {"load_sigma_fraction", cfg.stochastic.load_sigma_fraction},
                       {"scenarios_csv", cfg.stochastic.scenarios_csv}};
    j["compare"] = {{"presets", cfg.compare_presets}, {"condition", cfg.compare_condition}};
    j["output"] = {{"dir", cfg.out_dir}};
    return j.dump(2) + "\n";
}

}  // namespace regsim
