#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "regsim/config.hpp"
#include "regsim/csv.hpp"
#include "regsim/dobc.hpp"
#include "regsim/metrics.hpp"
#include "regsim/parallel.hpp"
#include "regsim/simulation.hpp"
#include "regsim/svg.hpp"
#include "regsim/uncertainty.hpp"

namespace regsim {

struct CommandOptions {
    bool svg = false;
};

namespace cmddetail {

inline void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

inline std::string join(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

inline OperatingPoint operating_point(const ScenarioConfig& cfg) {
    return {cfg.plant.pv_chain.operating_point_pu,
            cfg.plant.thermal.nominal_load_mw / cfg.plant.thermal.rated_power_mw};
}

/// Replace the disturbance program with simultaneous PV/load steps at t = 0
/// (signed deviations).
inline ScenarioConfig with_steps(const ScenarioConfig& base, double dp_pv, double dp_load) {
    ScenarioConfig cfg = base;
    cfg.disturbances.events.clear();
    if (dp_pv != 0.0)
        cfg.disturbances.events.push_back(
            {0.0, DisturbanceChannel::pv, DisturbanceKind::step, dp_pv, 0.0});
    if (dp_load != 0.0)
        cfg.disturbances.events.push_back(
            {0.0, DisturbanceChannel::load, DisturbanceKind::step, dp_load, 0.0});
    return cfg;
}

inline void write_timeseries(const std::string& path, const SimResult& r) {
    CsvTable t;
    t.header.push_back("t");
    for (const auto& c : r.channels) t.header.push_back(c.name);
    t.rows.reserve(r.time.size());
    for (std::size_t k = 0; k < r.time.size(); ++k) {
        std::vector<std::string> row;
        row.reserve(t.header.size());
        row.push_back(format_number(r.time[k]));
        for (const auto& c : r.channels) row.push_back(format_number(c.data[k]));
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

inline std::vector<std::string> indices_row(const std::string& name,
                                            const PerformanceIndices& pi) {
    return {name, format_number(pi.itae), format_number(pi.iae), format_number(pi.ise),
            format_number(pi.itse), format_number(pi.mo)};
}

inline const char* primary_channel(SystemKind k) {
    return k == SystemKind::lfc ? "delta_f" : "v_terminal";
}

}  // namespace cmddetail

/// Run one configured scenario; writes timeseries.csv and indices.csv (and
/// plot.svg on request). Returns 3 when the run diverged.
inline int cmd_simulate(const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    using namespace cmddetail;
    ensure_out_dir(cfg.out_dir);
    const SimResult r = run_scenario(cfg);

    write_timeseries(join(cfg.out_dir, "timeseries.csv"), r);
    CsvTable idx;
    idx.header = {"controller", "itae", "iae", "ise", "itse", "mo", "status"};
    const ControllerConfig ctl = resolve_controller(cfg);
    idx.rows.push_back(indices_row(ctl.preset.empty() ? "custom" : ctl.preset, r.indices));
    idx.rows.back().push_back(r.unstable ? "unstable" : "ok");
    write_csv(join(cfg.out_dir, "indices.csv"), idx);

    if (opt.svg) {
        LinePlot plot(cfg.system == SystemKind::lfc ? "Frequency deviation"
                                                    : "Terminal voltage",
                      "t [s]", cfg.system == SystemKind::lfc ? "delta_f [Hz]" : "v [pu]");
        plot.add_series(primary_channel(cfg.system), r.time, r.channel(primary_channel(cfg.system)));
        plot.write(join(cfg.out_dir, "plot.svg"));
    }

    if (r.unstable) {
        std::cerr << "unstable run: |" << primary_channel(cfg.system)
                  << "| exceeded the divergence threshold; partial CSV written\n";
        return 3;
    }
    std::cout << "wrote " << join(cfg.out_dir, "timeseries.csv") << " and indices.csv\n";
    return 0;
}

/// Run every built-in worst-case test condition, write the grid CSV and
/// report the argmax condition.
inline int cmd_worstcase(const ScenarioConfig& cfg, const CommandOptions& opt = {},
                         const std::vector<UncertaintyBudget>& budgets = test_condition_budgets()) {
    using namespace cmddetail;
    if (cfg.system != SystemKind::lfc)
        throw ConfigError("worstcase: requires an LFC config");
    ensure_out_dir(cfg.out_dir);
    const OperatingPoint op = operating_point(cfg);

    CsvTable grid;
    grid.header = {"test", "gamma_pv_lo", "gamma_pv_hi", "dp_pv",
                   "gamma_load_lo", "gamma_load_hi", "dp_load", "delta_f_max"};
    std::vector<WorstCaseStep> steps;
    for (const auto& b : budgets) steps.push_back(worst_case_select(b, op));
    std::vector<SimResult> results(budgets.size());
    parallel_for(budgets.size(), [&](std::size_t i) {
        results[i] = run_lfc(with_steps(cfg, -steps[i].dp_pv, +steps[i].dp_load));
    });

    int argmax_label = 0;
    double argmax_value = -1.0;
    bool any_unstable = false;
    std::vector<double> peak_per_test;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        const auto& b = budgets[i];
        any_unstable = any_unstable || results[i].unstable;
        const double peak = results[i].indices.mo;
        peak_per_test.push_back(peak);
        grid.rows.push_back({std::to_string(b.label), format_number(b.pv_lo),
                             format_number(b.pv_hi), format_number(steps[i].dp_pv),
                             format_number(b.load_lo), format_number(b.load_hi),
                             format_number(steps[i].dp_load), format_number(peak)});
        if (peak > argmax_value) { argmax_value = peak; argmax_label = b.label; }
    }
    write_csv(join(cfg.out_dir, "worstcase_grid.csv"), grid);

    if (opt.svg) {
        LinePlot plot("Peak frequency deviation per test condition", "test", "max |delta_f| [Hz]");
        std::vector<double> xs;
        for (const auto& b : budgets) xs.push_back(b.label);
        plot.add_series("delta_f_max", xs, peak_per_test);
        plot.write(join(cfg.out_dir, "worstcase.svg"));
    }

    std::cout << "worst case: test " << argmax_label << " with max |delta_f| = "
              << format_number(argmax_value) << " Hz\n"
              << "wrote " << join(cfg.out_dir, "worstcase_grid.csv") << "\n";
    return any_unstable ? 3 : 0;
}

/// Monte Carlo scenario study: sample within the configured budget, reduce,
/// simulate the representative set and write per-scenario indices plus the
/// min/max frequency envelope.
inline int cmd_stochastic(const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    using namespace cmddetail;
    if (cfg.system != SystemKind::lfc)
        throw ConfigError("stochastic: requires an LFC config");
    if (cfg.stochastic.reduce_to < 1 || cfg.stochastic.reduce_to > cfg.stochastic.samples)
        throw ConfigError("stochastic: reduce_to must be in [1, samples]");
    ensure_out_dir(cfg.out_dir);
    const OperatingPoint op = operating_point(cfg);

    const NormalParams load_dist{op.load_pu, cfg.stochastic.load_sigma_fraction * op.load_pu};
    ScenarioSet set;
    if (!cfg.stochastic.scenarios_csv.empty()) {
        set = read_scenarios_csv(cfg.stochastic.scenarios_csv);
        if (set.scenarios.empty())
            throw ConfigError("stochastic: scenario CSV is empty: " + cfg.stochastic.scenarios_csv);
        if (cfg.stochastic.reduce_to < static_cast<int>(set.scenarios.size()))
            set = backward_reduce(set, cfg.stochastic.reduce_to);
    } else {
        set = sample_scenarios(cfg.budget, op, cfg.stochastic.pv_dist, load_dist,
                               cfg.stochastic.samples, cfg.loop.noise_seed);
        set = backward_reduce(set, cfg.stochastic.reduce_to);
    }
    write_scenarios_csv(join(cfg.out_dir, "scenarios.csv"), set);

    std::vector<SimResult> results(set.scenarios.size());
    parallel_for(set.scenarios.size(), [&](std::size_t i) {
        results[i] = run_lfc(with_steps(cfg, set.scenarios[i].dp_pv, set.scenarios[i].dp_load));
    });

    CsvTable idx;
    idx.header = {"scenario_id", "dP_pv_pu", "dP_load_pu", "probability",
                  "delta_f_max", "itae", "iae", "ise", "itse", "mo"};
    std::vector<double> env_min, env_max, time;
    bool any_unstable = false;
    double worst_peak = 0.0;
    for (std::size_t i = 0; i < set.scenarios.size(); ++i) {
        const auto& s = set.scenarios[i];
        const SimResult& r = results[i];
        any_unstable = any_unstable || r.unstable;
        const auto& f = r.channel("delta_f");
        if (time.empty()) {
            time = r.time;
            env_min = f;
            env_max = f;
        } else {
            for (std::size_t k = 0; k < std::min(f.size(), env_min.size()); ++k) {
                env_min[k] = std::min(env_min[k], f[k]);
                env_max[k] = std::max(env_max[k], f[k]);
            }
        }
        worst_peak = std::max(worst_peak, r.indices.mo);
        idx.rows.push_back({std::to_string(s.id), format_number(s.dp_pv),
                            format_number(s.dp_load), format_number(s.probability),
                            format_number(r.indices.mo), format_number(r.indices.itae),
                            format_number(r.indices.iae), format_number(r.indices.ise),
                            format_number(r.indices.itse), format_number(r.indices.mo)});
    }
    write_csv(join(cfg.out_dir, "scenario_indices.csv"), idx);

    CsvTable env;
    env.header = {"t", "delta_f_min", "delta_f_max"};
    for (std::size_t k = 0; k < time.size(); ++k)
        env.rows.push_back({format_number(time[k]), format_number(env_min[k]),
                            format_number(env_max[k])});
    write_csv(join(cfg.out_dir, "envelope.csv"), env);

    if (opt.svg) {
        LinePlot plot("Frequency envelope across reduced scenarios", "t [s]", "delta_f [Hz]");
        plot.add_series("min", time, env_min);
        plot.add_series("max", time, env_max);
        plot.write(join(cfg.out_dir, "envelope.svg"));
    }

    const double band = 0.05 * cfg.plant.power_system.nominal_freq;
    std::cout << "simulated " << set.scenarios.size() << " reduced scenarios (from "
              << cfg.stochastic.samples << " samples); max |delta_f| = "
              << format_number(worst_peak) << " Hz"
              << (worst_peak <= band ? " (within " : " (OUTSIDE ")
              << format_number(band) << " Hz band)\n"
              << "wrote scenarios.csv, scenario_indices.csv, envelope.csv in "
              << cfg.out_dir << "\n";
    return any_unstable ? 3 : 0;
}

/// Filter characterization table (gain/phase at 0.1 rad/s plus cutoff) for a
/// list of filter parameters, and optionally the open-loop plant sweep.
inline int cmd_bode(const ScenarioConfig& cfg, const std::vector<double>& lambdas,
                    bool plant_sweep = true, const CommandOptions& opt = {}) {
    using namespace cmddetail;
    ensure_out_dir(cfg.out_dir);

    CsvTable table;
    table.header = {"lambda", "gain_db_at_0.1rad_s", "phase_deg_at_0.1rad_s", "cutoff_rad_s"};
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw ConfigError("bode: lambda values must be positive");
        const TransferFunction b = make_filter(lam, 3);
        const auto fp = freq_response(b, {0.1});
        table.rows.push_back({format_number(lam), format_number(fp[0].gain_db),
                              format_number(fp[0].phase_deg),
                              format_number(cutoff_frequency(b))});
    }
    write_csv(join(cfg.out_dir, "filter_table.csv"), table);

    std::vector<double> omegas;
    for (double e = -3.0; e <= 2.0 + 1e-9; e += 0.025) omegas.push_back(std::pow(10.0, e));

    if (plant_sweep) {
        const TransferFunction plant =
            lfc_open_loop(cfg.plant.thermal, cfg.plant.power_system);
        CsvTable sweep;
        sweep.header = {"omega_rad_s", "gain_db", "phase_deg"};
        for (const auto& p : freq_response(plant, omegas))
            sweep.rows.push_back({format_number(p.omega), format_number(p.gain_db),
                                  format_number(p.phase_deg)});
        write_csv(join(cfg.out_dir, "plant_bode.csv"), sweep);
    }

    if (opt.svg) {
        LinePlot plot("Filter gain vs frequency", "log10(omega [rad/s])", "gain [dB]");
        for (double lam : lambdas) {
            const TransferFunction b = make_filter(lam, 3);
            std::vector<double> xs, ys;
            for (const auto& p : freq_response(b, omegas)) {
                xs.push_back(std::log10(p.omega));
                ys.push_back(p.gain_db);
            }
            plot.add_series("lambda=" + format_number(lam), xs, ys);
        }
        plot.write(join(cfg.out_dir, "bode.svg"));
    }

    std::cout << "wrote " << join(cfg.out_dir, "filter_table.csv")
              << (plant_sweep ? " and plant_bode.csv" : "") << "\n";
    return 0;
}

/// Run the configured controller presets under one test condition (clean,
/// measurement delay, or load white noise) and rank them per index.
inline int cmd_compare(const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    using namespace cmddetail;
    if (cfg.compare_presets.empty())
        throw ConfigError("compare: config must name at least one controller preset");
    for (const auto& name : cfg.compare_presets) {
        try {
            controller_preset(cfg.system, name);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("compare: ") + e.what());
        }
    }
    ensure_out_dir(cfg.out_dir);

    ScenarioConfig base = cfg;
    if (base.disturbances.events.empty() && base.system == SystemKind::lfc) {
        const WorstCaseStep step = worst_case_select(base.budget, operating_point(base));
        base = with_steps(base, -step.dp_pv, +step.dp_load);
    }
    if (base.disturbances.events.empty() && base.system == SystemKind::avr)
        base.disturbances.events.push_back(
            {0.0, DisturbanceChannel::vref, DisturbanceKind::step, 1.0, 0.0});

    if (cfg.compare_condition == "delay") {
        if (base.loop.comm_delay <= 0.0) base.loop.comm_delay = 0.02;
    } else {
        base.loop.comm_delay = 0.0;
    }
    if (cfg.compare_condition == "noise") {
        bool has = false;
        for (const auto& e : base.disturbances.events)
            has = has || e.kind == DisturbanceKind::white_noise_on;
        if (!has)
            base.disturbances.events.push_back(
                {0.0, DisturbanceChannel::load, DisturbanceKind::white_noise_on, 0.0, 0.01});
    }

    std::vector<SimResult> batch(cfg.compare_presets.size());
    parallel_for(cfg.compare_presets.size(), [&](std::size_t i) {
        ScenarioConfig run_cfg = base;
        run_cfg.controller = ControllerConfig{};
        run_cfg.controller.preset = cfg.compare_presets[i];
        run_cfg.controller.dobc_lambda = cfg.controller.dobc_lambda;
        run_cfg.controller.dobc_filter_order = cfg.controller.dobc_filter_order;
        batch[i] = run_scenario(run_cfg);
    });

    std::vector<std::pair<std::string, PerformanceIndices>> results;
    std::vector<std::pair<std::string, SimResult>> runs;
    bool any_unstable = false;
    for (std::size_t i = 0; i < cfg.compare_presets.size(); ++i) {
        any_unstable = any_unstable || batch[i].unstable;
        results.emplace_back(cfg.compare_presets[i], batch[i].indices);
        runs.emplace_back(cfg.compare_presets[i], std::move(batch[i]));
    }

    CsvTable table;
    table.header = {"controller", "itae", "iae", "ise", "itse", "mo",
                    "rank_itae", "rank_iae", "rank_ise", "rank_itse", "rank_mo"};
    if (results.size() == 1) {
        auto row = indices_row(results[0].first, results[0].second);
        for (int i = 0; i < 5; ++i) row.push_back("1");
        table.rows.push_back(std::move(row));
    } else {
        for (const auto& rc : rank_controllers(results)) {
            auto row = indices_row(rc.name, rc.indices);
            for (int r : rc.rank) row.push_back(std::to_string(r));
            table.rows.push_back(std::move(row));
        }
    }
    write_csv(join(cfg.out_dir, "comparison.csv"), table);

    if (opt.svg) {
        LinePlot plot("Controller comparison (" + cfg.compare_condition + ")", "t [s]",
                      cfg.system == SystemKind::lfc ? "delta_f [Hz]" : "v [pu]");
        for (const auto& [name, r] : runs)
            plot.add_series(name, r.time, r.channel(primary_channel(cfg.system)));
        plot.write(join(cfg.out_dir, "comparison.svg"));
    }

    std::cout << "condition: " << cfg.compare_condition << "\n";
    for (const auto& row : table.rows)
        std::cout << "  " << row[0] << "  itae=" << row[1] << " iae=" << row[2]
                  << " ise=" << row[3] << " itse=" << row[4] << " mo=" << row[5] << "\n";
    std::cout << "wrote " << join(cfg.out_dir, "comparison.csv") << "\n";
    return any_unstable ? 3 : 0;
}

/// Map exceptions to the documented exit codes: 2 for config problems,
/// 1 for anything else unexpected.
template <typename Fn>
int run_guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace regsim
