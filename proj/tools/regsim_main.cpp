#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regsim/commands.hpp"
#include "regsim/config.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> t_end;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
    auto* opt = cmd->add_option("--config", f.config_path, "scenario config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", f.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", f.seed, "noise/sampling seed (overrides config)");
    cmd->add_option("--dt", f.dt, "time step in seconds (overrides config)");
    cmd->add_option("--t-end", f.t_end, "simulation horizon in seconds (overrides config)");
    cmd->add_flag("--svg", f.svg, "also write SVG plots");
}

regsim::ScenarioConfig load(const CommonFlags& f) {
    regsim::ScenarioConfig cfg =
        f.config_path.empty() ? regsim::ScenarioConfig{} : regsim::load_config(f.config_path);
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (f.seed) cfg.loop.noise_seed = *f.seed;
    if (f.dt) cfg.loop.dt = *f.dt;
    if (f.t_end) cfg.loop.t_end = *f.t_end;
    return cfg;
}

std::vector<double> parse_lambdas(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw regsim::ConfigError("bode: --lambdas parsed to an empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency and voltage regulation simulator for a PV-integrated "
                 "single-area thermal power system"};
    app.require_subcommand(1);

    CommonFlags sim_f, wc_f, st_f, bode_f, cmp_f;

    auto* sim = app.add_subcommand("simulate", "run one configured scenario");
    add_common(sim, sim_f, true);

    auto* wc = app.add_subcommand("worstcase", "run the 12 worst-case test conditions");
    add_common(wc, wc_f, true);

    auto* st = app.add_subcommand("stochastic",
                                  "Monte Carlo scenario study with backward reduction");
    add_common(st, st_f, true);

    auto* bode = app.add_subcommand("bode", "filter characterization table and plant sweep");
    add_common(bode, bode_f, false);
    std::string lambdas_csv = "5,4,3,2,1,0.5,0.2,0.15,0.1,0.05,0.01";
    bool no_plant = false;
    bode->add_option("--lambdas", lambdas_csv, "comma-separated filter parameters");
    bode->add_flag("--no-plant-sweep", no_plant, "skip the open-loop plant sweep CSV");

    auto* cmp = app.add_subcommand("compare", "rank controller presets under one condition");
    add_common(cmp, cmp_f, true);

    CLI11_PARSE(app, argc, argv);

    return regsim::run_guarded([&]() -> int {
        if (sim->parsed()) return regsim::cmd_simulate(load(sim_f), {sim_f.svg});
        if (wc->parsed()) return regsim::cmd_worstcase(load(wc_f), {wc_f.svg});
        if (st->parsed()) return regsim::cmd_stochastic(load(st_f), {st_f.svg});
        if (bode->parsed())
            return regsim::cmd_bode(load(bode_f), parse_lambdas(lambdas_csv), !no_plant,
                                    {bode_f.svg});
        if (cmp->parsed()) return regsim::cmd_compare(load(cmp_f), {cmp_f.svg});
        return 2;
    });
}
