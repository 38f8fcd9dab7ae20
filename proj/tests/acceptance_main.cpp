// Acceptance suite: runs the end-to-end checks the project promises, one
// printed PASS/FAIL line per criterion, nonzero exit when any fail.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "regsim/commands.hpp"
#include "regsim/config.hpp"
#include "regsim/csv.hpp"
#include "regsim/dobc.hpp"
#include "regsim/metrics.hpp"
#include "regsim/plant.hpp"
#include "regsim/presets.hpp"
#include "regsim/simulation.hpp"
#include "regsim/uncertainty.hpp"

using namespace regsim;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v) { return format_number(v); }

ScenarioConfig step12_config(const std::string& preset) {
    ScenarioConfig cfg;
    cfg.controller.preset = preset;
    cfg.disturbances.events.push_back(
        {0.0, DisturbanceChannel::pv, DisturbanceKind::step, -0.05625, 0.0});
    cfg.disturbances.events.push_back(
        {0.0, DisturbanceChannel::load, DisturbanceKind::step, 0.100, 0.0});
    return cfg;
}

// ---- criterion 1: derived power-system parameters ----
void criterion_1() {
    const PowerSystemParams ps{};  // D = 0.00833, H = 5, f0 = 60
    const double kp = ps.gain();
    const double tp = ps.time_constant();
    const bool ok = std::abs(kp - 120.0) / 120.0 <= 0.001 && std::abs(tp - 20.0) / 20.0 <= 0.001;
    report(1, "parameter derivation", ok, "Kp=" + fmt(kp) + " Tp=" + fmt(tp));
}

// ---- criterion 2: filter characterization ----
void criterion_2() {
    // published cutoff column for lambda in {5,1,0.5,0.2,0.15,0.1,0.05}
    const std::vector<std::pair<double, double>> published = {
        {5.0, 0.1018}, {1.0, 0.5088}, {0.5, 1.0177}, {0.2, 2.5442},
        {0.15, 3.3923}, {0.1, 5.0885}, {0.05, 10.1769}};
    bool ok = true;
    std::string detail;
    for (const auto& [lam, cutoff_ref] : published) {
        const TransferFunction b = make_filter(lam, 3);
        const double wc = cutoff_frequency(b);
        if (std::abs(wc - cutoff_ref) / cutoff_ref > 0.02) {
            ok = false;
            detail += " cutoff(lambda=" + fmt(lam) + ")=" + fmt(wc);
        }
        std::vector<double> omegas;
        for (double e = -3.0; e <= 2.0 + 1e-12; e += 0.05) omegas.push_back(std::pow(10.0, e));
        for (const auto& p : freq_response(b, omegas)) {
            const double lw = lam * p.omega;
            const double gain_ref = -30.0 * std::log10(1.0 + lw * lw);
            const double phase_ref = -3.0 * std::atan(lw) * 180.0 / std::numbers::pi;
            if (std::abs(p.gain_db - gain_ref) > 1e-6 ||
                std::abs(p.phase_deg - phase_ref) > 1e-6) {
                ok = false;
                detail += " closed-form mismatch at lambda=" + fmt(lam) + " w=" + fmt(p.omega);
                break;
            }
        }
    }
    report(2, "filter characterization", ok,
           ok ? "7 cutoffs within 2%, closed forms within 1e-6" : detail);
}

// ---- criterion 3: estimation-error identity at three frequencies ----
void criterion_3() {
    const double dt = 1e-3, lambda = 0.01;
    const TransferFunction plant_tf = lfc_open_loop({}, {});
    const TransferFunction b = make_filter(lambda, 3);
    bool ok = true;
    std::string detail;
    for (double omega : {0.01, 0.1, 1.0}) {
        StateSpaceModel plant = discretize_bilinear(plant_tf, dt);
        DisturbanceObserver obs(DobcConfig(plant_tf, lambda, 3), dt);
        const double horizon = std::max(4.0, 2.5 * 2.0 * std::numbers::pi / omega);
        const auto n = static_cast<std::size_t>(horizon / dt);
        std::vector<double> err(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double e = std::sin(omega * static_cast<double>(k) * dt);
            err[k] = obs.update(plant.step(e), 0.0) - e;
        }
        const double measured = testutil::sine_amplitude(err, dt, omega);
        const double expected = std::abs(b.evaluate({0.0, omega}) - 1.0);
        const double rel = std::abs(measured - expected) / expected;
        detail += " w=" + fmt(omega) + ": " + fmt(measured) + " vs " + fmt(expected) + ";";
        ok = ok && rel <= 0.01;
    }
    report(3, "observer estimation-error identity", ok, detail);
}

// ---- criterion 4: worst-case grid ----
void criterion_4() {
    const double published_pv[12] = {0.0187, 0.0375, 0.0562, 0.0187, 0.0375, 0.0562,
                                     0.0187, 0.0375, 0.0562, 0.0187, 0.0375, 0.0562};
    const double published_load[12] = {0.025, 0.050, 0.075, 0.100, 0.025, 0.050,
                                       0.075, 0.100, 0.025, 0.050, 0.075, 0.100};
    const double published_peak[12] = {0.005, 0.01, 0.015, 0.016, 0.006, 0.012,
                                       0.012, 0.017, 0.008, 0.008, 0.014, 0.019};

    ScenarioConfig cfg = step12_config("ipso-dobc");
    cfg.out_dir = "acceptance_out/worstcase";
    const int code = cmd_worstcase(cfg);

    const CsvTable grid = read_csv(cfg.out_dir + "/worstcase_grid.csv");
    bool pairs_ok = code == 0 && grid.rows.size() == 12;
    bool peaks_ok = true;
    int argmax = 0;
    double best = -1.0;
    std::string detail;
    for (std::size_t i = 0; i < grid.rows.size(); ++i) {
        const double dp_pv = parse_number(grid.rows[i][3]);
        const double dp_load = parse_number(grid.rows[i][6]);
        const double peak = parse_number(grid.rows[i][7]);
        // PV column is decimal-truncated in the published table
        if (!(dp_pv >= published_pv[i] - 1e-9 && dp_pv < published_pv[i] + 1e-4))
            pairs_ok = false;
        if (std::abs(dp_load - published_load[i]) > 1e-12) pairs_ok = false;
        if (std::abs(peak - published_peak[i]) / published_peak[i] > 0.5) {
            peaks_ok = false;
            detail += " test " + std::to_string(i + 1) + ": " + fmt(peak);
        }
        if (peak > best) { best = peak; argmax = static_cast<int>(i) + 1; }
    }
    const bool argmax_ok = argmax == 12;
    report(4, "worst-case grid", pairs_ok && peaks_ok && argmax_ok,
           "12 step pairs " + std::string(pairs_ok ? "exact" : "MISMATCH") +
               ", argmax=test " + std::to_string(argmax) + ", peaks within 50%" +
               (peaks_ok ? "" : detail));
}

// ---- criterion 5: controller comparison orderings ----
void criterion_5() {
    const std::vector<std::string> presets = {"ziegler-nichols", "bfoa", "imc",
                                              "ipso", "mabc", "ipso-dobc"};
    bool ok = true;
    std::string detail;
    for (const std::string condition : {"clean", "delay", "noise"}) {
        ScenarioConfig cfg = step12_config("ipso-dobc");
        cfg.compare_presets = presets;
        cfg.compare_condition = condition;
        cfg.out_dir = "acceptance_out/compare_" + condition;
        if (cmd_compare(cfg) != 0) {
            ok = false;
            detail += " " + condition + ": run failed;";
            continue;
        }
        const CsvTable t = read_csv(cfg.out_dir + "/comparison.csv");
        double ise_ipso = 0.0, ise_imc = 0.0, ise_mabc = 0.0;
        for (const auto& row : t.rows) {
            if (row[0] == "ipso-dobc") {
                for (std::size_t c = 6; c < 11; ++c)
                    if (row[c] != "1") {
                        ok = false;
                        detail += " " + condition + ": ipso-dobc rank " + row[c] + " on " +
                                  t.header[c] + ";";
                    }
            }
            if (row[0] == "ipso") ise_ipso = parse_number(row[3]);
            if (row[0] == "imc") ise_imc = parse_number(row[3]);
            if (row[0] == "mabc") ise_mabc = parse_number(row[3]);
        }
        if (!(ise_ipso < ise_imc && ise_ipso < ise_mabc)) {
            ok = false;
            detail += " " + condition + ": ipso ISE not below imc/mabc;";
        }
    }
    report(5, "controller-comparison orderings", ok,
           ok ? "ipso-dobc first on all indices in clean/delay/noise; ipso ISE below imc and mabc"
              : detail);
}

// ---- criterion 6: voltage-loop overshoot and steady state ----
void criterion_6() {
    auto overshoot = [](const std::string& preset, double delay) {
        ScenarioConfig cfg;
        cfg.system = SystemKind::avr;
        cfg.controller.preset = preset;
        cfg.loop.comm_delay = delay;
        cfg.disturbances.events.push_back(
            {0.0, DisturbanceChannel::vref, DisturbanceKind::step, 1.0, 0.0});
        return run_avr(cfg).indices.mo;
    };
    const double plain_clean = overshoot("nlta", 0.0);
    const double aug_clean = overshoot("nlta-dobc", 0.0);
    const double plain_delay = overshoot("nlta", 0.02);
    const double aug_delay = overshoot("nlta-dobc", 0.02);
    const bool overshoot_ok = aug_clean < plain_clean && aug_delay < plain_delay;

    bool settle_ok = true;
    std::string settle_detail;
    for (const auto& preset : avr_controller_presets()) {
        if (!(preset.gains.ki > 0.0)) continue;
        ScenarioConfig cfg;
        cfg.system = SystemKind::avr;
        cfg.controller.preset = preset.name;
        cfg.loop.t_end = 40.0;
        cfg.disturbances.events.push_back(
            {0.0, DisturbanceChannel::vref, DisturbanceKind::step, 1.0, 0.0});
        const double v_end = run_avr(cfg).channel("v_terminal").back();
        if (std::abs(v_end - 1.0) > 1e-4) {
            settle_ok = false;
            settle_detail += " " + preset.name + ": v_end=" + fmt(v_end);
        }
    }
    report(6, "voltage regulation with observer feed-forward", overshoot_ok && settle_ok,
           "overshoot clean " + fmt(aug_clean) + "<" + fmt(plain_clean) + ", delayed " +
               fmt(aug_delay) + "<" + fmt(plain_delay) +
               (settle_ok ? ", all presets settle to 1 within 1e-4" : settle_detail));
}

// ---- criterion 7: always-on property suite ----
void criterion_7() {
    bool ok = true;
    std::string detail;

    {  // superposition on the noise-free loop
        ScenarioConfig both = step12_config("ipso");
        ScenarioConfig pv = step12_config("ipso");
        ScenarioConfig load = step12_config("ipso");
        pv.disturbances.events.resize(1);
        load.disturbances.events.erase(load.disturbances.events.begin());
        both.loop.t_end = pv.loop.t_end = load.loop.t_end = 10.0;
        const SimResult r_both = run_lfc(both);
        const SimResult r_pv = run_lfc(pv);
        const SimResult r_load = run_lfc(load);
        const auto& f_both = r_both.channel("delta_f");
        const auto& f_pv = r_pv.channel("delta_f");
        const auto& f_load = r_load.channel("delta_f");
        double worst = 0.0;
        for (std::size_t k = 0; k < f_both.size(); ++k)
            worst = std::max(worst, std::abs(f_both[k] - (f_pv[k] + f_load[k])));
        if (worst > 1e-9) { ok = false; detail += " superposition " + fmt(worst) + ";"; }
    }

    {  // DC preservation under discretization
        Rng rng(31);
        double worst = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            Polynomial den{1.0};
            const int poles = 1 + static_cast<int>(rng.uniform() * 3.0);
            for (int i = 0; i < poles; ++i) den = den * Polynomial{1.0, 0.02 + 4.0 * rng.uniform()};
            const TransferFunction tf(Polynomial{0.5 + 3.0 * rng.uniform()}, den);
            StateSpaceModel m = discretize_bilinear(tf, 0.01);
            double y = 0.0;
            for (int s = 0; s < 15000; ++s) y = m.step(1.0);  // 35x slowest factor
            worst = std::max(worst, std::abs(y - tf.dc_gain()) / std::abs(tf.dc_gain()));
        }
        if (worst > 1e-6) { ok = false; detail += " dc-preservation " + fmt(worst) + ";"; }
    }

    {  // power-balance residual at every sample
        ScenarioConfig cfg = step12_config("ipso-dobc");
        cfg.loop.t_end = 10.0;
        const SimResult r = run_lfc(cfg);
        const auto& f = r.channel("delta_f");
        const auto& pg = r.channel("delta_Pg");
        const auto& ppv = r.channel("delta_Ppv");
        const auto& pl = r.channel("delta_Pl");
        const PowerSystemParams ps{};
        const double coeff = 2.0 * ps.inertia / ps.nominal_freq;
        double worst = 0.0;
        for (std::size_t k = 1; k < f.size(); ++k) {
            const double pin = 0.5 * (pg[k] + ppv[k] - pl[k] + pg[k - 1] + ppv[k - 1] - pl[k - 1]);
            const double res = pin - ps.damping * 0.5 * (f[k] + f[k - 1]) -
                               coeff * (f[k] - f[k - 1]) / cfg.loop.dt;
            worst = std::max(worst, std::abs(res));
        }
        if (worst > 1e-9) { ok = false; detail += " power-balance " + fmt(worst) + ";"; }
    }

    {  // backward reduction greedy step equals brute force on small sets
        Rng rng(17);
        bool reduce_ok = true;
        for (int trial = 0; trial < 25 && reduce_ok; ++trial) {
            const int n = 3 + static_cast<int>(rng.uniform() * 4.0);
            ScenarioSet set;
            double total = 0.0;
            std::vector<double> w(static_cast<std::size_t>(n));
            for (double& v : w) { v = 0.05 + rng.uniform(); total += v; }
            for (int i = 0; i < n; ++i)
                set.scenarios.push_back({i, rng.uniform() * 0.2 - 0.1, rng.uniform() * 0.2 - 0.1,
                                         w[static_cast<std::size_t>(i)] / total});
            const int target = 1 + static_cast<int>(rng.uniform() * (n - 1));

            std::vector<Scenario> expect = set.scenarios;
            while (static_cast<int>(expect.size()) > target) {
                std::size_t bi = 0, bj = 0;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < expect.size(); ++i) {
                    double dmin = std::numeric_limits<double>::infinity();
                    std::size_t jm = i;
                    for (std::size_t jj = 0; jj < expect.size(); ++jj) {
                        if (jj == i) continue;
                        const double d = std::hypot(expect[i].dp_pv - expect[jj].dp_pv,
                                                    expect[i].dp_load - expect[jj].dp_load);
                        if (d < dmin) { dmin = d; jm = jj; }
                    }
                    if (expect[i].probability * dmin < best) {
                        best = expect[i].probability * dmin;
                        bi = i;
                        bj = jm;
                    }
                }
                expect[bj].probability += expect[bi].probability;
                expect.erase(expect.begin() + static_cast<std::ptrdiff_t>(bi));
            }
            double tot = 0.0;
            for (const auto& s : expect) tot += s.probability;

            const ScenarioSet got = backward_reduce(set, target);
            if (got.scenarios.size() != expect.size()) { reduce_ok = false; break; }
            double sum = 0.0;
            for (std::size_t i = 0; i < expect.size(); ++i) {
                sum += got.scenarios[i].probability;
                if (got.scenarios[i].id != expect[i].id ||
                    std::abs(got.scenarios[i].probability - expect[i].probability / tot) > 1e-12)
                    reduce_ok = false;
            }
            if (std::abs(sum - 1.0) > 1e-12) reduce_ok = false;
        }
        if (!reduce_ok) { ok = false; detail += " backward-reduction oracle;"; }
    }

    {  // sampler distribution checks at the 99% Kolmogorov bound
        const double bound = 1.628 / 100.0;  // n = 1e4
        const auto xb = sample_beta({2.0, 5.0}, 10000, 2);
        const double db = testutil::ks_statistic(
            xb, [](double v) { return testutil::beta_cdf_int(v, 2, 5); });
        const auto xn = sample_normal({0.0, 1.0}, 10000, 3);
        const double dn = testutil::ks_statistic(xn, [](double v) { return testutil::normal_cdf(v); });
        if (db >= bound || dn >= bound) {
            ok = false;
            detail += " KS beta=" + fmt(db) + " normal=" + fmt(dn) + ";";
        }
    }

    {  // bit-identical reruns under a fixed seed
        ScenarioConfig cfg = step12_config("ipso-dobc");
        cfg.loop.t_end = 5.0;
        cfg.loop.noise_seed = 77;
        cfg.disturbances.events.push_back(
            {0.0, DisturbanceChannel::load, DisturbanceKind::white_noise_on, 0.0, 0.01});
        const SimResult a = run_lfc(cfg);
        const SimResult b = run_lfc(cfg);
        for (std::size_t c = 0; c < a.channels.size(); ++c)
            if (a.channels[c].data != b.channels[c].data) {
                ok = false;
                detail += " rerun not bit-identical;";
                break;
            }
    }

    report(7, "property suite", ok, ok ? "all six property families hold" : detail);
}

}  // namespace

int main() {
    std::filesystem::create_directories("acceptance_out");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (g_failures == 0) {
        std::printf("acceptance: all 7 criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
