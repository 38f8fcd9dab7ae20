#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "regsim/dobc.hpp"
#include "regsim/metrics.hpp"
#include "regsim/rng.hpp"
#include "regsim/scenario.hpp"
#include "regsim/state_space.hpp"

namespace regsim {

struct Channel {
    std::string name;
    std::vector<double> data;
};

/// Uniformly sampled closed-loop trajectories plus the performance indices of
/// the loop's primary error signal. `unstable` marks a run aborted on
/// divergence; its channels hold the partial trajectory.
struct SimResult {
    std::vector<double> time;
    std::vector<Channel> channels;
    PerformanceIndices indices{};
    bool unstable = false;

    const std::vector<double>& channel(std::string_view name) const {
        for (const auto& c : channels)
            if (c.name == name) return c.data;
        throw std::out_of_range("SimResult: no channel named " + std::string(name));
    }
};

/// Zero-mean Gaussian sequence; one value per sample (held over the sample).
inline std::vector<double> white_noise(double sigma, std::uint64_t seed, std::size_t n) {
    if (sigma < 0.0) throw std::invalid_argument("white_noise: sigma must be >= 0");
    std::vector<double> out(n, 0.0);
    if (sigma == 0.0) return out;
    Rng rng(seed);
    for (double& v : out) v = rng.normal(0.0, sigma);
    return out;
}

/// Shift a sampled channel by a whole number of samples (comm_delay/dt,
/// rounded), zero-padded before the delay has elapsed.
inline std::vector<double> apply_delay(std::span<const double> samples, double comm_delay,
                                       double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("apply_delay: dt must be positive");
    if (comm_delay < 0.0) throw std::invalid_argument("apply_delay: negative delay");
    const auto shift = static_cast<std::size_t>(std::llround(comm_delay / dt));
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t k = shift; k < samples.size(); ++k) out[k] = samples[k - shift];
    return out;
}

namespace detail {

inline std::size_t delay_samples(const LoopSettings& s) {
    const double ratio = s.comm_delay / s.dt;
    const auto k = static_cast<long long>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(k)) > 1e-9)
        std::cerr << "warning: comm_delay " << s.comm_delay << " s rounded to " << k
                  << " samples of " << s.dt << " s\n";
    return static_cast<std::size_t>(k);
}

// Per-sample step magnitudes and active noise sigma from the event program.
struct ProgramState {
    const DisturbanceProgram& program;
    double step_at(double t, DisturbanceChannel ch) const {
        double level = 0.0;
        for (const auto& e : program.events)
            if (e.channel == ch && e.kind == DisturbanceKind::step && t >= e.time)
                level += e.magnitude;
        return level;
    }
    double noise_sigma_at(double t, DisturbanceChannel ch) const {
        double sigma = 0.0;
        for (const auto& e : program.events)
            if (e.channel == ch && e.kind == DisturbanceKind::white_noise_on && t >= e.time)
                sigma = e.noise_sigma;
        return sigma;
    }
    bool has_noise(DisturbanceChannel ch) const {
        for (const auto& e : program.events)
            if (e.channel == ch && e.kind == DisturbanceKind::white_noise_on) return true;
        return false;
    }
};

}  // namespace detail

/// Fixed-step closed-loop run of the frequency-regulation loop: droop closed
/// algebraically inside the sample, PID (and observer) acting on the
/// previous, possibly delayed, frequency measurement.
inline SimResult run_lfc(const ScenarioConfig& cfg) {
    validate(cfg.loop);
    validate(cfg.disturbances);
    validate(cfg.plant.thermal);
    validate(cfg.plant.power_system);
    validate(cfg.plant.pv_chain, cfg.plant.thermal);
    const ControllerConfig ctl = resolve_controller(cfg);

    const double dt = cfg.loop.dt;
    const auto n = static_cast<std::size_t>(std::llround(cfg.loop.t_end / dt)) + 1;

    StateSpaceModel governor = discretize_bilinear(governor_tf(cfg.plant.thermal), dt);
    StateSpaceModel turbine = discretize_bilinear(turbine_tf(cfg.plant.thermal), dt);
    StateSpaceModel power_system = discretize_bilinear(power_system_tf(cfg.plant.power_system), dt);
    StateSpaceModel pv_chain = discretize_bilinear(pv_chain_tf(cfg.plant.pv_chain), dt);
    PidController pid(ctl.gains, dt);

    std::vector<DisturbanceObserver> observer;
    if (ctl.dobc) {
        DobcConfig dc(lfc_open_loop(cfg.plant.thermal, cfg.plant.power_system),
                      ctl.dobc_lambda, ctl.dobc_filter_order);
        observer.emplace_back(dc, dt);
    }

    const detail::ProgramState prog{cfg.disturbances};
    const std::vector<double> load_noise =
        prog.has_noise(DisturbanceChannel::load)
            ? white_noise(1.0, cfg.loop.noise_seed, n)  // unit draws, scaled by active sigma
            : std::vector<double>(n, 0.0);

    const std::size_t delay = detail::delay_samples(cfg.loop);
    const double droop = cfg.plant.thermal.droop;
    const double feedthrough =
        power_system.d() * turbine.d() * governor.d();  // algebraic droop path

    std::vector<double> t(n), f(n), pg(n), ppv(n), pl(n), upid(n), dhat(n);
    std::vector<double> u_applied_hist(n, 0.0);
    bool unstable = false;
    std::size_t filled = n;

    for (std::size_t k = 0; k < n; ++k) {
        const double tk = static_cast<double>(k) * dt;
        const double pv_cmd = prog.step_at(tk, DisturbanceChannel::pv);
        const double load = prog.step_at(tk, DisturbanceChannel::load) +
                            prog.noise_sigma_at(tk, DisturbanceChannel::load) * load_noise[k];
        const double pv_delivered = pv_chain.step(pv_cmd);

        double f_meas = 0.0;
        if (cfg.loop.delay_location == DelayLocation::measurement) {
            if (k >= 1 + delay) f_meas = f[k - 1 - delay];
        } else {
            if (k >= 1) f_meas = f[k - 1];
        }

        const double u_pid = pid.step(-f_meas);
        double u = u_pid;
        if (ctl.dobc) {
            u = dobc_augmented_control(u_pid, ctl.dobc_gain * observer[0].estimate());
            observer[0].update(f_meas, u);
        }
        u_applied_hist[k] = u;
        double u_plant = u;
        if (cfg.loop.delay_location == DelayLocation::control)
            u_plant = k >= delay ? u_applied_hist[k - delay] : 0.0;

        // Close the droop loop inside the sample: every block has direct
        // feedthrough under the trapezoidal map, so solve the scalar loop
        //   df = Cp xp + Dp*(turbine_out + e_dist)
        // with governor input u_plant - df/droop.
        const double e_dist = pv_delivered - load;
        const double gov_state = governor.output(0.0);
        const double tur_state = turbine.output(0.0);
        const double ps_state = power_system.output(0.0);
        const double rhs =
            ps_state +
            power_system.d() *
                (tur_state + turbine.d() * (gov_state + governor.d() * u_plant) + e_dist);
        const double df = rhs / (1.0 + feedthrough / droop);

        const double gov_in = u_plant - df / droop;
        const double gov_out = gov_state + governor.d() * gov_in;
        const double tur_out = tur_state + turbine.d() * gov_out;
        governor.advance(gov_in);
        turbine.advance(gov_out);
        power_system.advance(tur_out + e_dist);

        t[k] = tk;
        f[k] = df;
        pg[k] = tur_out;
        ppv[k] = pv_delivered;
        pl[k] = load;
        upid[k] = u_pid;
        dhat[k] = ctl.dobc ? observer[0].estimate() : 0.0;

        if (!std::isfinite(df) || std::abs(df) > 10.0) {
            unstable = true;
            // drop a non-finite last sample so channels stay NaN/Inf-free
            filled = std::isfinite(df) ? k + 1 : std::max<std::size_t>(k, 1);
            break;
        }
    }

    SimResult result;
    result.unstable = unstable;
    t.resize(filled); f.resize(filled); pg.resize(filled); ppv.resize(filled);
    pl.resize(filled); upid.resize(filled); dhat.resize(filled);
    result.indices = compute_indices(f, dt, OvershootConvention::absolute_peak);
    result.time = std::move(t);
    result.channels = {{"delta_f", std::move(f)},   {"delta_Pg", std::move(pg)},
                       {"delta_Ppv", std::move(ppv)}, {"delta_Pl", std::move(pl)},
                       {"u_pid", std::move(upid)},  {"d_hat", std::move(dhat)}};
    return result;
}

/// Fixed-step closed-loop run of the voltage-regulation loop. The reference
/// comes from vref step events; load-channel events act as an additive
/// disturbance at the generator output. The observer reads the same sensor
/// measurement the PID error uses.
inline SimResult run_avr(const ScenarioConfig& cfg) {
    validate(cfg.loop);
    validate(cfg.disturbances);
    validate(cfg.plant.avr);
    const ControllerConfig ctl = resolve_controller(cfg);

    const double dt = cfg.loop.dt;
    const auto n = static_cast<std::size_t>(std::llround(cfg.loop.t_end / dt)) + 1;
    const AvrParams& p = cfg.plant.avr;

    StateSpaceModel amplifier = discretize_bilinear(tf_first_order(p.amplifier_gain, p.amplifier_time), dt);
    StateSpaceModel exciter = discretize_bilinear(tf_first_order(p.exciter_gain, p.exciter_time), dt);
    StateSpaceModel generator = discretize_bilinear(tf_first_order(p.generator_gain, p.generator_time), dt);
    StateSpaceModel sensor = discretize_bilinear(avr_sensor_tf(p), dt);
    PidController pid(ctl.gains, dt);

    std::vector<DisturbanceObserver> observer;
    if (ctl.dobc) {
        DobcConfig dc(avr_forward_path(p), ctl.dobc_lambda, ctl.dobc_filter_order);
        observer.emplace_back(dc, dt);
    }

    const detail::ProgramState prog{cfg.disturbances};
    const std::vector<double> load_noise =
        prog.has_noise(DisturbanceChannel::load)
            ? white_noise(1.0, cfg.loop.noise_seed, n)
            : std::vector<double>(n, 0.0);
    const std::size_t delay = detail::delay_samples(cfg.loop);

    std::vector<double> t(n), vt(n), vs(n), upid(n), dhat(n);
    std::vector<double> u_applied_hist(n, 0.0);
    bool unstable = false;
    std::size_t filled = n;

    for (std::size_t k = 0; k < n; ++k) {
        const double tk = static_cast<double>(k) * dt;
        const double vref = prog.step_at(tk, DisturbanceChannel::vref);
        const double gen_disturbance =
            prog.step_at(tk, DisturbanceChannel::load) +
            prog.noise_sigma_at(tk, DisturbanceChannel::load) * load_noise[k];

        double v_meas = 0.0;
        if (cfg.loop.delay_location == DelayLocation::measurement) {
            if (k >= 1 + delay) v_meas = vs[k - 1 - delay];
        } else {
            if (k >= 1) v_meas = vs[k - 1];
        }

        const double u_pid = pid.step(vref - v_meas);
        double u = u_pid;
        if (ctl.dobc) {
            u = dobc_augmented_control(u_pid, ctl.dobc_gain * observer[0].estimate());
            observer[0].update(v_meas, u);
        }
        u_applied_hist[k] = u;
        double u_plant = u;
        if (cfg.loop.delay_location == DelayLocation::control)
            u_plant = k >= delay ? u_applied_hist[k - delay] : 0.0;

        const double amp_out = amplifier.step(u_plant);
        const double exc_out = exciter.step(amp_out);
        const double v_term = generator.step(exc_out) + gen_disturbance;
        const double v_sense = sensor.step(v_term);

        t[k] = tk;
        vt[k] = v_term;
        vs[k] = v_sense;
        upid[k] = u_pid;
        dhat[k] = ctl.dobc ? observer[0].estimate() : 0.0;

        if (!std::isfinite(v_term) || std::abs(v_term) > 10.0) {
            unstable = true;
            filled = std::isfinite(v_term) ? k + 1 : std::max<std::size_t>(k, 1);
            break;
        }
    }

    SimResult result;
    result.unstable = unstable;
    t.resize(filled); vt.resize(filled); vs.resize(filled); upid.resize(filled); dhat.resize(filled);
    // error relative to the settled value; overshoot measured above it
    std::vector<double> err(vt.size());
    const double v_final = vt.back();
    for (std::size_t k = 0; k < vt.size(); ++k) err[k] = vt[k] - v_final;
    result.indices = compute_indices(err, dt, OvershootConvention::above_final);
    result.time = std::move(t);
    result.channels = {{"v_terminal", std::move(vt)},
                       {"v_sensor", std::move(vs)},
                       {"u_pid", std::move(upid)},
                       {"d_hat", std::move(dhat)}};
    return result;
}

inline SimResult run_scenario(const ScenarioConfig& cfg) {
    return cfg.system == SystemKind::lfc ? run_lfc(cfg) : run_avr(cfg);
}

}  // namespace regsim
