#pragma once

#include <stdexcept>
#include <string>

#include "regsim/pid.hpp"
#include "regsim/transfer_function.hpp"

namespace regsim {

enum class SystemKind { lfc, avr };

/// Non-reheat thermal unit: governor and turbine lags plus the primary
/// droop feedback constant.
struct ThermalParams {
    double governor_gain = 1.0;
    double governor_time = 0.08;   // s
    double turbine_gain = 1.0;
    double turbine_time = 0.3;     // s
    double droop = 2.4;            // Hz per pu MW of primary response
    double rated_power_mw = 2000.0;
    double nominal_load_mw = 1000.0;
};

inline void validate(const ThermalParams& p) {
    if (!(p.governor_time > 0.0) || !(p.turbine_time > 0.0))
        throw std::invalid_argument("ThermalParams: time constants must be positive");
    if (!(p.droop > 0.0)) throw std::invalid_argument("ThermalParams: droop must be positive");
}

/// Aggregate frequency dynamics. The first-order block gain/time constant are
/// derived from damping, inertia and nominal frequency:
///   gain = 1/D [Hz/pu MW],  time constant = 2H/(f0*D) [s].
struct PowerSystemParams {
    double damping = 0.00833;    // pu MW per Hz
    double inertia = 5.0;        // s
    double nominal_freq = 60.0;  // Hz

    double gain() const { return 1.0 / damping; }
    double time_constant() const { return 2.0 * inertia / (nominal_freq * damping); }
};

inline void validate(const PowerSystemParams& p) {
    if (!(p.damping > 0.0) || !(p.inertia > 0.0) || !(p.nominal_freq > 0.0))
        throw std::invalid_argument("PowerSystemParams: D, H, f0 must be positive");
}

/// PV farm seen from the grid side: inverter lag and L/C filter lag, with the
/// forecast operating point expressed on the thermal base.
struct PvChainParams {
    double inverter_time = 0.04;   // s
    double filter_time = 0.004;    // s
    double rated_power_mw = 1000.0;
    double operating_point_pu = 0.375;  // on the thermal base
};

inline void validate(const PvChainParams& p, const ThermalParams& th = {}) {
    if (!(p.inverter_time > 0.0) || !(p.filter_time > 0.0))
        throw std::invalid_argument("PvChainParams: time constants must be positive");
    const double cap = p.rated_power_mw / th.rated_power_mw;
    if (p.operating_point_pu < 0.0 || p.operating_point_pu > cap)
        throw std::invalid_argument("PvChainParams: operating point outside [0, rated/base]");
}

/// Excitation loop blocks: amplifier, exciter, generator field and the
/// terminal-voltage sensor.
struct AvrParams {
    double amplifier_gain = 10.0;
    double amplifier_time = 0.1;   // s
    double exciter_gain = 1.0;
    double exciter_time = 0.4;     // s
    double generator_gain = 1.0;
    double generator_time = 1.0;   // s
    double sensor_gain = 1.0;
    double sensor_time = 0.01;     // s
};

inline void validate(const AvrParams& p) {
    if (!(p.amplifier_time > 0.0) || !(p.exciter_time > 0.0) ||
        !(p.generator_time > 0.0) || !(p.sensor_time > 0.0))
        throw std::invalid_argument("AvrParams: time constants must be positive");
}

struct PlantParams {
    ThermalParams thermal;
    PowerSystemParams power_system;
    PvChainParams pv_chain;
    AvrParams avr;
};

/// Built-in parameter sets loadable by name from configs.
inline PlantParams plant_preset(const std::string& name) {
    if (name == "paper-appendix" || name.empty()) return PlantParams{};
    throw std::invalid_argument("unknown plant preset: " + name);
}

inline TransferFunction power_system_tf(const PowerSystemParams& p) {
    validate(p);
    return tf_first_order(p.gain(), p.time_constant());
}

inline TransferFunction governor_tf(const ThermalParams& p) {
    return tf_first_order(p.governor_gain, p.governor_time);
}

inline TransferFunction turbine_tf(const ThermalParams& p) {
    return tf_first_order(p.turbine_gain, p.turbine_time);
}

/// Governor * turbine * power-system cascade: the nominal plant from the
/// secondary control input to frequency deviation (relative degree 3).
inline TransferFunction lfc_open_loop(const ThermalParams& th, const PowerSystemParams& ps) {
    validate(th);
    validate(ps);
    return series(series(governor_tf(th), turbine_tf(th)), power_system_tf(ps));
}

/// Unity-gain double lag from PV power command to delivered PV power.
inline TransferFunction pv_chain_tf(const PvChainParams& pv) {
    if (!(pv.inverter_time > 0.0) || !(pv.filter_time > 0.0))
        throw std::invalid_argument("pv_chain_tf: time constants must be positive");
    return series(tf_first_order(1.0, pv.inverter_time), tf_first_order(1.0, pv.filter_time));
}

/// Amplifier * exciter * generator forward path (the AVR nominal plant,
/// relative degree 3).
inline TransferFunction avr_forward_path(const AvrParams& p) {
    validate(p);
    return series(series(tf_first_order(p.amplifier_gain, p.amplifier_time),
                         tf_first_order(p.exciter_gain, p.exciter_time)),
                  tf_first_order(p.generator_gain, p.generator_time));
}

inline TransferFunction avr_sensor_tf(const AvrParams& p) {
    return tf_first_order(p.sensor_gain, p.sensor_time);
}

/// Ideal PID block (kd s^2 + kp s + ki)/s; improper on purpose, only used
/// inside closed-loop compositions.
inline TransferFunction pid_tf(const PidGains& g) {
    return TransferFunction(Polynomial{g.ki, g.kp, g.kd}, Polynomial{0.0, 1.0});
}

/// Closed loop from voltage reference to terminal voltage: PID and the
/// amplifier/exciter/generator chain forward, sensor in the feedback path.
inline TransferFunction avr_closed_loop(const AvrParams& avr, const PidGains& pid) {
    return feedback(series(pid_tf(pid), avr_forward_path(avr)), avr_sensor_tf(avr), +1);
}

/// One explicit-Euler step of the frequency swing dynamics,
///   d(delta_f)/dt = (f0 / 2H) * (dP_gen - dP_load - D*delta_f),
/// kept as an independent cross-check of the first-order block realization.
inline double swing_step(double delta_f, double dp_gen, double dp_load,
                         const PowerSystemParams& ps, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("swing_step: dt must be positive");
    const double rate = ps.nominal_freq / (2.0 * ps.inertia);
    return delta_f + dt * rate * (dp_gen - dp_load - ps.damping * delta_f);
}

}  // namespace regsim
