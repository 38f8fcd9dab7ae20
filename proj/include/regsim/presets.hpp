#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "regsim/pid.hpp"
#include "regsim/plant.hpp"

namespace regsim {

/// A named controller configuration: published PID tunings for this
/// benchmark, optionally with the disturbance-observer feed-forward enabled.
struct ControllerPreset {
    std::string name;
    PidGains gains;
    bool dobc = false;
};

inline const std::vector<ControllerPreset>& lfc_controller_presets() {
    static const std::vector<ControllerPreset> presets = {
        {"ziegler-nichols", {3.872, 8.031, 0.466, 100.0}, false},
        {"bfoa", {3.185, 4.672, 0.655, 100.0}, false},
        {"imc", {0.666, 1.018, 0.223, 100.0}, false},
        {"ipso", {3.935, 8.147, 1.576, 100.0}, false},
        {"mabc", {0.486, 1.0, 0.154, 100.0}, false},
        {"ipso-dobc", {3.935, 8.147, 1.576, 100.0}, true},
    };
    return presets;
}

inline const std::vector<ControllerPreset>& avr_controller_presets() {
    static const std::vector<ControllerPreset> presets = {
        {"ziegler-nichols", {1.021, 1.874, 0.139, 100.0}, false},
        {"abc", {1.652, 0.408, 0.365, 100.0}, false},
        {"pso", {1.777, 0.382, 0.318, 100.0}, false},
        {"dea", {1.949, 0.443, 0.342, 100.0}, false},
        {"nlta", {1.299, 1.379, 0.788, 100.0}, false},
        {"bfoa", {0.788, 0.608, 0.335, 100.0}, false},
        {"nlta-dobc", {1.299, 1.379, 0.788, 100.0}, true},
    };
    return presets;
}

inline const ControllerPreset& controller_preset(SystemKind system, const std::string& name) {
    const auto& table =
        system == SystemKind::lfc ? lfc_controller_presets() : avr_controller_presets();
    for (const auto& p : table)
        if (p.name == name) return p;
    throw std::invalid_argument("unknown controller preset: " + name);
}

}  // namespace regsim
