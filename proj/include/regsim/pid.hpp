#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace regsim {

/// PID gains with a first-order derivative filter coefficient N: the
/// derivative path is kd * N s/(s+N), so the raw difference never reaches the
/// actuator unfiltered.
struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double derivative_filter = 100.0;  // N
};

inline void validate(const PidGains& g) {
    if (g.kd != 0.0 && !(g.derivative_filter > 0.0))
        throw std::invalid_argument("PidGains: derivative filter N must be positive when kd != 0");
}

/// Discrete PID: trapezoidal integral, first-order-filtered backward
/// difference for the derivative.
class PidController {
public:
    PidController(const PidGains& gains, double dt) : g_(gains), dt_(dt) {
        validate(gains);
        if (!(dt > 0.0)) throw std::invalid_argument("PidController: dt must be positive");
    }

    void reset() { integral_ = 0.0; deriv_ = 0.0; prev_error_ = 0.0; }

    double step(double error) {
        integral_ += dt_ * 0.5 * (error + prev_error_);
        const double raw = (error - prev_error_) / dt_;
        const double a = g_.derivative_filter * dt_;
        deriv_ = (a * raw + deriv_) / (1.0 + a);
        prev_error_ = error;
        return g_.kp * error + g_.ki * integral_ + g_.kd * deriv_;
    }

    const PidGains& gains() const { return g_; }

private:
    PidGains g_;
    double dt_;
    double integral_ = 0.0;
    double deriv_ = 0.0;
    double prev_error_ = 0.0;
};

}  // namespace regsim
