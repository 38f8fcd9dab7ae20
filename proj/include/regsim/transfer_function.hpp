#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "regsim/polynomial.hpp"

namespace regsim {

/// One point of a frequency sweep. Phase is unwrapped across the sweep that
/// produced it (no artificial ±180° jumps) and reported in degrees.
struct FrequencyPoint {
    double omega;      // rad/s
    double gain_db;    // 20*log10|H(j*omega)|
    double phase_deg;  // unwrapped
};

/// Rational transfer function in the Laplace variable s. Improper functions
/// (numerator degree above denominator degree) are constructible so that
/// intermediate algebra like an ideal PID block can be expressed; realization
/// rejects them.
class TransferFunction {
public:
    TransferFunction(Polynomial num, Polynomial den)
        : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero())
            throw std::invalid_argument("TransferFunction: denominator is identically zero");
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    int relative_degree() const {
        return static_cast<int>(den_.degree()) - static_cast<int>(num_.degree());
    }
    bool is_proper() const { return relative_degree() >= 0; }

    std::complex<double> evaluate(std::complex<double> s) const { return num_(s) / den_(s); }

    /// num(0)/den(0); throws if the function has a pole at s = 0.
    double dc_gain() const {
        if (den_(0.0) == 0.0)
            throw std::domain_error("TransferFunction::dc_gain: pole at s = 0");
        return num_(0.0) / den_(0.0);
    }

private:
    Polynomial num_, den_;
};

/// gain / (1 + s*time_constant)
inline TransferFunction tf_first_order(double gain, double time_constant) {
    if (!(time_constant > 0.0))
        throw std::invalid_argument("tf_first_order: time constant must be positive");
    return TransferFunction(Polynomial{gain}, Polynomial{1.0, time_constant});
}

/// Cascade a*b as plain polynomial products. Common factors are kept, not
/// cancelled, so compositions stay auditable.
inline TransferFunction series(const TransferFunction& a, const TransferFunction& b) {
    return TransferFunction(a.num() * b.num(), a.den() * b.den());
}

/// forward / (1 + sign*forward*back), as one rational function.
inline TransferFunction feedback(const TransferFunction& forward,
                                 const TransferFunction& back, int sign = +1) {
    if (sign != +1 && sign != -1)
        throw std::invalid_argument("feedback: sign must be +1 or -1");
    Polynomial num = forward.num() * back.den();
    Polynomial den = forward.den() * back.den() +
                     (static_cast<double>(sign) * (forward.num() * back.num()));
    if (den.is_zero())
        throw std::domain_error("feedback: degenerate loop, denominator vanishes identically");
    return TransferFunction(std::move(num), std::move(den));
}

namespace detail {

inline void check_not_on_pole(const TransferFunction& tf, double omega) {
    const std::complex<double> jw(0.0, omega);
    const double mag = std::abs(tf.den()(jw));
    double scale = 0.0;
    double wk = 1.0;
    for (double c : tf.den().coeffs()) {
        scale += std::abs(c) * wk;
        wk *= omega;
    }
    if (mag <= 1e-12 * scale)
        throw std::domain_error("freq_response: omega coincides with an imaginary-axis pole");
}

inline double gain_db_at(const TransferFunction& tf, double omega) {
    check_not_on_pole(tf, omega);
    return 20.0 * std::log10(std::abs(tf.evaluate({0.0, omega})));
}

}  // namespace detail

/// Evaluate H(j*omega) over a sweep. Phase is unwrapped point-to-point in the
/// given order, so pass frequencies sorted ascending when the absolute phase
/// branch matters (e.g. lags beyond -180°).
inline std::vector<FrequencyPoint> freq_response(const TransferFunction& tf,
                                                 const std::vector<double>& omegas) {
    std::vector<FrequencyPoint> out;
    out.reserve(omegas.size());
    double prev_phase = 0.0;
    bool first = true;
    for (double w : omegas) {
        if (!(w > 0.0)) throw std::invalid_argument("freq_response: omega must be positive");
        detail::check_not_on_pole(tf, w);
        const std::complex<double> h = tf.evaluate({0.0, w});
        double phase = std::arg(h);
        if (!first) {
            while (phase - prev_phase > std::numbers::pi) phase -= 2.0 * std::numbers::pi;
            while (phase - prev_phase < -std::numbers::pi) phase += 2.0 * std::numbers::pi;
        }
        prev_phase = phase;
        first = false;
        out.push_back({w, 20.0 * std::log10(std::abs(h)), phase * 180.0 / std::numbers::pi});
    }
    return out;
}

/// Smallest omega in [1e-6, 1e9] rad/s where the gain has fallen exactly 3 dB
/// below the DC gain, located by geometric scan plus bisection (relative
/// tolerance 1e-6).
inline double cutoff_frequency(const TransferFunction& tf) {
    if (tf.den()(0.0) == 0.0 || tf.num()(0.0) == 0.0)
        throw std::invalid_argument("cutoff_frequency: DC gain must be finite and nonzero");
    const double target = 20.0 * std::log10(std::abs(tf.dc_gain())) - 3.0;

    const double w_min = 1e-6, w_max = 1e9, factor = 1.02;
    double lo = w_min;
    double g_lo = detail::gain_db_at(tf, lo);
    if (g_lo <= target) {
        // already below target at the lower end of the search range
        return lo;
    }
    double hi = lo;
    bool bracketed = false;
    while (hi < w_max) {
        hi = std::min(hi * factor, w_max);
        const double g_hi = detail::gain_db_at(tf, hi);
        if (g_hi <= target) { bracketed = true; break; }
        lo = hi;
    }
    if (!bracketed)
        throw std::runtime_error("cutoff_frequency: no -3 dB crossing in [1e-6, 1e9] rad/s");

    for (int i = 0; i < 200 && (hi - lo) > 1e-6 * lo; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (detail::gain_db_at(tf, mid) <= target) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace regsim
