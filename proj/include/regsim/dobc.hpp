#pragma once

#include <stdexcept>

#include "regsim/state_space.hpp"
#include "regsim/transfer_function.hpp"

namespace regsim {

/// Low-pass estimator filter 1/(lambda*s + 1)^order, unity DC gain.
inline TransferFunction make_filter(double lambda, int order) {
    if (!(lambda > 0.0)) throw std::invalid_argument("make_filter: lambda must be positive");
    if (order < 1) throw std::invalid_argument("make_filter: order must be >= 1");
    return TransferFunction(Polynomial{1.0},
                            Polynomial::pow(Polynomial{1.0, lambda}, order));
}

/// Disturbance-observer configuration: the nominal plant whose inverse the
/// observer carries and the low-pass filter shaping the estimate. The filter
/// order must cover the plant's relative degree so filter*inverse stays
/// proper and realizable.
struct DobcConfig {
    DobcConfig(TransferFunction nominal_plant, double lambda = 0.01, int filter_order = 3)
        : nominal_plant_(std::move(nominal_plant)), lambda_(lambda), filter_order_(filter_order) {
        if (!(lambda > 0.0)) throw std::invalid_argument("DobcConfig: lambda must be positive");
        if (filter_order < 1) throw std::invalid_argument("DobcConfig: filter order must be >= 1");
        if (nominal_plant_.num().is_zero())
            throw std::invalid_argument("DobcConfig: nominal plant has zero numerator");
        if (filter_order < nominal_plant_.relative_degree())
            throw std::domain_error(
                "DobcConfig: filter order below the plant relative degree; "
                "filter * inverse-plant would be improper");
    }

    const TransferFunction& nominal_plant() const { return nominal_plant_; }
    double lambda() const { return lambda_; }
    int filter_order() const { return filter_order_; }

    TransferFunction filter() const { return make_filter(lambda_, filter_order_); }

    /// filter(s) * nominal_plant(s)^-1, the measured-output branch.
    TransferFunction output_branch() const {
        const TransferFunction b = filter();
        return TransferFunction(b.num() * nominal_plant_.den(),
                                b.den() * nominal_plant_.num());
    }

private:
    TransferFunction nominal_plant_;
    double lambda_;
    int filter_order_;
};

/// Frequency-domain disturbance observer. Each update advances the two
/// filtered branches one sample:
///   estimate = [B*Un^-1](measured output) - [B](applied control input)
/// which converges to the lumped input-side disturbance when the model is
/// exact and the filter DC gain is one.
class DisturbanceObserver {
public:
    DisturbanceObserver(const DobcConfig& cfg, double dt)
        : output_branch_(discretize_bilinear(cfg.output_branch(), dt)),
          input_branch_(discretize_bilinear(cfg.filter(), dt)) {}

    double update(double measured_output, double control_input) {
        estimate_ = output_branch_.step(measured_output) - input_branch_.step(control_input);
        return estimate_;
    }

    double estimate() const { return estimate_; }

    void reset() {
        output_branch_.reset();
        input_branch_.reset();
        estimate_ = 0.0;
    }

private:
    StateSpaceModel output_branch_;
    StateSpaceModel input_branch_;
    double estimate_ = 0.0;
};

/// Feed-forward compensation junction at the plant input.
inline double dobc_augmented_control(double pid_output, double disturbance_estimate) {
    return pid_output - disturbance_estimate;
}

/// Net power-mismatch disturbance on the frequency loop: PV injects, load consumes.
inline double lumped_disturbance_lfc(double dp_pv, double dp_load) {
    return dp_pv - dp_load;
}

}  // namespace regsim
