#pragma once

// Test-side oracles kept independent of the library implementation paths
// they check: plain convolution for polynomial coefficients, Durand-Kerner
// for roots, closed-form CDFs for the samplers, quadrature demodulation for
// sinusoid amplitudes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace testutil {

// ascending-coefficient convolution, written without the library's Polynomial
inline std::vector<double> conv(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

/// Durand-Kerner root finder for small polynomials (ascending coefficients).
inline std::vector<std::complex<double>> poly_roots(std::vector<double> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    const std::size_t n = coeffs.size() - 1;
    std::vector<std::complex<double>> monic(n + 1);
    for (std::size_t i = 0; i <= n; ++i) monic[i] = coeffs[i] / coeffs[n];

    auto eval = [&](std::complex<double> x) {
        std::complex<double> acc = monic[n];
        for (std::size_t k = n; k-- > 0;) acc = acc * x + monic[k];
        return acc;
    };

    std::vector<std::complex<double>> r(n);
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> p(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) { p *= seed; r[i] = p; }

    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= r[i] - r[j];
            const std::complex<double> delta = eval(r[i]) / denom;
            r[i] -= delta;
            worst = std::max(worst, std::abs(delta) / std::max(1.0, std::abs(r[i])));
        }
        if (worst < 1e-13) break;
    }
    return r;
}

/// CDF of Beta(a, b) for integer shapes via the binomial closed form.
inline double beta_cdf_int(double x, int a, int b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const int n = a + b - 1;
    auto binom = [](int n_, int k_) {
        double v = 1.0;
        for (int i = 1; i <= k_; ++i) v = v * (n_ - k_ + i) / i;
        return v;
    };
    double sum = 0.0;
    for (int j = a; j <= n; ++j)
        sum += binom(n, j) * std::pow(x, j) * std::pow(1.0 - x, n - j);
    return sum;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// One-sample Kolmogorov-Smirnov statistic against a given CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

/// Amplitude of the omega-component of a sampled signal, demodulated over the
/// last whole periods.
inline double sine_amplitude(std::span<const double> x, double dt, double omega) {
    const double period = 2.0 * std::numbers::pi / omega;
    const auto per_samples = static_cast<std::size_t>(std::floor(period / dt));
    const std::size_t periods = (x.size() - 1) / per_samples / 2;  // use up to half the record
    const std::size_t span = std::max<std::size_t>(per_samples, periods * per_samples);
    const std::size_t start = x.size() - span;
    double a = 0.0, b = 0.0;
    for (std::size_t k = start; k < x.size(); ++k) {
        const double t = static_cast<double>(k) * dt;
        a += x[k] * std::sin(omega * t);
        b += x[k] * std::cos(omega * t);
    }
    const double norm = 2.0 / static_cast<double>(span);
    return std::hypot(a * norm, b * norm);
}

}  // namespace testutil
