#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "regsim/transfer_function.hpp"

namespace regsim {

/// SISO state-space model x' = A x + B u, y = C x + D u, stepped at a fixed
/// sample time. dt == 0 marks a continuous-time model (not steppable here);
/// dt > 0 models come from discretize_bilinear and carry their own state.
class StateSpaceModel {
public:
    StateSpaceModel(std::vector<double> a, std::vector<double> b,
                    std::vector<double> c, double d, double dt)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d), dt_(dt) {
        n_ = b_.size();
        if (a_.size() != n_ * n_ || c_.size() != n_)
            throw std::invalid_argument("StateSpaceModel: inconsistent dimensions");
        if (dt_ < 0.0) throw std::invalid_argument("StateSpaceModel: negative dt");
        x_.assign(n_, 0.0);
    }

    std::size_t order() const { return n_; }
    double dt() const { return dt_; }
    double a(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    double b(std::size_t i) const { return b_[i]; }
    double c(std::size_t i) const { return c_[i]; }
    double d() const { return d_; }
    const std::vector<double>& state() const { return x_; }

    void reset() { x_.assign(n_, 0.0); }

    /// Output for input u with the current state, without advancing.
    double output(double u) const {
        double y = d_ * u;
        for (std::size_t i = 0; i < n_; ++i) y += c_[i] * x_[i];
        return y;
    }

    void advance(double u) {
        if (n_ == 0) return;
        std::vector<double> xn(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = b_[i] * u;
            const double* row = &a_[i * n_];
            for (std::size_t j = 0; j < n_; ++j) acc += row[j] * x_[j];
            xn[i] = acc;
        }
        x_ = std::move(xn);
    }

    double step(double u) {
        const double y = output(u);
        advance(u);
        return y;
    }

    /// Steady-state gain: C (I-A)^{-1} B + D for discrete models,
    /// D - C A^{-1} B for continuous ones.
    double dc_gain() const {
        if (n_ == 0) return d_;
        std::vector<double> m(n_ * n_);
        std::vector<double> rhs(b_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                m[i * n_ + j] = dt_ > 0.0 ? (i == j ? 1.0 : 0.0) - a(i, j) : -a(i, j);
        // Gaussian elimination with partial pivoting; n is tiny.
        for (std::size_t col = 0; col < n_; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n_; ++r)
                if (std::abs(m[r * n_ + col]) > std::abs(m[piv * n_ + col])) piv = r;
            if (m[piv * n_ + col] == 0.0)
                throw std::domain_error("StateSpaceModel::dc_gain: singular (pole at DC)");
            if (piv != col) {
                for (std::size_t j = 0; j < n_; ++j) std::swap(m[piv * n_ + j], m[col * n_ + j]);
                std::swap(rhs[piv], rhs[col]);
            }
            for (std::size_t r = col + 1; r < n_; ++r) {
                const double f = m[r * n_ + col] / m[col * n_ + col];
                for (std::size_t j = col; j < n_; ++j) m[r * n_ + j] -= f * m[col * n_ + j];
                rhs[r] -= f * rhs[col];
            }
        }
        std::vector<double> sol(n_);
        for (std::size_t i = n_; i-- > 0;) {
            double acc = rhs[i];
            for (std::size_t j = i + 1; j < n_; ++j) acc -= m[i * n_ + j] * sol[j];
            sol[i] = acc / m[i * n_ + i];
        }
        double g = d_;
        for (std::size_t i = 0; i < n_; ++i) g += c_[i] * sol[i];
        return g;
    }

private:
    std::vector<double> a_, b_, c_;
    double d_;
    double dt_;
    std::size_t n_ = 0;
    std::vector<double> x_;
};

/// Tustin (trapezoidal) discretization s <- (2/dt)(z-1)/(z+1) of a proper
/// transfer function, realized in controllable canonical form. Preserves the
/// DC gain exactly up to rounding.
inline StateSpaceModel discretize_bilinear(const TransferFunction& tf, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("discretize_bilinear: dt must be positive");
    if (!tf.is_proper())
        throw std::domain_error("discretize_bilinear: improper transfer function is not realizable");

    const std::size_t n = tf.den().degree();
    const double k = 2.0 / dt;

    // num_z, den_z = sum_k coeff_k * k^k * (z-1)^k (z+1)^(n-k), ascending in z
    std::vector<double> num_z(n + 1, 0.0), den_z(n + 1, 0.0);
    Polynomial zm1{-1.0, 1.0}, zp1{1.0, 1.0};
    double kpow = 1.0;
    for (std::size_t i = 0; i <= n; ++i) {
        Polynomial term = Polynomial::pow(zm1, static_cast<int>(i)) *
                          Polynomial::pow(zp1, static_cast<int>(n - i));
        for (std::size_t j = 0; j <= term.degree(); ++j) {
            if (i <= tf.num().degree()) num_z[j] += tf.num()[i] * kpow * term[j];
            den_z[j] += tf.den()[i] * kpow * term[j];
        }
        kpow *= k;
    }

    double scale = 0.0;
    for (double c : den_z) scale = std::max(scale, std::abs(c));
    if (std::abs(den_z[n]) <= 1e-12 * scale)
        throw std::domain_error("discretize_bilinear: pole at the bilinear map frequency 2/dt");

    const double an = den_z[n];
    for (double& c : num_z) c /= an;
    for (double& c : den_z) c /= an;

    // controllable canonical form
    std::vector<double> A(n * n, 0.0), B(n, 0.0), C(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) A[i * n + i + 1] = 1.0;
    for (std::size_t j = 0; j < n; ++j) A[(n - 1) * n + j] = -den_z[j];
    if (n > 0) B[n - 1] = 1.0;
    const double D = num_z[n];
    for (std::size_t j = 0; j < n; ++j) C[j] = num_z[j] - D * den_z[j];
    return StateSpaceModel(std::move(A), std::move(B), std::move(C), D, dt);
}

}  // namespace regsim
