#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace regsim {

/// Real polynomial stored in ascending powers: coeffs()[k] multiplies x^k.
/// Trailing coefficients that are zero (or negligible relative to the largest
/// coefficient) are trimmed on construction, so degree() is always the true
/// degree. The zero polynomial is represented as the single coefficient {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}

    Polynomial(std::initializer_list<double> coeffs)
        : coeffs_(coeffs) { normalize(); }

    explicit Polynomial(std::vector<double> coeffs)
        : coeffs_(std::move(coeffs)) { normalize(); }

    static Polynomial constant(double c) { return Polynomial{c}; }

    const std::vector<double>& coeffs() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    double leading() const { return coeffs_.back(); }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    double operator[](std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : 0.0;
    }

    double operator()(double x) const { return horner(x); }
    std::complex<double> operator()(std::complex<double> x) const { return horner(x); }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) c[k] += o.coeffs_[k];
        return Polynomial(std::move(c));
    }

    Polynomial operator-(const Polynomial& o) const { return *this + (o * -1.0); }

    Polynomial operator*(const Polynomial& o) const {
        if (is_zero() || o.is_zero()) return Polynomial();
        std::vector<double> c(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                c[i + j] += coeffs_[i] * o.coeffs_[j];
        return Polynomial(std::move(c));
    }

    Polynomial operator*(double s) const {
        std::vector<double> c(coeffs_);
        for (double& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(double s, const Polynomial& p) { return p * s; }

    /// p^n with n >= 0.
    static Polynomial pow(const Polynomial& base, int n) {
        if (n < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
        Polynomial r{1.0};
        for (int i = 0; i < n; ++i) r = r * base;
        return r;
    }

    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

private:
    // Relative threshold below which a trailing coefficient is treated as a
    // cancellation residue rather than a real leading term.
    static constexpr double kTrimTol = 1e-12;

    void normalize() {
        if (coeffs_.empty()) { coeffs_ = {0.0}; return; }
        double scale = 0.0;
        for (double c : coeffs_) {
            if (!std::isfinite(c)) throw std::invalid_argument("Polynomial: non-finite coefficient");
            scale = std::max(scale, std::abs(c));
        }
        while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= kTrimTol * scale)
            coeffs_.pop_back();
        if (coeffs_.size() == 1 && std::abs(coeffs_[0]) <= 0.0) coeffs_[0] = 0.0;
    }

    template <typename T>
    T horner(T x) const {
        T acc = T(coeffs_.back());
        for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * x + T(coeffs_[k]);
        return acc;
    }

    std::vector<double> coeffs_;
};

}  // namespace regsim
