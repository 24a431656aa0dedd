#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "seapass/error.hpp"

namespace seapass {

/**
 * Real-coefficient polynomial in s, coefficients stored in ascending powers
 * (coeffs()[k] multiplies s^k).
 *
 * Trailing zero coefficients are dropped, so the leading coefficient is
 * nonzero. Sums and products zero any coefficient that cancels to within
 * 1e-14 of the magnitudes it was formed from. The zero polynomial is the
 * empty coefficient list and has degree -1.
 */
class Polynomial {
public:
    static constexpr double kCancellationRelTol = 1e-14;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { normalize(); }
    Polynomial(std::initializer_list<double> ascending) : c_(ascending) { normalize(); }

    /// c * s^power
    static Polynomial monomial(double c, int power) {
        std::vector<double> v(static_cast<std::size_t>(power) + 1, 0.0);
        v.back() = c;
        return Polynomial(std::move(v));
    }

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return c_; }
    [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }

    /// Coefficient of s^k; zero beyond the degree.
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0.0; }

    [[nodiscard]] double leading() const noexcept { return c_.empty() ? 0.0 : c_.back(); }

    [[nodiscard]] double max_abs_coeff() const noexcept {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Multiplicity of the root at s = 0 counted from exactly-zero low-order coefficients.
    [[nodiscard]] int origin_multiplicity() const noexcept {
        int k = 0;
        while (k < static_cast<int>(c_.size()) && c_[static_cast<std::size_t>(k)] == 0.0) ++k;
        return k;
    }

    /// Exact division by s^k; requires k <= origin_multiplicity().
    [[nodiscard]] Polynomial divide_by_s_power(int k) const {
        if (k < 0 || k > origin_multiplicity())
            throw Error(ErrorKind::InvalidArgument, "divide_by_s_power: s^k is not an exact factor");
        return Polynomial(std::vector<double>(c_.begin() + k, c_.end()));
    }

    [[nodiscard]] Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Polynomial(std::move(d));
    }

    /// Horner evaluation.
    template <typename T>
    [[nodiscard]] T operator()(T z) const {
        T acc{0.0};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    /// sum_k |c_k| |z|^k, the magnitude scale against which an evaluation at z
    /// is judged to be zero.
    [[nodiscard]] double abs_scale(std::complex<double> z) const {
        const double r = std::abs(z);
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
        return acc;
    }

    /// Copy with every coefficient multiplied by `factor`.
    [[nodiscard]] Polynomial scaled(double factor) const {
        std::vector<double> v = c_;
        for (double& x : v) x *= factor;
        return Polynomial(std::move(v));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> v(std::max(a.size(), b.size()), 0.0);
        for (std::size_t k = 0; k < v.size(); ++k)
            v[k] = cancel_noise(a[k] + b[k], std::abs(a[k]) + std::abs(b[k]));
        return Polynomial(std::move(v));
    }

    friend Polynomial operator-(const Polynomial& a) { return a.scaled(-1.0); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    /// Convolution of the coefficient sequences.
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<double> v(a.size() + b.size() - 1, 0.0);
        std::vector<double> mag(v.size(), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                v[i + j] += a.c_[i] * b.c_[j];
                mag[i + j] += std::abs(a.c_[i] * b.c_[j]);
            }
        }
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = cancel_noise(v[k], mag[k]);
        return Polynomial(std::move(v));
    }

    friend Polynomial operator*(double k, const Polynomial& p) { return p.scaled(k); }
    friend Polynomial operator*(const Polynomial& p, double k) { return p.scaled(k); }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    static double cancel_noise(double value, double magnitude) {
        return std::abs(value) <= kCancellationRelTol * magnitude ? 0.0 : value;
    }

    void normalize() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

inline std::complex<double> evaluate(const Polynomial& p, std::complex<double> z) { return p(z); }

inline std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    char buf[64];
    for (int k = p.degree(); k >= 0; --k) {
        const double c = p[static_cast<std::size_t>(k)];
        if (c == 0.0) continue;
        if (!out.empty()) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        std::snprintf(buf, sizeof buf, "%.10g", std::abs(c));
        out += buf;
        if (k >= 1) out += "s";
        if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
}

}  // namespace seapass
