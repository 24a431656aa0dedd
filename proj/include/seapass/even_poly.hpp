#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "seapass/error.hpp"
#include "seapass/polynomial.hpp"
#include "seapass/roots.hpp"

namespace seapass {

struct NonnegResult {
    bool nonneg = true;
    /// Frequency w > 0 with P(w) < 0 when nonneg is false.
    std::optional<double> witness;
};

namespace detail {

// Nonnegativity of q(x) over x > 0, coefficients ascending in x. Returns the
// witness as an x value.
inline NonnegResult nonneg_on_positive_axis(std::vector<double> c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    std::size_t low = 0;
    while (low < c.size() && c[low] == 0.0) ++low;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 0) return {};

    const auto fail_at = [](double x) { return NonnegResult{false, x}; };

    if (n == 0) return c[0] >= 0.0 ? NonnegResult{} : fail_at(1.0);

    if (n == 1) {
        const double c0 = c[0];
        const double c1 = c[1];
        if (c0 < 0.0) return fail_at(c1 > 0.0 ? 0.5 * (-c0 / c1) : 1.0);
        if (c1 < 0.0) return fail_at(2.0 * (c0 / -c1) + 1.0);
        return {};
    }

    if (n == 2) {
        const double c0 = c[0];
        const double c1 = c[1];
        const double c2 = c[2];
        const Polynomial q{c0, c1, c2};
        if (c0 < 0.0) {
            double smallest = INFINITY;
            for (auto r : roots(q))
                if (r.imag() == 0.0 && r.real() > 0.0) smallest = std::min(smallest, r.real());
            return fail_at(std::isfinite(smallest) ? 0.5 * smallest : 1.0);
        }
        if (c2 < 0.0) {
            double largest = 0.0;
            for (auto r : roots(q))
                if (r.imag() == 0.0) largest = std::max(largest, r.real());
            return fail_at(2.0 * largest + 1.0);
        }
        // c0 >= 0, c2 > 0: negative only between two positive roots.
        if (c1 < 0.0 && c1 * c1 - 4.0 * c0 * c2 > 0.0) return fail_at(-c1 / (2.0 * c2));
        return {};
    }

    // Root isolation: the sign of q is constant between consecutive positive
    // real roots, so one probe per interval decides.
    const Polynomial q(c);
    std::vector<double> positive;
    for (auto r : roots(q)) {
        if (std::abs(r.imag()) <= 1e-7 * std::abs(r) && r.real() > 0.0) positive.push_back(r.real());
    }
    std::sort(positive.begin(), positive.end());
    std::vector<double> probes;
    double prev = 0.0;
    for (double r : positive) {
        probes.push_back(0.5 * (prev + r));
        prev = r;
    }
    probes.push_back(2.0 * prev + 1.0);
    for (double x : probes) {
        const double value = q(x);
        if (value < -1e-12 * q.abs_scale(x)) return fail_at(x);
    }
    return {};
}

}  // namespace detail

/**
 * Decides P(w) >= 0 for all real w, where P has only even powers of w,
 * given as exponent -> coefficient. Substitutes x = w^2; degree <= 2 in x is
 * decided from the coefficient signs and discriminant, higher degrees by
 * isolating the positive real roots in x.
 */
inline NonnegResult even_poly_nonneg(const std::map<int, double>& coeffs) {
    int top = 0;
    for (const auto& [exp, value] : coeffs) {
        if (exp < 0 || exp % 2 != 0)
            throw Error(ErrorKind::InvalidArgument, "even_poly_nonneg: odd or negative exponent");
        top = std::max(top, exp / 2);
    }
    std::vector<double> c(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& [exp, value] : coeffs) c[static_cast<std::size_t>(exp / 2)] += value;
    NonnegResult out = detail::nonneg_on_positive_axis(std::move(c));
    if (out.witness) out.witness = std::sqrt(*out.witness);
    return out;
}

}  // namespace seapass
