#pragma once

#include <cmath>
#include <vector>

#include "seapass/error.hpp"
#include "seapass/polynomial.hpp"

namespace seapass {

struct RouthReport {
    std::vector<double> first_column;
    bool stable = false;
    /// A first-column entry vanished (|entry| <= 1e-12 x its cancellation scale).
    bool marginal = false;
};

/**
 * Routh table of arbitrary degree.
 *
 * The polynomial is sign-normalized so the leading coefficient is positive.
 * Construction stops at the first vanishing pivot; no epsilon continuation
 * is attempted, and such a table reports marginal and not stable.
 */
inline RouthReport routh_stable(const Polynomial& poly) {
    constexpr double zero_rel_tol = 1e-12;
    if (poly.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "Routh table of the zero polynomial");
    const Polynomial p = poly.leading() < 0 ? -poly : poly;
    const int n = p.degree();
    RouthReport report;
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "Routh table needs degree >= 1");

    const auto width = static_cast<std::size_t>(n / 2 + 1);
    std::vector<double> upper(width, 0.0);
    std::vector<double> lower(width, 0.0);
    for (int k = n, i = 0; k >= 0; k -= 2, ++i) upper[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(k)];
    for (int k = n - 1, i = 0; k >= 0; k -= 2, ++i) lower[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(k)];

    const double coeff_scale = p.max_abs_coeff();
    report.first_column.push_back(upper[0]);
    // Row for s^(n-1) is read straight from the coefficients.
    if (std::abs(lower[0]) <= zero_rel_tol * coeff_scale) {
        report.first_column.push_back(lower[0]);
        report.marginal = true;
        return report;
    }
    report.first_column.push_back(lower[0]);

    for (int row = 2; row <= n; ++row) {
        std::vector<double> next(width, 0.0);
        double pivot_scale = 0.0;
        for (std::size_t i = 0; i + 1 < width; ++i) {
            const double lhs = lower[0] * upper[i + 1];
            const double rhs = upper[0] * lower[i + 1];
            next[i] = (lhs - rhs) / lower[0];
            if (i == 0) pivot_scale = (std::abs(lhs) + std::abs(rhs)) / std::abs(lower[0]);
        }
        report.first_column.push_back(next[0]);
        if (std::abs(next[0]) <= zero_rel_tol * pivot_scale) {
            report.marginal = true;
            return report;
        }
        upper = std::move(lower);
        lower = std::move(next);
    }

    report.stable = true;
    for (double v : report.first_column) {
        if (!(v > 0.0)) {
            report.stable = false;
            break;
        }
    }
    return report;
}

}  // namespace seapass
