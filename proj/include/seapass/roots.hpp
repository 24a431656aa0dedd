#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "seapass/error.hpp"
#include "seapass/polynomial.hpp"

namespace seapass {

namespace detail {

// Parlett-Reinsch diagonal similarity scaling by powers of two; leaves the
// spectrum unchanged and equalizes row/column norms.
inline void balance(Eigen::MatrixXd& a) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                a.row(i) *= g;
                a.col(i) *= f;
            }
        }
    }
}

inline std::vector<std::complex<double>> companion_roots(const Polynomial& p) {
    const int n = p.degree();
    const double lead = p.leading();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) c(0, j) = -p[static_cast<std::size_t>(n - 1 - j)] / lead;
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    balance(c);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(c, /*computeEigenvectors=*/false);
    const auto& ev = solver.eigenvalues();
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = ev(i);
    return out;
}

}  // namespace detail

/**
 * All complex roots of `p` with multiplicity.
 *
 * Exact origin roots (zero low-order coefficients) are split off first. The
 * remaining factor is solved in closed form up to degree 2 and otherwise by
 * eigenvalues of the balanced companion matrix, followed by one Newton pass
 * that is kept only when it lowers the residual.
 */
inline std::vector<std::complex<double>> roots(const Polynomial& p) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "roots of the zero polynomial");
    const int origin = p.origin_multiplicity();
    std::vector<std::complex<double>> out(static_cast<std::size_t>(origin), {0.0, 0.0});
    const Polynomial q = p.divide_by_s_power(origin);
    const int n = q.degree();
    if (n <= 0) return out;

    if (n == 1) {
        out.emplace_back(-q[0] / q[1], 0.0);
        return out;
    }
    if (n == 2) {
        const double a = q[2];
        const double b = q[1];
        const double c = q[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            // Cancellation-free form.
            const double t = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            out.emplace_back(t / a, 0.0);
            out.emplace_back(t != 0.0 ? c / t : 0.0, 0.0);
        } else {
            const double re = -b / (2.0 * a);
            const double im = std::sqrt(-disc) / (2.0 * a);
            out.emplace_back(re, std::abs(im));
            out.emplace_back(re, -std::abs(im));
        }
        return out;
    }

    auto found = detail::companion_roots(q);
    const Polynomial dq = q.derivative();
    for (auto& r : found) {
        const std::complex<double> slope = dq(r);
        if (std::abs(slope) == 0.0) continue;
        const std::complex<double> candidate = r - q(r) / slope;
        if (std::abs(q(candidate)) < std::abs(q(r))) r = candidate;
    }
    out.insert(out.end(), found.begin(), found.end());
    return out;
}

}  // namespace seapass
