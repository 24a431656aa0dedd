#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "seapass/error.hpp"
#include "seapass/polynomial.hpp"

namespace seapass {

/**
 * num(s)/den(s) with real coefficients.
 *
 * The only cancellation performed is of exact common factors of s (shared
 * exactly-zero constant terms). No approximate GCD is attempted.
 */
class RationalTransferFunction {
public:
    RationalTransferFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "transfer function denominator is zero");
        if (num_.is_zero()) return;
        const int shared = std::min(num_.origin_multiplicity(), den_.origin_multiplicity());
        if (shared > 0) {
            num_ = num_.divide_by_s_power(shared);
            den_ = den_.divide_by_s_power(shared);
        }
    }

    [[nodiscard]] const Polynomial& num() const noexcept { return num_; }
    [[nodiscard]] const Polynomial& den() const noexcept { return den_; }

    [[nodiscard]] std::complex<double> operator()(std::complex<double> s) const { return num_(s) / den_(s); }

    /// Same function with den scaled to a monic leading coefficient.
    [[nodiscard]] RationalTransferFunction monic() const {
        const double lead = den_.leading();
        return {num_.scaled(1.0 / lead), den_.scaled(1.0 / lead)};
    }

    /// Relative degree deg(den) - deg(num); negative for improper functions.
    [[nodiscard]] int relative_degree() const noexcept { return den_.degree() - num_.degree(); }

private:
    Polynomial num_;
    Polynomial den_;
};

namespace detail {

inline double coeff_rel_error(const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return INFINITY;
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double x = a[k];
        const double y = b[k];
        const double mag = std::max(std::abs(x), std::abs(y));
        if (mag == 0.0) continue;
        worst = std::max(worst, std::abs(x - y) / mag);
    }
    return worst;
}

}  // namespace detail

/// Worst per-coefficient relative error between two transfer functions after
/// monic normalization of both denominators; +inf when degrees differ.
inline double coefficient_mismatch(const RationalTransferFunction& a, const RationalTransferFunction& b) {
    const auto ma = a.monic();
    const auto mb = b.monic();
    return std::max(detail::coeff_rel_error(ma.num(), mb.num()), detail::coeff_rel_error(ma.den(), mb.den()));
}

/**
 * Residue of `tf` at a simple pole: num(pole) / den'(pole).
 *
 * Throws NotAPole when den(pole) is not zero to 1e-8 relative to its
 * evaluation scale, NotSimplePole when den'(pole) vanishes to 1e-9 relative.
 */
inline std::complex<double> residue_simple_pole(const RationalTransferFunction& tf, std::complex<double> pole) {
    const Polynomial& den = tf.den();
    const double den_scale = den.abs_scale(pole);
    if (std::abs(den(pole)) > 1e-8 * den_scale)
        throw Error(ErrorKind::NotAPole, "den(pole) is not zero");
    const Polynomial dden = den.derivative();
    const std::complex<double> slope = dden(pole);
    if (dden.is_zero() || std::abs(slope) <= 1e-9 * dden.abs_scale(pole))
        throw Error(ErrorKind::NotSimplePole, "den'(pole) vanishes; pole is not simple");
    return tf.num()(pole) / slope;
}

}  // namespace seapass
