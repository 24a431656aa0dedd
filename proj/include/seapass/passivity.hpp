#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seapass/bounds.hpp"
#include "seapass/even_poly.hpp"
#include "seapass/model.hpp"
#include "seapass/polynomial.hpp"
#include "seapass/rational.hpp"
#include "seapass/roots.hpp"

namespace seapass {

enum class Route { ClosedForm, Numeric };

inline const char* to_string(Route r) { return r == Route::ClosedForm ? "closed-form" : "numeric"; }

struct FailedCondition {
    /// poles | positive_real | residue (numeric);
    /// damping_bound | inertia_bound | stiffness_bound (closed form)
    std::string id;
    std::string description;
    /// Signed relative slack; <= 0 for a violated condition.
    double margin = 0.0;
};

struct PassivityVerdict {
    bool passive = false;
    Route route = Route::ClosedForm;
    std::vector<FailedCondition> failed_conditions;
    /// Frequency (rad/s) with Re Z(jw) < 0; only set when positive-realness failed.
    std::optional<double> witness_frequency;
    /// Some deciding quantity sits within the boundary band.
    bool marginal = false;

    [[nodiscard]] bool failed(const std::string& id) const {
        return std::any_of(failed_conditions.begin(), failed_conditions.end(),
                           [&](const FailedCondition& c) { return c.id == id; });
    }
};

struct PassivityTolerances {
    /// Relative band around a boundary inside which a verdict is marginal.
    double boundary_band = 1e-6;
    /// |Re p| <= axis_tol * max(1, |p|) places a pole on the imaginary axis.
    double axis_tol = 1e-9;
    /// |Im r| <= residue_imag_tol * |r| counts as a real residue.
    double residue_imag_tol = 1e-9;
    /// P(w) coefficients below this fraction of their term magnitudes are
    /// structural cancellations and are treated as exact zeros.
    double cancellation_tol = 1e-12;
};

/// P(w) = Re{num(jw) den(-jw)} together with the per-coefficient magnitude
/// sum of the products it was formed from.
struct PositiveRealPolynomial {
    Polynomial value;
    Polynomial magnitude;
};

namespace detail {

// p(jw) = even(w) + j odd(w) with real polynomials in w.
inline std::pair<Polynomial, Polynomial> split_on_imaginary_axis(const Polynomial& p, bool absolute) {
    std::vector<double> re(p.size(), 0.0);
    std::vector<double> im(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
        // j^k cycles through +1, +j, -1, -j
        double c = p[k];
        if (absolute) c = std::abs(c);
        else if (k % 4 >= 2) c = -c;
        (k % 2 == 0 ? re : im)[k] = c;
    }
    return {Polynomial(std::move(re)), Polynomial(std::move(im))};
}

}  // namespace detail

/**
 * Builds P(w) by polynomial arithmetic. With num(jw) = A + jB and
 * den(jw) = C + jD, Re{num(jw) den(-jw)} = A C + B D. Only even powers
 * of w survive.
 */
inline PositiveRealPolynomial positive_real_polynomial(const RationalTransferFunction& tf) {
    const auto [a, b] = detail::split_on_imaginary_axis(tf.num(), false);
    const auto [c, d] = detail::split_on_imaginary_axis(tf.den(), false);
    const auto [aa, ba] = detail::split_on_imaginary_axis(tf.num(), true);
    const auto [ca, da] = detail::split_on_imaginary_axis(tf.den(), true);
    return {a * c + b * d, aa * ca + ba * da};
}

/**
 * Three-condition frequency-domain passivity test of an LTI impedance:
 * (i) no poles in the closed right half plane except (iii) simple
 * imaginary-axis poles with real positive residues, and (ii) Re Z(jw) >= 0,
 * decided exactly from the sign of P(w).
 *
 * Improper functions of relative degree -1 are accepted; the pole at
 * infinity must then have a positive residue as well.
 */
inline PassivityVerdict check_numeric(const RationalTransferFunction& tf, const PassivityTolerances& tol = {}) {
    PassivityVerdict v;
    v.route = Route::Numeric;

    // (i) and (iii)
    for (const auto& pole : roots(tf.den())) {
        const double scale = std::max(1.0, std::abs(pole));
        if (std::abs(pole.real()) <= tol.axis_tol * scale) {
            try {
                const auto r = residue_simple_pole(tf, pole);
                const bool real = std::abs(r.imag()) <= tol.residue_imag_tol * std::abs(r);
                if (!real || !(r.real() > 0.0)) {
                    v.failed_conditions.push_back(
                        {"residue", "imaginary-axis pole with non-positive or complex residue",
                         std::abs(r) > 0.0 ? r.real() / std::abs(r) : 0.0});
                }
            } catch (const Error&) {
                v.failed_conditions.push_back({"residue", "imaginary-axis pole is not simple", 0.0});
            }
            continue;
        }
        if (pole.real() > 0.0) {
            v.failed_conditions.push_back({"poles", "pole in the open right half plane", -pole.real() / scale});
        } else if (-pole.real() <= tol.boundary_band * scale) {
            v.marginal = true;
        }
    }
    if (tf.relative_degree() < -1) {
        v.failed_conditions.push_back({"residue", "multiple pole at infinity", 0.0});
    } else if (tf.relative_degree() == -1 && !(tf.num().leading() / tf.den().leading() > 0.0)) {
        v.failed_conditions.push_back({"residue", "pole at infinity with non-positive residue", 0.0});
    }

    // (ii)
    const auto pr = positive_real_polynomial(tf);
    std::map<int, double> even;
    for (std::size_t k = 0; k < pr.value.size(); k += 2) {
        double c = pr.value[k];
        const double mag = pr.magnitude[k];
        if (std::abs(c) <= tol.cancellation_tol * mag) {
            c = 0.0;
        } else if (std::abs(c) <= tol.boundary_band * mag) {
            v.marginal = true;
        }
        if (c != 0.0) even[static_cast<int>(k)] = c;
    }
    const auto nonneg = even_poly_nonneg(even);
    if (!nonneg.nonneg) {
        const double w = *nonneg.witness;
        const double value = pr.value(w);
        const double mag = pr.magnitude(w);
        v.failed_conditions.push_back(
            {"positive_real", "Re Z(jw) < 0 at the witness frequency", mag > 0.0 ? value / mag : -1.0});
        v.witness_frequency = w;
    }

    v.passive = v.failed_conditions.empty();
    return v;
}

/// Smallest Re Z(jw)/|Z(jw)| over a log grid, as a sampled diagnostic next to
/// the exact P(w) decision.
struct RealPartScan {
    double min_normalized_real = 0.0;
    double at_frequency = 0.0;
};

inline RealPartScan scan_real_part(const RationalTransferFunction& tf, double wmin = 1e-3, double wmax = 1e6,
                                   int points_per_decade = 200) {
    RealPartScan out{INFINITY, wmin};
    const double decades = std::log10(wmax / wmin);
    const int n = static_cast<int>(std::ceil(decades * points_per_decade)) + 1;
    for (int i = 0; i < n; ++i) {
        const double w = wmin * std::pow(10.0, decades * i / (n - 1));
        const auto z = tf({0.0, w});
        if (!std::isfinite(std::abs(z)) || std::abs(z) == 0.0) continue;
        const double r = z.real() / std::abs(z);
        if (r < out.min_normalized_real) out = {r, w};
    }
    return out;
}

namespace detail {

inline void require_bound(PassivityVerdict& v, const char* id, const char* what, const Bound& bound, double actual,
                          bool strict) {
    if (bound.admits(actual, strict)) return;
    v.failed_conditions.push_back({id, what, bound.relative_margin(actual).value_or(-1.0)});
}

inline void flag_band(PassivityVerdict& v, const Bound& bound, double actual, double band) {
    if (const auto m = bound.relative_margin(actual); m && std::abs(*m) <= band) v.marginal = true;
}

inline PassivityVerdict closed_form_null(const PlantParams& plant, const ControllerGains& g, double band) {
    PassivityVerdict v;
    v.route = Route::ClosedForm;
    const double J = plant.inertia;
    const double b = plant.damping;
    const bool has_im = g.velocity_i > 0.0;
    const bool has_it = g.torque_i > 0.0;
    const Bound jmax = j_max_null(b, g);
    const Bound bmax = b_max(g);

    if (!has_im && !has_it) {
        // Second-order impedance, unconditionally passive.
    } else if (!has_im) {
        require_bound(v, "inertia_bound", "J < J_max with Im = 0", jmax, J, true);
    } else if (!has_it) {
        require_bound(v, "inertia_bound", "J <= J_max with It = 0", jmax, J, false);
    } else {
        // [J < Jmax and b <= bmax] or [J <= Jmax and b < bmax]
        const bool first = jmax.admits(J, true) && bmax.admits(b, false);
        const bool second = jmax.admits(J, false) && bmax.admits(b, true);
        if (!first && !second) {
            if (!bmax.admits(b, false)) require_bound(v, "damping_bound", "b <= b_max", bmax, b, false);
            if (!jmax.admits(J, false)) require_bound(v, "inertia_bound", "J <= J_max", jmax, J, false);
            if (v.failed_conditions.empty()) {
                v.failed_conditions.push_back({"damping_bound", "b = b_max and J = J_max together (xi = 0)", 0.0});
                v.failed_conditions.push_back({"inertia_bound", "b = b_max and J = J_max together (xi = 0)", 0.0});
            }
        }
        flag_band(v, bmax, b, band);
    }
    flag_band(v, jmax, J, band);
    v.passive = v.failed_conditions.empty();
    return v;
}

inline PassivityVerdict closed_form_spring(const PlantParams& plant, const ControllerGains& g, double kd,
                                           double band) {
    PassivityVerdict v;
    v.route = Route::ClosedForm;
    const double J = plant.inertia;
    const double b = plant.damping;
    const double K = plant.stiffness;
    const bool has_im = g.velocity_i > 0.0;
    const bool has_it = g.torque_i > 0.0;

    if (!has_im && !has_it) {
        const Bound limit = kd_limit_without_integrators(plant, g);
        require_bound(v, "stiffness_bound", "Kd < K (1 + 1/(Pm Pt)) without integral gains", limit, kd, true);
        flag_band(v, limit, kd, band);
        v.passive = v.failed_conditions.empty();
        return v;
    }
    if (!has_im) {
        v.failed_conditions.push_back({"stiffness_bound", "no positive stiffness is renderable with Im = 0", -1.0});
        return v;
    }

    const Bound bmax = b_max(g);
    const Bound kdmax = kd_max(plant, g);
    require_bound(v, "damping_bound", "b < b_max", bmax, b, true);
    flag_band(v, bmax, b, band);
    if (kdmax.is_none()) {
        v.failed_conditions.push_back({"stiffness_bound", "beta <= 0: no positive stiffness is renderable", -1.0});
        return v;
    }
    flag_band(v, kdmax, kd, band);
    if (!(kd < K)) {
        require_bound(v, "stiffness_bound", "Kd <= Kd_max < K", kdmax, kd, false);
        return v;
    }
    const Bound jspr = j_max_spring(b, g, K, kd);
    flag_band(v, jspr, J, band);
    // [J < Jspr and Kd <= Kdmax] or [J <= Jspr and Kd < Kdmax]
    const bool first = jspr.admits(J, true) && kdmax.admits(kd, false);
    const bool second = jspr.admits(J, false) && kdmax.admits(kd, true);
    if (!first && !second) {
        const std::size_t before = v.failed_conditions.size();
        if (!kdmax.admits(kd, false)) require_bound(v, "stiffness_bound", "Kd <= Kd_max", kdmax, kd, false);
        if (!jspr.admits(J, false)) require_bound(v, "inertia_bound", "J <= J_max^spr", jspr, J, false);
        if (v.failed_conditions.size() == before) {
            v.failed_conditions.push_back({"stiffness_bound", "Kd = Kd_max and J = J_max^spr together (xi = 0)", 0.0});
            v.failed_conditions.push_back({"inertia_bound", "Kd = Kd_max and J = J_max^spr together (xi = 0)", 0.0});
        }
    }
    v.passive = v.failed_conditions.empty();
    return v;
}

}  // namespace detail

/**
 * Passivity from the closed-form necessary and sufficient conditions.
 *
 * Null: [J < J_max and b <= b_max] or [J <= J_max and b < b_max]; with one
 * integral gain zero J < J_max (Im = 0) or J <= J_max (It = 0); with both
 * zero always passive.
 *
 * Spring(Kd): b < b_max together with [J < J_max^spr and Kd <= Kd_max] or
 * [J <= J_max^spr and Kd < Kd_max]. Im = 0 with It > 0 renders no positive
 * stiffness passively; Im = It = 0 needs Kd < K (1 + 1/(Pm Pt)). Kd = 0
 * is decided exactly as Null.
 */
inline PassivityVerdict check_closed_form(const PlantParams& plant, const ControllerGains& gains,
                                          const RenderTarget& target, double boundary_band = 1e-6) {
    plant.validate();
    gains.validate();
    target.validate();
    if (!target.is_spring() || target.stiffness == 0.0) return detail::closed_form_null(plant, gains, boundary_band);
    return detail::closed_form_spring(plant, gains, target.stiffness, boundary_band);
}

}  // namespace seapass
