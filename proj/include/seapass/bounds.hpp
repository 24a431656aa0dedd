#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "seapass/error.hpp"
#include "seapass/model.hpp"

namespace seapass {

/// A design bound: a finite positive value, unbounded, or no admissible value.
class Bound {
public:
    enum class Kind { Finite, Unbounded, None };

    static Bound finite(double v) { return Bound(Kind::Finite, v); }
    static Bound unbounded() { return Bound(Kind::Unbounded, 0.0); }
    static Bound none() { return Bound(Kind::None, 0.0); }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    [[nodiscard]] bool is_unbounded() const noexcept { return kind_ == Kind::Unbounded; }
    [[nodiscard]] bool is_none() const noexcept { return kind_ == Kind::None; }

    [[nodiscard]] double value() const {
        if (kind_ != Kind::Finite) throw Error(ErrorKind::InvalidArgument, "bound has no finite value");
        return value_;
    }

    /// x < bound (strict) or x <= bound.
    [[nodiscard]] bool admits(double x, bool strict) const noexcept {
        switch (kind_) {
            case Kind::Unbounded: return true;
            case Kind::None: return false;
            case Kind::Finite: return strict ? x < value_ : x <= value_;
        }
        return false;
    }

    /// (bound - x) / bound for finite bounds.
    [[nodiscard]] std::optional<double> relative_margin(double x) const {
        if (kind_ != Kind::Finite) return std::nullopt;
        return (value_ - x) / value_;
    }

    friend bool operator==(const Bound&, const Bound&) = default;

private:
    Bound(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

inline std::string to_string(const Bound& b) {
    switch (b.kind()) {
        case Bound::Kind::Unbounded: return "unbounded";
        case Bound::Kind::None: return "none";
        case Bound::Kind::Finite: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10g", b.value());
            return buf;
        }
    }
    return "?";
}

/**
 * Largest motor damping compatible with passivity, Pt Im / It.
 *
 * Unbounded when either integral gain is zero: d2 then no longer depends on
 * the damping (with It = 0 it is K^2 Pt Im^2 > 0, with Im = 0 it vanishes).
 */
inline Bound b_max(const ControllerGains& g) {
    if (g.torque_i == 0.0 || g.velocity_i == 0.0) return Bound::unbounded();
    return Bound::finite(g.torque_p * g.velocity_i / g.torque_i);
}

/// Largest motor inertia for null-impedance passivity, (Pm+b)(1+Pm Pt)/alpha.
inline Bound j_max_null(double damping, const ControllerGains& g) {
    const double alpha = g.velocity_p * g.torque_i + g.torque_p * g.velocity_i;
    if (alpha == 0.0) return Bound::unbounded();
    return Bound::finite((g.velocity_p + damping) * (1.0 + g.velocity_p * g.torque_p) / alpha);
}

/// Largest passively renderable virtual stiffness K beta / (beta + alpha K);
/// none when beta <= 0, which includes Im = 0.
inline Bound kd_max(const PlantParams& plant, const ControllerGains& g) {
    const auto c = closed_form_coefficients(plant, g);
    if (!(c.beta > 0.0)) return Bound::none();
    const double K = plant.stiffness;
    return Bound::finite(K * c.beta / (c.beta + c.alpha * K));
}

/// Largest motor inertia while rendering Kd < K:
/// (Pm+b)(dK Pm Pt + K) / (alpha dK), dK = K - Kd.
inline Bound j_max_spring(double damping, const ControllerGains& g, double stiffness, double kd) {
    if (!(kd < stiffness)) throw Error(ErrorKind::InvalidTarget, "j_max_spring requires Kd < K");
    const double alpha = g.velocity_p * g.torque_i + g.torque_p * g.velocity_i;
    if (alpha == 0.0) return Bound::unbounded();
    const double dk = stiffness - kd;
    return Bound::finite((g.velocity_p + damping) * (dk * g.velocity_p * g.torque_p + stiffness) / (alpha * dk));
}

/// Stiffness limit with both integral gains zero: d4 vanishes identically and
/// d6 > 0 requires Kd < K (1 + 1/(Pm Pt)).
inline Bound kd_limit_without_integrators(const PlantParams& plant, const ControllerGains& g) {
    return Bound::finite(plant.stiffness * (1.0 + 1.0 / (g.velocity_p * g.torque_p)));
}

struct BoundMargin {
    std::string constraint;  ///< damping | inertia | stiffness
    Bound bound;
    double actual = 0.0;
    /// (bound - actual) / bound; empty for unbounded or none.
    std::optional<double> margin;
};

struct BoundsReport {
    Bound b_max = Bound::unbounded();
    /// J bound for the requested target (null or spring at its Kd).
    Bound j_max = Bound::unbounded();
    Bound j_max_null = Bound::unbounded();
    /// Stiffness bound; empty for the Null target.
    std::optional<Bound> kd_max;
    /// Tightest constraint, or "none" when nothing is bounded.
    std::string binding = "none";
    std::vector<BoundMargin> margins;
};

/**
 * Bounds for a configuration and the binding constraint. The binding
 * constraint has the smallest relative margin; ties resolve in the order
 * damping, inertia, stiffness. A stiffness bound of none is always binding;
 * the inertia bound is none when Kd >= K, where the stiffness margin is
 * already negative.
 */
inline BoundsReport bounds_report(const PlantParams& plant, const ControllerGains& g, const RenderTarget& target) {
    BoundsReport r;
    r.b_max = b_max(g);
    r.j_max_null = j_max_null(plant.damping, g);
    r.j_max = r.j_max_null;
    const double kd = target.virtual_stiffness();
    if (target.is_spring()) {
        const bool no_integrators = g.velocity_i == 0.0 && g.torque_i == 0.0;
        r.kd_max = no_integrators ? kd_limit_without_integrators(plant, g) : kd_max(plant, g);
        r.j_max = kd < plant.stiffness ? j_max_spring(plant.damping, g, plant.stiffness, kd) : Bound::none();
    }

    r.margins.push_back({"damping", r.b_max, plant.damping, r.b_max.relative_margin(plant.damping)});
    r.margins.push_back({"inertia", r.j_max, plant.inertia, r.j_max.relative_margin(plant.inertia)});
    if (r.kd_max) r.margins.push_back({"stiffness", *r.kd_max, kd, r.kd_max->relative_margin(kd)});

    std::optional<double> best;
    for (const auto& m : r.margins) {
        if (m.bound.is_none() && m.constraint == "stiffness") {
            r.binding = m.constraint;
            return r;
        }
        if (m.margin && (!best || *m.margin < *best)) {
            best = m.margin;
            r.binding = m.constraint;
        }
    }
    return r;
}

}  // namespace seapass
