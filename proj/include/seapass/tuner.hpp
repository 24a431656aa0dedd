#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "seapass/bounds.hpp"
#include "seapass/error.hpp"
#include "seapass/model.hpp"
#include "seapass/passivity.hpp"

namespace seapass {

struct TuningSpec {
    enum class Target { Null, Spring, Both };

    Target target = Target::Null;
    double kd = 0.0;  ///< virtual stiffness for Spring and Both
    /// Required relative slack (bound - actual)/bound on every bound, in (0, 1).
    double safety_margin = 0.1;
    std::optional<double> velocity_p_seed;
    std::optional<double> velocity_i_seed;
    /// Fixes Pt instead of deriving it from the bandwidth hint.
    std::optional<double> torque_p;
    double bandwidth_hint = 10.0;  ///< rad/s
    /// Spring targets use this fraction of the largest null-admissible It.
    double spring_it_fraction = 0.01;
};

struct TuningResult {
    ControllerGains gains;
    std::vector<std::string> trace;
};

namespace detail {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Largest It meeting both null bounds with slack m, or negative if the
// inertia bound cannot be met at It = 0.
inline double null_it_ceiling(const PlantParams& plant, double pm, double im, double pt, double m) {
    const double J = plant.inertia;
    const double b = plant.damping;
    const double by_inertia = ((1.0 - m) * (pm + b) * (1.0 + pm * pt) / J - pt * im) / pm;
    if (b == 0.0) return by_inertia;
    return std::min((1.0 - m) * pt * im / b, by_inertia);
}

inline bool margins_met(const PlantParams& plant, const ControllerGains& g, const RenderTarget& target, double m) {
    if (!check_closed_form(plant, g, target).passive) return false;
    for (const auto& mg : bounds_report(plant, g, target).margins) {
        if (mg.bound.is_none()) return false;
        if (mg.margin && *mg.margin < m - 1e-12) return false;
    }
    return true;
}

}  // namespace detail

/**
 * Rule-based gain recommendation.
 *
 * Pm and Im start from aggressive seeds (default Pm = 100 J, Im = Pm / 2).
 * Pt is taken from the bandwidth hint: under a velocity-source
 * approximation the null port looks like a damper 1/Pt, which crosses the
 * inertia line J w at w = 1/(J Pt), and the spring port looks like Kd in
 * series with that damper, with its corner at w = Pt Kd. The null target
 * takes the largest It allowed by the damping and inertia bounds; the spring
 * target keeps It small and raises Im until the stiffness bound clears Kd.
 * Pm is doubled whenever the inertia bound cannot be met.
 */
inline TuningResult tune(const PlantParams& plant, const TuningSpec& spec) {
    plant.validate();
    const double m = spec.safety_margin;
    if (!(m > 0.0 && m < 1.0)) throw Error(ErrorKind::InvalidArgument, "safety_margin must lie in (0, 1)");
    if (!(spec.bandwidth_hint > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidth_hint must be positive");
    if (!(spec.spring_it_fraction >= 0.0 && spec.spring_it_fraction <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "spring_it_fraction must lie in [0, 1]");
    const bool wants_spring = spec.target != TuningSpec::Target::Null;
    const double K = plant.stiffness;
    const double kd = wants_spring ? spec.kd : 0.0;
    if (wants_spring) {
        if (!(kd >= 0.0) || !std::isfinite(kd)) throw Error(ErrorKind::InvalidTarget, "virtual stiffness must be >= 0");
        if (kd / (1.0 - m) >= K)
            throw Error(ErrorKind::Infeasible, "requested stiffness with margin reaches the physical spring stiffness");
    }

    TuningResult out;
    auto& trace = out.trace;
    const auto note = [&](std::string s) { trace.push_back(std::move(s)); };

    double pm = spec.velocity_p_seed.value_or(100.0 * plant.inertia);
    double im0 = spec.velocity_i_seed.value_or(0.5 * pm);
    if (!(pm > 0.0) || !(im0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "seeds must be positive");
    note("velocity loop seeds Pm = " + detail::fmt_num(pm) + ", Im = " + detail::fmt_num(im0) +
         (spec.velocity_p_seed ? " (given)" : " (aggressive default)"));

    double pt;
    if (spec.torque_p) {
        pt = *spec.torque_p;
        if (!(pt > 0.0)) throw Error(ErrorKind::InvalidArgument, "torque_p must be positive");
        note("Pt = " + detail::fmt_num(pt) + " (given)");
    } else if (wants_spring && kd > 0.0) {
        pt = spec.bandwidth_hint / kd;
        note("Pt = hint / Kd = " + detail::fmt_num(pt) + ": spring corner at the bandwidth hint");
    } else {
        pt = 1.0 / (plant.inertia * spec.bandwidth_hint);
        note("Pt = 1 / (J hint) = " + detail::fmt_num(pt) + ": inertial crossover at the bandwidth hint");
    }

    std::vector<RenderTarget> targets;
    if (spec.target != TuningSpec::Target::Spring) targets.push_back(RenderTarget::null());
    if (wants_spring) targets.push_back(RenderTarget::spring(kd));

    const auto all_met = [&](const ControllerGains& g) {
        return std::all_of(targets.begin(), targets.end(),
                           [&](const RenderTarget& t) { return detail::margins_met(plant, g, t, m); });
    };

    for (int attempt = 0; attempt < 40; ++attempt, pm *= 2.0) {
        if (attempt > 0) note("inertia or margin not met: double Pm to " + detail::fmt_num(pm));
        double im = std::max(im0, spec.velocity_i_seed ? im0 : 0.5 * pm);

        if (!wants_spring) {
            const double it = detail::null_it_ceiling(plant, pm, im, pt, m);
            if (it < 0.0) continue;
            ControllerGains g{pm, im, pt, it};
            if (!all_met(g)) continue;
            note("It = " + detail::fmt_num(it) + ": largest value meeting the damping and inertia bounds");
            out.gains = g;
            return out;
        }

        const auto spring_gains = [&](double im_try) {
            const double ceiling = detail::null_it_ceiling(plant, pm, im_try, pt, m);
            return ControllerGains{pm, im_try, pt, spec.spring_it_fraction * std::max(0.0, ceiling)};
        };
        const double kd_needed = kd / (1.0 - m);
        const auto stiff_enough = [&](const ControllerGains& g) {
            const Bound kb = kd_max(plant, g);
            return kb.is_finite() && kb.value() >= kd_needed;
        };

        // Grow Im geometrically, then bisect back to the smallest adequate
        // value so the inertia bound is not tightened needlessly.
        double hi = im;
        int grow = 0;
        while (!stiff_enough(spring_gains(hi)) && grow < 200) hi *= 2.0, ++grow;
        if (!stiff_enough(spring_gains(hi))) break;
        if (grow > 0) {
            double lo = hi / 2.0;
            for (int i = 0; i < 60; ++i) {
                const double mid = 0.5 * (lo + hi);
                (stiff_enough(spring_gains(mid)) ? hi : lo) = mid;
            }
            // Step slightly inside so the stiffness margin is not exactly at m.
            hi *= 1.0 + 1e-9;
        }
        const ControllerGains g = spring_gains(hi);
        if (!all_met(g)) continue;
        if (grow > 0) note("Im raised to " + detail::fmt_num(hi) + " so the stiffness bound clears Kd / (1 - margin)");
        note("It = " + detail::fmt_num(g.torque_i) + ": " + detail::fmt_num(spec.spring_it_fraction) +
             " of the null-admissible maximum, a small torque integral for the spring target");
        out.gains = g;
        return out;
    }
    throw Error(ErrorKind::Infeasible, "no gain set met every bound with the requested margin");
}

}  // namespace seapass
