#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "seapass/bounds.hpp"
#include "seapass/model.hpp"
#include "seapass/passivity.hpp"

namespace seapass {

/// One inequality lhs < rhs of a design guideline.
struct GuidelineTerm {
    std::string expression;
    double lhs = 0.0;
    double rhs = 0.0;  ///< may be +inf when the right side has no bound
    bool holds = false;
    /// (rhs - lhs) / |rhs|; +1 when rhs is unbounded.
    double margin = 0.0;
};

struct GuidelineVerdict {
    std::string author;  ///< Vallery | Accoto | Ours
    bool passes = false;
    std::vector<GuidelineTerm> terms;
};

namespace detail {

inline GuidelineTerm less_than(std::string expr, double lhs, double rhs) {
    GuidelineTerm t{std::move(expr), lhs, rhs, lhs < rhs, 0.0};
    t.margin = std::isinf(rhs) ? 1.0 : (rhs - lhs) / std::abs(rhs);
    return t;
}

inline GuidelineVerdict all_of(std::string author, std::vector<GuidelineTerm> terms) {
    GuidelineVerdict v{std::move(author), true, std::move(terms)};
    for (const auto& t : v.terms) v.passes = v.passes && t.holds;
    return v;
}

inline double ratio_or_inf(double num, double den) { return den == 0.0 ? INFINITY : num / den; }

}  // namespace detail

/**
 * Evaluates the null-impedance and virtual-spring design guidelines of
 * Vallery et al. and Accoto et al. exactly as tabulated, next to the
 * necessary and sufficient closed-form conditions.
 */
inline std::vector<GuidelineVerdict> evaluate_prior_guidelines(const PlantParams& plant, const ControllerGains& g,
                                                               const RenderTarget& target) {
    const double J = plant.inertia;
    const double b = plant.damping;
    const double Pm = g.velocity_p;
    const double Im = g.velocity_i;
    const double Pt = g.torque_p;
    const double It = g.torque_i;
    const double alpha = Pm * It + Pt * Im;
    const bool spring = target.is_spring();
    const double kd = target.virtual_stiffness();

    std::vector<GuidelineTerm> vallery{
        detail::less_than("J < Pm", J, Pm),
        detail::less_than("2 Im < Pm", 2.0 * Im, Pm),
        detail::less_than("2 It < Pt", 2.0 * It, Pt),
    };
    if (spring) {
        PlantParams undamped = plant;
        undamped.damping = 0.0;
        const Bound kd_b0 = kd_max(undamped, g);
        vallery.push_back(detail::less_than("Kd < Kd_max(b=0)", kd, kd_b0.is_finite() ? kd_b0.value() : 0.0));
    }

    std::vector<GuidelineTerm> accoto{
        detail::less_than("J < (Pm+b) Pm Pt / alpha", J, detail::ratio_or_inf((Pm + b) * Pm * Pt, alpha)),
        detail::less_than("b < Pt Im / It", b, detail::ratio_or_inf(Pt * Im, It)),
    };
    if (spring) {
        const Bound kdm = kd_max(plant, g);
        accoto.push_back(detail::less_than("Kd < Kd_max", kd, kdm.is_finite() ? kdm.value() : 0.0));
    }

    const auto ours_verdict = check_closed_form(plant, g, target);
    const auto report = bounds_report(plant, g, target);
    std::vector<GuidelineTerm> ours;
    const auto as_rhs = [](const Bound& bd) {
        return bd.is_finite() ? bd.value() : (bd.is_unbounded() ? INFINITY : 0.0);
    };
    ours.push_back(detail::less_than(spring ? "J < J_max^spr" : "J < J_max", J, as_rhs(report.j_max)));
    ours.push_back(detail::less_than("b < b_max", b, as_rhs(report.b_max)));
    if (spring && report.kd_max) ours.push_back(detail::less_than("Kd < Kd_max", kd, as_rhs(*report.kd_max)));
    // The exact verdict honours the non-strict boundary cases and degenerate gains.
    GuidelineVerdict ours_v{"Ours", ours_verdict.passive, std::move(ours)};

    return {detail::all_of("Vallery", std::move(vallery)), detail::all_of("Accoto", std::move(accoto)),
            std::move(ours_v)};
}

}  // namespace seapass
