#include <random>

#include <gtest/gtest.h>

#include "seapass/tuner.hpp"

using namespace seapass;

namespace {

const PlantParams kPlant{0.2, 3.0, 250.0};

void expect_margins(const PlantParams& p, const ControllerGains& g, const RenderTarget& t, double m) {
    EXPECT_TRUE(check_closed_form(p, g, t).passive) << to_string(t);
    for (const auto& mg : bounds_report(p, g, t).margins) {
        EXPECT_FALSE(mg.bound.is_none()) << mg.constraint;
        if (mg.margin) {
            EXPECT_GE(*mg.margin, m - 1e-9) << mg.constraint;
        }
    }
}

double lu(std::mt19937_64& rng, double lo = 1e-2, double hi = 1e3) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

}  // namespace

TEST(Tuner, NullWithPinnedSeedsTakesTheDampingLimit) {
    TuningSpec spec;
    spec.velocity_p_seed = 20.0;
    spec.velocity_i_seed = 10.0;
    spec.torque_p = 5.0;
    const auto r = tune(kPlant, spec);
    // It <= 0.9 * Pt Im / b = 15, and the inertia bound allows far more.
    EXPECT_NEAR(r.gains.torque_i, 15.0, 1e-12);
    EXPECT_EQ(r.gains.velocity_p, 20.0);
    EXPECT_EQ(r.gains.velocity_i, 10.0);
    expect_margins(kPlant, r.gains, RenderTarget::null(), 0.1);
    EXPECT_FALSE(r.trace.empty());
}

TEST(Tuner, StiffnessAtPhysicalSpringIsInfeasible) {
    TuningSpec spec;
    spec.target = TuningSpec::Target::Spring;
    spec.kd = 240.0;
    try {
        (void)tune(kPlant, spec);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    }
}

TEST(Tuner, BothTargetsFromOneGainSet) {
    TuningSpec spec;
    spec.target = TuningSpec::Target::Both;
    spec.kd = 50.0;
    const auto r = tune(kPlant, spec);
    expect_margins(kPlant, r.gains, RenderTarget::null(), 0.1);
    expect_margins(kPlant, r.gains, RenderTarget::spring(50.0), 0.1);
}

TEST(Tuner, SpringRaisesVelocityIntegralUntilStiffnessFits) {
    TuningSpec spec;
    spec.target = TuningSpec::Target::Spring;
    spec.kd = 200.0;
    spec.velocity_i_seed = 1.0;
    const auto r = tune(kPlant, spec);
    EXPECT_GT(r.gains.velocity_i, 1.0);
    EXPECT_GE(kd_max(kPlant, r.gains).value(), 200.0 / 0.9 * (1 - 1e-9));
    expect_margins(kPlant, r.gains, RenderTarget::spring(200.0), 0.1);
}

TEST(Tuner, InertiaShortfallDoublesVelocityGain) {
    PlantParams heavy = kPlant;
    heavy.inertia = 50.0;
    TuningSpec spec;
    spec.velocity_p_seed = 1.0;
    spec.velocity_i_seed = 10.0;
    spec.torque_p = 0.01;
    const auto r = tune(heavy, spec);
    EXPECT_GT(r.gains.velocity_p, 1.0);
    expect_margins(heavy, r.gains, RenderTarget::null(), 0.1);
}

TEST(Tuner, RejectsBadSpecs) {
    TuningSpec spec;
    spec.safety_margin = 1.0;
    EXPECT_THROW((void)tune(kPlant, spec), Error);
    spec.safety_margin = 0.0;
    EXPECT_THROW((void)tune(kPlant, spec), Error);
}

TEST(Properties, EveryResultPassesItsTargets) {
    std::mt19937_64 rng(83);
    int feasible = 0;
    for (int i = 0; i < 300; ++i) {
        const PlantParams p{lu(rng), lu(rng), lu(rng)};
        TuningSpec spec;
        spec.safety_margin = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
        spec.target = static_cast<TuningSpec::Target>(i % 3);
        spec.kd = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * p.stiffness;
        try {
            const auto r = tune(p, spec);
            ++feasible;
            if (spec.target != TuningSpec::Target::Spring) expect_margins(p, r.gains, RenderTarget::null(), spec.safety_margin);
            if (spec.target != TuningSpec::Target::Null)
                expect_margins(p, r.gains, RenderTarget::spring(spec.kd), spec.safety_margin);
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
            // A larger margin cannot rescue an infeasible request.
            spec.safety_margin = std::min(0.99, spec.safety_margin * 1.5);
            EXPECT_THROW((void)tune(p, spec), Error);
        }
    }
    EXPECT_GT(feasible, 200);
}
