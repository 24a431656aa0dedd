// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "seapass/seapass.hpp"

using namespace seapass;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s %s %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool numeric_passive(const PlantParams& p, const ControllerGains& g, const RenderTarget& t) {
    return check_numeric(build_output_impedance(p, g, t)).passive;
}

// Largest passive value of a scalar parameter, given a passive lower and a
// non-passive upper end of the bracket.
std::optional<double> boundary(const std::function<bool(double)>& passive_at, double lo, double hi) {
    if (!passive_at(lo) || passive_at(hi)) return std::nullopt;
    for (int i = 0; i < 60; ++i) {
        const double mid = std::sqrt(lo * hi);
        (passive_at(mid) ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

const PlantParams kPlant{0.2, 3.0, 250.0};

void equivalence_and_guidelines() {
    Stopwatch clock;
    std::size_t compared = 0, disagreements = 0, excluded = 0;
    std::size_t vallery_only = 0, accoto_only = 0, vallery_pass = 0, accoto_pass = 0;
    for (auto kind : {RenderTarget::Kind::Null, RenderTarget::Kind::Spring}) {
        SamplerConfig cfg;
        cfg.count = 10000;
        cfg.target = kind;
        const auto r = agreement_sweep(cfg);
        compared += r.compared;
        disagreements += r.disagreements.size();
        excluded += r.marginal_excluded;
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const Sample s = draw_sample(cfg, i);
            const auto v = evaluate_prior_guidelines(s.plant, s.gains, s.target);
            vallery_pass += v[0].passes;
            accoto_pass += v[1].passes;
            if (v[0].passes && !v[2].passes) ++vallery_only;
            if (v[1].passes && !v[2].passes) ++accoto_only;
        }
    }
    const double t = clock.seconds();
    report("1", disagreements == 0 && compared >= 19000 && t < 60.0, "closed-form and numeric routes agree",
           std::to_string(disagreements) + " disagreements over " + std::to_string(compared) + " samples (" +
               std::to_string(excluded) + " marginal excluded), " + fmt("%.1f s", t));
    report("5a", accoto_only == 0, "product-bound guideline passing implies exact conditions pass",
           std::to_string(accoto_only) + " violations among " + std::to_string(accoto_pass) + " guideline passes");
    report("5b", vallery_only == 0, "gain-ordering guideline passing implies exact conditions pass",
           std::to_string(vallery_only) + " violations among " + std::to_string(vallery_pass) + " guideline passes");
}

void damping_counterexample() {
    Stopwatch clock;
    double peaks[2];
    int k = 0;
    for (double it : {15.0, 80.0}) {
        const auto tf = build_null_impedance(kPlant, ControllerGains{20.0, 10.0, 5.0, it});
        peaks[k++] = phase_extrema(tf, bode(tf, SweepSpec{})).max_phase_deg;
    }
    const double t = clock.seconds();
    report("2a", peaks[0] <= 90.000001 && t < 1.0, "tuned controller keeps phase within 90 deg",
           "max phase " + fmt("%.6f deg", peaks[0]) + fmt(", %.3f s", t));
    report("2b", peaks[1] >= 93.2 && peaks[1] <= 93.8 && t < 1.0,
           "damping-violating controller peaks in [93.2, 93.8] deg", "max phase " + fmt("%.4f deg", peaks[1]));
}

void searched_bounds() {
    Stopwatch clock;
    SamplerConfig cfg;
    cfg.seed = 7;
    double worst = 0.0;
    int invalid = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const Sample s = draw_sample(cfg, i);
        const ControllerGains& g = s.gains;
        const double bm = b_max(g).value();

        PlantParams q = s.plant;
        q.inertia = 0.5 * j_max_null(0.0, g).value();
        const auto b_found = boundary(
            [&](double b) {
                q.damping = b;
                return numeric_passive(q, g, RenderTarget::null());
            },
            bm * 1e-3, bm * 1e3);

        // The remaining searches need b < b_max.
        PlantParams p = s.plant;
        p.damping = std::min(p.damping, 0.5 * bm);
        const double jm = j_max_null(p.damping, g).value();
        q = p;
        const auto j_found = boundary(
            [&](double J) {
                q.inertia = J;
                return numeric_passive(q, g, RenderTarget::null());
            },
            jm * 1e-3, jm * 1e3);

        const double kdm = kd_max(p, g).value();
        q = p;
        q.inertia = 0.5 * jm;
        const auto kd_found = boundary([&](double kd) { return numeric_passive(q, g, RenderTarget::spring(kd)); },
                                       kdm * 1e-3, 0.5 * (kdm + p.stiffness));

        const double kd = 0.5 * kdm;
        const double js = j_max_spring(p.damping, g, p.stiffness, kd).value();
        q = p;
        const auto js_found = boundary(
            [&](double J) {
                q.inertia = J;
                return numeric_passive(q, g, RenderTarget::spring(kd));
            },
            js * 1e-3, js * 1e3);

        const std::pair<std::optional<double>, double> pairs[] = {
            {b_found, bm}, {j_found, jm}, {kd_found, kdm}, {js_found, js}};
        for (const auto& [found, want] : pairs) {
            if (!found) {
                ++invalid;
                continue;
            }
            worst = std::max(worst, rel(*found, want));
        }
    }
    const double t = clock.seconds();
    report("3", invalid == 0 && worst < 1e-3 && t < 30.0, "searched passivity boundaries match bound formulas",
           "worst relative gap " + fmt("%.2e", worst) + ", " + std::to_string(invalid) + " invalid brackets, " +
               fmt("%.1f s", t));
}

void fixtures() {
    const ControllerGains null_gains{20.0, 10.0, 5.0, 5.0};
    const ControllerGains spring_gains{20.0, 100.0, 30.0, 5.0};
    const auto spring = RenderTarget::spring(50.0);
    const bool null_passive = check_closed_form(kPlant, null_gains, RenderTarget::null()).passive &&
                              numeric_passive(kPlant, null_gains, RenderTarget::null());
    const bool bmax_exact = b_max(null_gains).value() == 10.0;
    const double jerr = rel(j_max_null(kPlant.damping, null_gains).value(), 2323.0 / 150.0);
    const bool spring_passive =
        check_closed_form(kPlant, spring_gains, spring).passive && numeric_passive(kPlant, spring_gains, spring);
    const double kerr = rel(kd_max(kPlant, spring_gains).value(), 74625000.0 / 1073500.0);
    report("4a", null_passive && bmax_exact && jerr < 1e-12 && spring_passive && kerr < 1e-12,
           "nominal fixtures: verdicts and bound values",
           std::string("b_max exact ") + (bmax_exact ? "yes" : "no") + fmt(", J_max rel err %.1e", jerr) +
               fmt(", Kd_max rel err %.1e", kerr));
    const auto residue = residue_simple_pole(build_spring_impedance(kPlant, spring_gains, 50.0), 0.0);
    report("4b", std::abs(residue - 10.0) < 1e-9, "spring origin residue equals 10",
           "residue " + fmt("%.12g", residue.real()) + fmt(" + %.3gi", residue.imag()));
}

void degenerate_cases() {
    std::mt19937_64 rng(101);
    const auto lu = [&] { return std::exp(std::uniform_real_distribution<double>(std::log(1e-2), std::log(1e3))(rng)); };
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        const PlantParams p{lu(), lu(), lu()};
        const ControllerGains g{lu(), 0.0, lu(), 0.0};
        if (!check_closed_form(p, g, RenderTarget::null()).passive || !numeric_passive(p, g, RenderTarget::null()))
            ++bad;
    }
    for (int i = 0; i < 100; ++i) {
        const PlantParams p{lu(), lu(), lu()};
        const ControllerGains g{lu(), 0.0, lu(), lu()};
        const auto t = RenderTarget::spring(std::uniform_real_distribution<double>(1e-6, 2.0)(rng) * p.stiffness);
        if (check_closed_form(p, g, t).passive || numeric_passive(p, g, t)) ++bad;
    }
    for (int i = 0; i < 100; ++i) {
        const PlantParams p{lu(), lu(), lu()};
        const ControllerGains g{lu(), lu(), lu(), lu()};
        const auto spring0 = RenderTarget::spring(0.0);
        if (check_closed_form(p, g, spring0).passive != check_closed_form(p, g, RenderTarget::null()).passive) ++bad;
        if (numeric_passive(p, g, spring0) != numeric_passive(p, g, RenderTarget::null())) ++bad;
    }
    report("6", bad == 0, "degenerate integral gains and zero virtual stiffness",
           std::to_string(bad) + " mismatches over 300 configurations");
}

void structural() {
    SamplerConfig cfg;
    cfg.seed = 11;
    cfg.target = RenderTarget::Kind::Spring;
    double worst = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) {
        const Sample s = draw_sample(cfg, i);
        const RenderTarget t = i % 2 ? RenderTarget::null() : s.target;
        worst = std::max(worst, coefficient_mismatch(assemble_block_diagram(s.plant, s.gains, t),
                                                     build_output_impedance(s.plant, s.gains, t)));
    }
    report("7", worst < 1e-9, "block-diagram assembly matches closed-form builders",
           "worst coefficient mismatch " + fmt("%.2e", worst));
}

void phase_bound() {
    SamplerConfig cfg;
    cfg.seed = 13;
    cfg.target = RenderTarget::Kind::Spring;
    int accepted = 0;
    double worst = 0.0;
    for (std::size_t i = 0; accepted < 1000 && i < 200000; ++i) {
        const Sample s = draw_sample(cfg, i);
        const RenderTarget t = i % 2 ? RenderTarget::null() : s.target;
        const auto v = check_closed_form(s.plant, s.gains, t);
        if (!v.passive || v.marginal) continue;
        ++accepted;
        const auto tf = build_output_impedance(s.plant, s.gains, t);
        const auto e = phase_extrema(tf, bode(tf, SweepSpec{}));
        worst = std::max({worst, e.max_phase_deg - 90.0, -90.0 - e.min_phase_deg});
    }
    report("8", accepted == 1000 && worst <= 1e-6, "accepted configurations keep phase within +-90 deg",
           std::to_string(accepted) + " configurations, worst excess " + fmt("%.2e deg", worst));
}

}  // namespace

int main() {
    equivalence_and_guidelines();
    damping_counterexample();
    searched_bounds();
    fixtures();
    degenerate_cases();
    structural();
    phase_bound();
    std::printf("%d failing criteria\n", failures);
    return failures == 0 ? 0 : 1;
}
