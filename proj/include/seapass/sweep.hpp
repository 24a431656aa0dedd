#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "seapass/model.hpp"
#include "seapass/passivity.hpp"

namespace seapass {

/// One random analysis point.
struct Sample {
    PlantParams plant;
    ControllerGains gains;
    RenderTarget target;
};

/**
 * Log-uniform sampler over plant and gain ranges. Spring targets draw Kd
 * uniformly from [kd_lo_ratio K, kd_hi_ratio K]. Sample i depends only on
 * (seed, i), so sweeps are reproducible and order-independent.
 */
struct SamplerConfig {
    std::size_t count = 10000;
    std::uint64_t seed = 20190202;
    RenderTarget::Kind target = RenderTarget::Kind::Null;
    double plant_lo = 1e-2;
    double plant_hi = 1e3;
    double gain_lo = 1e-2;
    double gain_hi = 1e3;
    double kd_lo_ratio = 0.0;
    double kd_hi_ratio = 2.0;
    double boundary_band = 1e-6;
};

namespace detail {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

// Spread one index into an independent stream (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

inline Sample draw_sample(const SamplerConfig& cfg, std::size_t index) {
    std::mt19937_64 rng(detail::mix_seed(cfg.seed, index));
    Sample s;
    s.plant.inertia = detail::log_uniform(rng, cfg.plant_lo, cfg.plant_hi);
    s.plant.damping = detail::log_uniform(rng, cfg.plant_lo, cfg.plant_hi);
    s.plant.stiffness = detail::log_uniform(rng, cfg.plant_lo, cfg.plant_hi);
    s.gains.velocity_p = detail::log_uniform(rng, cfg.gain_lo, cfg.gain_hi);
    s.gains.velocity_i = detail::log_uniform(rng, cfg.gain_lo, cfg.gain_hi);
    s.gains.torque_p = detail::log_uniform(rng, cfg.gain_lo, cfg.gain_hi);
    s.gains.torque_i = detail::log_uniform(rng, cfg.gain_lo, cfg.gain_hi);
    if (cfg.target == RenderTarget::Kind::Spring) {
        std::uniform_real_distribution<double> u(cfg.kd_lo_ratio, cfg.kd_hi_ratio);
        s.target = RenderTarget::spring(u(rng) * s.plant.stiffness);
    }
    return s;
}

struct Disagreement {
    std::size_t index = 0;
    Sample sample;
    PassivityVerdict closed_form;
    PassivityVerdict numeric;
};

struct AgreementReport {
    std::size_t samples = 0;
    std::size_t compared = 0;
    std::size_t marginal_excluded = 0;
    std::size_t passive = 0;
    std::vector<Disagreement> disagreements;
};

/// Both passivity routes on every sample; disagreements outside the boundary
/// band are reported in sample order.
inline AgreementReport agreement_sweep(const SamplerConfig& cfg, unsigned threads = 0) {
    struct Outcome {
        bool marginal = false;
        bool passive = false;
        bool agree = true;
        PassivityVerdict closed;
        PassivityVerdict numeric;
    };
    std::vector<Outcome> outcomes(cfg.count);
    PassivityTolerances tol;
    tol.boundary_band = cfg.boundary_band;

    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Sample s = draw_sample(cfg, i);
            Outcome& o = outcomes[i];
            o.closed = check_closed_form(s.plant, s.gains, s.target, cfg.boundary_band);
            if (o.closed.marginal) {
                o.marginal = true;
                continue;
            }
            o.numeric = check_numeric(build_output_impedance(s.plant, s.gains, s.target), tol);
            o.passive = o.closed.passive;
            o.agree = o.closed.passive == o.numeric.passive;
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, cfg.count)));
    if (threads <= 1) {
        work(0, cfg.count);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.count + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(cfg.count, t * chunk);
            const std::size_t end = std::min(cfg.count, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    AgreementReport report;
    report.samples = cfg.count;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        if (o.marginal) {
            ++report.marginal_excluded;
            continue;
        }
        ++report.compared;
        if (o.passive) ++report.passive;
        if (!o.agree) report.disagreements.push_back({i, draw_sample(cfg, i), o.closed, o.numeric});
    }
    return report;
}

}  // namespace seapass
