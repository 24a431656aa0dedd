#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "seapass/error.hpp"
#include "seapass/model.hpp"
#include "seapass/rational.hpp"

namespace seapass {

struct BodeSample {
    double w = 0.0;             ///< rad/s
    double magnitude_db = 0.0;  ///< 20 log10 |Z(jw)|
    double phase_deg = 0.0;     ///< unwrapped along the sweep
};

struct SweepSpec {
    double wmin = 1e-3;
    double wmax = 1e6;
    int points_per_decade = 200;

    void validate() const {
        if (!(wmin > 0.0) || !(wmax > wmin) || !std::isfinite(wmax))
            throw Error(ErrorKind::InvalidArgument, "sweep needs 0 < wmin < wmax");
        if (points_per_decade < 1) throw Error(ErrorKind::InvalidArgument, "sweep needs points_per_decade >= 1");
    }

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

namespace detail {

inline double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

// Shift `raw` by multiples of 360 to the branch closest to `reference`.
inline double unwrap_towards(double raw, double reference) {
    double d = std::remainder(raw - reference, 360.0);
    return reference + d;
}

inline bool at_pole(const RationalTransferFunction& tf, double w) {
    const std::complex<double> s{0.0, w};
    return std::abs(tf.den()(s)) <= 1e-12 * tf.den().abs_scale(s);
}

}  // namespace detail

/**
 * Log-spaced frequency response. A grid point that lands on an
 * imaginary-axis pole is moved up by half a grid step; EvalAtPole is thrown
 * only if the moved point is still a pole.
 */
inline std::vector<BodeSample> bode(const RationalTransferFunction& tf, double wmin, double wmax,
                                    int points_per_decade) {
    SweepSpec{wmin, wmax, points_per_decade}.validate();
    const double decades = std::log10(wmax / wmin);
    const int n = static_cast<int>(std::ceil(decades * points_per_decade - 1e-9)) + 1;
    const double half_step = std::pow(10.0, 0.5 / points_per_decade);
    std::vector<BodeSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double w = wmin * std::pow(10.0, decades * i / (n - 1));
        if (detail::at_pole(tf, w)) {
            w *= half_step;
            if (detail::at_pole(tf, w)) throw Error(ErrorKind::EvalAtPole, "frequency grid hits a pole");
        }
        const auto z = tf({0.0, w});
        const double raw = detail::rad_to_deg(std::arg(z));
        const double phase = out.empty() ? raw : detail::unwrap_towards(raw, out.back().phase_deg);
        out.push_back({w, 20.0 * std::log10(std::abs(z)), phase});
    }
    return out;
}

inline std::vector<BodeSample> bode(const RationalTransferFunction& tf, const SweepSpec& sweep = {}) {
    return bode(tf, sweep.wmin, sweep.wmax, sweep.points_per_decade);
}

struct PhaseExtrema {
    double max_phase_deg = 0.0;
    double argmax_w = 0.0;
    double min_phase_deg = 0.0;
    double argmin_w = 0.0;
};

namespace detail {

// Golden-section search of phase (on the branch of `reference`) over
// [lo, hi] in log frequency; `sign` = +1 maximizes, -1 minimizes.
inline std::pair<double, double> refine_phase(const RationalTransferFunction& tf, double lo, double hi,
                                              double reference, double sign) {
    const auto phase_at = [&](double logw) {
        const double w = std::pow(10.0, logw);
        return unwrap_towards(rad_to_deg(std::arg(tf({0.0, w}))), reference);
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log10(lo);
    double b = std::log10(hi);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = sign * phase_at(c);
    double fd = sign * phase_at(d);
    // Stop once the bracket is below 1e-6 relative in frequency.
    while (b - a > 4.3e-7) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sign * phase_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sign * phase_at(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {std::pow(10.0, x), phase_at(x)};
}

}  // namespace detail

/// Phase extrema of a sweep, each refined by golden-section search between
/// the neighbours of the discrete extremum. Endpoint extrema are not refined.
inline PhaseExtrema phase_extrema(const RationalTransferFunction& tf, const std::vector<BodeSample>& samples) {
    if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "phase_extrema of an empty sweep");
    std::size_t imax = 0;
    std::size_t imin = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].phase_deg > samples[imax].phase_deg) imax = i;
        if (samples[i].phase_deg < samples[imin].phase_deg) imin = i;
    }
    PhaseExtrema out{samples[imax].phase_deg, samples[imax].w, samples[imin].phase_deg, samples[imin].w};
    const auto interior = [&](std::size_t i) { return i > 0 && i + 1 < samples.size(); };
    if (interior(imax)) {
        const auto [w, p] = detail::refine_phase(tf, samples[imax - 1].w, samples[imax + 1].w,
                                                 samples[imax].phase_deg, +1.0);
        if (p > out.max_phase_deg) out.max_phase_deg = p, out.argmax_w = w;
    }
    if (interior(imin)) {
        const auto [w, p] = detail::refine_phase(tf, samples[imin - 1].w, samples[imin + 1].w,
                                                 samples[imin].phase_deg, -1.0);
        if (p < out.min_phase_deg) out.min_phase_deg = p, out.argmin_w = w;
    }
    return out;
}

struct RegimeSegmentation {
    std::array<double, 2> boundaries{};    ///< rad/s, increasing
    std::array<std::string, 3> labels{};  ///< low, middle, high band
};

/// Local magnitude slope in dB/decade by central differences (one-sided at the ends).
inline std::vector<double> magnitude_slopes(const std::vector<BodeSample>& s) {
    std::vector<double> out(s.size(), 0.0);
    if (s.size() < 2) return out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == s.size() ? i : i + 1;
        out[i] = (s[hi].magnitude_db - s[lo].magnitude_db) / (std::log10(s[hi].w) - std::log10(s[lo].w));
    }
    return out;
}

/**
 * Splits a sweep into the three behaviour bands of the rendered impedance.
 *
 * Null: inertial (+20 dB/dec), damping (0), physical spring (-20); the
 * boundaries are the first downward crossings of +10 and then -10 dB/dec.
 * Spring: virtual stiffness (-20), damping, physical spring (-20); the
 * boundaries are the first upward crossing of -10 dB/dec and the next
 * downward one.
 */
inline RegimeSegmentation segment_regimes(const std::vector<BodeSample>& samples, const RenderTarget& target) {
    if (samples.size() < 3) throw Error(ErrorKind::InsufficientSpan, "sweep too short to segment");
    const auto slope = magnitude_slopes(samples);
    const bool spring = target.is_spring() && target.stiffness > 0.0;

    const auto crossing = [&](std::size_t from, double level, bool downward) -> std::size_t {
        for (std::size_t i = std::max<std::size_t>(from, 1); i < slope.size(); ++i) {
            const bool crossed = downward ? (slope[i - 1] >= level && slope[i] < level)
                                          : (slope[i - 1] <= level && slope[i] > level);
            if (crossed) return i;
        }
        return slope.size();
    };
    const auto interpolate = [&](std::size_t i, double level) {
        const double l0 = std::log10(samples[i - 1].w);
        const double l1 = std::log10(samples[i].w);
        const double t = (level - slope[i - 1]) / (slope[i] - slope[i - 1]);
        return std::pow(10.0, l0 + t * (l1 - l0));
    };

    RegimeSegmentation seg;
    std::size_t first;
    double first_level;
    if (spring) {
        if (!(slope.front() < -10.0)) throw Error(ErrorKind::InsufficientSpan, "sweep starts past the stiffness band");
        first_level = -10.0;
        first = crossing(1, first_level, false);
        seg.labels = {"stiffness", "damping", "spring"};
    } else {
        if (!(slope.front() > 10.0)) throw Error(ErrorKind::InsufficientSpan, "sweep starts past the inertial band");
        first_level = 10.0;
        first = crossing(1, first_level, true);
        seg.labels = {"inertial", "damping", "spring"};
    }
    if (first >= slope.size()) throw Error(ErrorKind::InsufficientSpan, "first regime boundary outside the sweep");
    const std::size_t second = crossing(first + 1, -10.0, true);
    if (second >= slope.size()) throw Error(ErrorKind::InsufficientSpan, "second regime boundary outside the sweep");
    seg.boundaries = {interpolate(first, first_level), interpolate(second, -10.0)};
    return seg;
}

inline const std::string& regime_label(const RegimeSegmentation& seg, double w) {
    if (w < seg.boundaries[0]) return seg.labels[0];
    if (w < seg.boundaries[1]) return seg.labels[1];
    return seg.labels[2];
}

}  // namespace seapass
