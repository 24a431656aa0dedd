#pragma once

#include <array>
#include <cmath>
#include <string>

#include "seapass/error.hpp"
#include "seapass/polynomial.hpp"
#include "seapass/rational.hpp"

namespace seapass {

/// Motor-side SEA plant, SI units. Load inertia is not modelled.
struct PlantParams {
    double inertia = 0.0;    ///< J, kg m^2
    double damping = 0.0;    ///< b, N m s/rad
    double stiffness = 0.0;  ///< K, N m/rad

    void validate() const {
        if (!(inertia > 0.0) || !std::isfinite(inertia))
            throw Error(ErrorKind::InvalidArgument, "plant.inertia must be > 0");
        if (!(damping >= 0.0) || !std::isfinite(damping))
            throw Error(ErrorKind::InvalidArgument, "plant.damping must be >= 0");
        if (!(stiffness > 0.0) || !std::isfinite(stiffness))
            throw Error(ErrorKind::InvalidArgument, "plant.stiffness must be > 0");
    }

    friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

/// Cascaded PI gains: inner velocity loop, intermediate torque loop.
struct ControllerGains {
    double velocity_p = 0.0;  ///< Pm, N m s/rad
    double velocity_i = 0.0;  ///< Im, N m/rad
    double torque_p = 0.0;    ///< Pt, rad/(s N m)
    double torque_i = 0.0;    ///< It, rad/(s^2 N m)

    void validate() const {
        if (!(velocity_p > 0.0) || !std::isfinite(velocity_p))
            throw Error(ErrorKind::InvalidArgument, "gains.velocity_p must be > 0");
        if (!(torque_p > 0.0) || !std::isfinite(torque_p))
            throw Error(ErrorKind::InvalidArgument, "gains.torque_p must be > 0");
        if (!(velocity_i >= 0.0) || !std::isfinite(velocity_i))
            throw Error(ErrorKind::InvalidArgument, "gains.velocity_i must be >= 0");
        if (!(torque_i >= 0.0) || !std::isfinite(torque_i))
            throw Error(ErrorKind::InvalidArgument, "gains.torque_i must be >= 0");
    }

    friend bool operator==(const ControllerGains&, const ControllerGains&) = default;
};

/// Impedance displayed at the interaction port around theta_d = 0.
struct RenderTarget {
    enum class Kind { Null, Spring };

    Kind kind = Kind::Null;
    double stiffness = 0.0;  ///< Kd, N m/rad; Spring only

    static RenderTarget null() { return {}; }
    static RenderTarget spring(double kd) { return {Kind::Spring, kd}; }

    [[nodiscard]] bool is_spring() const noexcept { return kind == Kind::Spring; }
    /// Kd seen by the closed-loop equations; zero for Null.
    [[nodiscard]] double virtual_stiffness() const noexcept { return is_spring() ? stiffness : 0.0; }

    void validate() const {
        if (is_spring() && (!(stiffness >= 0.0) || !std::isfinite(stiffness)))
            throw Error(ErrorKind::InvalidTarget, "target.stiffness must be >= 0");
    }

    friend bool operator==(const RenderTarget&, const RenderTarget&) = default;
};

inline std::string to_string(const RenderTarget& t) {
    if (!t.is_spring()) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "spring(%.6g)", t.stiffness);
    return buf;
}

/// Intermediate quantities of the closed-form passivity conditions.
struct ClosedFormCoefficients {
    double alpha = 0.0;    ///< Pm It + Pt Im
    double gamma = 0.0;    ///< K Pm Pt + Im
    double delta = 0.0;    ///< Pm Pt Kd + Im
    double beta = 0.0;     ///< Pt Im^2 - b Im It
    double eta = 0.0;      ///< Pm^2 Pt + Pm Pt b - J alpha
    double delta_k = 0.0;  ///< K - Kd
    double xi = 0.0;       ///< a1 a2 a3 - a0 a3^2 - a4 a1^2 of D_Z
    double d2 = 0.0;       ///< null P(w) coefficient of w^2
    double d4 = 0.0;       ///< null P(w) coefficient of w^4
    double d4_spring = 0.0;
    double d6 = 0.0;
};

inline ClosedFormCoefficients closed_form_coefficients(const PlantParams& plant, const ControllerGains& g,
                                                       double kd = 0.0) {
    const double J = plant.inertia;
    const double b = plant.damping;
    const double K = plant.stiffness;
    const double Pm = g.velocity_p;
    const double Im = g.velocity_i;
    const double Pt = g.torque_p;
    const double It = g.torque_i;

    ClosedFormCoefficients c;
    c.alpha = Pm * It + Pt * Im;
    c.gamma = K * Pm * Pt + Im;
    c.delta = Pm * Pt * kd + Im;
    c.beta = Pt * Im * Im - b * Im * It;
    c.eta = Pm * Pm * Pt + Pm * Pt * b - J * c.alpha;
    c.delta_k = K - kd;
    c.xi = c.alpha * K * (Pm + b) * (K + c.gamma) - K * Im * It * (Pm + b) * (Pm + b) - J * K * K * c.alpha * c.alpha;
    c.d2 = K * K * (Pt * Im * Im - b * It * Im);
    c.d4 = K * K * ((Pm + b) * (1.0 + Pm * Pt) - J * c.alpha);
    c.d4_spring = K * (c.delta_k * c.beta - c.alpha * K * kd);
    c.d6 = K * (c.delta_k * c.eta + K * (Pm + b));
    return c;
}

/// Closed-loop characteristic polynomial J s^4 + (Pm+b) s^3 + (K+gamma) s^2 + alpha K s + K Im It.
inline Polynomial null_characteristic(const PlantParams& plant, const ControllerGains& g) {
    const auto c = closed_form_coefficients(plant, g);
    const double K = plant.stiffness;
    return Polynomial{K * g.velocity_i * g.torque_i, c.alpha * K, K + c.gamma,
                      g.velocity_p + plant.damping, plant.inertia};
}

/// Output impedance for zero desired impedance; degenerate integral gains
/// reduce the degree through exact s-factor cancellation.
inline RationalTransferFunction build_null_impedance(const PlantParams& plant, const ControllerGains& g) {
    const double K = plant.stiffness;
    // K s (J s^2 + (Pm+b) s + Im)
    Polynomial num{0.0, K * g.velocity_i, K * (g.velocity_p + plant.damping), K * plant.inertia};
    return {std::move(num), null_characteristic(plant, g)};
}

/// Output impedance while rendering a virtual spring of stiffness kd >= 0.
inline RationalTransferFunction build_spring_impedance(const PlantParams& plant, const ControllerGains& g, double kd) {
    if (!(kd >= 0.0)) throw Error(ErrorKind::InvalidTarget, "virtual stiffness must be >= 0");
    const auto c = closed_form_coefficients(plant, g, kd);
    const double K = plant.stiffness;
    Polynomial num{K * kd * g.velocity_i * g.torque_i, K * c.alpha * kd, K * c.delta,
                   K * (g.velocity_p + plant.damping), K * plant.inertia};
    Polynomial den = Polynomial{0.0, 1.0} * null_characteristic(plant, g);
    return {std::move(num), std::move(den)};
}

inline RationalTransferFunction build_output_impedance(const PlantParams& plant, const ControllerGains& g,
                                                       const RenderTarget& target) {
    return target.is_spring() ? build_spring_impedance(plant, g, target.stiffness) : build_null_impedance(plant, g);
}

namespace detail {

template <std::size_t N>
using PolyMatrix = std::array<std::array<Polynomial, N>, N>;

// Cofactor expansion along the first row, skipping zero entries.
template <std::size_t N>
Polynomial determinant(const PolyMatrix<N>& m) {
    if constexpr (N == 1) {
        return m[0][0];
    } else {
        Polynomial acc;
        for (std::size_t col = 0; col < N; ++col) {
            if (m[0][col].is_zero()) continue;
            PolyMatrix<N - 1> minor;
            for (std::size_t r = 1; r < N; ++r)
                for (std::size_t c = 0, k = 0; c < N; ++c)
                    if (c != col) minor[r - 1][k++] = m[r][c];
            const Polynomial term = m[0][col] * determinant<N - 1>(minor);
            acc = (col % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    }
}

}  // namespace detail

/**
 * Output impedance derived from the loop equations of the cascaded controller
 * instead of the closed forms. Each block relation is cleared of its
 * denominator and the linear system is solved by Cramer's rule.
 *
 * Signals, all scaled by theta_end:
 *   theta_m, tau_m, w_ref, tau_sea, tau_d
 * Relations (s-domain, theta_d = 0, unit transmissions):
 *   (J s^2 + b s) theta_m = tau_m - tau_sea
 *   s tau_m = (Pm s + Im) (w_ref - s theta_m)
 *   s w_ref = (Pt s + It) (tau_d - tau_sea)
 *   tau_sea = K (theta_m - theta_end)
 *   tau_d   = -Kd theta_end
 * and Z_out = -tau_sea / (s theta_end).
 */
inline RationalTransferFunction assemble_block_diagram(const PlantParams& plant, const ControllerGains& g,
                                                       const RenderTarget& target) {
    const double J = plant.inertia;
    const double b = plant.damping;
    const double K = plant.stiffness;
    const double kd = target.virtual_stiffness();
    const Polynomial s{0.0, 1.0};
    const Polynomial velocity_pi{g.velocity_i, g.velocity_p};
    const Polynomial torque_pi{g.torque_i, g.torque_p};
    const Polynomial one{1.0};

    detail::PolyMatrix<5> m{};
    // motor
    m[0][0] = Polynomial{0.0, b, J};
    m[0][1] = -one;
    m[0][3] = one;
    // velocity PI
    m[1][0] = velocity_pi * s;
    m[1][1] = s;
    m[1][2] = -velocity_pi;
    // torque PI
    m[2][2] = s;
    m[2][3] = torque_pi;
    m[2][4] = -torque_pi;
    // spring
    m[3][0] = Polynomial{-K};
    m[3][3] = one;
    // impedance law
    m[4][4] = one;

    const std::array<Polynomial, 5> rhs{Polynomial{}, Polynomial{}, Polynomial{}, Polynomial{-K}, Polynomial{-kd}};
    detail::PolyMatrix<5> m_tau = m;
    for (std::size_t r = 0; r < 5; ++r) m_tau[r][3] = rhs[r];

    const Polynomial det = detail::determinant<5>(m);
    const Polynomial det_tau = detail::determinant<5>(m_tau);
    return {-det_tau, s * det};
}

}  // namespace seapass
