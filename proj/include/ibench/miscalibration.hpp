/**
 * @file miscalibration.hpp
 * @brief Rotation state machine and the linearly biased Goldstone penalty.
 *
 * The latent triple (domain, response, direction) moves through a 13-step
 * direction index. The penalty is a tilted "Mexican hat" whose optimum
 * follows sin(pi * direction / 12), so the best policy oscillates the
 * effective shift around the operating point chosen by the setpoint.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ibench {

namespace goldstone {

inline const double kEpsilon = std::cbrt(1.0 + std::numbers::sqrt2) / std::sqrt(3.0);
inline const double kZeta = kEpsilon + 1.0 / (3.0 * kEpsilon);
inline const double kLambda = 2.0 * kZeta * kZeta - std::pow(kZeta, 4) +
                              8.0 * std::sqrt(2.0 / 27.0) * kZeta;
inline const double kAlpha = 2.0 / kLambda;
inline const double kBeta = 1.0 / kLambda;
inline const double kKappa = -8.0 * std::sqrt(2.0 / 27.0) / kLambda;

} // namespace goldstone

/// Half-width of the safe zone around zero effective shift.
inline const double kSafeZone = std::sin(std::numbers::pi * 15.0 / 180.0) / 2.0;

inline constexpr int kDirectionBound = 6;

struct MiscalState {
    int domain = 1;    ///< +1 positive, -1 negative
    int response = 1;  ///< +1 advantageous, -1 disadvantageous
    int direction = 0; ///< in [-6, 6]

    friend bool operator==(const MiscalState&, const MiscalState&) = default;
};

inline double effective_shift(double shift, double setpoint) {
    return std::clamp(shift / 20.0 - setpoint / 50.0 - 1.5, -1.5, 1.5);
}

namespace detail {

template <class T>
constexpr int sign(T x) {
    return (T{0} < x) - (x < T{0});
}

/// Sign with sign(0) = +1.
inline double sign_nonzero(double x) { return x < 0.0 ? -1.0 : 1.0; }

} // namespace detail

/// One transition of the rotation state machine for the current effective shift.
inline MiscalState step_rotation(const MiscalState& m, double h_e) {
    const bool safe = std::abs(h_e) <= kSafeZone;
    const int dir_he = detail::sign(h_e);

    const int domain_hat = safe ? m.domain : dir_he;
    const int response_hat = (m.domain != domain_hat) ? 1 : m.response;

    // Case order matters: the safe-zone relaxation wins over the freeze.
    int step = 0;
    if (safe) {
        step = -detail::sign(m.direction);
    } else if (m.direction == -kDirectionBound * domain_hat) {
        step = 0;
    } else {
        step = response_hat * dir_he;
    }
    const int direction_hat = m.direction + step;

    MiscalState next{domain_hat, response_hat, direction_hat};
    if (std::abs(direction_hat) >= kDirectionBound) {
        next.response = -1;
        next.direction = 12 - ((direction_hat + 24) % 24);
    }

    if (next.direction == 0 && safe) {
        next.domain = 1;
        next.response = 1;
    }
    return next;
}

inline double direction_sine(int direction) {
    return std::sin(std::numbers::pi * direction / 12.0);
}

/// Radius of the biased Goldstone potential for a direction sine and effective shift.
inline double goldstone_omega(double rho_s, double h_e) {
    using namespace goldstone;
    const double varrho = detail::sign_nonzero(rho_s);
    const double abs_rho = std::abs(rho_s);
    const double q = kKappa * abs_rho / (8.0 * kBeta);

    double r_min = 0.0;
    if (q < -std::sqrt(1.0 / 27.0)) {
        const double radicand = std::max(0.0, q * q - 1.0 / 27.0);
        const double u = std::cbrt(-varrho * q + std::sqrt(radicand));
        r_min = u + 1.0 / (3.0 * u);
    } else {
        const double arg = std::clamp(-q * std::sqrt(27.0), -1.0, 1.0);
        r_min = varrho * std::sqrt(4.0 / 3.0) * std::cos(std::acos(arg) / 3.0);
    }
    const double r_opt = varrho * std::max(abs_rho, 2.0 * kSafeZone);

    const double abs_min = std::abs(r_min);
    const double abs_opt = std::abs(r_opt);
    if (std::abs(h_e) <= abs_opt) return h_e * abs_min / abs_opt;

    const double exponent = (2.0 - abs_opt) / (2.0 - abs_min);
    const double stretched = abs_min + (2.0 - abs_min) / std::pow(2.0 - abs_opt, exponent) *
                                           std::pow(std::abs(h_e) - abs_opt, exponent);
    return detail::sign_nonzero(h_e) * stretched;
}

inline double goldstone_penalty(double rho_s, double omega) {
    using namespace goldstone;
    const double w2 = omega * omega;
    return -kAlpha * w2 + kBeta * w2 * w2 + kKappa * rho_s * omega;
}

/// Mis-calibration penalty m(direction, h_e); roughly in [-1.00, 1.23].
inline double miscal_penalty(int direction, double h_e) {
    const double rho_s = direction_sine(direction);
    return goldstone_penalty(rho_s, goldstone_omega(rho_s, h_e));
}

} // namespace ibench
