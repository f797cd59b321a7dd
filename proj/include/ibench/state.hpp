#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ibench/errors.hpp"

namespace ibench {

inline constexpr double kSteeringMin = 0.0;
inline constexpr double kSteeringMax = 100.0;

/// Proposed steering deltas, each component in [-1, 1].
struct Action {
    double delta_v = 0.0;
    double delta_g = 0.0;
    double delta_h = 0.0;

    friend bool operator==(const Action&, const Action&) = default;
};

/// The three controllable variables, each in [0, 100].
struct Steerings {
    double velocity = 50.0;
    double gain = 50.0;
    double shift = 50.0;

    friend bool operator==(const Steerings&, const Steerings&) = default;
};

struct ScalingFactors {
    double velocity = 1.0;
    double gain = 10.0;
    double shift = 20.0 * std::sin(std::numbers::pi * 15.0 / 180.0) / 0.9;
};

inline const ScalingFactors kDefaultScaling{};

/// What an agent sees. Field order matches the flat 6-vector layout.
struct Observation {
    double setpoint = 0.0;
    double velocity = 0.0;
    double gain = 0.0;
    double shift = 0.0;
    double consumption = 0.0;
    double fatigue = 0.0;

    static constexpr std::size_t kSize = 6;

    std::array<double, kSize> to_array() const {
        return {setpoint, velocity, gain, shift, consumption, fatigue};
    }

    static Observation from_array(const std::array<double, kSize>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5]};
    }

    friend bool operator==(const Observation&, const Observation&) = default;
};

enum class ActionValidation { Strict, Lenient };

inline bool action_in_range(const Action& a) {
    auto ok = [](double x) { return x >= -1.0 && x <= 1.0; };
    return ok(a.delta_v) && ok(a.delta_g) && ok(a.delta_h);
}

/// Strict mode throws on any component outside [-1, 1] (NaN included);
/// lenient mode clamps, mapping NaN to 0.
inline Action validate_action(const Action& a, ActionValidation mode) {
    if (action_in_range(a)) return a;
    if (mode == ActionValidation::Strict) {
        throw ValidationError("action component outside [-1, 1]: (" + std::to_string(a.delta_v) +
                              ", " + std::to_string(a.delta_g) + ", " +
                              std::to_string(a.delta_h) + ")");
    }
    auto clamp = [](double x) { return std::isnan(x) ? 0.0 : std::clamp(x, -1.0, 1.0); };
    return {clamp(a.delta_v), clamp(a.delta_g), clamp(a.delta_h)};
}

inline double clip_steering(double x) { return std::clamp(x, kSteeringMin, kSteeringMax); }

/// Scaled update followed by clipping to [0, 100]. Expects a validated action.
inline Steerings apply_action(const Steerings& s, const Action& a,
                              const ScalingFactors& k = kDefaultScaling) {
    return {clip_steering(s.velocity + k.velocity * a.delta_v),
            clip_steering(s.gain + k.gain * a.delta_g),
            clip_steering(s.shift + k.shift * a.delta_h)};
}

inline Steerings apply_action(const Steerings& s, const Action& a, ActionValidation mode,
                              const ScalingFactors& k = kDefaultScaling) {
    return apply_action(s, validate_action(a, mode), k);
}

} // namespace ibench
