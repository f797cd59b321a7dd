/**
 * @file environment.hpp
 * @brief Step/reset environment composing the sub-dynamics.
 *
 * One step runs, in this order:
 *   1. setpoint update (variable mode only)
 *   2. action applied to the steerings
 *   3. fatigue: effective values, 6 noise draws, latent update, amplification
 *      (+1 gaussian when bifurcated), fatigue
 *   4. operational cost: cost of the pre-step state pushed, kernel applied
 *   5. mis-calibration: effective shift, rotation, penalty
 *   6. consumption = convolved cost + 25 * penalty, plus 1 gaussian of
 *      stddev 1 + 0.02 * noise-free consumption
 *   7. reward = -(consumption + 3 * fatigue)
 *
 * Raw draws per step: 6 (fatigue) + 2 (consumption), +2 when bifurcated;
 * variable setpoint mode adds 1 at a bound and 4 when a segment ends.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "ibench/errors.hpp"
#include "ibench/fatigue.hpp"
#include "ibench/miscalibration.hpp"
#include "ibench/opcost.hpp"
#include "ibench/random.hpp"
#include "ibench/setpoint.hpp"
#include "ibench/state.hpp"

namespace ibench {

enum class SetpointMode { Constant, Variable };
enum class RewardConvention { CostNegative };

struct EnvConfig {
    SetpointMode setpoint_mode = SetpointMode::Constant;
    double setpoint = 50.0; ///< constant value, or the start value in variable mode
    Steerings initial{};
    std::uint64_t seed = 0;
    ActionValidation validation = ActionValidation::Strict;
    RewardConvention reward = RewardConvention::CostNegative;

    void validate() const {
        auto in_range = [](double x) { return x >= kSteeringMin && x <= kSteeringMax; };
        if (!in_range(setpoint)) throw ValidationError("setpoint must lie in [0, 100]");
        if (!in_range(initial.velocity)) throw ValidationError("initial velocity must lie in [0, 100]");
        if (!in_range(initial.gain)) throw ValidationError("initial gain must lie in [0, 100]");
        if (!in_range(initial.shift)) throw ValidationError("initial shift must lie in [0, 100]");
    }
};

/// Full latent state. markov_values() gives the 20-value minimal
/// Markov state; the setpoint segment is only meaningful in variable mode.
struct MarkovState {
    double setpoint = 50.0;
    Steerings steerings{};
    double consumption = 0.0;
    double fatigue = 0.0;
    OpCostHistory opcost{};
    MiscalState miscal{};
    FatigueLatents latents{};
    SegmentState segment{};

    static constexpr std::size_t kMarkovSize = 20;

    Observation observation() const {
        return {setpoint, steerings.velocity, steerings.gain, steerings.shift, consumption, fatigue};
    }

    /// p, v, g, h, c, f, theta lags 1..9, domain, response, direction, mu_v, mu_g.
    std::array<double, kMarkovSize> markov_values() const {
        std::array<double, kMarkovSize> out{};
        const auto obs = observation().to_array();
        std::copy(obs.begin(), obs.end(), out.begin());
        std::copy(opcost.values().begin(), opcost.values().end(), out.begin() + 6);
        out[15] = miscal.domain;
        out[16] = miscal.response;
        out[17] = miscal.direction;
        out[18] = latents.mu_v;
        out[19] = latents.mu_g;
        return out;
    }

    friend bool operator==(const MarkovState&, const MarkovState&) = default;
};

/// Intermediate quantities of one step, for diagnostics and oracles.
struct StepDetails {
    double opcost = 0.0;           ///< cost of the pre-step state, pushed this step
    double convolved_opcost = 0.0;
    double effective_shift = 0.0;
    double penalty = 0.0;
    double noise_free_consumption = 0.0;
    double effective_velocity = 0.0;
    double effective_gain = 0.0;
    FatigueNoise noise{};
    double amplification = 0.0;
    double basic_fatigue = 0.0;
    bool bifurcated = false;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    MarkovState state;
    StepDetails details;
};

inline double reward_of(double consumption, double fatigue) {
    return -consumption - 3.0 * fatigue;
}

namespace detail {

struct FatigueOutcome {
    FatigueLatents latents;
    FatigueNoise noise;
    double v_e, g_e, alpha, basic, fatigue;
    bool bifurcated;
};

template <NoiseSource Source>
FatigueOutcome fatigue_update(const Steerings& s, double p, const FatigueLatents& prev,
                              Source& src, bool advance_latents) {
    FatigueOutcome out{};
    out.v_e = effective_velocity(s.velocity, s.gain, p);
    out.g_e = effective_gain(s.gain, p);
    out.noise = sample_fatigue_noise(out.v_e, out.g_e, src);
    out.latents = prev;
    if (advance_latents) {
        out.latents.mu_v = update_mu(prev.mu_v, out.v_e, out.noise.eta_v);
        out.latents.mu_g = update_mu(prev.mu_g, out.g_e, out.noise.eta_g);
    }
    out.bifurcated = is_bifurcated(out.latents.mu_v, out.latents.mu_g);
    out.alpha = amplification(out.latents.mu_v, out.latents.mu_g, out.noise.eta_v,
                              out.noise.eta_g, src);
    out.basic = basic_fatigue(s.velocity, s.gain);
    out.fatigue = fatigue(out.basic, out.alpha);
    return out;
}

} // namespace detail

/// Initial state for a configuration. Draws from `src` only in variable
/// setpoint mode (the first segment). Initial consumption and fatigue use
/// the Mean noise rules without advancing any latent.
template <NoiseSource Source>
MarkovState initial_state(const EnvConfig& config, Source& src) {
    config.validate();
    MarkovState s;
    s.setpoint = config.setpoint;
    s.steerings = config.initial;
    const double p = s.setpoint;
    const auto& st = s.steerings;

    s.opcost = OpCostHistory(current_opcost(p, st.velocity, st.gain));
    s.miscal = MiscalState{};
    s.latents = {effective_velocity(st.velocity, st.gain, p), effective_gain(st.gain, p)};
    if (config.setpoint_mode == SetpointMode::Variable) s.segment = sample_segment(src);

    SuppressedNoise mean_rules(NoiseHook::Mean);
    const double h_e = effective_shift(st.shift, p);
    s.consumption = convolve_opcost(s.opcost) + 25.0 * miscal_penalty(s.miscal.direction, h_e);
    s.fatigue = detail::fatigue_update(st, p, s.latents, mean_rules, false).fatigue;
    return s;
}

/// One transition. `action` must already be validated.
template <NoiseSource Source>
StepResult transition(const MarkovState& s, const Action& action, SetpointMode mode, Source& src) {
    StepResult r;
    MarkovState& n = r.state;
    StepDetails& d = r.details;
    n = s;

    d.opcost = current_opcost(s.setpoint, s.steerings.velocity, s.steerings.gain);

    if (mode == SetpointMode::Variable) {
        const auto up = step_setpoint(s.setpoint, s.segment, src);
        n.setpoint = up.setpoint;
        n.segment = up.segment;
    }
    const double p = n.setpoint;

    n.steerings = apply_action(s.steerings, action);

    const auto fat = detail::fatigue_update(n.steerings, p, s.latents, src, true);
    n.latents = fat.latents;
    n.fatigue = fat.fatigue;
    d.effective_velocity = fat.v_e;
    d.effective_gain = fat.g_e;
    d.noise = fat.noise;
    d.amplification = fat.alpha;
    d.basic_fatigue = fat.basic;
    d.bifurcated = fat.bifurcated;

    n.opcost.push(d.opcost);
    d.convolved_opcost = convolve_opcost(n.opcost);

    d.effective_shift = effective_shift(n.steerings.shift, p);
    n.miscal = step_rotation(s.miscal, d.effective_shift);
    d.penalty = miscal_penalty(n.miscal.direction, d.effective_shift);

    d.noise_free_consumption = d.convolved_opcost + 25.0 * d.penalty;
    n.consumption = d.noise_free_consumption +
                    src.gaussian(0.0, 1.0 + 0.02 * d.noise_free_consumption);

    r.observation = n.observation();
    r.reward = reward_of(n.consumption, n.fatigue);
    return r;
}

/// Single-owner environment instance: state, configuration and one random stream.
class Environment {
public:
    explicit Environment(EnvConfig config = {}) : config_(config) { reset(); }

    /// Restores a snapshot as-is (see serialization.hpp).
    Environment(EnvConfig config, MarkovState state, RandomStream stream)
        : config_(config), state_(state), stream_(std::move(stream)) {
        config_.validate();
    }

    Observation reset() {
        stream_ = RandomStream(config_.seed);
        state_ = initial_state(config_, stream_);
        return state_.observation();
    }

    Observation reset(std::uint64_t seed) {
        config_.seed = seed;
        return reset();
    }

    StepResult step(const Action& action) {
        const Action a = validate_action(action, config_.validation);
        StepResult r = hook_ ? stepped(a, SuppressedNoise(*hook_)) : stepped(a, stream_);
        state_ = r.state;
        return r;
    }

    Observation observe() const { return state_.observation(); }
    const MarkovState& state() const noexcept { return state_; }
    const EnvConfig& config() const noexcept { return config_; }
    const RandomStream& stream() const noexcept { return stream_; }

    /// Test hook: replaces every noise draw of step() while set. Not part of
    /// the experiment configuration.
    void set_noise_hook(std::optional<NoiseHook> hook) { hook_ = hook; }
    std::optional<NoiseHook> noise_hook() const noexcept { return hook_; }

private:
    template <NoiseSource Source>
    StepResult stepped(const Action& a, Source&& src) {
        return transition(state_, a, config_.setpoint_mode, src);
    }

    EnvConfig config_;
    MarkovState state_{};
    RandomStream stream_{};
    std::optional<NoiseHook> hook_;
};

} // namespace ibench
