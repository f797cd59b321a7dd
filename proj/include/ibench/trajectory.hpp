#pragma once

#include <ostream>
#include <string>

#include "ibench/dataset.hpp"
#include "ibench/environment.hpp"
#include "ibench/policy.hpp"

namespace ibench {

inline constexpr const char* kTrajectoryHeader = "t,p,v,g,h,c,f,reward";
inline constexpr const char* kTrajectoryLatentHeader =
    ",theta_lag1,theta_lag2,theta_lag3,theta_lag4,theta_lag5,theta_lag6,theta_lag7,theta_lag8,"
    "theta_lag9,domain,response,direction,mu_v,mu_g,segment_steps,segment_rate";

/// Row t = 0 is the reset state; its reward column is -(c_0 + 3 f_0).
inline void write_trajectory_row(std::ostream& os, std::size_t t, const MarkovState& s, bool latents) {
    std::string line = std::to_string(t);
    auto put = [&](double x) {
        line.push_back(',');
        detail::append_number(line, x);
    };
    for (double x : s.observation().to_array()) put(x);
    put(reward_of(s.consumption, s.fatigue));
    if (latents) {
        for (double x : s.opcost.values()) put(x);
        line += "," + std::to_string(s.miscal.domain) + "," + std::to_string(s.miscal.response) + "," +
                std::to_string(s.miscal.direction);
        put(s.latents.mu_v);
        put(s.latents.mu_g);
        line += "," + std::to_string(s.segment.steps_remaining);
        put(s.segment.rate);
    }
    os << line << '\n';
}

/// Runs `steps` policy steps from the environment's current state and writes
/// the CSV trajectory including the starting row.
inline void write_rollout(std::ostream& os, Environment& env, BehaviorPolicy& policy, int steps,
                          bool latents) {
    os << kTrajectoryHeader << (latents ? kTrajectoryLatentHeader : "") << '\n';
    write_trajectory_row(os, 0, env.state(), latents);
    for (int t = 1; t <= steps; ++t) {
        env.step(policy.act(env.observe()));
        write_trajectory_row(os, static_cast<std::size_t>(t), env.state(), latents);
    }
}

} // namespace ibench
