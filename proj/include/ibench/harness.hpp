/**
 * @file harness.hpp
 * @brief Batch generation, policy evaluation and transfer layouts.
 *
 * Every (setpoint index, episode) pair owns an environment and a policy
 * stream derived from the base seed, so the result does not depend on the
 * order in which the pairs run. Batches are always concatenated in the
 * order the setpoints were given.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <string>
#include <vector>

#include "ibench/dataset.hpp"
#include "ibench/environment.hpp"
#include "ibench/policy.hpp"

namespace ibench {

inline std::uint64_t env_seed_for(std::uint64_t base, std::size_t index) { return derive_seed(base, index); }
inline std::uint64_t policy_seed_for(std::uint64_t env_seed) { return derive_seed(env_seed, 0x706f6c6963ULL); }

struct GenerateOptions {
    bool parallel = false; ///< external policies must then be thread-safe
    ActionValidation validation = ActionValidation::Strict;
};

namespace detail {

inline void check_setpoints(const std::vector<double>& setpoints) {
    if (setpoints.empty()) throw ValidationError("at least one setpoint is required");
    for (double p : setpoints)
        if (!(p >= 0.0 && p <= 100.0)) throw ValidationError("setpoints must lie in [0, 100]");
}

/// Environment at the standard start settings: steerings 50, constant setpoint.
inline EnvConfig standard_config(double setpoint, std::uint64_t seed, ActionValidation v) {
    EnvConfig c;
    c.setpoint_mode = SetpointMode::Constant;
    c.setpoint = setpoint;
    c.seed = seed;
    c.validation = v;
    return c;
}

/// One env step under the policy, with setpoint/step context on failure.
inline StepResult policy_step(Environment& env, BehaviorPolicy& policy, double setpoint,
                              std::size_t step_index, Action* applied = nullptr) {
    const Action proposed = policy.act(env.observe());
    try {
        const Action a = validate_action(proposed, env.config().validation);
        if (applied) *applied = a;
        return env.step(a);
    } catch (const ValidationError& e) {
        throw ValidationError("setpoint " + BehaviorPolicy::format_number(setpoint) + ", step " +
                              std::to_string(step_index) + ": " + e.what());
    }
}

inline std::vector<TransitionRecord> rollout_records(double setpoint, int steps, BehaviorPolicy policy,
                                                     std::uint64_t env_seed, ActionValidation v) {
    Environment env(standard_config(setpoint, env_seed, v));
    policy.seed(policy_seed_for(env_seed));
    std::vector<TransitionRecord> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int t = 0; t < steps; ++t) {
        TransitionRecord rec;
        rec.observation = env.observe();
        const auto r = policy_step(env, policy, setpoint, static_cast<std::size_t>(t), &rec.action);
        rec.next_observation = r.observation;
        rec.reward = r.reward;
        out.push_back(rec);
    }
    return out;
}

} // namespace detail

inline Batch generate_batch(const std::vector<double>& setpoints, int steps_per_setpoint,
                            const BehaviorPolicy& policy, std::uint64_t seed,
                            const GenerateOptions& options = {}) {
    detail::check_setpoints(setpoints);
    if (steps_per_setpoint < 1) throw ValidationError("steps per setpoint must be >= 1");

    Batch batch;
    batch.metadata.seed = seed;
    batch.metadata.setpoints = setpoints;
    batch.metadata.steps_per_setpoint = steps_per_setpoint;
    batch.metadata.policy = policy.descriptor();

    std::vector<std::vector<TransitionRecord>> parts(setpoints.size());
    if (options.parallel) {
        std::vector<std::future<std::vector<TransitionRecord>>> jobs;
        for (std::size_t i = 0; i < setpoints.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, detail::rollout_records, setpoints[i],
                                      steps_per_setpoint, policy, env_seed_for(seed, i),
                                      options.validation));
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) parts[i] = jobs[i].get();
    } else {
        for (std::size_t i = 0; i < setpoints.size(); ++i)
            parts[i] = detail::rollout_records(setpoints[i], steps_per_setpoint, policy,
                                               env_seed_for(seed, i), options.validation);
    }
    batch.records.reserve(setpoints.size() * static_cast<std::size_t>(steps_per_setpoint));
    for (auto& part : parts) batch.records.insert(batch.records.end(), part.begin(), part.end());
    return batch;
}

/// Rebuilds a batch from its metadata alone.
inline Batch regenerate_batch(const BatchMetadata& meta) {
    if (meta.benchmark_version != kBenchmarkVersion)
        throw ValidationError("batch was produced by benchmark version " + meta.benchmark_version);
    const auto policy = BehaviorPolicy::parse(meta.policy);
    Batch b = generate_batch(meta.setpoints, meta.steps_per_setpoint, policy, meta.seed);
    b.metadata.role = meta.role;
    b.metadata.transfer = meta.transfer;
    return b;
}

/// Large source batch and small target batch from independently seeded
/// environments, e.g. (50, 10000) -> (75, 500).
inline std::pair<Batch, Batch> transfer_layout(double source_setpoint, int source_size,
                                               double target_setpoint, int target_size,
                                               std::uint64_t seed,
                                               const BehaviorPolicy& policy = BehaviorPolicy::random_uniform()) {
    if (source_size < 1 || target_size < 1) throw ValidationError("transfer batch sizes must be >= 1");
    const TransferInfo info{source_setpoint, source_size, target_setpoint, target_size};
    Batch source = generate_batch({source_setpoint}, source_size, policy, derive_seed(seed, 0));
    Batch target = generate_batch({target_setpoint}, target_size, policy, derive_seed(seed, 1));
    source.metadata.role = "transfer-source";
    target.metadata.role = "transfer-target";
    source.metadata.transfer = info;
    target.metadata.transfer = info;
    return {std::move(source), std::move(target)};
}

enum class InitMode { Start, Random };

struct EvaluationOptions {
    int horizon = 1000;
    int episodes = 10;
    InitMode init = InitMode::Start;
    int burn_in = 100; ///< unscored steps after a random start
};

struct RewardSummary {
    double setpoint = 0.0; ///< NaN for the aggregate
    double mean = 0.0;     ///< mean over episodes of the per-step mean reward
    double stddev = 0.0;   ///< population std of the per-episode means
    std::vector<double> episode_means;

    friend bool operator==(const RewardSummary&, const RewardSummary&) = default;
};

struct EvaluationSummary {
    std::vector<RewardSummary> per_setpoint;
    RewardSummary aggregate;
};

namespace detail {

inline RewardSummary summarize(double setpoint, std::vector<double> means) {
    RewardSummary s;
    s.setpoint = setpoint;
    const double n = static_cast<double>(means.size());
    s.mean = std::accumulate(means.begin(), means.end(), 0.0) / n;
    double ss = 0.0;
    for (double m : means) ss += (m - s.mean) * (m - s.mean);
    s.stddev = std::sqrt(ss / n);
    s.episode_means = std::move(means);
    return s;
}

} // namespace detail

inline EvaluationSummary evaluate_policy(const BehaviorPolicy& policy, const std::vector<double>& setpoints,
                                         std::uint64_t seed, const EvaluationOptions& options = {}) {
    detail::check_setpoints(setpoints);
    if (options.horizon < 1) throw ValidationError("horizon must be >= 1");
    if (options.episodes < 1) throw ValidationError("episodes must be >= 1");
    if (options.burn_in < 0) throw ValidationError("burn-in must be >= 0");

    EvaluationSummary out;
    std::vector<double> all;
    for (std::size_t i = 0; i < setpoints.size(); ++i) {
        const double p = setpoints[i];
        std::vector<double> means;
        for (int e = 0; e < options.episodes; ++e) {
            const std::uint64_t env_seed = derive_seed(env_seed_for(seed, i), static_cast<std::uint64_t>(e));
            EnvConfig config = detail::standard_config(p, env_seed, ActionValidation::Strict);
            BehaviorPolicy pol = policy;
            pol.seed(policy_seed_for(env_seed));
            std::size_t step_index = 0;

            if (options.init == InitMode::Random) {
                RandomStream init(derive_seed(env_seed, 0x696e6974ULL));
                config.initial.velocity = 100.0 * init.uniform();
                config.initial.gain = 100.0 * init.uniform();
                config.initial.shift = 100.0 * init.uniform();
            }
            Environment env(config);
            if (options.init == InitMode::Random) {
                for (int b = 0; b < options.burn_in; ++b) detail::policy_step(env, pol, p, step_index++);
            }
            double total = 0.0;
            for (int t = 0; t < options.horizon; ++t) total += detail::policy_step(env, pol, p, step_index++).reward;
            means.push_back(total / options.horizon);
        }
        all.insert(all.end(), means.begin(), means.end());
        out.per_setpoint.push_back(detail::summarize(p, std::move(means)));
    }
    out.aggregate = detail::summarize(std::nan(""), std::move(all));
    return out;
}

} // namespace ibench
