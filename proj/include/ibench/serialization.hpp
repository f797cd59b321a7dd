/**
 * @file serialization.hpp
 * @brief JSON configuration schema and environment snapshots.
 *
 * Configuration document (every key optional, unknown keys rejected):
 *
 *   {
 *     "setpoint": 50 | {"mode": "constant"|"variable", "value": 50},
 *     "initial": {"velocity": 50, "gain": 50, "shift": 50},
 *     "seed": 0,
 *     "action_validation": "strict" | "lenient",
 *     "reward_convention": "cost-negative"
 *   }
 *
 * Snapshots carry the configuration, the full Markov state and the random
 * stream position, so a resumed environment continues bit-exactly.
 */

#pragma once

#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ibench/environment.hpp"

namespace ibench {

inline constexpr int kSnapshotVersion = 1;
inline constexpr const char* kSnapshotFormat = "ibench-environment";

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ValidationError("unknown config key: " + where + key);
    }
}

template <class T>
T read_value(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("config key '" + key + "' has the wrong type");
    }
}

} // namespace detail

inline EnvConfig config_from_json(const nlohmann::json& j) {
    using detail::read_value;
    detail::reject_unknown_keys(
        j, {"setpoint", "initial", "seed", "action_validation", "reward_convention"}, "");
    EnvConfig c;

    if (j.contains("setpoint")) {
        const auto& sp = j.at("setpoint");
        if (sp.is_number()) {
            c.setpoint = sp.get<double>();
        } else {
            detail::reject_unknown_keys(sp, {"mode", "value"}, "setpoint.");
            if (sp.contains("mode")) {
                const auto mode = read_value<std::string>(sp, "mode");
                if (mode == "constant") c.setpoint_mode = SetpointMode::Constant;
                else if (mode == "variable") c.setpoint_mode = SetpointMode::Variable;
                else throw ValidationError("setpoint.mode must be 'constant' or 'variable'");
            }
            if (sp.contains("value")) c.setpoint = read_value<double>(sp, "value");
        }
    }
    if (j.contains("initial")) {
        const auto& in = j.at("initial");
        detail::reject_unknown_keys(in, {"velocity", "gain", "shift"}, "initial.");
        if (in.contains("velocity")) c.initial.velocity = read_value<double>(in, "velocity");
        if (in.contains("gain")) c.initial.gain = read_value<double>(in, "gain");
        if (in.contains("shift")) c.initial.shift = read_value<double>(in, "shift");
    }
    if (j.contains("seed")) c.seed = read_value<std::uint64_t>(j, "seed");
    if (j.contains("action_validation")) {
        const auto v = read_value<std::string>(j, "action_validation");
        if (v == "strict") c.validation = ActionValidation::Strict;
        else if (v == "lenient") c.validation = ActionValidation::Lenient;
        else throw ValidationError("action_validation must be 'strict' or 'lenient'");
    }
    if (j.contains("reward_convention")) {
        if (read_value<std::string>(j, "reward_convention") != "cost-negative")
            throw ValidationError("reward_convention must be 'cost-negative'");
    }
    c.validate();
    return c;
}

inline EnvConfig parse_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline nlohmann::json config_to_json(const EnvConfig& c) {
    return {
        {"setpoint",
         {{"mode", c.setpoint_mode == SetpointMode::Constant ? "constant" : "variable"},
          {"value", c.setpoint}}},
        {"initial",
         {{"velocity", c.initial.velocity}, {"gain", c.initial.gain}, {"shift", c.initial.shift}}},
        {"seed", c.seed},
        {"action_validation", c.validation == ActionValidation::Strict ? "strict" : "lenient"},
        {"reward_convention", "cost-negative"},
    };
}

inline nlohmann::json state_to_json(const MarkovState& s) {
    return {
        {"setpoint", s.setpoint},
        {"velocity", s.steerings.velocity},
        {"gain", s.steerings.gain},
        {"shift", s.steerings.shift},
        {"consumption", s.consumption},
        {"fatigue", s.fatigue},
        {"opcost_lags", s.opcost.values()},
        {"domain", s.miscal.domain},
        {"response", s.miscal.response},
        {"direction", s.miscal.direction},
        {"mu_v", s.latents.mu_v},
        {"mu_g", s.latents.mu_g},
        {"segment_steps", s.segment.steps_remaining},
        {"segment_rate", s.segment.rate},
    };
}

inline MarkovState state_from_json(const nlohmann::json& j) {
    try {
        MarkovState s;
        s.setpoint = j.at("setpoint").get<double>();
        s.steerings = {j.at("velocity").get<double>(), j.at("gain").get<double>(),
                       j.at("shift").get<double>()};
        s.consumption = j.at("consumption").get<double>();
        s.fatigue = j.at("fatigue").get<double>();
        s.opcost = OpCostHistory(j.at("opcost_lags").get<std::array<double, OpCostHistory::kLength>>());
        s.miscal = {j.at("domain").get<int>(), j.at("response").get<int>(),
                    j.at("direction").get<int>()};
        s.latents = {j.at("mu_v").get<double>(), j.at("mu_g").get<double>()};
        s.segment = {j.at("segment_steps").get<int>(), j.at("segment_rate").get<double>()};
        auto unit = [](int x) { return x == 1 || x == -1; };
        if (!unit(s.miscal.domain) || !unit(s.miscal.response) ||
            s.miscal.direction < -kDirectionBound || s.miscal.direction > kDirectionBound)
            throw FormatError("mis-calibration latents out of range");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed state: ") + e.what());
    }
}

/// Lossless snapshot of an environment, including the stream position.
inline std::string serialize_environment(const Environment& env) {
    nlohmann::json j{
        {"format", kSnapshotFormat},
        {"version", kSnapshotVersion},
        {"config", config_to_json(env.config())},
        {"state", state_to_json(env.state())},
        {"rng", env.stream().serialize()},
    };
    return j.dump();
}

inline Environment deserialize_environment(std::string_view bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("snapshot is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != kSnapshotFormat)
        throw FormatError("not an environment snapshot");
    if (!j.contains("version") || j.at("version") != kSnapshotVersion)
        throw FormatError("snapshot version mismatch");
    if (!j.contains("config") || !j.contains("state") || !j.contains("rng") || !j.at("rng").is_string())
        throw FormatError("snapshot is missing fields");
    EnvConfig config;
    try {
        config = config_from_json(j.at("config"));
    } catch (const ValidationError& e) {
        throw FormatError(std::string("snapshot config: ") + e.what());
    }
    return Environment(config, state_from_json(j.at("state")),
                       RandomStream::deserialize(j.at("rng").get<std::string>()));
}

} // namespace ibench
