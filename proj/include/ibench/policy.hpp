#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "ibench/errors.hpp"
#include "ibench/miscalibration.hpp"
#include "ibench/random.hpp"
#include "ibench/state.hpp"

namespace ibench {

/// i.i.d. U(-1, 1) action components.
struct RandomUniformPolicy {};

/// Proportional hold of v = g = 50 and of the shift that puts the effective
/// shift at `effective_shift` (0 = centre of the safe zone), each component
/// perturbed by noise_scale * U(-1, 1) and capped at +-amplitude.
struct SafeSuboptimalPolicy {
    double amplitude = 0.5;
    double noise_scale = 0.2;
    double effective_shift = 0.0;
};

struct ConstantPolicy {
    Action action;
};

/// Caller-supplied decision function. Not reproducible from a descriptor.
struct ExternalPolicy {
    std::function<Action(const Observation&)> decide;
    std::string name = "external";
};

class BehaviorPolicy {
public:
    using Kind = std::variant<RandomUniformPolicy, SafeSuboptimalPolicy, ConstantPolicy, ExternalPolicy>;

    BehaviorPolicy() : kind_(RandomUniformPolicy{}) {}
    BehaviorPolicy(Kind kind) : kind_(std::move(kind)) { check(); }

    static BehaviorPolicy random_uniform() { return {RandomUniformPolicy{}}; }
    static BehaviorPolicy safe_suboptimal(double amplitude = 0.5, double noise_scale = 0.2,
                                          double effective_shift = 0.0) {
        return {SafeSuboptimalPolicy{amplitude, noise_scale, effective_shift}};
    }
    static BehaviorPolicy constant(const Action& a) { return {ConstantPolicy{a}}; }
    static BehaviorPolicy external(std::function<Action(const Observation&)> f,
                                   std::string name = "external") {
        return {ExternalPolicy{std::move(f), std::move(name)}};
    }

    /// "random", "safe[:amplitude[,noise_scale[,effective_shift]]]", "constant:dv,dg,dh".
    static BehaviorPolicy parse(std::string_view text) {
        const auto colon = text.find(':');
        const std::string_view name = text.substr(0, colon);
        const std::vector<double> args =
            colon == std::string_view::npos ? std::vector<double>{} : parse_numbers(text.substr(colon + 1));
        if (name == "random") {
            if (!args.empty()) throw ValidationError("policy 'random' takes no parameters");
            return random_uniform();
        }
        if (name == "safe") {
            if (args.size() > 3) throw ValidationError("policy 'safe' takes at most 3 parameters");
            SafeSuboptimalPolicy p;
            if (args.size() > 0) p.amplitude = args[0];
            if (args.size() > 1) p.noise_scale = args[1];
            if (args.size() > 2) p.effective_shift = args[2];
            return {p};
        }
        if (name == "constant") {
            if (args.size() != 3) throw ValidationError("policy 'constant' needs dv,dg,dh");
            return constant({args[0], args[1], args[2]});
        }
        throw ValidationError("unknown policy: " + std::string(text));
    }

    /// Canonical descriptor accepted by parse(); doubles use shortest round-trip form.
    std::string descriptor() const {
        return std::visit(
            [](const auto& p) -> std::string {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, RandomUniformPolicy>) {
                    return "random";
                } else if constexpr (std::is_same_v<T, SafeSuboptimalPolicy>) {
                    return "safe:" + format_number(p.amplitude) + "," + format_number(p.noise_scale) +
                           "," + format_number(p.effective_shift);
                } else if constexpr (std::is_same_v<T, ConstantPolicy>) {
                    return "constant:" + format_number(p.action.delta_v) + "," +
                           format_number(p.action.delta_g) + "," + format_number(p.action.delta_h);
                } else {
                    return p.name;
                }
            },
            kind_);
    }

    bool reproducible() const { return !std::holds_alternative<ExternalPolicy>(kind_); }

    void seed(std::uint64_t s) { stream_ = RandomStream(s); }

    Action act(const Observation& o) {
        return std::visit([&](const auto& p) { return decide(p, o); }, kind_);
    }

    const Kind& kind() const noexcept { return kind_; }

    static std::string format_number(double x) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        return {buf, res.ptr};
    }

private:
    void check() const {
        if (const auto* s = std::get_if<SafeSuboptimalPolicy>(&kind_)) {
            if (!(s->amplitude > 0.0 && s->amplitude <= 1.0))
                throw ValidationError("safe policy amplitude must lie in (0, 1]");
            if (!(s->noise_scale >= 0.0)) throw ValidationError("safe policy noise_scale must be >= 0");
            if (!(std::abs(s->effective_shift) <= 1.5))
                throw ValidationError("safe policy effective_shift must lie in [-1.5, 1.5]");
        }
        if (const auto* e = std::get_if<ExternalPolicy>(&kind_)) {
            if (!e->decide) throw ValidationError("external policy needs a callable");
        }
    }

    static std::vector<double> parse_numbers(std::string_view s) {
        std::vector<double> out;
        while (!s.empty()) {
            const auto comma = s.find(',');
            const auto item = s.substr(0, comma);
            double x = 0.0;
            const auto res = std::from_chars(item.data(), item.data() + item.size(), x);
            if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
                throw ValidationError("bad policy parameter: " + std::string(item));
            out.push_back(x);
            if (comma == std::string_view::npos) break;
            s.remove_prefix(comma + 1);
        }
        return out;
    }

    double noise() { return 2.0 * stream_.uniform() - 1.0; }

    Action decide(const RandomUniformPolicy&, const Observation&) {
        const double dv = noise();
        const double dg = noise();
        const double dh = noise();
        return {dv, dg, dh};
    }

    Action decide(const SafeSuboptimalPolicy& p, const Observation& o) {
        const ScalingFactors& k = kDefaultScaling;
        const double target_h =
            std::clamp(20.0 * (p.effective_shift + o.setpoint / 50.0 + 1.5), 0.0, 100.0);
        auto component = [&](double error, double scale) {
            const double proposal = error / scale + p.noise_scale * noise();
            return std::clamp(proposal, -p.amplitude, p.amplitude);
        };
        const double dv = component(50.0 - o.velocity, k.velocity);
        const double dg = component(50.0 - o.gain, k.gain);
        const double dh = component(target_h - o.shift, k.shift);
        return {dv, dg, dh};
    }

    Action decide(const ConstantPolicy& p, const Observation&) { return p.action; }

    Action decide(const ExternalPolicy& p, const Observation& o) { return p.decide(o); }

    Kind kind_;
    RandomStream stream_{};
};

} // namespace ibench
