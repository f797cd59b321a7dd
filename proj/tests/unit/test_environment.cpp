#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ibench/environment.hpp"
#include "ibench/policy.hpp"
#include "oracle/cross_check.hpp"

using namespace ibench;
using Catch::Approx;

TEST_CASE("reset with the default configuration", "[env]") {
    Environment env;
    const auto& s = env.state();
    CHECK(s.steerings == Steerings{50, 50, 50});
    CHECK(effective_shift(s.steerings.shift, s.setpoint) == 0.0);
    CHECK(convolve_opcost(s.opcost) == Approx(70.10541234668786).epsilon(1e-14));
    CHECK(s.miscal == MiscalState{});
    CHECK(s.latents.mu_v == effective_velocity(50, 50, 50));
    CHECK(s.latents.mu_g == effective_gain(50, 50));
    CHECK(s.consumption == convolve_opcost(s.opcost));
    CHECK(s.fatigue > basic_fatigue(50, 50) / 3.0);
    CHECK(s.fatigue < basic_fatigue(50, 50));
    CHECK(env.stream().draws() == 0);
}

TEST_CASE("reset is deterministic", "[env]") {
    EnvConfig c;
    c.seed = 9;
    c.setpoint_mode = SetpointMode::Variable;
    c.setpoint = 30;
    Environment a(c), b(c);
    CHECK(a.state() == b.state());
    CHECK(a.stream() == b.stream());
    CHECK(a.stream().draws() == 4);
}

TEST_CASE("invalid configuration is rejected", "[env]") {
    EnvConfig c;
    c.initial.velocity = 101;
    CHECK_THROWS_AS(Environment(c), ValidationError);
    c = {};
    c.setpoint = -1;
    CHECK_THROWS_AS(Environment(c), ValidationError);
}

TEST_CASE("observation mirrors the state and hides latents", "[env]") {
    EnvConfig c;
    c.initial = {12, 34, 56};
    c.setpoint = 70;
    Environment env(c);
    const auto o = env.observe();
    CHECK(o.velocity == 12);
    CHECK(o.gain == 34);
    CHECK(o.shift == 56);
    CHECK(o.setpoint == 70);
    CHECK(o.to_array().size() == 6);
    CHECK(env.state().markov_values().size() == 20);
}

TEST_CASE("zero action with noise suppressed", "[env]") {
    Environment env;
    env.set_noise_hook(NoiseHook::Mean);
    const auto r = env.step({0, 0, 0});
    CHECK(r.details.penalty == 0.0);
    CHECK(r.observation.consumption == Approx(70.10541234668786).epsilon(1e-14));
    CHECK(r.observation.consumption == r.details.noise_free_consumption);
    CHECK(env.stream().draws() == 0);
}

TEST_CASE("reward identity holds at every step", "[env][property]") {
    EnvConfig c;
    c.seed = 5;
    c.setpoint_mode = SetpointMode::Variable;
    Environment env(c);
    auto policy = BehaviorPolicy::random_uniform();
    policy.seed(1);
    for (int t = 0; t < 5000; ++t) {
        const auto r = env.step(policy.act(env.observe()));
        REQUIRE(r.reward == -r.observation.consumption - 3.0 * r.observation.fatigue);
        REQUIRE(r.observation.setpoint >= 0.0);
        REQUIRE(r.observation.setpoint <= 100.0);
        REQUIRE(r.observation.fatigue >= r.details.basic_fatigue / 3.0 - 1e-12);
        REQUIRE(r.observation.fatigue <= r.details.basic_fatigue + 1e-12);
    }
}

TEST_CASE("draw count per step follows the branch profile", "[env]") {
    Environment env;
    auto policy = BehaviorPolicy::random_uniform();
    policy.seed(2);
    for (int t = 0; t < 2000; ++t) {
        const auto before = env.stream().draws();
        const auto r = env.step(policy.act(env.observe()));
        REQUIRE(env.stream().draws() - before == (r.details.bifurcated ? 10u : 8u));
    }
}

TEST_CASE("strict mode rejects bad actions, lenient clamps", "[env]") {
    Environment strict;
    CHECK_THROWS_AS(strict.step({2, 0, 0}), ValidationError);
    CHECK(strict.stream().draws() == 0);

    EnvConfig c;
    c.validation = ActionValidation::Lenient;
    Environment lenient(c), reference(c);
    const auto a = lenient.step({2, -7, 0.5});
    const auto b = reference.step({1, -1, 0.5});
    CHECK(a.observation == b.observation);
}

TEST_CASE("constant setpoint mode never moves p", "[env]") {
    EnvConfig c;
    c.setpoint = 37.5;
    Environment env(c);
    auto policy = BehaviorPolicy::random_uniform();
    for (int t = 0; t < 500; ++t) REQUIRE(env.step(policy.act(env.observe())).observation.setpoint == 37.5);
}

TEST_CASE("consumption noise statistics", "[env][statistics]") {
    EnvConfig c;
    c.seed = 123;
    Environment env(c);
    const int n = 100000;
    double s = 0, s2 = 0;
    double sigma = 0.0;
    for (int t = 0; t < n; ++t) {
        const auto r = env.step({0, 0, 0});
        const double resid = r.observation.consumption - r.details.noise_free_consumption;
        sigma = 1.0 + 0.02 * r.details.noise_free_consumption;
        s += resid;
        s2 += resid * resid;
    }
    // zero action from reset keeps the noise-free consumption frozen
    const double mean = s / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    CHECK(std::abs(mean) < 3 * sigma / std::sqrt(n));
    CHECK(std::abs(sd / sigma - 1.0) < 0.01);
}

TEST_CASE("step matches the straight-line reference", "[env][oracle]") {
    for (const auto& cc : oracle::cross_check_cases()) {
        INFO(cc.name);
        CHECK(oracle::cross_check_deviation(cc) <= 1e-12);
    }
}

TEST_CASE("hand-composed step from reset", "[env][oracle]") {
    // Zero hook: no spikes, exponential samples 0 -> eta = 0.5, alpha = 0.5.
    Environment env;
    env.set_noise_hook(NoiseHook::Zero);
    const auto r = env.step({1, 0, 0});
    const double v = 51, g = 50;
    CHECK(r.observation.velocity == v);
    CHECK(r.observation.fatigue == Approx(basic_fatigue(v, g) * (1.0 + 2.0 * 0.5) / 3.0).epsilon(1e-14));
    CHECK(r.observation.consumption == Approx(std::exp(4.25)).epsilon(1e-14));
    CHECK(env.state().opcost.lag(1) == Approx(std::exp(4.25)).epsilon(1e-14));
    const auto r2 = env.step({0, 0, 0});
    CHECK(env.state().opcost.lag(1) == Approx(current_opcost(50, 51, 50)).epsilon(1e-14));
    CHECK(r2.details.convolved_opcost == Approx(std::exp(4.25)).epsilon(1e-14));
}
