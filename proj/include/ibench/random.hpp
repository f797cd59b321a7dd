/**
 * @file random.hpp
 * @brief Seeded random stream with platform-independent transforms.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. The <random> distributions are implementation-defined, so every
 * transform used by the simulator is written out here. Draw counts per call:
 *
 *   uniform, exponential, bernoulli, uniform_int   1 raw draw
 *   gaussian                                       2 raw draws (Box-Muller, no caching)
 *
 * NoiseHook is a drop-in replacement used by tests to make a step fully
 * deterministic. It never touches a stream.
 */

#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "ibench/errors.hpp"

namespace ibench {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of an independent substream, e.g. one per setpoint of a batch.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    return mix64(base ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Anything the dynamics can draw noise from.
template <class S>
concept NoiseSource = requires(S& s, double x, int n) {
    { s.uniform() } -> std::convertible_to<double>;
    { s.exponential(x) } -> std::convertible_to<double>;
    { s.gaussian(x, x) } -> std::convertible_to<double>;
    { s.bernoulli(x) } -> std::convertible_to<double>;
    { s.uniform_int(n, n) } -> std::convertible_to<int>;
};

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() {
        ++draws_;
        return engine_();
    }

    /// Uniform on [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    double gaussian(double mean, double stddev) {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Returns 1.0 or 0.0. p outside [0,1] behaves as the nearest bound.
    double bernoulli(double p) { return uniform() < p ? 1.0 : 0.0; }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<double>(hi - lo + 1);
        auto k = static_cast<int>(std::floor(uniform() * span));
        if (k > hi - lo) k = hi - lo;
        return lo + k;
    }

    /// Number of raw 64-bit draws consumed since construction or restore.
    std::uint64_t draws() const noexcept { return draws_; }

    std::string serialize() const {
        std::ostringstream os;
        os << draws_ << ' ' << engine_;
        return os.str();
    }

    static RandomStream deserialize(const std::string& text) {
        RandomStream out;
        std::istringstream is(text);
        is >> out.draws_ >> out.engine_;
        if (!is) throw FormatError("malformed random stream state");
        return out;
    }

    friend bool operator==(const RandomStream& a, const RandomStream& b) {
        return a.draws_ == b.draws_ && a.engine_ == b.engine_;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

/// Test-only replacement for noise draws.
enum class NoiseHook {
    Mean, ///< every draw replaced by its distribution mean (Bernoulli -> p)
    Zero, ///< exponential, Bernoulli, uniform -> 0; gaussians -> their mean
};

class SuppressedNoise {
public:
    explicit SuppressedNoise(NoiseHook mode) : mode_(mode) {}

    double uniform() const { return mode_ == NoiseHook::Mean ? 0.5 : 0.0; }
    double exponential(double mean) const { return mode_ == NoiseHook::Mean ? mean : 0.0; }
    double gaussian(double mean, double) const { return mean; }
    double bernoulli(double p) const {
        if (mode_ == NoiseHook::Zero) return 0.0;
        return std::fmin(1.0, std::fmax(0.0, p));
    }
    int uniform_int(int lo, int hi) const {
        return mode_ == NoiseHook::Mean ? lo + (hi - lo) / 2 : lo;
    }

    NoiseHook mode() const noexcept { return mode_; }

private:
    NoiseHook mode_;
};

static_assert(NoiseSource<RandomStream>);
static_assert(NoiseSource<SuppressedNoise>);

} // namespace ibench
