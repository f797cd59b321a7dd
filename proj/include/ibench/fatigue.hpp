#pragma once

#include <algorithm>
#include <cmath>

#include "ibench/random.hpp"

namespace ibench {

inline constexpr double kMuCap = 5.0;
inline constexpr double kBifurcationLevel = 1.2;
inline constexpr double kEffectiveFloor = 0.05;

struct FatigueLatents {
    double mu_v = 0.0;
    double mu_g = 0.0;

    friend bool operator==(const FatigueLatents&, const FatigueLatents&) = default;
};

/// Raw draws and the composed spike noise of one fatigue update.
struct FatigueNoise {
    double eta_ve = 0.0, eta_ge = 0.0; // logistic of exponential samples
    double eta_vb = 0.0, eta_gb = 0.0; // Bernoulli spikes
    double eta_vu = 0.0, eta_gu = 0.0; // uniform spike heights
    double eta_v = 0.0, eta_g = 0.0;   // composed
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double basic_fatigue(double velocity, double gain) {
    return std::max(0.0, 30000.0 / (5.0 * velocity + 100.0) - 0.01 * gain * gain);
}

namespace detail {

inline double transform_v(double v, double g, double p) { return (g + p + 2.0) / (v - p + 101.0); }
inline double transform_g(double g, double p) { return 1.0 / (g + p + 1.0); }

} // namespace detail

/// Setpoint-normalised velocity: 0 at (v=0, g=100), 1 at (v=100, g=0).
inline double effective_velocity(double v, double g, double p) {
    using detail::transform_v;
    const double lo = transform_v(0.0, 100.0, p);
    const double hi = transform_v(100.0, 0.0, p);
    return (transform_v(v, g, p) - lo) / (hi - lo);
}

/// Setpoint-normalised gain: 0 at g=100, 1 at g=0.
inline double effective_gain(double g, double p) {
    using detail::transform_g;
    const double lo = transform_g(100.0, p);
    const double hi = transform_g(0.0, p);
    return (transform_g(g, p) - lo) / (hi - lo);
}

/// Draw order is fixed: ve, ge, vb, gb, vu, gu.
template <NoiseSource Source>
FatigueNoise sample_fatigue_noise(double v_e, double g_e, Source& src) {
    FatigueNoise n;
    n.eta_ve = logistic(src.exponential(0.05));
    n.eta_ge = logistic(src.exponential(0.05));
    n.eta_vb = src.bernoulli(std::clamp(v_e, 0.0, 1.0));
    n.eta_gb = src.bernoulli(std::clamp(g_e, 0.0, 1.0));
    n.eta_vu = src.uniform();
    n.eta_gu = src.uniform();
    n.eta_v = n.eta_ve + (1.0 - n.eta_ve) * n.eta_vu * n.eta_vb * v_e;
    n.eta_g = n.eta_ge + (1.0 - n.eta_ge) * n.eta_gu * n.eta_gb * g_e;
    return n;
}

/// Self-amplifying latent update; `effective` is v_e for mu_v and g_e for mu_g.
inline double update_mu(double mu_prev, double effective, double eta) {
    if (effective <= kEffectiveFloor) return effective;
    if (mu_prev >= kBifurcationLevel) return std::min(kMuCap, 1.1 * mu_prev);
    return 0.9 * mu_prev + eta / 3.0;
}

inline bool is_bifurcated(double mu_v, double mu_g) {
    return std::max(mu_v, mu_g) >= kBifurcationLevel;
}

/// Consumes one gaussian (2 raw draws) only on the bifurcated branch.
template <NoiseSource Source>
double amplification(double mu_v, double mu_g, double eta_v, double eta_g, Source& src) {
    if (is_bifurcated(mu_v, mu_g)) return logistic(src.gaussian(2.4, 0.4));
    return std::max(eta_v, eta_g);
}

inline double fatigue(double basic, double alpha) { return basic * (1.0 + 2.0 * alpha) / 3.0; }

} // namespace ibench
