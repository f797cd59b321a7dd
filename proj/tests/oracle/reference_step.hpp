// Straight-line transcription of one benchmark step (constant setpoint),
// written independently of the library: no ibench function is called.
// Noise enters as explicit values so the caller fixes every draw.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace ibench::oracle {

struct RefState {
    double p, v, g, h, c, f;
    std::array<double, 9> theta; // lags 1..9
    int delta, psi, phi;
    double mu_v, mu_g;
};

/// Values that replace the random draws of one step.
struct RefDraws {
    double exp_v, exp_g;   // exponential samples
    double bern_v, bern_g; // Bernoulli outcomes (or their mean)
    double unif_v, unif_g;
    double gauss_alpha;    // sample of N(2.4, 0.4)
    double gauss_c;        // standardised consumption noise
    bool bernoulli_mean = false; // use the Bernoulli parameter itself as the outcome
};

inline double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

inline RefState reference_step(const RefState& s, double dv, double dg, double dh, const RefDraws& n) {
    const double pi = 3.14159265358979323846;
    RefState o = s;

    // steerings
    o.v = std::max(0.0, std::min(100.0, s.v + 1.0 * dv));
    o.g = std::max(0.0, std::min(100.0, s.g + 10.0 * dg));
    o.h = std::max(0.0, std::min(100.0, s.h + (20.0 * std::sin(15.0 * pi / 180.0) / 0.9) * dh));
    const double p = s.p;

    // fatigue
    const double tv = (o.g + p + 2.0) / (o.v - p + 101.0);
    const double tv_lo = (100.0 + p + 2.0) / (0.0 - p + 101.0);
    const double tv_hi = (0.0 + p + 2.0) / (100.0 - p + 101.0);
    const double ve = (tv - tv_lo) / (tv_hi - tv_lo);
    const double tg = 1.0 / (o.g + p + 1.0);
    const double tg_lo = 1.0 / (100.0 + p + 1.0);
    const double tg_hi = 1.0 / (0.0 + p + 1.0);
    const double ge = (tg - tg_lo) / (tg_hi - tg_lo);

    const double eta_ve = 1.0 / (1.0 + std::exp(-n.exp_v));
    const double eta_ge = 1.0 / (1.0 + std::exp(-n.exp_g));
    const double bern_v = n.bernoulli_mean ? std::max(0.0, std::min(1.0, ve)) : n.bern_v;
    const double bern_g = n.bernoulli_mean ? std::max(0.0, std::min(1.0, ge)) : n.bern_g;
    const double eta_v = eta_ve + (1.0 - eta_ve) * n.unif_v * bern_v * ve;
    const double eta_g = eta_ge + (1.0 - eta_ge) * n.unif_g * bern_g * ge;

    if (ve <= 0.05) o.mu_v = ve;
    else if (s.mu_v >= 1.2) o.mu_v = std::min(5.0, 1.1 * s.mu_v);
    else o.mu_v = 0.9 * s.mu_v + eta_v / 3.0;
    if (ge <= 0.05) o.mu_g = ge;
    else if (s.mu_g >= 1.2) o.mu_g = std::min(5.0, 1.1 * s.mu_g);
    else o.mu_g = 0.9 * s.mu_g + eta_g / 3.0;

    double alpha;
    if (std::max(o.mu_v, o.mu_g) >= 1.2) alpha = 1.0 / (1.0 + std::exp(-n.gauss_alpha));
    else alpha = std::max(eta_v, eta_g);
    const double fb = std::max(0.0, 30000.0 / (5.0 * o.v + 100.0) - 0.01 * o.g * o.g);
    o.f = fb * (1.0 + 2.0 * alpha) / 3.0;

    // operational cost: the pre-step cost becomes lag 1
    const double theta_prev = std::exp((2.0 * s.p + 4.0 * s.v + 2.5 * s.g) / 100.0);
    for (int i = 8; i > 0; --i) o.theta[i] = s.theta[i - 1];
    o.theta[0] = theta_prev;
    const double theta_c = o.theta[4] / 9.0 + 2.0 * o.theta[5] / 9.0 + 3.0 * o.theta[6] / 9.0 +
                           2.0 * o.theta[7] / 9.0 + o.theta[8] / 9.0;

    // mis-calibration state machine
    const double z = std::sin(pi * 15.0 / 180.0) / 2.0;
    const double he = std::max(-1.5, std::min(1.5, o.h / 20.0 - p / 50.0 - 1.5));
    const int delta_hat = std::abs(he) <= z ? s.delta : static_cast<int>(sgn(he));
    const int psi_hat = s.delta != delta_hat ? 1 : s.psi;
    int dphi;
    if (std::abs(he) <= z) dphi = -static_cast<int>(sgn(s.phi));
    else if (s.phi == -6 * delta_hat) dphi = 0;
    else dphi = psi_hat * static_cast<int>(sgn(he));
    const int phi_hat = s.phi + dphi;
    const int psi_hathat = std::abs(phi_hat) >= 6 ? -1 : psi_hat;
    const int phi_new = std::abs(phi_hat) >= 6 ? 12 - ((phi_hat + 24) % 24) : phi_hat;
    const bool reset = phi_new == 0 && std::abs(he) <= z;
    o.delta = reset ? 1 : delta_hat;
    o.psi = reset ? 1 : psi_hathat;
    o.phi = phi_new;

    // Goldstone penalty
    const double eps = std::cbrt(1.0 + std::sqrt(2.0)) / std::sqrt(3.0);
    const double zeta = eps + 1.0 / (3.0 * eps);
    const double lambda = 2.0 * zeta * zeta - zeta * zeta * zeta * zeta + 8.0 * std::sqrt(2.0 / 27.0) * zeta;
    const double a_g = 2.0 / lambda, b_g = 1.0 / lambda, kappa = -8.0 * std::sqrt(2.0 / 27.0) / lambda;
    const double rho_s = std::sin(pi / 12.0 * o.phi);
    const double varrho = rho_s < 0 ? -1.0 : 1.0;
    const double q = kappa * std::abs(rho_s) / (8.0 * b_g);
    double r_min;
    if (q < -std::sqrt(1.0 / 27.0)) {
        const double u = std::cbrt(-varrho * q + std::sqrt(q * q - 1.0 / 27.0));
        r_min = u + 1.0 / (3.0 * u);
    } else {
        r_min = varrho * std::sqrt(4.0 / 3.0) * std::cos(1.0 / 3.0 * std::acos(-q * std::sqrt(27.0)));
    }
    const double r_opt = varrho * std::max(std::abs(rho_s), 2.0 * z);
    double omega;
    if (std::abs(he) <= std::abs(r_opt)) {
        omega = he * std::abs(r_min) / std::abs(r_opt);
    } else {
        const double w2 = (2.0 - std::abs(r_opt)) / (2.0 - std::abs(r_min));
        const double w1 = std::abs(r_min) + (2.0 - std::abs(r_min)) / std::pow(2.0 - std::abs(r_opt), w2) *
                                                 std::pow(std::abs(he) - std::abs(r_opt), w2);
        omega = (he < 0 ? -1.0 : 1.0) * w1;
    }
    const double m = -a_g * omega * omega + b_g * omega * omega * omega * omega + kappa * rho_s * omega;

    // consumption
    const double c_hat = theta_c + 25.0 * m;
    o.c = c_hat + (1.0 + 0.02 * c_hat) * n.gauss_c;
    return o;
}

inline double reference_reward(const RefState& s) { return -s.c - 3.0 * s.f; }

} // namespace ibench::oracle
