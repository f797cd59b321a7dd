#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace ibench {

/// Instantaneous operational cost.
inline double current_opcost(double setpoint, double velocity, double gain) {
    return std::exp((2.0 * setpoint + 4.0 * velocity + 2.5 * gain) / 100.0);
}

/// The nine most recent operational costs. Slot i holds the cost at lag i+1.
class OpCostHistory {
public:
    static constexpr std::size_t kLength = 9;

    /// Weights over lags 1..9; lags 1..4 are zero, which produces the delay.
    static constexpr std::array<double, kLength> kWeights{
        0.0, 0.0, 0.0, 0.0, 1.0 / 9.0, 2.0 / 9.0, 3.0 / 9.0, 2.0 / 9.0, 1.0 / 9.0};

    OpCostHistory() { values_.fill(1.0); }
    explicit OpCostHistory(double fill) { values_.fill(fill); }
    explicit OpCostHistory(const std::array<double, kLength>& lags) : values_(lags) {}

    /// New value becomes lag 1; lag 9 drops off.
    void push(double theta) {
        std::shift_right(values_.begin(), values_.end(), 1);
        values_[0] = theta;
    }

    double lag(std::size_t i) const { return values_.at(i - 1); }
    const std::array<double, kLength>& values() const noexcept { return values_; }

    friend bool operator==(const OpCostHistory&, const OpCostHistory&) = default;

private:
    std::array<double, kLength> values_{};
};

inline OpCostHistory push_opcost(OpCostHistory history, double theta) {
    history.push(theta);
    return history;
}

/// Delayed and blurred cost seen through the fixed 1-2-3-2-1 kernel.
inline double convolve_opcost(const OpCostHistory& history) {
    const auto& v = history.values();
    return (1.0 * v[4] + 2.0 * v[5] + 3.0 * v[6] + 2.0 * v[7] + 1.0 * v[8]) / 9.0;
}

} // namespace ibench
