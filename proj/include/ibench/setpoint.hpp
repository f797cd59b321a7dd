#pragma once

#include <algorithm>

#include "ibench/random.hpp"

namespace ibench {

/// Remaining length and rate of the current piecewise-linear setpoint segment.
struct SegmentState {
    int steps_remaining = 0;
    double rate = 0.0;

    friend bool operator==(const SegmentState&, const SegmentState&) = default;
};

/// Always four draws: length, mixture component, magnitude, sign.
template <NoiseSource Source>
SegmentState sample_segment(Source& src) {
    SegmentState seg;
    seg.steps_remaining = src.uniform_int(1, 100);
    const bool flat = src.uniform() < 0.1;
    const double magnitude = src.uniform();
    const double sign = src.uniform() < 0.5 ? -1.0 : 1.0;
    seg.rate = flat ? 0.0 : sign * magnitude;
    return seg;
}

struct SetpointUpdate {
    double setpoint;
    SegmentState segment;
};

/// At a bound the rate flips with probability 1/2 (one draw); exhausted
/// segments are replaced after the move.
template <NoiseSource Source>
SetpointUpdate step_setpoint(double p, SegmentState seg, Source& src) {
    if (p <= 0.0 || p >= 100.0) {
        if (src.uniform() < 0.5) seg.rate = -seg.rate;
    }
    const double next = std::clamp(p + seg.rate, 0.0, 100.0);
    if (--seg.steps_remaining <= 0) seg = sample_segment(src);
    return {next, seg};
}

} // namespace ibench
