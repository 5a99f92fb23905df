#pragma once

#include <vector>

#include "dlp/core/math.hpp"

namespace dlp {

struct TrajectorySample {
    double time = 0.0;  // seconds
    double x = 0.0;     // ground position, meters
    double z = 0.0;
    Vec3 facing{0, 0, 1};  // unit
};

struct Trajectory {
    std::vector<TrajectorySample> samples;

    double duration() const { return samples.empty() ? 0.0 : samples.back().time; }
    bool empty() const { return samples.size() < 2; }

    // Linear position / slerped facing at time t, clamped to the ends.
    TrajectorySample at(double t) const;

    // Throws DomainError unless times strictly increase and facings are
    // unit within 1e-6.
    void validate() const;
};

}  // namespace dlp
