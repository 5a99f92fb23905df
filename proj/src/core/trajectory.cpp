#include "dlp/core/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "dlp/core/error.hpp"

namespace dlp {

TrajectorySample Trajectory::at(double t) const {
    if (samples.empty()) return {};
    if (t <= samples.front().time) return samples.front();
    if (t >= samples.back().time) return samples.back();
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const TrajectorySample& s) { return v < s.time; });
    const TrajectorySample& b = *it;
    const TrajectorySample& a = *(it - 1);
    const double span = b.time - a.time;
    const double u = span > 0.0 ? (t - a.time) / span : 0.0;
    TrajectorySample out;
    out.time = t;
    out.x = a.x + (b.x - a.x) * u;
    out.z = a.z + (b.z - a.z) * u;
    Vec3 f = lerp(a.facing, b.facing, u);
    const double n = norm(f);
    out.facing = n > 1e-9 ? f * (1.0 / n) : a.facing;
    return out;
}

void Trajectory::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0 && !(samples[i].time > samples[i - 1].time)) {
            throw DomainError("trajectory: times must strictly increase");
        }
        if (std::fabs(norm(samples[i].facing) - 1.0) > 1e-6) {
            throw DomainError("trajectory: facing must be unit length");
        }
    }
}

}  // namespace dlp
