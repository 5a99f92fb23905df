#include "dlp/evalkit/metrics.hpp"

#include <cmath>

namespace dlp::evalkit {

double trajectory_error(const MotionClip& motion, const Trajectory& target) {
    if (motion.frames.empty()) throw DomainError("trajectory_error: empty motion");
    double sum = 0.0;
    for (std::size_t i = 0; i < motion.frames.size(); ++i) {
        const double t = i / motion.fps;
        const TrajectorySample s = target.samples.empty() ? TrajectorySample{} : target.at(t);
        const double dx = motion.frames[i].root_position.x - s.x;
        const double dz = motion.frames[i].root_position.z - s.z;
        sum += std::sqrt(dx * dx + dz * dz);
    }
    return sum / static_cast<double>(motion.frames.size());
}

ContactPreservation contact_preservation(const mogen::MotionPairTensor& refined,
                                         const mogen::MotionPairTensor& reference,
                                         double gamma) {
    refined.check_shape(reference);
    const auto dbar = mogen::pair_distances(reference);
    const auto d = mogen::pair_distances(refined);
    ContactPreservation out;
    double sum = 0.0;
    for (std::size_t i = 0; i < dbar.size(); ++i) {
        if (dbar[i] < gamma) {
            ++out.active_set_count;
            sum += std::fabs(dbar[i] - d[i]);
        }
    }
    if (out.active_set_count == 0) {
        out.empty_active_set = true;
        out.mean_abs_error = 0.0;
    } else {
        out.mean_abs_error = sum / static_cast<double>(out.active_set_count);
    }
    return out;
}

double diversity_proxy(const std::vector<std::vector<double>>& motions, int frames, int joints) {
    if (motions.size() < 2) throw DomainError("diversity_proxy: need at least two motions");
    const std::size_t expected = static_cast<std::size_t>(frames) * joints * 3;
    for (const auto& m : motions) {
        if (m.size() != expected) throw ShapeMismatch("diversity_proxy: shape mismatch");
    }
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < motions.size(); ++a) {
        for (std::size_t b = a + 1; b < motions.size(); ++b) {
            double frame_sum = 0.0;
            for (int i = 0; i < frames; ++i) {
                double sq = 0.0;
                for (int j = 0; j < joints; ++j) {
                    const std::size_t o = (static_cast<std::size_t>(i) * joints + j) * 3;
                    const double dx = motions[a][o] - motions[b][o];
                    const double dy = motions[a][o + 1] - motions[b][o + 1];
                    const double dz = motions[a][o + 2] - motions[b][o + 2];
                    sq += dx * dx + dy * dy + dz * dz;
                }
                frame_sum += std::sqrt(sq / joints);
            }
            total += frame_sum / frames;
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

std::vector<double> clip_positions(const MotionClip& clip) {
    std::vector<double> out;
    out.reserve(clip.frames.size() * kJointCount * 3);
    for (const auto& f : clip.frames) {
        const auto pos = forward_kinematics(*clip.skeleton, f);
        for (const auto& p : pos) {
            out.push_back(p.x);
            out.push_back(p.y);
            out.push_back(p.z);
        }
    }
    return out;
}

}  // namespace dlp::evalkit
