#pragma once

#include <optional>
#include <vector>

#include "dlp/core/skeleton.hpp"
#include "dlp/core/trajectory.hpp"

namespace dlp {

// Matching feature vector, layout t(2k) f(3k) b(189) h(1) p(3):
//   t  ground-projected hip positions over the k-frame window, in the
//      window anchor's character frame
//   f  facing directions per frame, rotated into the anchor frame
//   b  anchor pose block: per joint 6D rotation then local position
//      (root rotation is heading-relative)
//   h  anchor hip height
//   p  partner hip position in the anchor frame (zero without partner)
struct KinematicFeature {
    int k = 0;
    std::vector<double> values;

    static std::size_t length_for(int k) { return 5 * static_cast<std::size_t>(k) + 193; }
};

struct FeatureLayout {
    int k;
    int t_off() const { return 0; }
    int f_off() const { return 2 * k; }
    int b_off() const { return 5 * k; }
    int h_off() const { return 5 * k + 189; }
    int p_off() const { return 5 * k + 190; }
    std::size_t total() const { return KinematicFeature::length_for(k); }
};

// Window feature for `clip` frames [start, start+k), clamp-padding past
// the clip end. `partner` supplies the p block for interactive pairs.
KinematicFeature extract_window_feature(const MotionClip& clip, int start, int k,
                                        const MotionClip* partner);

// Query-side feature: t/f from the target trajectory sampled at the
// window fps in the current character frame (clamp-extended past its
// end; stationary when absent), b/h from the current pose, p from the
// partner position.
KinematicFeature extract_query_feature(const Skeleton& skeleton, const Pose& current_pose,
                                       const Trajectory* target_trajectory,
                                       const std::optional<Vec3>& partner_position, int k,
                                       double fps);

}  // namespace dlp
