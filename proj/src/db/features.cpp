#include "dlp/db/features.hpp"

#include <algorithm>
#include <cmath>

#include "dlp/core/error.hpp"

namespace dlp {

namespace {

// b + h blocks: 21 x (rot6 + local position) then hip height. The root
// rotation is expressed heading-relative so the block is invariant to
// where the pose stands in the world.
void write_pose_block(const Skeleton& skeleton, const Pose& pose, double* b_out, double* h_out) {
    const CharacterFrame frame = frame_of(pose);
    const double yaw = std::atan2(frame.forward.x, frame.forward.z);
    const Mat3 unyaw = Mat3::rotation_y(-yaw);
    const auto positions = forward_kinematics(skeleton, pose);
    for (int j = 0; j < kJointCount; ++j) {
        Rot6 r = pose.joint_rotations[j];
        if (j == 0) r = mat_to_rot6(unyaw * rot6_to_mat(r));
        double* out = b_out + j * 9;
        for (int c = 0; c < 6; ++c) out[c] = r[c];
        const Vec3 local = frame.to_local(positions[j]);
        out[6] = local.x;
        out[7] = local.y;
        out[8] = local.z;
    }
    *h_out = pose.root_position.y;
}

}  // namespace

KinematicFeature extract_window_feature(const MotionClip& clip, int start, int k,
                                        const MotionClip* partner) {
    if (k <= 0) throw DomainError("feature window length must be positive");
    const int n = static_cast<int>(clip.frames.size());
    const int anchor_index = std::min(start, n - 1);
    const Pose& anchor = clip.frames[anchor_index];
    const CharacterFrame frame = frame_of(anchor);

    FeatureLayout layout{k};
    KinematicFeature feat;
    feat.k = k;
    feat.values.assign(layout.total(), 0.0);
    double* v = feat.values.data();

    for (int s = 0; s < k; ++s) {
        const Pose& p = clip.frames[std::min(start + s, n - 1)];
        const Vec3 local = frame.to_local({p.root_position.x, 0.0, p.root_position.z});
        v[layout.t_off() + 2 * s] = local.x;
        v[layout.t_off() + 2 * s + 1] = local.z;
        const Vec3 f = frame.dir_to_local(pose_facing(p));
        v[layout.f_off() + 3 * s] = f.x;
        v[layout.f_off() + 3 * s + 1] = f.y;
        v[layout.f_off() + 3 * s + 2] = f.z;
    }

    write_pose_block(*clip.skeleton, anchor, v + layout.b_off(), v + layout.h_off());

    if (partner) {
        const int pn = static_cast<int>(partner->frames.size());
        const Pose& partner_anchor = partner->frames[std::min(anchor_index, pn - 1)];
        const Vec3 local = frame.to_local(partner_anchor.root_position);
        v[layout.p_off()] = local.x;
        v[layout.p_off() + 1] = local.y;
        v[layout.p_off() + 2] = local.z;
    }
    return feat;
}

KinematicFeature extract_query_feature(const Skeleton& skeleton, const Pose& current_pose,
                                       const Trajectory* target_trajectory,
                                       const std::optional<Vec3>& partner_position, int k,
                                       double fps) {
    if (k <= 0) throw DomainError("feature window length must be positive");
    const CharacterFrame frame = frame_of(current_pose);

    FeatureLayout layout{k};
    KinematicFeature feat;
    feat.k = k;
    feat.values.assign(layout.total(), 0.0);
    double* v = feat.values.data();

    for (int s = 0; s < k; ++s) {
        Vec3 pos = frame.origin;
        Vec3 facing = frame.forward;
        if (target_trajectory && !target_trajectory->samples.empty()) {
            const TrajectorySample sample = target_trajectory->at(s / fps);
            pos = {sample.x, 0.0, sample.z};
            facing = sample.facing;
        }
        const Vec3 local = frame.to_local(pos);
        v[layout.t_off() + 2 * s] = local.x;
        v[layout.t_off() + 2 * s + 1] = local.z;
        const Vec3 f = frame.dir_to_local(facing);
        v[layout.f_off() + 3 * s] = f.x;
        v[layout.f_off() + 3 * s + 1] = f.y;
        v[layout.f_off() + 3 * s + 2] = f.z;
    }

    write_pose_block(skeleton, current_pose, v + layout.b_off(), v + layout.h_off());

    if (partner_position) {
        const Vec3 local = frame.to_local(*partner_position);
        v[layout.p_off()] = local.x;
        v[layout.p_off() + 1] = local.y;
        v[layout.p_off() + 2] = local.z;
    }
    return feat;
}

}  // namespace dlp
