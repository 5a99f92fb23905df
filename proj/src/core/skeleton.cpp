#include "dlp/core/skeleton.hpp"

#include <cmath>
#include <set>

#include "dlp/core/error.hpp"
#include "dlp/kernels.hpp"

namespace dlp {

void Skeleton::validate() const {
    if (joint_names.size() != kJointCount || parent_index.size() != kJointCount ||
        rest_offsets.size() != kJointCount) {
        throw Error("skeleton: expected exactly 21 joints");
    }
    std::set<std::string> names(joint_names.begin(), joint_names.end());
    if (names.size() != joint_names.size()) throw Error("skeleton: duplicate joint names");
    if (parent_index[0] != -1) throw Error("skeleton: joint 0 must be the root");
    for (int j = 1; j < kJointCount; ++j) {
        if (parent_index[j] < 0 || parent_index[j] >= j) {
            throw Error("skeleton: parents must precede children");
        }
    }
}

Pose Pose::identity() {
    Pose p;
    p.joint_rotations.fill(identity_rot6());
    return p;
}

const char* to_string(ClipCategory c) {
    switch (c) {
        case ClipCategory::basic: return "basic";
        case ClipCategory::interactive: return "interactive";
        case ClipCategory::script: return "script";
    }
    return "basic";
}

ClipCategory clip_category_from_string(const std::string& s) {
    if (s == "basic") return ClipCategory::basic;
    if (s == "interactive") return ClipCategory::interactive;
    if (s == "script") return ClipCategory::script;
    throw Error("unknown clip category: " + s);
}

void MotionClip::validate() const {
    if (!skeleton) throw Error("clip " + id + ": missing skeleton");
    skeleton->validate();
    if (frames.empty()) throw Error("clip " + id + ": no frames");
    if (!(fps > 0.0)) throw Error("clip " + id + ": fps must be positive");
}

std::array<Vec3, kJointCount> forward_kinematics(const Skeleton& skeleton,
                                                 const Vec3& root_position,
                                                 const std::array<Rot6, kJointCount>& rotations) {
    std::array<Vec3, kJointCount> positions;
    std::array<Mat3, kJointCount> world_rot;
    positions[0] = root_position;
    world_rot[0] = rot6_to_mat(rotations[0]);
    for (int j = 1; j < kJointCount; ++j) {
        const int p = skeleton.parent_index[j];
        positions[j] = positions[p] + world_rot[p] * skeleton.rest_offsets[j];
        world_rot[j] = world_rot[p] * rot6_to_mat(rotations[j]);
    }
    return positions;
}

DistanceTensor joint_distance_tensor(const MotionClip& a, const MotionClip& b) {
    if (a.frames.size() != b.frames.size()) {
        throw LengthMismatch("joint_distance_tensor: frame counts differ");
    }
    const int n = static_cast<int>(a.frames.size());
    std::vector<double> pos_a(static_cast<std::size_t>(n) * kJointCount * 3);
    std::vector<double> pos_b(pos_a.size());
    for (int i = 0; i < n; ++i) {
        const auto pa = forward_kinematics(*a.skeleton, a.frames[i]);
        const auto pb = forward_kinematics(*b.skeleton, b.frames[i]);
        for (int j = 0; j < kJointCount; ++j) {
            const std::size_t o = (static_cast<std::size_t>(i) * kJointCount + j) * 3;
            pos_a[o] = pa[j].x;
            pos_a[o + 1] = pa[j].y;
            pos_a[o + 2] = pa[j].z;
            pos_b[o] = pb[j].x;
            pos_b[o + 1] = pb[j].y;
            pos_b[o + 2] = pb[j].z;
        }
    }
    DistanceTensor t;
    t.frames = n;
    t.joints_a = kJointCount;
    t.joints_b = kJointCount;
    t.values.resize(static_cast<std::size_t>(n) * kJointCount * kJointCount);
    kernels::pairwise_distances(pos_a.data(), pos_b.data(), n, kJointCount, kJointCount,
                                t.values.data());
    return t;
}

MotionClip resample(const MotionClip& clip, double target_fps) {
    if (!(target_fps > 0.0)) throw DomainError("resample: fps must be positive");
    MotionClip out = clip;
    out.fps = target_fps;
    if (clip.frames.size() < 2) return out;

    const std::size_t n = clip.frames.size();
    const double duration = (n - 1) / clip.fps;
    const std::size_t m =
        static_cast<std::size_t>(std::lround(duration * target_fps)) + 1;
    out.frames.clear();
    out.frames.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double src = (m == 1) ? 0.0
                                    : static_cast<double>(i) * static_cast<double>(n - 1) /
                                          static_cast<double>(m - 1);
        const std::size_t lo = std::min(static_cast<std::size_t>(src), n - 1);
        const double frac = src - static_cast<double>(lo);
        if (frac < 1e-12 || lo + 1 >= n) {
            out.frames.push_back(clip.frames[lo]);
            continue;
        }
        const Pose& a = clip.frames[lo];
        const Pose& b = clip.frames[lo + 1];
        Pose p;
        p.root_position = lerp(a.root_position, b.root_position, frac);
        for (int j = 0; j < kJointCount; ++j) {
            p.joint_rotations[j] = slerp_rot6(a.joint_rotations[j], b.joint_rotations[j], frac);
        }
        out.frames.push_back(p);
    }
    return out;
}

Pose interpolate_pose(const Pose& a, const Pose& b, double alpha) {
    if (alpha <= 0.0) return a;
    if (alpha >= 1.0) return b;
    Pose p;
    p.root_position = lerp(a.root_position, b.root_position, alpha);
    for (int j = 0; j < kJointCount; ++j) {
        p.joint_rotations[j] = slerp_rot6(a.joint_rotations[j], b.joint_rotations[j], alpha);
    }
    return p;
}

Vec3 pose_facing(const Pose& pose) {
    const Mat3 r = rot6_to_mat(pose.joint_rotations[0]);
    Vec3 f = r * Vec3{0, 0, 1};
    f.y = 0.0;
    const double n = norm(f);
    if (n < 1e-9) return {0, 0, 1};
    return f * (1.0 / n);
}

Vec3 CharacterFrame::to_local(const Vec3& world) const {
    const Vec3 d = world - origin;
    const Vec3 up{0, 1, 0};
    const Vec3 right = cross(up, forward);
    return {dot(d, right), dot(d, up), dot(d, forward)};
}

Vec3 CharacterFrame::dir_to_local(const Vec3& world_dir) const {
    const Vec3 up{0, 1, 0};
    const Vec3 right = cross(up, forward);
    return {dot(world_dir, right), dot(world_dir, up), dot(world_dir, forward)};
}

Vec3 CharacterFrame::to_world(const Vec3& local) const {
    const Vec3 up{0, 1, 0};
    const Vec3 right = cross(up, forward);
    return origin + right * local.x + up * local.y + forward * local.z;
}

Vec3 CharacterFrame::dir_to_world(const Vec3& local_dir) const {
    const Vec3 up{0, 1, 0};
    const Vec3 right = cross(up, forward);
    return right * local_dir.x + up * local_dir.y + forward * local_dir.z;
}

CharacterFrame frame_of(const Pose& pose) {
    CharacterFrame f;
    f.origin = {pose.root_position.x, 0.0, pose.root_position.z};
    f.forward = pose_facing(pose);
    return f;
}

Vec3 GroundTransform::apply_point(const Vec3& p) const {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return Vec3{c * p.x + s * p.z, p.y, -s * p.x + c * p.z} + translation;
}

Vec3 GroundTransform::apply_dir(const Vec3& d) const {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {c * d.x + s * d.z, d.y, -s * d.x + c * d.z};
}

GroundTransform align_frames(const CharacterFrame& src, const CharacterFrame& dst) {
    GroundTransform t;
    t.yaw = std::atan2(dst.forward.x, dst.forward.z) - std::atan2(src.forward.x, src.forward.z);
    const double c = std::cos(t.yaw);
    const double s = std::sin(t.yaw);
    const Vec3 rotated{c * src.origin.x + s * src.origin.z, 0.0,
                       -s * src.origin.x + c * src.origin.z};
    t.translation = dst.origin - rotated;
    return t;
}

Pose transform_pose(const Pose& pose, const GroundTransform& t) {
    Pose out = pose;
    out.root_position = t.apply_point(pose.root_position);
    const Mat3 yaw = Mat3::rotation_y(t.yaw);
    out.joint_rotations[0] = mat_to_rot6(yaw * rot6_to_mat(pose.joint_rotations[0]));
    return out;
}

}  // namespace dlp
