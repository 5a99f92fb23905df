#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "dlp/core/math.hpp"

namespace dlp {

inline constexpr int kJointCount = 21;

struct Skeleton {
    std::vector<std::string> joint_names;  // exactly 21, unique
    std::vector<int> parent_index;         // -1 for the root (index 0)
    std::vector<Vec3> rest_offsets;        // meters, relative to parent

    // Throws Error when the joint count, name uniqueness, or tree
    // structure (single root at index 0, parents precede children) is off.
    void validate() const;
};

using SkeletonRef = std::shared_ptr<const Skeleton>;

struct Pose {
    Vec3 root_position;                              // meters, y-up
    std::array<Rot6, kJointCount> joint_rotations;   // local, parent-relative

    static Pose identity();
};

enum class ClipCategory { basic, interactive, script };

const char* to_string(ClipCategory c);
ClipCategory clip_category_from_string(const std::string& s);

struct MotionClip {
    std::string id;
    SkeletonRef skeleton;
    std::vector<Pose> frames;
    double fps = 30.0;
    std::string annotation;
    ClipCategory category = ClipCategory::basic;

    double duration() const { return frames.empty() ? 0.0 : (frames.size() - 1) / fps; }
    void validate() const;
};

// World-space joint positions. Root joint lands exactly on root_position.
std::array<Vec3, kJointCount> forward_kinematics(const Skeleton& skeleton,
                                                 const Vec3& root_position,
                                                 const std::array<Rot6, kJointCount>& rotations);

inline std::array<Vec3, kJointCount> forward_kinematics(const Skeleton& skeleton,
                                                        const Pose& pose) {
    return forward_kinematics(skeleton, pose.root_position, pose.joint_rotations);
}

// D[i, j1, j2] = |pos_a[i][j1] - pos_b[i][j2]|
struct DistanceTensor {
    int frames = 0;
    int joints_a = 0;
    int joints_b = 0;
    std::vector<double> values;  // frames * joints_a * joints_b

    double at(int i, int j1, int j2) const {
        return values[(static_cast<std::size_t>(i) * joints_a + j1) * joints_b + j2];
    }
};

DistanceTensor joint_distance_tensor(const MotionClip& a, const MotionClip& b);

MotionClip resample(const MotionClip& clip, double target_fps);

// Linear root, per-joint spherical rotations; returns the inputs
// untouched at alpha 0 / 1.
Pose interpolate_pose(const Pose& a, const Pose& b, double alpha);

// Heading of a pose: root rotation applied to +z, projected to the ground
// plane. Falls back to +z when the projection degenerates.
Vec3 pose_facing(const Pose& pose);

// Ground-anchored character frame: origin at the hip projected to y=0,
// forward = facing. Local convention: +z forward, +y up, +x right.
struct CharacterFrame {
    Vec3 origin;   // y = 0
    Vec3 forward;  // unit, y = 0

    Vec3 to_local(const Vec3& world) const;
    Vec3 dir_to_local(const Vec3& world_dir) const;
    Vec3 to_world(const Vec3& local) const;
    Vec3 dir_to_world(const Vec3& local_dir) const;
};

CharacterFrame frame_of(const Pose& pose);

// Rigid ground-plane motion (yaw about +y, then translate); used to drop
// retrieved windows into the world at the character's current state.
struct GroundTransform {
    double yaw = 0.0;   // radians
    Vec3 translation;   // applied after the yaw

    Vec3 apply_point(const Vec3& p) const;
    Vec3 apply_dir(const Vec3& d) const;
    static GroundTransform identity() { return {}; }
};

// Transform mapping frame `src` onto frame `dst`.
GroundTransform align_frames(const CharacterFrame& src, const CharacterFrame& dst);

Pose transform_pose(const Pose& pose, const GroundTransform& t);

}  // namespace dlp
