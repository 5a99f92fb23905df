#pragma once

#include "dlp/momat/matcher.hpp"

namespace dlp::momat {

struct NoProgress : Error {
    using Error::Error;
};

struct FollowConfig {
    int replan_frames = 10;
    int blend_frames = 5;
    MatchConfig match;
    std::optional<ClipCategory> category = ClipCategory::basic;
    // With kinematics disabled the ranking carries no signal and the
    // pick is uniform over the candidate set (text-only / ablation mode).
    bool kinematics_enabled = true;
    // Stall detection; disabled for ablation runs where random picks may
    // legitimately idle in place.
    bool stall_check = true;
    double stall_epsilon = 0.02;  // meters advanced per replan
    int stall_limit = 5;
    double stall_min_remaining = 0.3;  // only stall when the target is away
};

struct FollowResult {
    MotionClip motion;  // stitched world-space motion, fps = db fps
    // Frame index where each retrieved window starts contributing; the
    // boundary frame itself is shared with the previous segment.
    std::vector<std::size_t> segment_starts;
    std::vector<WindowRef> segments;
};

// Auto-regressive matching along a trajectory: extract query features at
// the current state, match (no text stage), play `replan_frames` of the
// chosen window crossfaded over `blend_frames`, advance, repeat until
// the trajectory ends. A zero-length trajectory yields one idle-matched
// segment. Throws NoProgress per the stall settings.
FollowResult follow_trajectory(const MotionDatabase& db, const Pose& seed_pose,
                               const Trajectory& trajectory, const FollowConfig& config,
                               Rng& rng);

}  // namespace dlp::momat
