#include "dlp/momat/follow.hpp"

#include <algorithm>
#include <cmath>

namespace dlp::momat {

FollowResult follow_trajectory(const MotionDatabase& db, const Pose& seed_pose,
                               const Trajectory& trajectory, const FollowConfig& config,
                               Rng& rng) {
    const DbConfig& dbc = db.config();
    const Skeleton& skeleton = *db.clips().front().skeleton;
    const std::vector<int> subset = candidate_subset(db, config.category);
    if (subset.empty()) throw EmptyDatabase("follow: no candidate windows in category");

    // Place the seed pose on the trajectory start.
    Pose current = seed_pose;
    if (!trajectory.samples.empty()) {
        const TrajectorySample s0 = trajectory.samples.front();
        CharacterFrame target;
        target.origin = {s0.x, 0.0, s0.z};
        Vec3 fwd = s0.facing;
        fwd.y = 0.0;
        const double n = norm(fwd);
        target.forward = n > 1e-9 ? fwd * (1.0 / n) : Vec3{0, 0, 1};
        current = transform_pose(current, align_frames(frame_of(current), target));
    }

    FollowResult result;
    result.motion.id = "follow";
    result.motion.fps = dbc.fps;
    result.motion.category = ClipCategory::basic;
    result.motion.skeleton = db.clips().front().skeleton;
    result.motion.frames.push_back(current);

    const double duration = trajectory.empty() ? 0.0 : trajectory.duration();
    double t_now = 0.0;
    int stall_runs = 0;
    bool first = true;

    while (first || t_now < duration) {
        first = false;

        // Query trajectory: the k-frame lookahead from t_now, re-based to
        // local time 0 (times must strictly increase for validate()).
        Trajectory lookahead;
        if (!trajectory.samples.empty()) {
            lookahead.samples.reserve(dbc.k);
            for (int s = 0; s < dbc.k; ++s) {
                TrajectorySample sample = trajectory.at(t_now + s / dbc.fps);
                sample.time = s / dbc.fps;
                lookahead.samples.push_back(sample);
            }
        }
        const KinematicFeature query = extract_query_feature(
            skeleton, current, lookahead.samples.empty() ? nullptr : &lookahead, std::nullopt,
            dbc.k, dbc.fps);

        const std::vector<int> sem = semantic_stage(db, std::nullopt, subset.size(), &subset);
        std::vector<MatchResult> ranked;
        if (config.kinematics_enabled) {
            ranked = kinematic_stage(db, sem, query, config.match.weights,
                                     static_cast<std::size_t>(config.match.K2),
                                     config.match.candidate_set_norm);
        } else {
            // no ranking signal: every candidate ties at zero
            ranked.resize(sem.size());
            for (std::size_t i = 0; i < sem.size(); ++i) {
                ranked[i].window_index = sem[i];
                ranked[i].window = db.window(sem[i]);
                ranked[i].clip_id = db.clip(ranked[i].window.clip_index).id;
            }
        }
        const MatchResult chosen = select_candidate(ranked, rng, config.match.tie_band_rel,
                                                    config.match.tie_band_floor);

        const MotionClip& clip = db.clip(chosen.window.clip_index);
        const int n = static_cast<int>(clip.frames.size());
        const int anchor = std::min(chosen.window.start, n - 1);
        const GroundTransform to_world =
            align_frames(frame_of(clip.frames[anchor]), frame_of(current));

        result.segment_starts.push_back(result.motion.frames.size() - 1);
        result.segments.push_back(chosen.window);

        const Pose held = current;
        const Vec3 before{current.root_position.x, 0.0, current.root_position.z};
        for (int i = 1; i <= config.replan_frames; ++i) {
            const Pose src = clip.frames[std::min(anchor + i, n - 1)];
            const Pose placed = transform_pose(src, to_world);
            const double alpha =
                config.blend_frames > 0
                    ? smoothstep(static_cast<double>(i) / config.blend_frames)
                    : 1.0;
            result.motion.frames.push_back(interpolate_pose(held, placed, alpha));
        }
        current = result.motion.frames.back();

        if (config.stall_check) {
            const Vec3 after{current.root_position.x, 0.0, current.root_position.z};
            const TrajectorySample target = trajectory.samples.empty()
                                                ? TrajectorySample{}
                                                : trajectory.at(t_now);
            const double remaining =
                std::hypot(target.x - after.x, target.z - after.z);
            if (distance(after, before) < config.stall_epsilon &&
                remaining > config.stall_min_remaining) {
                if (++stall_runs >= config.stall_limit) {
                    throw NoProgress("follow: no forward progress over " +
                                     std::to_string(config.stall_limit) + " replans");
                }
            } else {
                stall_runs = 0;
            }
        }

        t_now += config.replan_frames / dbc.fps;
    }
    return result;
}

}  // namespace dlp::momat
