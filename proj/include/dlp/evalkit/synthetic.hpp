#pragma once

#include <memory>
#include <string>

#include "dlp/core/rng.hpp"
#include "dlp/db/motion_database.hpp"

namespace dlp::evalkit {

// Shared 21-joint humanoid used by the procedural corpus. Left-side
// joints sit at negative x when facing +z.
SkeletonRef standard_skeleton();

Pose standing_pose(double heading = 0.0, const Vec3& ground_position = {});
Pose seated_pose(double heading = 0.0, const Vec3& ground_position = {});

// Procedural walk cycle: constant speed and turn rate, sinusoidal limb
// swing, heading-aligned root. Degenerates to a sway idle at speed 0.
MotionClip make_walk_clip(const std::string& id, double speed, double turn_rate,
                          double duration = 4.0, double fps = 30.0, double phase = 0.0,
                          double heading0 = 0.0);

MotionClip make_idle_clip(const std::string& id, bool seated, double duration = 4.0,
                          double fps = 30.0);

// stand-up (seated -> standing) or sit-down transition.
MotionClip make_transition_clip(const std::string& id, bool stand_up, double duration = 1.5,
                                double fps = 30.0);

struct PairClips {
    MotionClip active;
    MotionClip passive;
};

// Two-character interaction: the active character stands at the origin
// facing +z; the passive partner stands `distance` away at `bearing`
// radians (0 = dead ahead, positive = to the active character's right),
// facing back. Both raise their inner arms toward each other.
PairClips make_interaction_pair(const std::string& id_prefix, const std::string& annotation,
                                double bearing = 0.0, double distance = 0.9,
                                double arm_raise = 1.0, double duration = 2.0,
                                double fps = 30.0);

// ~200 locomotion clips (speed x turn-rate grid plus jittered variants,
// ramps, turn-in-place, idles and stand/sit transitions), ingested and
// finalized. Deterministic in `seed`.
MotionDatabase build_locomotion_db(std::uint64_t seed, DbConfig config = {},
                                   std::shared_ptr<const EmbedderPort> embedder =
                                       std::make_shared<HashedEmbedder>());

// Locomotion corpus plus interactive pairs (handshake, high five, fist
// bump, hug, bow) for two-character scheduling.
MotionDatabase build_full_db(std::uint64_t seed, DbConfig config = {},
                             std::shared_ptr<const EmbedderPort> embedder =
                                 std::make_shared<HashedEmbedder>());

// A random window anchor pose (seed pose for trajectory protocols).
Pose random_seed_pose(const MotionDatabase& db, Rng& rng);

}  // namespace dlp::evalkit
