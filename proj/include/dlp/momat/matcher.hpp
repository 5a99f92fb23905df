#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlp/core/rng.hpp"
#include "dlp/db/motion_database.hpp"

namespace dlp::momat {

struct TooShort : Error {
    using Error::Error;
};
struct NoInteractiveEntries : Error {
    using Error::Error;
};

struct MatchWeights {
    double body = 1.0;
    double trajectory = 3.0;
    double facing = 1.0;
    double hip = 1.0;
    double partner = 1.0;

    // Interactive matching has no target trajectory, so those terms drop.
    static MatchWeights interactive() { return {1.0, 0.0, 0.0, 1.0, 1.0}; }
};

struct MatchConfig {
    int K1 = 128;
    int K2 = 8;
    MatchWeights weights;
    // Z-score the five distance components over the candidate set before
    // the weighted sum (the alternative combines raw distances).
    bool candidate_set_norm = true;
    // Random pick among candidates within this band of the best score.
    double tie_band_rel = 0.05;
    double tie_band_floor = 1e-6;
};

struct MatchQuery {
    std::optional<std::string> text;
    Pose current_pose;
    std::optional<Trajectory> target_trajectory;
    std::optional<Vec3> partner_position;
    std::optional<ClipCategory> category;  // restrict candidates
    MatchConfig config;
};

struct SimilarityBreakdown {
    double t_raw = 0, f_raw = 0, b_raw = 0, h_raw = 0, p_raw = 0;
    double t_norm = 0, f_norm = 0, b_norm = 0, h_norm = 0, p_norm = 0;
    double total = 0;  // weighted sum; lower is better
};

struct MatchResult {
    int window_index = -1;
    WindowRef window;
    std::string clip_id;
    SimilarityBreakdown sim;
    int paired_window_index = -1;
};

// Top-K1 window indices by annotation cosine against the query text;
// ties by (clip id, start). Without text, all (subset) windows pass
// through in index order. Throws EmptyDatabase.
std::vector<int> semantic_stage(const MotionDatabase& db, const std::optional<std::string>& text,
                                std::size_t K1, const std::vector<int>* subset = nullptr);

// Raw per-group distances (T, B, H, P Euclidean over corpus-z-scored
// dims; F summed per-frame cosine distance), optionally z-scored across
// the candidate set, combined as total = sum w_i * component. Returns
// the top-K2 ascending by total.
std::vector<MatchResult> kinematic_stage(const MotionDatabase& db,
                                         const std::vector<int>& candidates,
                                         const KinematicFeature& query,
                                         const MatchWeights& weights, std::size_t K2,
                                         bool candidate_set_norm = true);

// Uniform choice among results whose total lies within
// max(band_rel * |best|, band_floor) of the best.
const MatchResult& select_candidate(const std::vector<MatchResult>& ranked, Rng& rng,
                                    double band_rel = 0.05, double band_floor = 1e-6);

// Full two-stage match: semantic, kinematic, near-tie selection.
MatchResult match(const MotionDatabase& db, const MatchQuery& query, Rng& rng);

// Window indices allowed for a query (category filter applied).
std::vector<int> candidate_subset(const MotionDatabase& db,
                                  const std::optional<ClipCategory>& category);

// Crossfade: frame i interpolates prev_tail's last `blend_frames` frames
// against next_head's first ones with a smoothstep weight, anchored so
// out.front() == prev frame and out.back() == next frame exactly.
std::vector<Pose> blend_transition(const std::vector<Pose>& prev_tail,
                                   const std::vector<Pose>& next_head, int blend_frames);

struct CharacterSnapshot {
    Pose pose;
    std::optional<Vec3> partner_position;  // partner hip, world
};

struct InteractiveMatch {
    MatchResult active;
    MatchResult passive;
    // Target placement for the passive character, in the active matched
    // window's anchor frame (so it can be dropped wherever the active
    // character ends up standing).
    Vec3 passive_offset_local;
    Vec3 passive_facing_local;
};

// Joint match over interactive pair windows: the total score adds the
// active-side and passive-side component sums. Throws
// NoInteractiveEntries when the db has no pair links.
InteractiveMatch match_interactive_pair(const MotionDatabase& db, const std::string& text,
                                        const CharacterSnapshot& active_state,
                                        const CharacterSnapshot& passive_state,
                                        const MatchConfig& config, Rng& rng);

}  // namespace dlp::momat
