#include "dlp/momat/matcher.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dlp/kernels.hpp"

namespace dlp::momat {

namespace {

// Candidate-set z-scoring of distance components: one column at a time,
// population std floored to 1 below 1e-8.
void zscore_columns(const std::vector<double>& raw, std::size_t rows, std::size_t cols,
                    std::vector<double>& out) {
    out.resize(raw.size());
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r) sum += raw[r * cols + c];
        const double mean = sum / static_cast<double>(rows);
        double sq = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double d = raw[r * cols + c] - mean;
            sq += d * d;
        }
        double std_ = std::sqrt(sq / static_cast<double>(rows));
        if (std_ < 1e-8) std_ = 1.0;
        for (std::size_t r = 0; r < rows; ++r) out[r * cols + c] = (raw[r * cols + c] - mean) / std_;
    }
}

SimilarityBreakdown make_breakdown(const double* raw5, const double* norm5,
                                   const MatchWeights& w) {
    SimilarityBreakdown s;
    s.t_raw = raw5[0];
    s.f_raw = raw5[1];
    s.b_raw = raw5[2];
    s.h_raw = raw5[3];
    s.p_raw = raw5[4];
    s.t_norm = norm5[0];
    s.f_norm = norm5[1];
    s.b_norm = norm5[2];
    s.h_norm = norm5[3];
    s.p_norm = norm5[4];
    s.total = w.trajectory * s.t_norm + w.facing * s.f_norm + w.body * s.b_norm +
              w.hip * s.h_norm + w.partner * s.p_norm;
    return s;
}

}  // namespace

std::vector<int> candidate_subset(const MotionDatabase& db,
                                  const std::optional<ClipCategory>& category) {
    std::vector<int> subset;
    subset.reserve(db.window_count());
    for (std::size_t w = 0; w < db.window_count(); ++w) {
        if (!category || db.clip(db.window(w).clip_index).category == *category) {
            subset.push_back(static_cast<int>(w));
        }
    }
    return subset;
}

std::vector<int> semantic_stage(const MotionDatabase& db, const std::optional<std::string>& text,
                                std::size_t K1, const std::vector<int>* subset) {
    if (db.window_count() == 0) throw EmptyDatabase("semantic stage: empty database");
    std::vector<int> windows;
    if (subset) {
        windows = *subset;
    } else {
        windows.resize(db.window_count());
        for (std::size_t i = 0; i < windows.size(); ++i) windows[i] = static_cast<int>(i);
    }
    if (windows.empty()) throw EmptyDatabase("semantic stage: no candidate windows");
    if (!text) return windows;

    const TextEmbedding query = db.embedder().embed(*text);
    std::vector<double> clip_score(db.clips().size(), 0.0);
    for (std::size_t c = 0; c < db.clips().size(); ++c) {
        clip_score[c] = cosine(query, db.annotation_embedding(static_cast<int>(c)));
    }
    std::sort(windows.begin(), windows.end(), [&](int a, int b) {
        const WindowRef& wa = db.window(a);
        const WindowRef& wb = db.window(b);
        const double sa = clip_score[wa.clip_index];
        const double sb = clip_score[wb.clip_index];
        if (sa != sb) return sa > sb;
        const std::string& ida = db.clip(wa.clip_index).id;
        const std::string& idb = db.clip(wb.clip_index).id;
        if (ida != idb) return ida < idb;
        return wa.start < wb.start;
    });
    if (windows.size() > K1) windows.resize(K1);
    return windows;
}

std::vector<MatchResult> kinematic_stage(const MotionDatabase& db,
                                         const std::vector<int>& candidates,
                                         const KinematicFeature& query,
                                         const MatchWeights& weights, std::size_t K2,
                                         bool candidate_set_norm) {
    if (candidates.empty()) throw EmptyDatabase("kinematic stage: no candidates");
    if (query.values.size() != db.feature_width()) {
        throw DimMismatch("kinematic stage: query feature width mismatch");
    }
    const NormStats& stats = db.norm_stats();
    const std::size_t n = candidates.size();
    std::vector<double> raw(n * 5);
    kernels::feature_group_distances_indexed(db.window_features(), candidates.data(), n,
                                             db.config().k, query.values.data(),
                                             stats.mean.data(), stats.inv_std.data(), raw.data());
    std::vector<double> norm;
    if (candidate_set_norm) {
        zscore_columns(raw, n, 5, norm);
    } else {
        norm = raw;
    }

    std::vector<MatchResult> results(n);
    for (std::size_t i = 0; i < n; ++i) {
        MatchResult& r = results[i];
        r.window_index = candidates[i];
        r.window = db.window(candidates[i]);
        r.clip_id = db.clip(r.window.clip_index).id;
        r.sim = make_breakdown(raw.data() + i * 5, norm.data() + i * 5, weights);
    }
    std::sort(results.begin(), results.end(), [](const MatchResult& a, const MatchResult& b) {
        if (a.sim.total != b.sim.total) return a.sim.total < b.sim.total;
        if (a.clip_id != b.clip_id) return a.clip_id < b.clip_id;
        return a.window.start < b.window.start;
    });
    if (results.size() > K2) results.resize(K2);
    return results;
}

const MatchResult& select_candidate(const std::vector<MatchResult>& ranked, Rng& rng,
                                    double band_rel, double band_floor) {
    if (ranked.empty()) throw EmptyDatabase("select_candidate: nothing ranked");
    const double best = ranked.front().sim.total;
    const double band = std::max(band_rel * std::fabs(best), band_floor);
    std::size_t eligible = 1;
    while (eligible < ranked.size() && ranked[eligible].sim.total <= best + band) ++eligible;
    return ranked[rng.uniform_index(eligible)];
}

MatchResult match(const MotionDatabase& db, const MatchQuery& query, Rng& rng) {
    const std::vector<int> subset = candidate_subset(db, query.category);
    const std::vector<int> sem =
        semantic_stage(db, query.text, static_cast<std::size_t>(query.config.K1), &subset);
    const Trajectory* traj =
        query.target_trajectory ? &*query.target_trajectory : nullptr;
    const KinematicFeature feat =
        extract_query_feature(*db.clips().front().skeleton, query.current_pose, traj,
                              query.partner_position, db.config().k, db.config().fps);
    const auto ranked = kinematic_stage(db, sem, feat, query.config.weights,
                                        static_cast<std::size_t>(query.config.K2),
                                        query.config.candidate_set_norm);
    return select_candidate(ranked, rng, query.config.tie_band_rel, query.config.tie_band_floor);
}

std::vector<Pose> blend_transition(const std::vector<Pose>& prev_tail,
                                   const std::vector<Pose>& next_head, int blend_frames) {
    if (blend_frames <= 0) throw DomainError("blend_frames must be positive");
    if (prev_tail.size() < static_cast<std::size_t>(blend_frames) ||
        next_head.size() < static_cast<std::size_t>(blend_frames)) {
        throw TooShort("blend_transition: segments shorter than blend window");
    }
    const std::size_t po = prev_tail.size() - static_cast<std::size_t>(blend_frames);
    std::vector<Pose> out(static_cast<std::size_t>(blend_frames));
    for (int i = 0; i < blend_frames; ++i) {
        const double alpha =
            blend_frames == 1 ? 1.0 : smoothstep(static_cast<double>(i) / (blend_frames - 1));
        out[i] = interpolate_pose(prev_tail[po + i], next_head[i], alpha);
    }
    return out;
}

InteractiveMatch match_interactive_pair(const MotionDatabase& db, const std::string& text,
                                        const CharacterSnapshot& active_state,
                                        const CharacterSnapshot& passive_state,
                                        const MatchConfig& config, Rng& rng) {
    struct PairCand {
        int active_widx;
        int passive_widx;
    };
    std::vector<PairCand> pairs;
    for (const auto& [active_ci, passive_ci] : db.pair_links()) {
        for (int w : db.clip_windows(active_ci)) {
            const int pw = db.window_index(passive_ci, db.window(w).start);
            if (pw >= 0) pairs.push_back({w, pw});
        }
    }
    if (pairs.empty()) throw NoInteractiveEntries("database has no interactive pair windows");

    const TextEmbedding query_emb = db.embedder().embed(text);
    std::vector<double> score(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        score[i] =
            cosine(query_emb, db.annotation_embedding(db.window(pairs[i].active_widx).clip_index));
    }
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (score[a] != score[b]) return score[a] > score[b];
        const WindowRef& wa = db.window(pairs[a].active_widx);
        const WindowRef& wb = db.window(pairs[b].active_widx);
        const std::string& ida = db.clip(wa.clip_index).id;
        const std::string& idb = db.clip(wb.clip_index).id;
        if (ida != idb) return ida < idb;
        return wa.start < wb.start;
    });
    if (order.size() > static_cast<std::size_t>(config.K1)) order.resize(config.K1);

    const Skeleton& skeleton = *db.clips().front().skeleton;
    const KinematicFeature qa =
        extract_query_feature(skeleton, active_state.pose, nullptr,
                              active_state.partner_position, db.config().k, db.config().fps);
    const KinematicFeature qp =
        extract_query_feature(skeleton, passive_state.pose, nullptr,
                              passive_state.partner_position, db.config().k, db.config().fps);

    const NormStats& stats = db.norm_stats();
    const std::size_t n = order.size();
    std::vector<int> active_rows(n), passive_rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        active_rows[i] = pairs[order[i]].active_widx;
        passive_rows[i] = pairs[order[i]].passive_widx;
    }
    std::vector<double> raw_a(n * 5), raw_p(n * 5);
    kernels::feature_group_distances_indexed(db.window_features(), active_rows.data(), n,
                                             db.config().k, qa.values.data(), stats.mean.data(),
                                             stats.inv_std.data(), raw_a.data());
    kernels::feature_group_distances_indexed(db.window_features(), passive_rows.data(), n,
                                             db.config().k, qp.values.data(), stats.mean.data(),
                                             stats.inv_std.data(), raw_p.data());
    std::vector<double> norm_a, norm_p;
    if (config.candidate_set_norm) {
        zscore_columns(raw_a, n, 5, norm_a);
        zscore_columns(raw_p, n, 5, norm_p);
    } else {
        norm_a = raw_a;
        norm_p = raw_p;
    }

    struct Scored {
        std::size_t cand;
        MatchResult active;
        MatchResult passive;
        double joint;
    };
    std::vector<Scored> scored(n);
    for (std::size_t i = 0; i < n; ++i) {
        Scored& s = scored[i];
        s.cand = i;
        s.active.window_index = active_rows[i];
        s.active.window = db.window(active_rows[i]);
        s.active.clip_id = db.clip(s.active.window.clip_index).id;
        s.active.sim = make_breakdown(raw_a.data() + i * 5, norm_a.data() + i * 5, config.weights);
        s.active.paired_window_index = passive_rows[i];
        s.passive.window_index = passive_rows[i];
        s.passive.window = db.window(passive_rows[i]);
        s.passive.clip_id = db.clip(s.passive.window.clip_index).id;
        s.passive.sim =
            make_breakdown(raw_p.data() + i * 5, norm_p.data() + i * 5, config.weights);
        s.passive.paired_window_index = active_rows[i];
        s.joint = s.active.sim.total + s.passive.sim.total;
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.joint != b.joint) return a.joint < b.joint;
        if (a.active.clip_id != b.active.clip_id) return a.active.clip_id < b.active.clip_id;
        return a.active.window.start < b.active.window.start;
    });
    if (scored.size() > static_cast<std::size_t>(config.K2)) scored.resize(config.K2);

    const double best = scored.front().joint;
    const double band = std::max(config.tie_band_rel * std::fabs(best), config.tie_band_floor);
    std::size_t eligible = 1;
    while (eligible < scored.size() && scored[eligible].joint <= best + band) ++eligible;
    const Scored& chosen = scored[rng.uniform_index(eligible)];

    const MotionClip& active_clip = db.clip(chosen.active.window.clip_index);
    const MotionClip& passive_clip = db.clip(chosen.passive.window.clip_index);
    const int a_anchor =
        std::min(chosen.active.window.start, static_cast<int>(active_clip.frames.size()) - 1);
    const int p_anchor =
        std::min(chosen.passive.window.start, static_cast<int>(passive_clip.frames.size()) - 1);
    const CharacterFrame frame_a = frame_of(active_clip.frames[a_anchor]);
    const Pose& passive_anchor = passive_clip.frames[p_anchor];

    InteractiveMatch result;
    result.active = chosen.active;
    result.passive = chosen.passive;
    result.passive_offset_local = frame_a.to_local(
        {passive_anchor.root_position.x, 0.0, passive_anchor.root_position.z});
    result.passive_facing_local = frame_a.dir_to_local(pose_facing(passive_anchor));
    return result;
}

}  // namespace dlp::momat
