#include "dlp/sched/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "dlp/behavior/behavior.hpp"
#include "dlp/evalkit/metrics.hpp"

namespace dlp::sched {

using nlohmann::json;

World::World(Scene scene, const MotionDatabase& db, WorldConfig config)
    : scene_(std::move(scene)), db_(&db), config_(std::move(config)) {
    scene_.validate();
}

CharacterState& World::add_character(const std::string& id, const std::string& spot_name) {
    const Spot* spot = scene_.find_spot(spot_name);
    if (!spot) throw Error("world: unknown spot " + spot_name);
    CharacterState state;
    state.id = id;
    state.location = spot->name;
    state.basic_state = spot->basic_state;
    Pose pose = Pose::identity();
    pose.root_position = {spot->position.x, spot->basic_state == BasicState::seated ? 0.55 : 0.95,
                          spot->position.z};
    const double yaw = std::atan2(spot->facing.x, spot->facing.z);
    pose.joint_rotations[0] = mat_to_rot6(Mat3::rotation_y(yaw));
    state.pose = pose;
    characters_.push_back(std::move(state));
    return characters_.back();
}

CharacterState& World::character(const std::string& id) {
    for (auto& c : characters_) {
        if (c.id == id) return c;
    }
    throw Error("world: unknown character " + id);
}

const CharacterState& World::character(const std::string& id) const {
    for (const auto& c : characters_) {
        if (c.id == id) return c;
    }
    throw Error("world: unknown character " + id);
}

const MotionClip& World::find_annotated_clip(const std::string& annotation) const {
    for (const auto& clip : db_->clips()) {
        if (clip.annotation == annotation) return clip;
    }
    throw NoIdleClip("no clip annotated '" + annotation + "' in the database");
}

std::vector<Pose> World::idle_frames(const CharacterState& who, std::size_t count) const {
    const MotionClip& idle = find_annotated_clip(
        who.basic_state == BasicState::seated ? "seated idle" : "standing idle");
    const GroundTransform t = align_frames(frame_of(idle.frames[0]), frame_of(who.pose));
    std::vector<Pose> out;
    out.reserve(count);
    const std::size_t n = idle.frames.size();
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(transform_pose(idle.frames[1 + (i % (n - 1))], t));
    }
    return out;
}

std::vector<Pose> World::transition_frames(bool stand_up, const Pose& at) const {
    const MotionClip& clip = find_annotated_clip(stand_up ? "stand up" : "sit down");
    const GroundTransform t = align_frames(frame_of(clip.frames[0]), frame_of(at));
    std::vector<Pose> out;
    out.reserve(clip.frames.size());
    for (const auto& f : clip.frames) out.push_back(transform_pose(f, t));
    return out;
}

void World::append_crossfaded(std::vector<Pose>& stream, const std::vector<Pose>& tail) const {
    if (tail.empty()) return;
    if (stream.empty()) {
        stream = tail;
        return;
    }
    const Pose hold = stream.back();
    for (std::size_t i = 1; i < tail.size(); ++i) {
        const double alpha = config_.blend_frames > 0
                                 ? smoothstep(static_cast<double>(i) / config_.blend_frames)
                                 : 1.0;
        stream.push_back(interpolate_pose(hold, tail[i], alpha));
    }
}

std::optional<InteractionStep> World::step_behave(AgentMind& active, AgentMind& passive,
                                                  const std::string& background,
                                                  const std::vector<Topic>& topics,
                                                  const BehaviorContext& context, int round,
                                                  Rng& rng) {
    const BehaviorOrEnd out = active.generate_behavior(passive.name(), background, topics, context);
    if (out.is_end()) return std::nullopt;
    const Behavior& behavior = *out.behavior;

    CharacterState& a = character(active.name());
    CharacterState& b = character(passive.name());

    InteractionStep step;
    step.round = round;
    step.active_id = a.id;
    step.passive_id = b.id;
    step.active_behavior = serialize_behavior(behavior);

    momat::CharacterSnapshot snap_a{a.pose, b.pose.root_position};
    momat::CharacterSnapshot snap_b{b.pose, a.pose.root_position};
    step.match = momat::match_interactive_pair(*db_, behavior.get_or("motion", "idle"), snap_a,
                                               snap_b, config_.interactive_match, rng);

    if (config_.enable_mogen) {
        const MotionClip& clip_a = db_->clip(step.match.active.window.clip_index);
        const MotionClip& clip_b = db_->clip(step.match.passive.window.clip_index);
        const int k = db_->config().k;
        mogen::MotionPairTensor prior = mogen::MotionPairTensor::zeros(k, kJointCount);
        for (int f = 0; f < k; ++f) {
            const int ia = std::min(step.match.active.window.start + f,
                                    static_cast<int>(clip_a.frames.size()) - 1);
            const int ib = std::min(step.match.passive.window.start + f,
                                    static_cast<int>(clip_b.frames.size()) - 1);
            const auto pa = forward_kinematics(*clip_a.skeleton, clip_a.frames[ia]);
            const auto pb = forward_kinematics(*clip_b.skeleton, clip_b.frames[ib]);
            for (int j = 0; j < kJointCount; ++j) {
                const std::size_t o = (static_cast<std::size_t>(f) * kJointCount + j) * 3;
                prior.x[o] = pa[j].x;
                prior.x[o + 1] = pa[j].y;
                prior.x[o + 2] = pa[j].z;
                prior.y[o] = pb[j].x;
                prior.y[o + 1] = pb[j].y;
                prior.y[o + 2] = pb[j].z;
            }
        }
        const auto constraint = mogen::ContactConstraint::from_reference_pair(prior);
        const auto schedule = mogen::linear_beta_schedule(1000);
        const auto refined = mogen::sample_with_guidance(
            schedule, mogen::prior_pull_denoiser(), prior, constraint, rng,
            {behavior.get_or("motion", ""), true});
        step.refined_contact_loss = mogen::contact_loss(refined, constraint);
    }

    Behavior passive_behavior;
    passive_behavior.entries = {
        {"speech", ""},
        {"motion", db_->clip(step.match.passive.window.clip_index).annotation},
        {"place", behavior.get_or("place", a.location)}};
    step.passive_behavior = serialize_behavior(passive_behavior);

    step.start_positions[a.id] = a.pose.root_position;
    step.start_positions[b.id] = b.pose.root_position;
    step.target_place[a.id] = behavior.get_or("place", a.location);
    step.target_place[b.id] = step.target_place[a.id];
    return step;
}

void World::step_move(InteractionStep& step, Rng& rng) {
    CharacterState& a = character(step.active_id);
    CharacterState& b = character(step.passive_id);

    // active character's target frame comes from the <place> spot
    const Spot* spot = scene_.find_spot(step.target_place[a.id]);
    CharacterFrame a_target = frame_of(a.pose);
    BasicState a_state = a.basic_state;
    if (spot) {
        a_target.origin = {spot->position.x, 0.0, spot->position.z};
        Vec3 fwd = spot->facing;
        fwd.y = 0.0;
        a_target.forward = norm(fwd) > 1e-9 ? normalized(fwd) : Vec3{0, 0, 1};
        a_state = spot->basic_state;
    }
    // passive placement derives from the matched pair's relative transform
    CharacterFrame b_target;
    b_target.origin = a_target.to_world(step.match.passive_offset_local);
    b_target.origin.y = 0.0;
    Vec3 b_fwd = a_target.dir_to_world(step.match.passive_facing_local);
    b_fwd.y = 0.0;
    b_target.forward = norm(b_fwd) > 1e-9 ? normalized(b_fwd) : Vec3{0, 0, 1};
    const BasicState b_state = BasicState::standing;

    step.target_state[a.id] = a_state;
    step.target_state[b.id] = b_state;

    const cbs::GridMap grid = cbs::GridMap::from_scene_grid(scene_.grid);
    auto cell_for = [&](const Vec3& pos, std::optional<cbs::Cell> avoid) {
        auto cell = scene_.grid.nearest_free_cell(pos);
        if (avoid && cell == *avoid) {
            // nudge to the best free neighbor not taken by the other agent
            cbs::Cell best{-1, -1};
            double best_d = 1e300;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (std::abs(dx) + std::abs(dy) != 1) continue;
                    const cbs::Cell c{cell.first + dx, cell.second + dy};
                    if (!grid.free_cell(c) || c == *avoid) continue;
                    const Vec3 center = scene_.grid.cell_center(c.first, c.second);
                    const double d = std::hypot(center.x - pos.x, center.z - pos.z);
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
            }
            if (best.first < 0) throw cbs::NoPath("no free cell near target");
            return best;
        }
        return cell;
    };

    const cbs::Cell a_start = cell_for(a.pose.root_position, std::nullopt);
    const cbs::Cell b_start = cell_for(b.pose.root_position, a_start);
    const cbs::Cell a_goal = cell_for(a_target.origin, std::nullopt);
    const cbs::Cell b_goal = cell_for(b_target.origin, a_goal);

    const auto plans =
        cbs::plan_cbs(grid, {a_start, b_start}, {a_goal, b_goal}, config_.cbs_config);

    struct MoveSpec {
        CharacterState* who;
        const cbs::AgentPath* path;
        CharacterFrame target;
        BasicState target_state;
    };
    const MoveSpec moves[2] = {{&a, &plans[0], a_target, a_state},
                               {&b, &plans[1], b_target, b_state}};

    for (const auto& mv : moves) {
        CharacterState& who = *mv.who;
        std::vector<Pose>& stream = step.movement[who.id];
        std::vector<MotionSegment>& segs = step.segments[who.id];
        stream = {who.pose};
        Pose cursor = who.pose;

        const bool walks = mv.path->cost() > 0;
        if (who.basic_state == BasicState::seated &&
            (walks || mv.target_state == BasicState::standing)) {
            const auto up = transition_frames(true, cursor);
            segs.push_back({"transition", "stand_up", 0, static_cast<int>(up.size() - 1)});
            append_crossfaded(stream, up);
            cursor = stream.back();
        }
        if (walks) {
            Trajectory traj =
                cbs::path_to_trajectory(*mv.path, scene_.grid.cell_size, config_.walk_speed);
            // anchor the ends on the true positions rather than cell centers
            traj.samples.front().x = cursor.root_position.x;
            traj.samples.front().z = cursor.root_position.z;
            traj.samples.back().x = mv.target.origin.x;
            traj.samples.back().z = mv.target.origin.z;
            TrajectorySample settle = traj.samples.back();
            settle.time += 0.6;
            settle.facing = mv.target.forward;
            traj.samples.push_back(settle);

            momat::FollowConfig fc = config_.follow;
            const auto walked = momat::follow_trajectory(*db_, cursor, traj, fc, rng);
            segs.push_back({"movement", "", 0, static_cast<int>(walked.motion.frames.size() - 1)});
            append_crossfaded(stream, walked.motion.frames);
            cursor = stream.back();
        }
        if (mv.target_state == BasicState::seated && who.basic_state != BasicState::seated) {
            const auto down = transition_frames(false, cursor);
            segs.push_back({"transition", "sit_down", 0, static_cast<int>(down.size() - 1)});
            append_crossfaded(stream, down);
            cursor = stream.back();
        } else if (!walks && who.basic_state == BasicState::seated &&
                   mv.target_state == BasicState::seated) {
            // stays seated in place
        }
        who.pose = stream.back();
        who.basic_state = mv.target_state;
        who.location = step.target_place[who.id];
    }
}

void World::step_align(InteractionStep& step) {
    CharacterState& a = character(step.active_id);
    CharacterState& b = character(step.passive_id);
    std::vector<Pose>& ma = step.movement[a.id];
    std::vector<Pose>& mb = step.movement[b.id];
    if (ma.size() == mb.size()) return;

    CharacterState& shorter = ma.size() < mb.size() ? a : b;
    std::vector<Pose>& stream = ma.size() < mb.size() ? ma : mb;
    const std::size_t need = std::max(ma.size(), mb.size()) - stream.size();
    const auto filler = idle_frames(shorter, need);
    step.segments[shorter.id].push_back({"filler", "", 0, static_cast<int>(need)});
    for (const auto& f : filler) stream.push_back(f);
    shorter.pose = stream.back();

    if (ma.size() != mb.size()) throw Error("align: frame counts still differ");
}

void World::step_synthesize(InteractionStep& step, AgentMind& passive_brain,
                            const BehaviorContext& context,
                            std::map<std::string, std::vector<Pose>>& out_motions) {
    CharacterState& a = character(step.active_id);
    CharacterState& b = character(step.passive_id);

    step.approval = passive_brain.approve_passive(step.passive_behavior, context);

    const MotionClip& clip_a = db_->clip(step.match.active.window.clip_index);
    const MotionClip& clip_b = db_->clip(step.match.passive.window.clip_index);
    const int anchor_a =
        std::min(step.match.active.window.start, static_cast<int>(clip_a.frames.size()) - 1);
    const int anchor_b =
        std::min(step.match.passive.window.start, static_cast<int>(clip_b.frames.size()) - 1);
    const int len = std::min(static_cast<int>(clip_a.frames.size()) - anchor_a,
                             static_cast<int>(clip_b.frames.size()) - anchor_b);

    // both windows drop into the world through the active character's
    // actual post-movement frame, preserving the recorded pair geometry
    const GroundTransform to_world =
        align_frames(frame_of(clip_a.frames[anchor_a]), frame_of(a.pose));

    std::vector<Pose> inter_a, inter_b;
    inter_a.reserve(len);
    inter_b.reserve(len);
    for (int f = 0; f < len; ++f) {
        inter_a.push_back(transform_pose(clip_a.frames[anchor_a + f], to_world));
    }
    if (step.approval) {
        for (int f = 0; f < len; ++f) {
            inter_b.push_back(transform_pose(clip_b.frames[anchor_b + f], to_world));
        }
        step.segments[b.id].push_back({"interaction", clip_b.id, anchor_b, len - 1});
    } else {
        inter_b = idle_frames(b, static_cast<std::size_t>(len));
        step.segments[b.id].push_back({"idle-substitute", "", 0, len - 1});
    }
    step.segments[a.id].push_back({"interaction", clip_a.id, anchor_a, len - 1});

    step.interaction[a.id] = inter_a;
    step.interaction[b.id] = inter_b;

    for (CharacterState* who : {&a, &b}) {
        std::vector<Pose> stream = step.movement[who->id];
        append_crossfaded(stream, step.interaction[who->id]);
        out_motions[who->id] = std::move(stream);
        who->pose = out_motions[who->id].back();
    }
}

EpisodeTranscript World::run_episode(AgentMind& agent_a, AgentMind& agent_b,
                                     const BackgroundCandidate& background,
                                     const std::vector<Topic>& topics, Rng& rng,
                                     const std::vector<std::string>& manual_events,
                                     const std::vector<std::string>& past_backgrounds) {
    EpisodeTranscript transcript;
    transcript.background = background.background;

    agent_a.current_episode = episode_clock;
    agent_b.current_episode = episode_clock;

    // initial settings: emotion / place / (recorded) motion per character
    auto agent_by_name = [&](const std::string& n) -> AgentMind* {
        if (n == agent_a.name()) return &agent_a;
        if (n == agent_b.name()) return &agent_b;
        return nullptr;
    };
    for (const auto& [name, setting] : background.initial_settings) {
        AgentMind* agent = agent_by_name(name);
        if (!agent) continue;
        if (!setting.emotion.empty()) agent->psych().emotion.text = setting.emotion;
        if (!setting.place.empty() && scene_.find_spot(setting.place)) {
            bool exists = std::any_of(characters_.begin(), characters_.end(),
                                      [&](const CharacterState& c) { return c.id == name; });
            if (!exists) {
                add_character(name, setting.place);
            } else {
                const Spot* spot = scene_.find_spot(setting.place);
                CharacterState& c = character(name);
                Pose pose = Pose::identity();
                pose.root_position = {spot->position.x,
                                      spot->basic_state == BasicState::seated ? 0.55 : 0.95,
                                      spot->position.z};
                const double yaw = std::atan2(spot->facing.x, spot->facing.z);
                pose.joint_rotations[0] = mat_to_rot6(Mat3::rotation_y(yaw));
                c.pose = pose;
                c.location = spot->name;
                c.basic_state = spot->basic_state;
            }
        }
    }
    // the character named first opens as the active one
    AgentMind* first = &agent_a;
    AgentMind* second = &agent_b;
    if (!background.initial_settings.empty()) {
        AgentMind* named = agent_by_name(background.initial_settings.front().first);
        if (named == &agent_b) {
            first = &agent_b;
            second = &agent_a;
        }
    }
    // both characters must exist in the world by now
    character(agent_a.name());
    character(agent_b.name());

    std::map<std::string, std::vector<Pose>> episode_motion;
    episode_motion[agent_a.name()] = {character(agent_a.name()).pose};
    episode_motion[agent_b.name()] = {character(agent_b.name()).pose};

    BehaviorContext context;
    for (int round = 0; round < config_.max_rounds; ++round) {
        AgentMind& active = (round % 2 == 0) ? *first : *second;
        AgentMind& passive = (round % 2 == 0) ? *second : *first;
        character(active.name()).role = Role::active;
        character(passive.name()).role = Role::passive;

        auto step = step_behave(active, passive, background.background, topics, context, round,
                                rng);
        if (!step) {
            transcript.ended_by_end_token = true;
            break;
        }
        step_move(*step, rng);
        step_align(*step);
        std::map<std::string, std::vector<Pose>> round_motion;
        step_synthesize(*step, passive, context, round_motion);

        for (auto& [id, frames] : round_motion) {
            append_crossfaded(episode_motion[id], frames);
            character(id).pose = episode_motion[id].back();
        }

        context.push_back({active.name(), step->active_behavior});
        context.push_back({passive.name(), step->passive_behavior});
        transcript.role_markers.push_back(active.name());
        transcript.steps.push_back(std::move(*step));

        if (config_.introspection_period > 0 &&
            (round + 1) % config_.introspection_period == 0) {
            agent_a.introspect_emotion(context);
            agent_b.introspect_emotion(context);
        }
    }

    for (const auto& [id, frames] : episode_motion) {
        MotionClip clip;
        clip.id = "episode_" + std::to_string(episode_clock) + "_" + id;
        clip.skeleton = db_->clips().front().skeleton;
        clip.fps = db_->config().fps;
        clip.category = ClipCategory::script;
        clip.frames = frames;
        transcript.final_motions[id] = std::move(clip);
    }

    if (!transcript.steps.empty()) {
        std::vector<std::string> current_events_a, current_events_b;
        for (AgentMind* agent : {&agent_a, &agent_b}) {
            const std::string partner =
                agent == &agent_a ? agent_b.name() : agent_a.name();
            const ReflectionResult r = agent->reflect_episode(partner, context);
            json summary;
            summary["events"] = json::array();
            for (const auto& e : r.new_events) summary["events"].push_back(e.description);
            summary["thoughts"] = json::array();
            for (const auto& t : r.new_thoughts) summary["thoughts"].push_back(t.description);
            const Relationship& rel = agent->psych().relationships[partner];
            summary["relationship"] = {{"trust", rel.trust},
                                       {"intimacy", rel.intimacy},
                                       {"supportiveness", rel.supportiveness},
                                       {"attitude", rel.attitude}};
            transcript.reflection_summary[agent->name()] = summary.dump();
            auto& sink = agent == &agent_a ? current_events_a : current_events_b;
            for (const auto& e : r.new_events) sink.push_back(e.description);
        }

        std::vector<std::string> history = past_backgrounds;
        history.push_back(background.background);
        const auto topics_a = agent_a.propose_topics(manual_events, history, current_events_a);
        const auto topics_b = agent_b.propose_topics(manual_events, history, current_events_b);
        const auto cands_a = agent_a.propose_backgrounds(topics_a, history, agent_b.name());
        const auto cands_b = agent_b.propose_backgrounds(topics_b, history, agent_a.name());
        if (!cands_a.empty() || !cands_b.empty()) {
            transcript.next_background =
                select_background(cands_a, cands_b, agent_a.config().lambda_topic).candidate;
        }
    }

    episode_clock += 1;
    return transcript;
}

const char* transcript_schema_json() {
    return R"({
  "type": "object",
  "required": ["version", "background", "ended_by_end_token", "role_markers", "steps", "motions", "reflection"],
  "properties": {
    "version": {"type": "string"},
    "background": {"type": "string"},
    "ended_by_end_token": {"type": "boolean"},
    "role_markers": {"type": "array", "items": {"type": "string"}},
    "steps": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["round", "active", "passive", "active_behavior", "passive_behavior", "approval", "match", "segments", "start_positions", "target_place"],
        "properties": {
          "round": {"type": "integer", "minimum": 0},
          "active": {"type": "string"},
          "passive": {"type": "string"},
          "active_behavior": {"type": "string"},
          "passive_behavior": {"type": "string"},
          "approval": {"type": "boolean"},
          "refined_contact_loss": {"type": "number"},
          "match": {
            "type": "object",
            "required": ["active_clip", "active_start", "passive_clip", "passive_start"],
            "properties": {
              "active_clip": {"type": "string"},
              "active_start": {"type": "integer"},
              "passive_clip": {"type": "string"},
              "passive_start": {"type": "integer"}
            }
          },
          "segments": {"type": "object"},
          "start_positions": {"type": "object"},
          "target_place": {"type": "object"}
        }
      }
    },
    "motions": {"type": "object"},
    "reflection": {"type": "object"},
    "next_background": {
      "type": "object",
      "required": ["background", "poignancy", "emergency"],
      "properties": {
        "background": {"type": "string"},
        "poignancy": {"type": "integer", "minimum": 1, "maximum": 9},
        "emergency": {"type": "integer", "minimum": 1, "maximum": 9}
      }
    }
  }
})";
}

std::string transcript_to_json_text(const EpisodeTranscript& t) {
    json j;
    j["version"] = "dlp-transcript-1";
    j["background"] = t.background;
    j["ended_by_end_token"] = t.ended_by_end_token;
    j["role_markers"] = t.role_markers;
    auto steps = json::array();
    for (const auto& s : t.steps) {
        json js;
        js["round"] = s.round;
        js["active"] = s.active_id;
        js["passive"] = s.passive_id;
        js["active_behavior"] = s.active_behavior;
        js["passive_behavior"] = s.passive_behavior;
        js["approval"] = s.approval;
        js["match"] = {
            {"active_clip", s.match.active.clip_id},
            {"active_start", s.match.active.window.start},
            {"passive_clip", s.match.passive.clip_id},
            {"passive_start", s.match.passive.window.start},
        };
        if (s.refined_contact_loss) js["refined_contact_loss"] = *s.refined_contact_loss;
        json segs = json::object();
        for (const auto& [id, list] : s.segments) {
            auto arr = json::array();
            for (const auto& seg : list) {
                arr.push_back({{"label", seg.label},
                               {"clip", seg.clip_id},
                               {"start_frame", seg.start_frame},
                               {"frame_count", seg.frame_count}});
            }
            segs[id] = arr;
        }
        js["segments"] = segs;
        json starts = json::object();
        for (const auto& [id, p] : s.start_positions) starts[id] = {p.x, p.y, p.z};
        js["start_positions"] = starts;
        json places = json::object();
        for (const auto& [id, p] : s.target_place) places[id] = p;
        js["target_place"] = places;
        steps.push_back(std::move(js));
    }
    j["steps"] = steps;
    json motions = json::object();
    for (const auto& [id, clip] : t.final_motions) {
        motions[id] = {{"frames", clip.frames.size()}, {"fps", clip.fps}};
    }
    j["motions"] = motions;
    json refl = json::object();
    for (const auto& [id, text] : t.reflection_summary) refl[id] = json::parse(text);
    j["reflection"] = refl;
    if (t.next_background) {
        j["next_background"] = {{"background", t.next_background->background},
                                {"poignancy", t.next_background->poignancy},
                                {"emergency", t.next_background->emergency}};
    }
    return j.dump(2);
}

}  // namespace dlp::sched
