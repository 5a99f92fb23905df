#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlp/core/scene.hpp"
#include "dlp/mind/agent.hpp"
#include "dlp/mogen/diffusion.hpp"
#include "dlp/momat/follow.hpp"
#include "dlp/pathfind/cbs.hpp"

namespace dlp::sched {

struct NoIdleClip : Error {
    using Error::Error;
};

enum class Role { active, passive };

struct CharacterState {
    std::string id;
    Role role = Role::passive;
    Pose pose;
    std::string location;  // spot name (or last targeted place)
    BasicState basic_state = BasicState::standing;
};

struct MotionSegment {
    std::string label;    // movement / filler / transition / interaction / idle-substitute
    std::string clip_id;  // "" for follow-stitched movement
    int start_frame = 0;
    int frame_count = 0;
};

struct InteractionStep {
    int round = 0;
    std::string active_id;
    std::string passive_id;
    std::string active_behavior;   // serialized DSL
    std::string passive_behavior;  // serialized DSL
    bool approval = false;
    momat::InteractiveMatch match;
    std::optional<double> refined_contact_loss;  // present when mogen refinement ran
    // staged frames per character
    std::map<std::string, std::vector<Pose>> movement;
    std::map<std::string, std::vector<Pose>> interaction;
    std::map<std::string, std::vector<MotionSegment>> segments;
    std::map<std::string, Vec3> start_positions;
    std::map<std::string, std::string> target_place;
    std::map<std::string, BasicState> target_state;
};

struct EpisodeTranscript {
    std::string background;
    std::vector<InteractionStep> steps;
    std::vector<std::string> role_markers;  // active character per round
    std::map<std::string, MotionClip> final_motions;
    std::map<std::string, std::string> reflection_summary;  // per agent, JSON text
    std::optional<BackgroundCandidate> next_background;
    bool ended_by_end_token = false;
};

std::string transcript_to_json_text(const EpisodeTranscript& t);

// Schema for the transcript JSON; the checked-in copy under schemas/
// must stay in sync (a test enforces it).
const char* transcript_schema_json();

struct WorldConfig {
    int max_rounds = 12;
    int introspection_period = 2;  // rounds between emotion introspections
    int blend_frames = 5;
    double walk_speed = 1.2;
    bool enable_mogen = false;
    momat::MatchConfig interactive_match;
    momat::FollowConfig follow;
    cbs::CbsConfig cbs_config;

    WorldConfig() { interactive_match.weights = momat::MatchWeights::interactive(); }
};

class World {
public:
    World(Scene scene, const MotionDatabase& db, WorldConfig config = {});

    CharacterState& add_character(const std::string& id, const std::string& spot_name);
    CharacterState& character(const std::string& id);
    const CharacterState& character(const std::string& id) const;

    const Scene& scene() const { return scene_; }
    const MotionDatabase& db() const { return *db_; }
    const WorldConfig& config() const { return config_; }

    int episode_clock = 0;

    // Stage 1: active behavior from the brain, interactive pair match,
    // passive behavior from the passive window's annotation. Returns
    // nullopt when the active brain ends the episode.
    std::optional<InteractionStep> step_behave(AgentMind& active, AgentMind& passive,
                                               const std::string& background,
                                               const std::vector<Topic>& topics,
                                               const BehaviorContext& context, int round,
                                               Rng& rng);

    // Stage 2: CBS paths -> walking motions, with stand-up/sit-down
    // transitions around the walk when the basic state changes.
    void step_move(InteractionStep& step, Rng& rng);

    // Stage 3: idle filler onto the shorter movement until frame counts
    // match exactly.
    void step_align(InteractionStep& step);

    // Stage 4: approval, then movement ++ blend ++ interaction (idle of
    // equal length replaces a disapproved passive interaction).
    void step_synthesize(InteractionStep& step, AgentMind& passive_brain,
                         const BehaviorContext& context,
                         std::map<std::string, std::vector<Pose>>& out_motions);

    EpisodeTranscript run_episode(AgentMind& agent_a, AgentMind& agent_b,
                                  const BackgroundCandidate& background,
                                  const std::vector<Topic>& topics, Rng& rng,
                                  const std::vector<std::string>& manual_events = {},
                                  const std::vector<std::string>& past_backgrounds = {});

private:
    Scene scene_;
    const MotionDatabase* db_;
    WorldConfig config_;
    std::vector<CharacterState> characters_;

    const MotionClip& find_annotated_clip(const std::string& annotation) const;
    std::vector<Pose> idle_frames(const CharacterState& who, std::size_t count) const;
    std::vector<Pose> transition_frames(bool stand_up, const Pose& at) const;
    void append_crossfaded(std::vector<Pose>& stream, const std::vector<Pose>& tail) const;
};

}  // namespace dlp::sched
