#pragma once

#include <string>
#include <vector>

namespace dlp {

// One turn of behavior context as fed back into prompts.
struct ContextTurn {
    std::string speaker;
    std::string text;  // serialized behavior
};

using BehaviorContext = std::vector<ContextTurn>;

namespace prompts {

// Chat-style role-play prompt for generating the next behavior. Slot
// order: psychological states, background, topics, behavior context,
// relevant memories, persona instructions.
std::string behavior_generation(const std::string& self_name, const std::string& partner_name,
                                const std::string& psych_text, const std::string& background,
                                const std::string& topics_text, const BehaviorContext& context,
                                const std::string& memories_text,
                                const std::string& persona_text);

std::string approval(const std::string& name, const std::string& psych_text,
                     const std::string& suggested_behavior, const BehaviorContext& context);

std::string summarize_events(const std::string& name, const std::string& psych_text,
                             const std::string& persona_text, const BehaviorContext& context);

std::string generate_thoughts(const std::string& name, const std::string& psych_text,
                              const std::string& persona_text, const std::string& events_text,
                              const std::string& memories_text);

std::string update_relationship(const std::string& name, const std::string& partner_name,
                                const std::string& psych_text, const std::string& persona_text,
                                const std::string& events_thoughts_text,
                                const std::string& previous_relationship_text);

std::string update_motivation(const std::string& name, const std::string& psych_text,
                              const std::string& events_thoughts_text);

std::string update_emotion(const std::string& name, const std::string& psych_text,
                           const BehaviorContext& context);

std::string propose_topics(const std::string& name, const std::string& psych_text,
                           const std::string& persona_text, const std::string& backgrounds_text,
                           const std::string& current_events_text,
                           const std::string& memories_text);

std::string propose_backgrounds(const std::string& name, const std::string& psych_text,
                                const std::string& persona_text, const std::string& past_text,
                                const std::string& topic_candidates_text);

std::string translate_pad(int pleasure, int arousal, int dominance);

std::string render_context(const std::string& self_name, const BehaviorContext& context);

}  // namespace prompts

}  // namespace dlp
