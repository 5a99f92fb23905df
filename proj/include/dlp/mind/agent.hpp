#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlp/behavior/behavior.hpp"
#include "dlp/mind/memory.hpp"
#include "dlp/mind/persona.hpp"
#include "dlp/mind/prompts.hpp"
#include "dlp/mind/provider.hpp"

namespace dlp {

struct MalformedReflection : Error {
    using Error::Error;
};
struct NoCandidates : Error {
    using Error::Error;
};

struct AgentConfig {
    std::size_t memory_top_m = 5;
    std::size_t persona_top_n = 5;
    double lambda_topic = 2.0;  // weight of emergency in background scoring
    int reformat_retries = 2;
};

struct ReflectionResult {
    std::vector<MemoryItem> new_events;
    std::vector<MemoryItem> new_thoughts;
    PsychState updated_state;
};

// Lenient JSON recovery for provider replies: first JSON array or object
// substring; nullopt when nothing parses.
std::optional<std::string> extract_json_payload(const std::string& text);

class AgentMind {
public:
    AgentMind(std::string name, PsychState state, std::shared_ptr<const PersonaDb> persona,
              std::shared_ptr<const EmbedderPort> embedder,
              std::shared_ptr<ProviderPort> provider, AgentConfig config = {});

    const std::string& name() const { return name_; }
    const PsychState& psych() const { return state_; }
    PsychState& psych() { return state_; }
    MemoryStore& memory() { return memory_; }
    const MemoryStore& memory() const { return memory_; }
    const AgentConfig& config() const { return config_; }
    ProviderPort& provider() { return *provider_; }

    int current_episode = 0;  // advanced by the world clock

    // Prompt assembly is exposed so its slot layout is testable.
    std::string build_behavior_prompt(const std::string& partner_name,
                                      const std::string& background,
                                      const std::vector<Topic>& topics,
                                      const BehaviorContext& context);

    BehaviorOrEnd generate_behavior(const std::string& partner_name,
                                    const std::string& background,
                                    const std::vector<Topic>& topics,
                                    const BehaviorContext& context);

    // Unparseable answers fail closed (false).
    bool approve_passive(const std::string& suggested_behavior, const BehaviorContext& context);

    // Summarize events, derive thoughts, update the relationship with the
    // partner plus motivation/belief. New items land in memory with
    // access_count 0. Throws MalformedReflection when the provider's JSON
    // stays unusable after one reformat retry.
    ReflectionResult reflect_episode(const std::string& partner_name,
                                     const BehaviorContext& transcript);

    // Periodic in-episode emotion introspection (PAD update, clamped).
    void introspect_emotion(const BehaviorContext& context);

    std::vector<Topic> propose_topics(const std::vector<std::string>& manual_events,
                                      const std::vector<std::string>& episode_backgrounds,
                                      const std::vector<std::string>& current_events);

    std::vector<BackgroundCandidate> propose_backgrounds(
        const std::vector<Topic>& topics, const std::vector<std::string>& past_backgrounds,
        const std::string& partner_name);

    std::string translate_numeric_to_text();

    std::vector<std::size_t> retrieve_persona(const std::string& context_text, std::size_t n) const;
    std::string persona_text(const std::string& context_text) const;
    std::string memories_text(const std::string& query_text);

private:
    std::string name_;
    PsychState state_;
    std::shared_ptr<const PersonaDb> persona_;
    std::shared_ptr<const EmbedderPort> embedder_;
    std::shared_ptr<ProviderPort> provider_;
    AgentConfig config_;
    MemoryStore memory_;

    std::string ask_json(const std::string& prompt, bool& ok);
};

struct SelectedBackground {
    BackgroundCandidate candidate;
    int proposer = 0;  // 0 = first argument's agent, 1 = second
    std::size_t index = 0;
};

// argmax of lambda * emergency + poignancy over both candidate lists;
// ties resolved by (proposer, index) ascending. Throws NoCandidates.
SelectedBackground select_background(const std::vector<BackgroundCandidate>& candidates_a,
                                     const std::vector<BackgroundCandidate>& candidates_b,
                                     double lambda_topic);

}  // namespace dlp
