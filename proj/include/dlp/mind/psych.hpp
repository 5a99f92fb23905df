#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlp/embed/embedder.hpp"

namespace dlp {

// All numeric psychology dimensions live on a 1-9 Likert scale.
int clamp_likert(int v);

struct BigFive {
    int openness = 5;
    int conscientiousness = 5;
    int extraversion = 5;
    int agreeableness = 5;
    int neuroticism = 5;
    std::string text;  // optional free-text description
};

struct PadEmotion {
    int pleasure = 5;
    int arousal = 5;
    int dominance = 5;
    std::string text;
};

struct Relationship {
    int trust = 5;
    int intimacy = 5;
    int supportiveness = 5;
    std::string attitude;
    std::string description;
};

struct PsychState {
    BigFive personality;
    PadEmotion emotion;
    std::string long_term_motivation;
    std::string short_term_motivation;
    std::string central_belief;
    std::map<std::string, Relationship> relationships;  // by partner name

    void clamp_all();
    // Text block used in prompt slots.
    std::string render() const;
};

enum class MemoryKind { event, thought };

const char* to_string(MemoryKind k);

struct MemoryItem {
    MemoryKind kind = MemoryKind::event;
    std::string description;
    std::vector<std::string> keywords;
    int poignancy = 5;           // 1..9
    int emergency = 5;           // events only
    int access_count = 0;        // N_m, non-decreasing
    int last_access_episode = 0;
    TextEmbedding embedding;
};

struct Topic {
    std::string description;
    int poignancy = 5;
    int emergency = 5;
};

struct InitialSetting {
    std::string emotion;
    std::string place;
    std::string motion;
};

struct BackgroundCandidate {
    std::string background;
    int poignancy = 5;
    int emergency = 5;
    std::vector<int> topic_ids;
    // (character name, setting) in authored order; the first named
    // character opens the episode as the active one.
    std::vector<std::pair<std::string, InitialSetting>> initial_settings;

    const InitialSetting* setting_for(const std::string& name) const;
};

PsychState psych_state_from_json_text(const std::string& text);
std::string psych_state_to_json_text(const PsychState& state);

}  // namespace dlp
