#include "dlp/mind/psych.hpp"

#include <json.hpp>

#include "dlp/core/error.hpp"

namespace dlp {

using nlohmann::json;

int clamp_likert(int v) { return v < 1 ? 1 : (v > 9 ? 9 : v); }

const InitialSetting* BackgroundCandidate::setting_for(const std::string& name) const {
    for (const auto& [who, setting] : initial_settings) {
        if (who == name) return &setting;
    }
    return nullptr;
}

const char* to_string(MemoryKind k) { return k == MemoryKind::event ? "event" : "thought"; }

void PsychState::clamp_all() {
    personality.openness = clamp_likert(personality.openness);
    personality.conscientiousness = clamp_likert(personality.conscientiousness);
    personality.extraversion = clamp_likert(personality.extraversion);
    personality.agreeableness = clamp_likert(personality.agreeableness);
    personality.neuroticism = clamp_likert(personality.neuroticism);
    emotion.pleasure = clamp_likert(emotion.pleasure);
    emotion.arousal = clamp_likert(emotion.arousal);
    emotion.dominance = clamp_likert(emotion.dominance);
    for (auto& [name, rel] : relationships) {
        rel.trust = clamp_likert(rel.trust);
        rel.intimacy = clamp_likert(rel.intimacy);
        rel.supportiveness = clamp_likert(rel.supportiveness);
    }
}

std::string PsychState::render() const {
    std::string out;
    out += "Personality: ";
    if (!personality.text.empty()) out += personality.text + "; ";
    out += "openness: " + std::to_string(personality.openness) +
           ", conscientiousness: " + std::to_string(personality.conscientiousness) +
           ", extraversion: " + std::to_string(personality.extraversion) +
           ", agreeableness: " + std::to_string(personality.agreeableness) +
           ", neuroticism: " + std::to_string(personality.neuroticism) + ";\n";
    out += "Emotion: ";
    if (!emotion.text.empty()) out += emotion.text + "; ";
    out += "pleasure: " + std::to_string(emotion.pleasure) +
           ", arousal: " + std::to_string(emotion.arousal) +
           ", dominance: " + std::to_string(emotion.dominance) + ";\n";
    out += "Motivation: long-term: " + long_term_motivation +
           "; short-term: " + short_term_motivation + ";\n";
    out += "Central belief: " + central_belief + ";\n";
    for (const auto& [name, rel] : relationships) {
        out += "Relationship with " + name + ": trust: " + std::to_string(rel.trust) +
               ", intimacy: " + std::to_string(rel.intimacy) +
               ", supportiveness: " + std::to_string(rel.supportiveness) + ", attitude: " +
               rel.attitude + ", description: " + rel.description + ";\n";
    }
    return out;
}

PsychState psych_state_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("psych state json: ") + e.what());
    }
    PsychState s;
    if (j.contains("personality")) {
        const auto& p = j["personality"];
        s.personality.openness = p.value("openness", 5);
        s.personality.conscientiousness = p.value("conscientiousness", 5);
        s.personality.extraversion = p.value("extraversion", 5);
        s.personality.agreeableness = p.value("agreeableness", 5);
        s.personality.neuroticism = p.value("neuroticism", 5);
        s.personality.text = p.value("text", "");
    }
    if (j.contains("emotion")) {
        const auto& e = j["emotion"];
        s.emotion.pleasure = e.value("pleasure", 5);
        s.emotion.arousal = e.value("arousal", 5);
        s.emotion.dominance = e.value("dominance", 5);
        s.emotion.text = e.value("text", "");
    }
    if (j.contains("motivation")) {
        s.long_term_motivation = j["motivation"].value("long_term", "");
        s.short_term_motivation = j["motivation"].value("short_term", "");
    }
    s.central_belief = j.value("central_belief", "");
    if (j.contains("relationships")) {
        for (const auto& [name, r] : j["relationships"].items()) {
            Relationship rel;
            rel.trust = r.value("trust", 5);
            rel.intimacy = r.value("intimacy", 5);
            rel.supportiveness = r.value("supportiveness", 5);
            rel.attitude = r.value("attitude", "");
            rel.description = r.value("description", "");
            s.relationships[name] = rel;
        }
    }
    s.clamp_all();
    return s;
}

std::string psych_state_to_json_text(const PsychState& s) {
    json j;
    j["personality"] = {{"openness", s.personality.openness},
                        {"conscientiousness", s.personality.conscientiousness},
                        {"extraversion", s.personality.extraversion},
                        {"agreeableness", s.personality.agreeableness},
                        {"neuroticism", s.personality.neuroticism},
                        {"text", s.personality.text}};
    j["emotion"] = {{"pleasure", s.emotion.pleasure},
                    {"arousal", s.emotion.arousal},
                    {"dominance", s.emotion.dominance},
                    {"text", s.emotion.text}};
    j["motivation"] = {{"long_term", s.long_term_motivation},
                       {"short_term", s.short_term_motivation}};
    j["central_belief"] = s.central_belief;
    json rels = json::object();
    for (const auto& [name, rel] : s.relationships) {
        rels[name] = {{"trust", rel.trust},
                      {"intimacy", rel.intimacy},
                      {"supportiveness", rel.supportiveness},
                      {"attitude", rel.attitude},
                      {"description", rel.description}};
    }
    j["relationships"] = rels;
    return j.dump(2);
}

}  // namespace dlp
