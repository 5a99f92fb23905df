#include "dlp/mind/prompts.hpp"

namespace dlp::prompts {

std::string render_context(const std::string& self_name, const BehaviorContext& context) {
    std::string out;
    for (const auto& turn : context) {
        const char* role = turn.speaker == self_name ? "assistant" : "user";
        out += std::string("{\"role\": \"") + role + "\", \"content\": \"" + turn.text + "\"}\n";
    }
    return out;
}

std::string behavior_generation(const std::string& self_name, const std::string& partner_name,
                                const std::string& psych_text, const std::string& background,
                                const std::string& topics_text, const BehaviorContext& context,
                                const std::string& memories_text,
                                const std::string& persona_text) {
    std::string p;
    p += "{\"role\": \"system\", \"content\": \"Let's do a role play. Assume you are a person "
         "named " +
         self_name + ". I'm a person with name " + partner_name + ".\n";
    p += "In this episode, you have such psychological states: \n" + psych_text + "\n";
    p += "The episode background is: \n" + background + "\n";
    p += "The topics you want to start are: \n" + topics_text + "\n";
    p += "Now start our conversation.\"}\n";
    p += render_context(self_name, context);
    p += "{\"role\": \"user\", \"content\": \"You have such relevant memories: \n" +
         memories_text + "\n";
    p += "Psychological research has found such principles: \n" + persona_text + "\n";
    p += "Now you have two options: end the conversation by output 'END' or respond based on "
         "the information above. So your reaction is:\"}";
    return p;
}

std::string approval(const std::string& name, const std::string& psych_text,
                     const std::string& suggested_behavior, const BehaviorContext& context) {
    std::string p;
    p += "Assume you are a person named " + name + ".\n";
    p += "You have such psychological states: \n" + psych_text + "\n";
    p += "The recent conversation context is: \n" + render_context(name, context) + "\n";
    p += "Your partner suggests that you respond with this behavior: \n" + suggested_behavior +
         "\n";
    p += "Would you approve and perform this behavior? Answer yes or no.";
    return p;
}

std::string summarize_events(const std::string& name, const std::string& psych_text,
                             const std::string& persona_text, const BehaviorContext& context) {
    std::string p;
    p += "Assume you are a person named " + name + ".\n";
    p += "You have such psychological states: \n" + psych_text + "\n";
    p += "Psychological research has found such principles: \n" + persona_text + "\n";
    p += "Now you have a conversation and the contexts are as follow: \n" +
         render_context(name, context) + "\n";
    p += "Based on the dialog above, summarize the key events and output the event list as "
         "JSON: [{\"description\": ..., \"keywords\": [...], \"poignancy\": 1-9, "
         "\"emergency\": 1-9}].";
    return p;
}

std::string generate_thoughts(const std::string& name, const std::string& psych_text,
                              const std::string& persona_text, const std::string& events_text,
                              const std::string& memories_text) {
    std::string p;
    p += "Assume you are a person named " + name + ".\n";
    p += "You have such psychological states: \n" + psych_text + "\n";
    p += "Psychological research has found such principles: \n" + persona_text + "\n";
    p += "Recent he/she have come across these events: \n" + events_text + "\n";
    p += "From the memory, he/she has such relevant events and thoughts:\n" + memories_text +
         "\n";
    p += "Based on the information above, generate the new thoughts this person would form and "
         "output the thought list as JSON: [{\"description\": ..., \"keywords\": [...], "
         "\"poignancy\": 1-9}].";
    return p;
}

std::string update_relationship(const std::string& name, const std::string& partner_name,
                                const std::string& psych_text, const std::string& persona_text,
                                const std::string& events_thoughts_text,
                                const std::string& previous_relationship_text) {
    std::string p;
    p += "Assume you are a very professional psychologist. Here is a person named " + name +
         ".\n";
    p += "He/She has such psychological states: \n" + psych_text + "\n";
    p += "Psychological research has found such principles: \n" + persona_text + "\n";
    p += "Recent he/she have come across these events and the following thoughts have arisen: "
         "\n" +
         events_thoughts_text + "\n";
    p += "His/Her previous relationship with " + partner_name + " is: " +
         previous_relationship_text + "\n";
    p += "Output the relationship according to social psychological theory in three "
         "dimensions: trust, intimacy, and supportiveness.";
    return p;
}

std::string update_motivation(const std::string& name, const std::string& psych_text,
                              const std::string& events_thoughts_text) {
    std::string p;
    p += "Assume you are a person named " + name + ".\n";
    p += "You have such psychological states: \n" + psych_text + "\n";
    p += "Recent he/she have come across these events and the following thoughts have arisen: "
         "\n" +
         events_thoughts_text + "\n";
    p += "Based on the information above, output the updated short-term motivation and central "
         "belief as JSON: {\"short_term\": ..., \"central_belief\": ...}.";
    return p;
}

std::string update_emotion(const std::string& name, const std::string& psych_text,
                           const BehaviorContext& context) {
    std::string p;
    p += "Assume you are a very professional psychologist. Here is a person named " + name +
         ".\n";
    p += "He/She has such psychological states: \n" + psych_text + "\n";
    p += "Now he/she has a conversation and the contexts are as follow: \n" +
         render_context(name, context) + "\n";
    p += "Based on the PAD theory of psychology and Likert scale (1-9), output the updated "
         "emotion as JSON: {\"pleasure\": 1-9, \"arousal\": 1-9, \"dominance\": 1-9}.";
    return p;
}

std::string propose_topics(const std::string& name, const std::string& psych_text,
                           const std::string& persona_text, const std::string& backgrounds_text,
                           const std::string& current_events_text,
                           const std::string& memories_text) {
    std::string p;
    p += "Here is a person named " + name + ".\n";
    p += "He/She has such psychological states: \n" + psych_text + "\n";
    p += "Psychological research has found such principles: \n" + persona_text + "\n";
    p += "The person has experienced these stories: \n" + backgrounds_text + "\n";
    p += "Recent he/she have come across these events: \n" + current_events_text + "\n";
    p += "From the memory, he/she has such relevant events and thoughts:\n" + memories_text +
         "\n";
    p += "Based on the information above, generate a list of topics that he/she would like to "
         "start to talk as JSON: [{\"description\": ..., \"poignancy\": 1-9, \"emergency\": "
         "1-9}].";
    return p;
}

std::string propose_backgrounds(const std::string& name, const std::string& psych_text,
                                const std::string& persona_text, const std::string& past_text,
                                const std::string& topic_candidates_text) {
    std::string p;
    p += "Here is a person named " + name + ".\n";
    p += "He/She has such psychological states: \n" + psych_text + "\n";
    p += "Psychological research has found such principles: \n" + persona_text + "\n";
    p += "The person has experienced these stories: \n" + past_text + "\n";
    p += "Below are the topic candidates: \n" + topic_candidates_text + "\n";
    p += "Based on the information above, generate a list of backgrounds for the next episode "
         "as JSON: [{\"background\": ..., \"poignancy\": 1-9, \"emergency\": 1-9, "
         "\"topic_ids\": [...], \"initial_setting\": {name: {\"emotion\": ..., \"place\": ..., "
         "\"motion\": ...}}}].";
    return p;
}

std::string translate_pad(int pleasure, int arousal, int dominance) {
    std::string p;
    p += "Assume you are a very professional psychologist.\n";
    p += "This is a quantitative evaluation of a person: [pleasure: " + std::to_string(pleasure) +
         ", arousal: " + std::to_string(arousal) + ", dominance: " + std::to_string(dominance) +
         "].\n";
    p += "The evaluation based on the PAD theory of psychology and Likert scale (1-9), score on "
         "pleasure, arousal and dominance. Based on the score, describe the emotion of the "
         "person.\n";
    p += "According to Paul Ekman's basic emotion theory, human have basic emotions: wrath, "
         "grossness, fear, joy, loneliness, shock, amusement, contempt, contentment, "
         "embarrassment, excitement, guilt, pride in achievement, relief, satisfaction, "
         "sensory pleasure, and shame.\n";
    p += "So the description should be:";
    return p;
}

}  // namespace dlp::prompts
