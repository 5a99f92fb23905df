#include "dlp/mind/agent.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>

#include <json.hpp>

namespace dlp {

using nlohmann::json;

std::optional<std::string> extract_json_payload(const std::string& text) {
    const std::size_t start = text.find_first_of("[{");
    if (start == std::string::npos) return std::nullopt;
    const char open = text[start];
    const char close = open == '[' ? ']' : '}';
    for (std::size_t end = text.rfind(close); end != std::string::npos && end > start;
         end = end == 0 ? std::string::npos : text.rfind(close, end - 1)) {
        const std::string candidate = text.substr(start, end - start + 1);
        if (json::accept(candidate)) return candidate;
        if (end == 0) break;
    }
    return std::nullopt;
}

AgentMind::AgentMind(std::string name, PsychState state,
                     std::shared_ptr<const PersonaDb> persona,
                     std::shared_ptr<const EmbedderPort> embedder,
                     std::shared_ptr<ProviderPort> provider, AgentConfig config)
    : name_(std::move(name)),
      state_(std::move(state)),
      persona_(std::move(persona)),
      embedder_(std::move(embedder)),
      provider_(std::move(provider)),
      config_(config) {
    state_.clamp_all();
}

std::vector<std::size_t> AgentMind::retrieve_persona(const std::string& context_text,
                                                     std::size_t n) const {
    return persona_->retrieve_for(context_text, state_, n, *embedder_);
}

std::string AgentMind::persona_text(const std::string& context_text) const {
    std::string out;
    for (std::size_t i : retrieve_persona(context_text, config_.persona_top_n)) {
        out += persona_->instructions()[i].rendered + "\n";
    }
    return out;
}

std::string AgentMind::memories_text(const std::string& query_text) {
    const auto picked =
        memory_.retrieve(embedder_->embed(query_text), config_.memory_top_m, current_episode);
    std::string out;
    for (std::size_t i : picked) out += memory_.items()[i].description + ";";
    if (!out.empty()) out += "\n";
    return out;
}

namespace {

std::string topics_to_text(const std::vector<Topic>& topics) {
    std::string out;
    for (const auto& t : topics) out += t.description + ";";
    return out;
}

std::string context_to_query(const BehaviorContext& context) {
    std::string out;
    for (const auto& turn : context) out += turn.text + "\n";
    return out;
}

}  // namespace

std::string AgentMind::build_behavior_prompt(const std::string& partner_name,
                                             const std::string& background,
                                             const std::vector<Topic>& topics,
                                             const BehaviorContext& context) {
    const std::string query = background + "\n" + context_to_query(context);
    return prompts::behavior_generation(name_, partner_name, state_.render(), background,
                                        topics_to_text(topics), context, memories_text(query),
                                        persona_text(query));
}

BehaviorOrEnd AgentMind::generate_behavior(const std::string& partner_name,
                                           const std::string& background,
                                           const std::vector<Topic>& topics,
                                           const BehaviorContext& context) {
    const std::string prompt = build_behavior_prompt(partner_name, background, topics, context);
    const std::string raw = provider_->complete(prompt);
    return normalize_with_provider(raw, *provider_, config_.reformat_retries);
}

bool AgentMind::approve_passive(const std::string& suggested_behavior,
                                const BehaviorContext& context) {
    const std::string prompt =
        prompts::approval(name_, state_.render(), suggested_behavior, context);
    const std::string reply = provider_->complete(prompt);
    // first token, case-insensitive; anything but a clear yes fails closed
    std::string token;
    for (char c : reply) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!token.empty()) {
            break;
        }
    }
    return token == "yes";
}

std::string AgentMind::ask_json(const std::string& prompt, bool& ok) {
    ok = true;
    std::string reply = provider_->complete(prompt);
    auto payload = extract_json_payload(reply);
    if (!payload) {
        reply = provider_->complete(prompt +
                                    "\nYour previous reply was not valid JSON. Output only the "
                                    "JSON this time.");
        payload = extract_json_payload(reply);
    }
    if (!payload) {
        ok = false;
        return "";
    }
    return *payload;
}

namespace {

MemoryItem item_from_json(const json& j, MemoryKind kind, int episode,
                          const EmbedderPort& embedder) {
    MemoryItem item;
    item.kind = kind;
    item.description = j.value("description", "");
    for (const auto& k : j.value("keywords", json::array())) {
        item.keywords.push_back(k.get<std::string>());
    }
    item.poignancy = clamp_likert(j.value("poignancy", 5));
    item.emergency = clamp_likert(j.value("emergency", 5));
    item.access_count = 0;
    item.last_access_episode = episode;
    item.embedding = embedder.embed(item.description);
    return item;
}

}  // namespace

ReflectionResult AgentMind::reflect_episode(const std::string& partner_name,
                                            const BehaviorContext& transcript) {
    ReflectionResult result;
    result.updated_state = state_;
    if (transcript.empty()) return result;

    const std::string psych = state_.render();
    const std::string persona = persona_text(context_to_query(transcript));

    bool ok = false;
    const std::string events_json =
        ask_json(prompts::summarize_events(name_, psych, persona, transcript), ok);
    if (!ok) throw MalformedReflection("reflection: event summary is not JSON");
    json events;
    try {
        events = json::parse(events_json);
    } catch (const json::exception&) {
        throw MalformedReflection("reflection: event summary is not JSON");
    }
    if (!events.is_array()) events = json::array({events});
    std::string events_text;
    for (const auto& e : events) {
        MemoryItem item = item_from_json(e, MemoryKind::event, current_episode, *embedder_);
        events_text += item.description + ";";
        result.new_events.push_back(std::move(item));
    }

    const std::string relevant = memories_text(events_text);

    const std::string thoughts_json =
        ask_json(prompts::generate_thoughts(name_, psych, persona, events_text, relevant), ok);
    if (ok && !thoughts_json.empty()) {
        json thoughts = json::parse(thoughts_json);
        if (!thoughts.is_array()) thoughts = json::array({thoughts});
        for (const auto& t : thoughts) {
            result.new_thoughts.push_back(
                item_from_json(t, MemoryKind::thought, current_episode, *embedder_));
        }
    }

    std::string events_thoughts = events_text;
    for (const auto& t : result.new_thoughts) events_thoughts += t.description + ";";

    const Relationship previous = state_.relationships[partner_name];
    const std::string prev_text =
        "trust: " + std::to_string(previous.trust) + ", intimacy: " +
        std::to_string(previous.intimacy) + ", supportiveness: " +
        std::to_string(previous.supportiveness) + ", attitude: " + previous.attitude;
    const std::string rel_json = ask_json(
        prompts::update_relationship(name_, partner_name, psych, persona, events_thoughts,
                                     prev_text),
        ok);
    if (ok && !rel_json.empty()) {
        const json r = json::parse(rel_json);
        Relationship rel = previous;
        rel.trust = clamp_likert(r.value("trust", previous.trust));
        rel.intimacy = clamp_likert(r.value("intimacy", previous.intimacy));
        rel.supportiveness = clamp_likert(r.value("supportiveness", previous.supportiveness));
        rel.attitude = r.value("attitude", previous.attitude);
        rel.description = r.value("description", previous.description);
        result.updated_state.relationships[partner_name] = rel;
    }

    const std::string mot_json =
        ask_json(prompts::update_motivation(name_, psych, events_thoughts), ok);
    if (ok && !mot_json.empty()) {
        const json m = json::parse(mot_json);
        if (m.contains("short_term")) {
            result.updated_state.short_term_motivation = m["short_term"].get<std::string>();
        }
        if (m.contains("central_belief")) {
            result.updated_state.central_belief = m["central_belief"].get<std::string>();
        }
    }

    result.updated_state.clamp_all();
    state_ = result.updated_state;
    for (const auto& e : result.new_events) memory_.add(e);
    for (const auto& t : result.new_thoughts) memory_.add(t);
    return result;
}

void AgentMind::introspect_emotion(const BehaviorContext& context) {
    bool ok = false;
    const std::string reply =
        ask_json(prompts::update_emotion(name_, state_.render(), context), ok);
    if (!ok || reply.empty()) return;  // keep the current emotion on bad output
    try {
        const json j = json::parse(reply);
        state_.emotion.pleasure = clamp_likert(j.value("pleasure", state_.emotion.pleasure));
        state_.emotion.arousal = clamp_likert(j.value("arousal", state_.emotion.arousal));
        state_.emotion.dominance = clamp_likert(j.value("dominance", state_.emotion.dominance));
    } catch (const json::exception&) {
    }
}

std::vector<Topic> AgentMind::propose_topics(const std::vector<std::string>& manual_events,
                                             const std::vector<std::string>& episode_backgrounds,
                                             const std::vector<std::string>& current_events) {
    std::string backgrounds_text;
    for (const auto& b : episode_backgrounds) backgrounds_text += b + ";";
    std::string current_text;
    for (const auto& e : current_events) current_text += e + ";";
    for (const auto& e : manual_events) current_text += e + ";";  // injected verbatim

    const std::string psych = state_.render();
    const std::string persona = persona_text(backgrounds_text + current_text);
    const std::string relevant = memories_text(current_text.empty() ? backgrounds_text
                                                                    : current_text);
    bool ok = false;
    const std::string payload = ask_json(
        prompts::propose_topics(name_, psych, persona, backgrounds_text, current_text, relevant),
        ok);
    std::vector<Topic> topics;
    if (!ok || payload.empty()) return topics;
    try {
        json j = json::parse(payload);
        if (!j.is_array()) j = json::array({j});
        for (const auto& t : j) {
            Topic topic;
            topic.description = t.value("description", "");
            const int p = t.value("poignancy", 5);
            const int e = t.value("emergency", 5);
            if (p != clamp_likert(p) || e != clamp_likert(e)) {
                std::cerr << "warning: topic scores out of 1-9, clamping: " << topic.description
                          << "\n";
            }
            topic.poignancy = clamp_likert(p);
            topic.emergency = clamp_likert(e);
            topics.push_back(std::move(topic));
        }
    } catch (const json::exception&) {
    }
    return topics;
}

std::vector<BackgroundCandidate> AgentMind::propose_backgrounds(
    const std::vector<Topic>& topics, const std::vector<std::string>& past_backgrounds,
    const std::string& partner_name) {
    std::string past_text;
    for (const auto& b : past_backgrounds) past_text += b + ";";
    std::string candidates_text;
    for (std::size_t i = 0; i < topics.size(); ++i) {
        candidates_text += std::to_string(i) + ": " + topics[i].description + ";";
    }
    const std::string psych = state_.render();
    const std::string persona = persona_text(past_text + candidates_text);
    bool ok = false;
    const std::string payload = ask_json(
        prompts::propose_backgrounds(name_, psych, persona, past_text, candidates_text), ok);
    std::vector<BackgroundCandidate> out;
    if (!ok || payload.empty()) return out;
    try {
        // ordered_json keeps the authored character order in initial_setting
        using ojson = nlohmann::ordered_json;
        ojson j = ojson::parse(payload);
        if (!j.is_array()) j = ojson::array({j});
        for (const auto& c : j) {
            BackgroundCandidate cand;
            cand.background = c.value("background", "");
            cand.poignancy = clamp_likert(c.value("poignancy", 5));
            cand.emergency = clamp_likert(c.value("emergency", 5));
            bool valid = true;
            for (const auto& id : c.value("topic_ids", ojson::array())) {
                const int t = id.get<int>();
                if (t < 0 || t >= static_cast<int>(topics.size())) {
                    std::cerr << "warning: dropping background with unknown topic id " << t
                              << ": " << cand.background << "\n";
                    valid = false;
                    break;
                }
                cand.topic_ids.push_back(t);
            }
            if (!valid) continue;
            if (c.contains("initial_setting")) {
                for (const auto& [who, s] : c["initial_setting"].items()) {
                    InitialSetting setting;
                    setting.emotion = s.value("emotion", "");
                    setting.place = s.value("place", "");
                    setting.motion = s.value("motion", "");
                    // mocks may use self/partner placeholders
                    std::string key = who;
                    if (key == "self") key = name_;
                    if (key == "partner") key = partner_name;
                    cand.initial_settings.emplace_back(key, setting);
                }
            }
            out.push_back(std::move(cand));
        }
    } catch (const json::exception&) {
    }
    return out;
}

std::string AgentMind::translate_numeric_to_text() {
    return provider_->complete(prompts::translate_pad(
        state_.emotion.pleasure, state_.emotion.arousal, state_.emotion.dominance));
}

SelectedBackground select_background(const std::vector<BackgroundCandidate>& candidates_a,
                                     const std::vector<BackgroundCandidate>& candidates_b,
                                     double lambda_topic) {
    if (candidates_a.empty() && candidates_b.empty()) {
        throw NoCandidates("select_background: no candidates proposed");
    }
    SelectedBackground best;
    double best_score = -1e300;
    const auto consider = [&](const std::vector<BackgroundCandidate>& list, int proposer) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            const double score = lambda_topic * list[i].emergency + list[i].poignancy;
            if (score > best_score) {
                best_score = score;
                best = {list[i], proposer, i};
            }
        }
    };
    consider(candidates_a, 0);
    consider(candidates_b, 1);
    return best;
}

}  // namespace dlp
