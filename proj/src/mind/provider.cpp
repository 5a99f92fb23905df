#include "dlp/mind/provider.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace dlp {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

const std::vector<std::string>& behavior_pool() {
    static const std::vector<std::string> pool = {
        "<speech>Hello there!<motion>waves right hand<place>center",
        "<speech>Good to see you.<motion>shake hands<place>center",
        "<speech>Nice!<motion>high five<place>center",
        "<speech>Come sit with me for a moment.<motion>sit down<place>sofa",
        "<speech>Let me show you something over here.<motion>waves right hand<place>desk",
        "<speech>That went well.<motion>fist bump<place>center",
        "<speech>I found a book you might like.<motion>waves right hand<place>bookshelf",
        "<speech>Let's talk at the table.<motion>shake hands<place>table",
    };
    return pool;
}

const std::vector<std::string>& approval_pool() {
    static const std::vector<std::string> pool = {"Yes", "Yes", "Yes", "No"};
    return pool;
}

const std::vector<std::string>& event_pool() {
    static const std::vector<std::string> pool = {
        R"([{"description": "They greeted each other and talked for a while", "keywords": ["greeting", "talk"], "poignancy": 5, "emergency": 3}])",
        R"([{"description": "One of them shared a story about an old book", "keywords": ["book", "story"], "poignancy": 6, "emergency": 2}])",
        R"([{"description": "They made a plan to meet again soon", "keywords": ["plan", "meeting"], "poignancy": 6, "emergency": 5}])",
    };
    return pool;
}

const std::vector<std::string>& thought_pool() {
    static const std::vector<std::string> pool = {
        R"([{"description": "I enjoy their company more than I expected", "keywords": ["company"], "poignancy": 5}])",
        R"([{"description": "I should listen more carefully next time", "keywords": ["listening"], "poignancy": 4}])",
    };
    return pool;
}

const std::vector<std::string>& relationship_pool() {
    static const std::vector<std::string> pool = {
        R"({"description": "getting to know each other", "intimacy": 4, "trust": 5, "supportiveness": 4, "attitude": "curious"})",
        R"({"description": "warming up to each other", "intimacy": 5, "trust": 5, "supportiveness": 5, "attitude": "friendly"})",
        R"({"description": "comfortable and familiar", "intimacy": 6, "trust": 6, "supportiveness": 5, "attitude": "warm"})",
    };
    return pool;
}

const std::vector<std::string>& motivation_pool() {
    static const std::vector<std::string> pool = {
        R"({"short_term": "keep the conversation going", "central_belief": "people are worth listening to"})",
        R"({"short_term": "share something personal", "central_belief": "honesty builds trust"})",
    };
    return pool;
}

const std::vector<std::string>& topic_pool() {
    static const std::vector<std::string> pool = {
        R"([{"description": "Plans for the weekend", "poignancy": 6, "emergency": 5}, {"description": "A book worth sharing", "poignancy": 5, "emergency": 3}])",
        R"([{"description": "A place they both want to visit", "poignancy": 7, "emergency": 4}, {"description": "Yesterday's long walk", "poignancy": 4, "emergency": 2}])",
    };
    return pool;
}

const std::vector<std::string>& background_pool() {
    static const std::vector<std::string> pool = {
        R"([{"background": "They meet again to continue yesterday's conversation", "poignancy": 6, "emergency": 5, "topic_ids": [0], "initial_setting": {"self": {"emotion": "content", "place": "sofa", "motion": "sit down"}, "partner": {"emotion": "curious", "place": "center", "motion": "waves right hand"}}}])",
        R"([{"background": "One of them wants to show the other a favorite book", "poignancy": 7, "emergency": 4, "topic_ids": [0, 1], "initial_setting": {"self": {"emotion": "excited", "place": "bookshelf", "motion": "waves right hand"}, "partner": {"emotion": "calm", "place": "desk", "motion": "stand up"}}}])",
    };
    return pool;
}

const std::vector<std::string>& emotion_text_pool() {
    static const std::vector<std::string> pool = {
        "Calm and mildly content, with steady attention and a sense of ease.",
        "Quiet interest with a touch of excitement, alert but relaxed.",
        "Mild contentment, attentive and open to what comes next.",
    };
    return pool;
}

const std::vector<std::string>& emotion_update_pool() {
    static const std::vector<std::string> pool = {
        R"({"pleasure": 6, "arousal": 5, "dominance": 5})",
        R"({"pleasure": 5, "arousal": 4, "dominance": 5})",
        R"({"pleasure": 7, "arousal": 5, "dominance": 6})",
    };
    return pool;
}

}  // namespace

void MockProvider::load_rules_json(const std::string& json_text) {
    json j = json::parse(json_text);
    for (const auto& r : j) {
        Rule rule;
        rule.contains = r.at("contains").get<std::string>();
        for (const auto& resp : r.at("responses")) rule.responses.push_back(resp.get<std::string>());
        if (rule.responses.empty()) throw ProviderError("mock rule with no responses");
        add_rule(std::move(rule));
    }
}

std::uint64_t MockProvider::mix(const std::string& prompt) const {
    return fnv1a(prompt) ^ (seed_ * 0x9e3779b97f4a7c15ull + 0x517cc1b727220a95ull);
}

std::string MockProvider::complete(const std::string& prompt) {
    for (const auto& rule : rules_) {
        if (prompt.find(rule.contains) != std::string::npos) {
            return rule.responses[mix(prompt) % rule.responses.size()];
        }
    }
    return builtin_response(prompt);
}

std::string MockProvider::builtin_response(const std::string& prompt) const {
    const auto pick = [&](const std::vector<std::string>& pool) {
        return pool[mix(prompt) % pool.size()];
    };
    const auto has = [&](const char* marker) { return prompt.find(marker) != std::string::npos; };

    if (has("So your reaction is:")) return pick(behavior_pool());
    if (has("Answer yes or no")) return pick(approval_pool());
    if (has("summarize the key events and output the event list")) return pick(event_pool());
    if (has("output the thought list")) return pick(thought_pool());
    if (has("Output the relationship according to social psychological theory"))
        return pick(relationship_pool());
    if (has("output the updated short-term motivation and central belief"))
        return pick(motivation_pool());
    if (has("generate a list of topics")) return pick(topic_pool());
    if (has("generate a list of backgrounds")) return pick(background_pool());
    if (has("output the updated emotion")) return pick(emotion_update_pool());
    if (has("describe the emotion of the person")) return pick(emotion_text_pool());
    if (has("Reformat the following message")) return "<speech><motion>idle<place>center";
    return "OK.";
}

HttpProvider::HttpProvider(Config config) : config_(std::move(config)) {
    if (config_.url.empty()) throw ProviderError("http provider: no endpoint configured");
}

HttpProvider::Config HttpProvider::config_from_env() {
    Config c;
    if (const char* url = std::getenv("DLP_LLM_URL")) c.url = url;
    if (const char* model = std::getenv("DLP_LLM_MODEL")) c.model = model;
    if (const char* key = std::getenv("DLP_LLM_KEY")) c.api_key = key;
    return c;
}

namespace {

// scheme://host[:port]/path -> (host, port, path)
void split_url(const std::string& url, std::string& host, int& port, std::string& path) {
    std::string rest = url;
    port = 80;
    if (rest.rfind("http://", 0) == 0) {
        rest = rest.substr(7);
    } else if (rest.rfind("https://", 0) == 0) {
        throw ProviderError("https endpoints are not supported; use an http proxy");
    }
    const auto slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    path = slash == std::string::npos ? "/" : rest.substr(slash);
    const auto colon = hostport.find(':');
    if (colon == std::string::npos) {
        host = hostport;
    } else {
        host = hostport.substr(0, colon);
        port = std::stoi(hostport.substr(colon + 1));
    }
}

}  // namespace

std::string HttpProvider::complete(const std::string& prompt) {
    std::string host, path;
    int port = 80;
    split_url(config_.url, host, port, path);

    json body;
    body["model"] = config_.model;
    body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = config_.temperature;
    body["seed"] = config_.seed;

    httplib::Client client(host, port);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.insert({"Authorization", "Bearer " + config_.api_key});

    std::string last_error;
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "connection failed";
            continue;
        }
        if (res->status != 200) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        try {
            json reply = json::parse(res->body);
            return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception& e) {
            last_error = std::string("bad response: ") + e.what();
        }
    }
    throw ProviderError("http provider: " + last_error);
}

}  // namespace dlp
