#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlp/core/error.hpp"

namespace dlp {

struct ProviderError : Error {
    using Error::Error;
};

// Completion backend for every language-model call. Implementations must
// be safe for concurrent complete() calls.
class ProviderPort {
public:
    virtual ~ProviderPort() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

// Deterministic offline provider: an ordered rule table (first substring
// match wins) over built-in handlers keyed to the engine's own prompt
// markers. The response is a pure function of (prompt, seed) — no call
// state — so reruns are bit-identical.
class MockProvider : public ProviderPort {
public:
    struct Rule {
        std::string contains;                // substring of the prompt
        std::vector<std::string> responses;  // picked by hash(prompt, seed)
    };

    explicit MockProvider(std::uint64_t seed = 0) : seed_(seed) {}

    void add_rule(Rule rule) { rules_.push_back(std::move(rule)); }
    void load_rules_json(const std::string& json_text);

    std::string complete(const std::string& prompt) override;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_ = 0;
    std::vector<Rule> rules_;

    std::uint64_t mix(const std::string& prompt) const;
    std::string builtin_response(const std::string& prompt) const;
};

// Chat-completion HTTP client. Endpoint, model and key come from the
// environment (DLP_LLM_URL, DLP_LLM_MODEL, DLP_LLM_KEY) unless set
// explicitly. Request: {"model", "messages": [{"role": "user",
// "content": prompt}], "temperature", "seed"}; the reply's
// choices[0].message.content is returned.
class HttpProvider : public ProviderPort {
public:
    struct Config {
        std::string url;    // http://host:port/path
        std::string model;
        std::string api_key;
        double temperature = 0.7;
        std::uint64_t seed = 0;
        int timeout_seconds = 60;
        int max_attempts = 3;
    };

    explicit HttpProvider(Config config);
    static Config config_from_env();

    std::string complete(const std::string& prompt) override;

private:
    Config config_;
};

}  // namespace dlp
