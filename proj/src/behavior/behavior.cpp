#include "dlp/behavior/behavior.hpp"

#include <cctype>

#include "dlp/mind/provider.hpp"

namespace dlp {

namespace {

bool is_key_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

struct Token {
    std::size_t begin;      // position of '<'
    std::size_t value_from; // position just past '>'
    std::string key;
};

// Next <key> token at or after `from`; throws UnterminatedKey when a
// key-like "<abc" runs into the end of the string.
std::optional<Token> next_token(const std::string& s, std::size_t from) {
    for (std::size_t i = from; i < s.size(); ++i) {
        if (s[i] != '<') continue;
        std::size_t j = i + 1;
        while (j < s.size() && is_key_char(s[j])) ++j;
        if (j == s.size()) throw UnterminatedKey("behavior: '<' without matching '>'");
        if (s[j] == '>' && j > i + 1) return Token{i, j + 1, s.substr(i + 1, j - i - 1)};
        // not a key token; keep scanning after the '<'
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> Behavior::get(const std::string& key) const {
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->first == key) return it->second;
    }
    return std::nullopt;
}

std::string Behavior::get_or(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

void Behavior::set(const std::string& key, const std::string& value) {
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->first == key) {
            it->second = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

BehaviorOrEnd parse_behavior(const std::string& text) {
    if (trim(text) == "END") return BehaviorOrEnd::end();

    auto first = next_token(text, 0);
    if (!first) throw MalformedBehavior("behavior: no <key> token found");
    if (trim(text.substr(0, first->begin)) != "") {
        throw MalformedBehavior("behavior: unexpected text before first key");
    }

    Behavior b;
    Token tok = *first;
    while (true) {
        auto next = next_token(text, tok.value_from);
        const std::size_t value_end = next ? next->begin : text.size();
        b.entries.emplace_back(tok.key, text.substr(tok.value_from, value_end - tok.value_from));
        if (!next) break;
        tok = *next;
    }
    return BehaviorOrEnd::of(std::move(b));
}

std::string serialize_behavior(const Behavior& behavior) {
    std::string out;
    for (const auto& [key, value] : behavior.entries) {
        out += '<';
        out += key;
        out += '>';
        out += value;
    }
    return out;
}

BehaviorOrEnd normalize_with_provider(const std::string& raw_text, ProviderPort& provider,
                                      int max_retries) {
    try {
        return parse_behavior(raw_text);
    } catch (const Error&) {
        // fall through to reformatting
    }
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        const std::string prompt =
            "Reformat the following message into the structured form "
            "<speech>...<motion>...<place>... using only lowercase keys in pointy "
            "brackets, or output END if the message ends the conversation. "
            "Reply with the reformatted message only. (attempt " +
            std::to_string(attempt) + ")\nMessage:\n" + raw_text;
        const std::string reply = provider.complete(prompt);
        try {
            return parse_behavior(reply);
        } catch (const Error&) {
            continue;
        }
    }
    throw ReformatFailed("behavior: provider could not produce a well-formed message");
}

}  // namespace dlp
