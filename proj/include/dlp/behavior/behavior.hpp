#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlp/core/error.hpp"

namespace dlp {

class ProviderPort;

struct MalformedBehavior : Error {
    using Error::Error;
};
struct UnterminatedKey : Error {
    using Error::Error;
};
struct ReformatFailed : Error {
    using Error::Error;
};

// Structured message of the form "<key>value<key>value...". Known keys are
// speech / motion / place; unknown keys pass through untouched. Duplicate
// keys keep every occurrence in order; lookups return the last one.
struct Behavior {
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    void set(const std::string& key, const std::string& value);  // appends or rewrites last

    bool operator==(const Behavior&) const = default;
};

struct BehaviorOrEnd {
    std::optional<Behavior> behavior;  // empty means END

    bool is_end() const { return !behavior.has_value(); }
    static BehaviorOrEnd end() { return {}; }
    static BehaviorOrEnd of(Behavior b) { return {std::move(b)}; }
};

// Splits on <key> tokens where a key is one or more of [a-z_]. Leading
// text must be whitespace. "END" (after trim) is the end marker. Throws
// MalformedBehavior / UnterminatedKey.
BehaviorOrEnd parse_behavior(const std::string& text);

std::string serialize_behavior(const Behavior& behavior);

// parse, and on a malformed message ask the provider to reformat, up to
// max_retries times. Throws ReformatFailed once retries are exhausted.
BehaviorOrEnd normalize_with_provider(const std::string& raw_text, ProviderPort& provider,
                                      int max_retries = 2);

}  // namespace dlp
