#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlp/behavior/behavior.hpp"
#include "dlp/core/rng.hpp"
#include "dlp/mind/provider.hpp"

using namespace dlp;

namespace {

// Generator for valid behaviors: values never contain a key-like token
// and never end in an unterminated "<abc" tail.
Behavior random_behavior(Rng& rng) {
    static const char* keys[] = {"speech", "motion", "place", "mood", "aside", "x"};
    static const char charset[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,!?'\"()-:;>@#";
    Behavior b;
    const std::size_t n = 1 + rng.uniform_index(4);
    for (std::size_t i = 0; i < n; ++i) {
        std::string value;
        const std::size_t len = rng.uniform_index(24);
        for (std::size_t c = 0; c < len; ++c) {
            value += charset[rng.uniform_index(sizeof(charset) - 1)];
        }
        b.entries.emplace_back(keys[rng.uniform_index(6)], value);
    }
    return b;
}

std::string random_bytes(Rng& rng, std::size_t max_len) {
    std::string s;
    const std::size_t len = rng.uniform_index(max_len);
    for (std::size_t i = 0; i < len; ++i) {
        s += static_cast<char>(rng.uniform_index(256));
    }
    return s;
}

}  // namespace

TEST_CASE("parses the canonical three-key message") {
    const auto out = parse_behavior("<speech>Hello!<motion>waves right hand<place>table");
    REQUIRE(!out.is_end());
    CHECK(out.behavior->get("speech") == "Hello!");
    CHECK(out.behavior->get("motion") == "waves right hand");
    CHECK(out.behavior->get("place") == "table");
}

TEST_CASE("END terminates, with surrounding whitespace allowed") {
    CHECK(parse_behavior("END").is_end());
    CHECK(parse_behavior("  END\n").is_end());
    CHECK(!parse_behavior("<speech>END").is_end());
}

TEST_CASE("text without any key token is malformed") {
    CHECK_THROWS_AS(parse_behavior("no tokens here"), MalformedBehavior);
    CHECK_THROWS_AS(parse_behavior(""), MalformedBehavior);
    CHECK_THROWS_AS(parse_behavior("Sure! <speech>hi"), MalformedBehavior);
}

TEST_CASE("leading whitespace before the first key is fine") {
    const auto out = parse_behavior("  \n<speech>hi");
    CHECK(out.behavior->get("speech") == "hi");
}

TEST_CASE("unterminated key tail") {
    CHECK_THROWS_AS(parse_behavior("<speech>hi<motio"), UnterminatedKey);
    CHECK_THROWS_AS(parse_behavior("<"), UnterminatedKey);
    // '<' not followed by key characters stays literal text in values
    const auto out = parse_behavior("<speech>a < b and 1<2 hold");
    CHECK(out.behavior->get("speech") == "a < b and 1<2 hold");
}

TEST_CASE("serialize matches the wire format, empty values legal") {
    Behavior b;
    b.entries = {{"speech", "Hi!"}, {"motion", "stand up"}, {"place", "sofa"}};
    CHECK(serialize_behavior(b) == "<speech>Hi!<motion>stand up<place>sofa");

    Behavior empty_speech;
    empty_speech.entries = {{"speech", ""}, {"motion", "fist bump"}, {"place", "center"}};
    CHECK(serialize_behavior(empty_speech) == "<speech><motion>fist bump<place>center");
    const auto round = parse_behavior(serialize_behavior(empty_speech));
    CHECK(round.behavior->get("speech") == "");
    CHECK(round.behavior->get("motion") == "fist bump");
}

TEST_CASE("unknown keys survive round trips verbatim") {
    const auto out = parse_behavior("<speech>hi<gesture_x>both arms<place>desk");
    CHECK(out.behavior->get("gesture_x") == "both arms");
    CHECK(serialize_behavior(*out.behavior) == "<speech>hi<gesture_x>both arms<place>desk");
}

TEST_CASE("duplicate keys: last wins, all preserved") {
    const auto out = parse_behavior("<speech>one<speech>two<motion>wave");
    CHECK(out.behavior->get("speech") == "two");
    REQUIRE(out.behavior->entries.size() == 3);
    CHECK(out.behavior->entries[0].second == "one");
    CHECK(serialize_behavior(*out.behavior) == "<speech>one<speech>two<motion>wave");
}

TEST_CASE("parse-serialize round trip over generated behaviors") {
    Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const Behavior b = random_behavior(rng);
        const auto back = parse_behavior(serialize_behavior(b));
        REQUIRE(!back.is_end());
        CHECK(*back.behavior == b);
    }
}

TEST_CASE("parse never crashes on arbitrary bytes") {
    Rng rng(4096);
    int parsed = 0, malformed = 0, unterminated = 0;
    for (int i = 0; i < 20000; ++i) {
        try {
            parse_behavior(random_bytes(rng, 64));
            ++parsed;
        } catch (const MalformedBehavior&) {
            ++malformed;
        } catch (const UnterminatedKey&) {
            ++unterminated;
        }
    }
    CHECK(parsed + malformed + unterminated == 20000);
    CHECK(malformed > 0);
}

TEST_CASE("normalize: already-valid text skips the provider") {
    class CountingProvider : public ProviderPort {
    public:
        int calls = 0;
        std::string complete(const std::string&) override {
            ++calls;
            return "";
        }
    } provider;
    const auto out = normalize_with_provider("<speech>hi<motion>wave", provider);
    CHECK(out.behavior->get("speech") == "hi");
    CHECK(provider.calls == 0);
}

TEST_CASE("normalize: provider reformats prose into the canonical form") {
    MockProvider provider(1);
    provider.add_rule({"Speech: hi. Motion: wave.", {"<speech>hi.<motion>wave."}});
    const auto out = normalize_with_provider("Speech: hi. Motion: wave.", provider);
    REQUIRE(!out.is_end());
    CHECK(out.behavior->get("speech") == "hi.");
    CHECK(out.behavior->get("motion") == "wave.");
}

TEST_CASE("normalize: garbage twice exhausts retries") {
    MockProvider provider(1);
    provider.add_rule({"Reformat the following message", {"still not structured"}});
    CHECK_THROWS_AS(normalize_with_provider("plain prose", provider, 2), ReformatFailed);
}
