#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dlp/embed/embedder.hpp"

using namespace dlp;

TEST_CASE("cosine basics") {
    TextEmbedding a{{1, 2, 2}};
    TextEmbedding b{{2, 1, 2}};
    CHECK(cosine(a, a) == doctest::Approx(1.0));
    CHECK(cosine(a, b) == doctest::Approx(8.0 / 9.0));

    TextEmbedding ex{{1, 0}};
    TextEmbedding ey{{0, 1}};
    CHECK(cosine(ex, ey) == doctest::Approx(0.0));
    CHECK(cosine(ex, ey) == cosine(ey, ex));

    TextEmbedding zero{{0, 0}};
    CHECK(cosine(ex, zero) == 0.0);

    TextEmbedding wrong{{1, 2, 3, 4}};
    CHECK_THROWS_AS(cosine(a, wrong), DimMismatch);
}

TEST_CASE("default embedder: empty text maps to the zero vector") {
    HashedEmbedder embedder(256);
    const auto e = embedder.embed("");
    CHECK(e.dim() == 256);
    for (double v : e.values) CHECK(v == 0.0);
    const auto punct = embedder.embed("...!!!");
    for (double v : punct.values) CHECK(v == 0.0);
}

TEST_CASE("default embedder is deterministic and unit-norm") {
    HashedEmbedder embedder;
    const auto a = embedder.embed("shake hands warmly");
    const auto b = embedder.embed("shake hands warmly");
    REQUIRE(a.dim() == b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) CHECK(a.values[i] == b.values[i]);
    double sq = 0.0;
    for (double v : a.values) sq += v * v;
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("related phrasings align better than unrelated ones") {
    HashedEmbedder embedder;
    const auto shake = embedder.embed("shake hands");
    const auto related = embedder.embed("handshake greeting");
    const auto unrelated = embedder.embed("sit on sofa");
    CHECK(cosine(shake, related) > cosine(shake, unrelated));
    // frozen corpus-level fixture values (subword overlap drives the gap)
    CHECK(cosine(shake, related) > 0.05);
    CHECK(cosine(shake, unrelated) < 0.05);
}

TEST_CASE("case folding is byte-level ascii") {
    HashedEmbedder embedder;
    const auto a = embedder.embed("Shake HANDS");
    const auto b = embedder.embed("shake hands");
    for (std::size_t i = 0; i < a.dim(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("remote embedder round trips through a local server") {
    httplib::Server server;
    server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        const std::string text = body.at("texts").at(0).get<std::string>();
        std::vector<double> values(8, 0.0);
        values[0] = static_cast<double>(text.size());
        values[1] = 1.0;
        nlohmann::json reply;
        reply["embeddings"] = {values};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RemoteEmbedder::Config config;
    config.url = "http://127.0.0.1:" + std::to_string(port) + "/embed";
    config.dim = 8;
    RemoteEmbedder remote(config);
    const auto e = remote.embed("hello");
    CHECK(e.dim() == 8);
    CHECK(e.values[0] == doctest::Approx(5.0));
    CHECK(e.values[1] == doctest::Approx(1.0));

    server.stop();
    worker.join();
}
