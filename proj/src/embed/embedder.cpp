#include "dlp/embed/embedder.hpp"

#include <cmath>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace dlp {

using nlohmann::json;

double cosine(const TextEmbedding& a, const TextEmbedding& b) {
    if (a.dim() != b.dim()) throw DimMismatch("cosine: embedding dims differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

std::uint64_t fnv1a(const char* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
        if (alnum) {
            cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

}  // namespace

TextEmbedding HashedEmbedder::embed(const std::string& text) const {
    TextEmbedding e;
    e.values.assign(dim_, 0.0);
    const auto tokens = tokenize(text);
    if (tokens.empty()) return e;

    const auto add = [&](std::uint64_t h) {
        const std::size_t bucket = h % dim_;
        e.values[bucket] += (h >> 63) ? -1.0 : 1.0;
    };

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        add(fnv1a(t.data(), t.size()));
        if (i + 1 < tokens.size()) {
            const std::string bi = t + '\x1f' + tokens[i + 1];
            add(fnv1a(bi.data(), bi.size()));
        }
        for (std::size_t n = 3; n <= 4; ++n) {
            if (t.size() <= n) continue;
            for (std::size_t s = 0; s + n <= t.size(); ++s) {
                add(fnv1a(t.data() + s, n, 0x61c8864680b583ebull));
            }
        }
    }

    double sq = 0.0;
    for (double v : e.values) sq += v * v;
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (double& v : e.values) v *= inv;
    }
    return e;
}

RemoteEmbedder::RemoteEmbedder(Config config) : config_(std::move(config)) {
    if (config_.url.empty()) throw Error("remote embedder: no endpoint configured");
}

RemoteEmbedder::Config RemoteEmbedder::config_from_env() {
    Config c;
    if (const char* url = std::getenv("DLP_EMBED_URL")) c.url = url;
    if (const char* key = std::getenv("DLP_EMBED_KEY")) c.api_key = key;
    return c;
}

TextEmbedding RemoteEmbedder::embed(const std::string& text) const {
    std::string rest = config_.url;
    if (rest.rfind("http://", 0) == 0) rest = rest.substr(7);
    const auto slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    std::string host = hostport;
    int port = 80;
    const auto colon = hostport.find(':');
    if (colon != std::string::npos) {
        host = hostport.substr(0, colon);
        port = std::stoi(hostport.substr(colon + 1));
    }

    httplib::Client client(host, port);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.insert({"Authorization", "Bearer " + config_.api_key});

    json body;
    body["texts"] = json::array({text});
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200) throw Error("remote embedder: request failed");
    json reply = json::parse(res->body);
    TextEmbedding e;
    for (const auto& v : reply.at("embeddings").at(0)) e.values.push_back(v.get<double>());
    if (e.dim() != config_.dim) throw DimMismatch("remote embedder: unexpected dimension");
    return e;
}

}  // namespace dlp
