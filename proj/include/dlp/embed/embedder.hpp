#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlp/core/error.hpp"

namespace dlp {

struct TextEmbedding {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

// dot(a,b)/(|a||b|); 0 when either norm is 0. Throws DimMismatch.
double cosine(const TextEmbedding& a, const TextEmbedding& b);

class EmbedderPort {
public:
    virtual ~EmbedderPort() = default;
    virtual TextEmbedding embed(const std::string& text) const = 0;
    virtual std::size_t dim() const = 0;
};

// Deterministic feature-hashing embedder: lowercase word unigrams and
// bigrams plus character 3/4-grams per word, hashed into `dim` signed
// buckets and L2-normalized. The char n-grams give subword overlap so
// related phrasings ("shake hands" / "handshake") land near each other.
// Locale-independent: ASCII-only case folding, byte-level tokens.
class HashedEmbedder : public EmbedderPort {
public:
    explicit HashedEmbedder(std::size_t dim = 1024) : dim_(dim) {}

    TextEmbedding embed(const std::string& text) const override;
    std::size_t dim() const override { return dim_; }

private:
    std::size_t dim_;
};

// HTTP adapter: POST {"texts": [...]} to DLP_EMBED_URL (bearer token
// DLP_EMBED_KEY), expecting {"embeddings": [[...]]}.
class RemoteEmbedder : public EmbedderPort {
public:
    struct Config {
        std::string url;
        std::string api_key;
        std::size_t dim = 1024;
        int timeout_seconds = 30;
    };

    explicit RemoteEmbedder(Config config);
    static Config config_from_env();

    TextEmbedding embed(const std::string& text) const override;
    std::size_t dim() const override { return config_.dim; }

private:
    Config config_;
};

}  // namespace dlp
