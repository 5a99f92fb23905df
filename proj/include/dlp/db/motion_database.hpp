#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlp/core/skeleton.hpp"
#include "dlp/db/features.hpp"
#include "dlp/embed/embedder.hpp"

namespace dlp {

struct DuplicateId : Error {
    using Error::Error;
};
struct DanglingPair : Error {
    using Error::Error;
};
struct EmptyDatabase : Error {
    using Error::Error;
};
struct VersionMismatch : Error {
    using Error::Error;
};

struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;   // floored: dims with std < 1e-8 use 1
    std::vector<double> inv_std;  // 1 / stddev

    std::size_t dims() const { return mean.size(); }
};

// Per-dimension mean and population std over a rows x cols matrix, std
// floored to 1 where it falls below 1e-8. Throws EmptyDatabase on
// rows == 0.
NormStats fit_norm_stats(const double* data, std::size_t rows, std::size_t cols);

// cosine(f_i, f_q) * exp(-lambda_len * gamma), gamma = |l_i - L| / max(l_i, L).
double length_penalized_similarity(const TextEmbedding& f_i, const TextEmbedding& f_q,
                                   double l_i, double L, double lambda_len);

struct DbConfig {
    int k = 30;       // window length, frames
    int stride = 10;  // window stride, frames
    double fps = 30.0;
};

struct WindowRef {
    int clip_index = -1;
    int start = 0;
};

class MotionDatabase {
public:
    explicit MotionDatabase(DbConfig config = {},
                            std::shared_ptr<const EmbedderPort> embedder =
                                std::make_shared<HashedEmbedder>());

    // Stores the clip, embeds the annotation and extracts its windows.
    // pair_link names the already-ingested passive partner clip of an
    // interactive pair. Throws DuplicateId / DanglingPair.
    std::string ingest(MotionClip clip, const std::string& annotation,
                       const std::optional<std::string>& pair_link = std::nullopt);

    // Fits the normalization stats. Must run after the last ingest and
    // before matching. Throws EmptyDatabase.
    void finalize();
    bool finalized() const { return finalized_; }

    const DbConfig& config() const { return config_; }
    const NormStats& norm_stats() const;
    const std::vector<MotionClip>& clips() const { return clips_; }
    const MotionClip& clip(int index) const { return clips_[index]; }
    const MotionClip* find_clip(const std::string& id) const;
    int clip_index(const std::string& id) const;  // -1 when unknown

    std::size_t window_count() const { return windows_.size(); }
    const WindowRef& window(std::size_t i) const { return windows_[i]; }
    const double* window_features() const { return features_.data(); }
    const double* window_feature(std::size_t i) const {
        return features_.data() + i * feature_width();
    }
    std::size_t feature_width() const { return KinematicFeature::length_for(config_.k); }
    // Window index for (clip_index, start); -1 when absent.
    int window_index(int clip_index, int start) const;
    const std::vector<int>& clip_windows(int clip_index) const;

    const TextEmbedding& annotation_embedding(int clip_index) const;
    const EmbedderPort& embedder() const { return *embedder_; }

    // active clip index -> passive clip index
    const std::map<int, int>& pair_links() const { return pair_links_; }
    // passive partner of a clip in either direction; -1 when none
    int partner_of(int clip_index) const;

    void save(const std::string& path) const;
    static MotionDatabase load(const std::string& path,
                               std::shared_ptr<const EmbedderPort> embedder =
                                   std::make_shared<HashedEmbedder>());

    bool structurally_equal(const MotionDatabase& other) const;

private:
    DbConfig config_;
    std::shared_ptr<const EmbedderPort> embedder_;
    std::vector<MotionClip> clips_;
    std::map<std::string, int> index_by_id_;
    std::vector<TextEmbedding> annotation_embeddings_;
    std::vector<WindowRef> windows_;
    std::vector<double> features_;  // row-major, one row per window
    std::map<std::pair<int, int>, int> window_by_key_;
    std::vector<std::vector<int>> windows_by_clip_;
    std::map<int, int> pair_links_;
    NormStats stats_;
    bool finalized_ = false;

    void extract_clip_windows(int clip_index);
    void reextract_clip_windows(int clip_index);
};

}  // namespace dlp
