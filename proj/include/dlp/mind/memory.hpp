#pragma once

#include <cstddef>
#include <vector>

#include "dlp/mind/psych.hpp"

namespace dlp {

struct ForgettingParams {
    double a = 0.4;        // retention floor
    double k = 4.0;        // decay speed
    double threshold = 0.6;  // T_f: items with rate below this are forgotten

    static ForgettingParams event_defaults() { return {0.4, 4.0, 0.6}; }
    static ForgettingParams thought_defaults() { return {0.1, 2.0, 0.3}; }
};

// r = a + (1-a) * exp(-k * delta_t / (2^access_count * poignancy)).
// Requires delta_t >= 0, access_count >= 0, poignancy >= 1, 0 <= a < 1,
// k > 0; throws DomainError otherwise.
double forgetting_rate(double delta_t, int access_count, double poignancy, double a, double k);

// An item stays retrievable while its rate sits at or above the
// threshold for its kind.
inline bool retrievable(double rate, double threshold) { return rate >= threshold; }

double memory_score(const TextEmbedding& query, const MemoryItem& item, int current_episode,
                    const ForgettingParams& params);

class MemoryStore {
public:
    ForgettingParams event_params = ForgettingParams::event_defaults();
    ForgettingParams thought_params = ForgettingParams::thought_defaults();

    void add(MemoryItem item) { items_.push_back(std::move(item)); }
    const std::vector<MemoryItem>& items() const { return items_; }
    std::vector<MemoryItem>& items() { return items_; }
    std::size_t size() const { return items_.size(); }

    const ForgettingParams& params_for(MemoryKind kind) const {
        return kind == MemoryKind::event ? event_params : thought_params;
    }

    // Top-M item indices by memory_score, skipping forgotten items.
    // Retrieval reinforces: each returned item gets access_count + 1 and
    // last_access_episode = current_episode. Ties by item index.
    std::vector<std::size_t> retrieve(const TextEmbedding& query, std::size_t m,
                                      int current_episode);

    void save_jsonl(const std::string& path) const;
    static MemoryStore load_jsonl(const std::string& path);

private:
    std::vector<MemoryItem> items_;
};

}  // namespace dlp
