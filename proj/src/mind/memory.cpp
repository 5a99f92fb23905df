#include "dlp/mind/memory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dlp/core/error.hpp"

namespace dlp {

using nlohmann::json;

double forgetting_rate(double delta_t, int access_count, double poignancy, double a, double k) {
    if (delta_t < 0.0 || access_count < 0 || poignancy < 1.0 || a < 0.0 || a >= 1.0 || k <= 0.0) {
        throw DomainError("forgetting_rate: argument out of domain");
    }
    const double denom = std::exp2(static_cast<double>(access_count)) * poignancy;
    return a + (1.0 - a) * std::exp(-k * delta_t / denom);
}

double memory_score(const TextEmbedding& query, const MemoryItem& item, int current_episode,
                    const ForgettingParams& params) {
    const double delta = static_cast<double>(current_episode - item.last_access_episode);
    const double rate =
        forgetting_rate(delta, item.access_count, item.poignancy, params.a, params.k);
    return cosine(query, item.embedding) * rate;
}

std::vector<std::size_t> MemoryStore::retrieve(const TextEmbedding& query, std::size_t m,
                                               int current_episode) {
    struct Scored {
        std::size_t index;
        double score;
    };
    std::vector<Scored> scored;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const MemoryItem& item = items_[i];
        const ForgettingParams& params = params_for(item.kind);
        const double delta = static_cast<double>(current_episode - item.last_access_episode);
        const double rate =
            forgetting_rate(delta, item.access_count, item.poignancy, params.a, params.k);
        if (!retrievable(rate, params.threshold)) continue;
        scored.push_back({i, cosine(query, item.embedding) * rate});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.index < b.index;
    });
    if (scored.size() > m) scored.resize(m);

    std::vector<std::size_t> out;
    out.reserve(scored.size());
    for (const auto& s : scored) {
        items_[s.index].access_count += 1;
        items_[s.index].last_access_episode = current_episode;
        out.push_back(s.index);
    }
    return out;
}

void MemoryStore::save_jsonl(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write memory store: " + path);
    for (const auto& item : items_) {
        json j;
        j["kind"] = to_string(item.kind);
        j["description"] = item.description;
        j["keywords"] = item.keywords;
        j["poignancy"] = item.poignancy;
        j["emergency"] = item.emergency;
        j["access_count"] = item.access_count;
        j["last_access_episode"] = item.last_access_episode;
        j["embedding"] = item.embedding.values;
        out << j.dump() << "\n";
    }
}

MemoryStore MemoryStore::load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open memory store: " + path);
    MemoryStore store;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        MemoryItem item;
        item.kind = j.at("kind").get<std::string>() == "thought" ? MemoryKind::thought
                                                                 : MemoryKind::event;
        item.description = j.at("description").get<std::string>();
        for (const auto& k : j.value("keywords", json::array())) {
            item.keywords.push_back(k.get<std::string>());
        }
        item.poignancy = clamp_likert(j.value("poignancy", 5));
        item.emergency = clamp_likert(j.value("emergency", 5));
        item.access_count = j.value("access_count", 0);
        item.last_access_episode = j.value("last_access_episode", 0);
        for (const auto& v : j.value("embedding", json::array())) {
            item.embedding.values.push_back(v.get<double>());
        }
        store.add(std::move(item));
    }
    return store;
}

}  // namespace dlp
