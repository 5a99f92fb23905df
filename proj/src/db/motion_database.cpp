#include "dlp/db/motion_database.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "dlp/kernels.hpp"

namespace dlp {

NormStats fit_norm_stats(const double* data, std::size_t rows, std::size_t cols) {
    if (rows == 0) throw EmptyDatabase("fit_norm_stats: no windows");
    NormStats stats;
    stats.mean.resize(cols);
    stats.stddev.resize(cols);
    kernels::column_moments(data, rows, cols, stats.mean.data(), stats.stddev.data());
    stats.inv_std.resize(cols);
    for (std::size_t d = 0; d < cols; ++d) {
        if (stats.stddev[d] < 1e-8) stats.stddev[d] = 1.0;
        stats.inv_std[d] = 1.0 / stats.stddev[d];
    }
    return stats;
}

double length_penalized_similarity(const TextEmbedding& f_i, const TextEmbedding& f_q,
                                   double l_i, double L, double lambda_len) {
    if (!(l_i > 0.0) || !(L > 0.0)) throw DomainError("lengths must be positive");
    const double gamma = std::fabs(l_i - L) / std::max(l_i, L);
    return cosine(f_i, f_q) * std::exp(-lambda_len * gamma);
}

MotionDatabase::MotionDatabase(DbConfig config, std::shared_ptr<const EmbedderPort> embedder)
    : config_(config), embedder_(std::move(embedder)) {}

const NormStats& MotionDatabase::norm_stats() const {
    if (!finalized_) throw Error("motion db: stats not fitted; call finalize()");
    return stats_;
}

const MotionClip* MotionDatabase::find_clip(const std::string& id) const {
    const int i = clip_index(id);
    return i < 0 ? nullptr : &clips_[i];
}

int MotionDatabase::clip_index(const std::string& id) const {
    auto it = index_by_id_.find(id);
    return it == index_by_id_.end() ? -1 : it->second;
}

int MotionDatabase::window_index(int clip_index, int start) const {
    auto it = window_by_key_.find({clip_index, start});
    return it == window_by_key_.end() ? -1 : it->second;
}

const std::vector<int>& MotionDatabase::clip_windows(int clip_index) const {
    return windows_by_clip_[clip_index];
}

const TextEmbedding& MotionDatabase::annotation_embedding(int clip_index) const {
    return annotation_embeddings_[clip_index];
}

int MotionDatabase::partner_of(int clip_index) const {
    auto it = pair_links_.find(clip_index);
    if (it != pair_links_.end()) return it->second;
    for (const auto& [active, passive] : pair_links_) {
        if (passive == clip_index) return active;
    }
    return -1;
}

std::string MotionDatabase::ingest(MotionClip clip, const std::string& annotation,
                                   const std::optional<std::string>& pair_link) {
    clip.validate();
    if (index_by_id_.count(clip.id)) throw DuplicateId("clip id already ingested: " + clip.id);
    if (!clips_.empty()) {
        const Skeleton& a = *clips_.front().skeleton;
        const Skeleton& b = *clip.skeleton;
        if (a.joint_names != b.joint_names || a.parent_index != b.parent_index) {
            throw Error("motion db: all clips must share one skeleton");
        }
    }
    int partner_index = -1;
    if (pair_link) {
        partner_index = clip_index(*pair_link);
        if (partner_index < 0) throw DanglingPair("pair partner not ingested: " + *pair_link);
    }

    clip.annotation = annotation;
    const int index = static_cast<int>(clips_.size());
    clips_.push_back(std::move(clip));
    index_by_id_[clips_.back().id] = index;
    annotation_embeddings_.push_back(embedder_->embed(annotation));
    windows_by_clip_.emplace_back();
    if (partner_index >= 0) pair_links_[index] = partner_index;

    extract_clip_windows(index);
    if (partner_index >= 0) {
        // the partner gained a pair link; its p block needs this clip
        reextract_clip_windows(partner_index);
    }
    finalized_ = false;
    return clips_[index].id;
}

void MotionDatabase::extract_clip_windows(int clip_index) {
    const MotionClip& clip = clips_[clip_index];
    const int n = static_cast<int>(clip.frames.size());
    const int partner = partner_of(clip_index);
    const MotionClip* partner_clip = partner >= 0 ? &clips_[partner] : nullptr;
    const std::size_t width = feature_width();

    std::vector<int> starts;
    if (n >= config_.k) {
        for (int s = 0; s + config_.k <= n; s += config_.stride) starts.push_back(s);
    } else {
        starts.push_back(0);
    }
    for (int s : starts) {
        const KinematicFeature f = extract_window_feature(clip, s, config_.k, partner_clip);
        const int widx = static_cast<int>(windows_.size());
        windows_.push_back({clip_index, s});
        features_.insert(features_.end(), f.values.begin(), f.values.end());
        window_by_key_[{clip_index, s}] = widx;
        windows_by_clip_[clip_index].push_back(widx);
        (void)width;
    }
}

void MotionDatabase::reextract_clip_windows(int clip_index) {
    const MotionClip& clip = clips_[clip_index];
    const int partner = partner_of(clip_index);
    const MotionClip* partner_clip = partner >= 0 ? &clips_[partner] : nullptr;
    const std::size_t width = feature_width();
    for (int widx : windows_by_clip_[clip_index]) {
        const KinematicFeature f =
            extract_window_feature(clip, windows_[widx].start, config_.k, partner_clip);
        std::copy(f.values.begin(), f.values.end(), features_.begin() + widx * width);
    }
}

void MotionDatabase::finalize() {
    if (windows_.empty()) throw EmptyDatabase("motion db: nothing ingested");
    stats_ = fit_norm_stats(features_.data(), windows_.size(), feature_width());
    finalized_ = true;
}

// ---- binary persistence ----

namespace {

constexpr char kMagic[6] = {'D', 'L', 'P', 'D', 'B', '1'};
constexpr std::uint8_t kVersion = 1;

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i32(std::string& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw IoError("motion db file truncated");
    }
    std::uint8_t get_u8() {
        need(1);
        return static_cast<std::uint8_t>(buf[pos++]);
    }
    std::uint32_t get_u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(buf[pos++])) << (8 * i);
        return v;
    }
    std::int32_t get_i32() { return static_cast<std::int32_t>(get_u32()); }
    std::uint64_t get_u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf[pos++])) << (8 * i);
        return v;
    }
    double get_f64() { return std::bit_cast<double>(get_u64()); }
    std::string get_str() {
        const std::uint32_t n = get_u32();
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
};

std::string serialize_db(const MotionDatabase& db, const DbConfig& config,
                         const std::vector<MotionClip>& clips,
                         const std::vector<TextEmbedding>& embeddings,
                         const std::vector<WindowRef>& windows, const double* features,
                         const std::map<int, int>& pair_links, const NormStats& stats,
                         bool finalized) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u8(out, kVersion);
    put_i32(out, config.k);
    put_i32(out, config.stride);
    put_f64(out, config.fps);

    // one shared skeleton
    const Skeleton& skel = *clips.front().skeleton;
    for (int j = 0; j < kJointCount; ++j) {
        put_str(out, skel.joint_names[j]);
        put_i32(out, skel.parent_index[j]);
        put_f64(out, skel.rest_offsets[j].x);
        put_f64(out, skel.rest_offsets[j].y);
        put_f64(out, skel.rest_offsets[j].z);
    }

    put_u32(out, static_cast<std::uint32_t>(clips.size()));
    for (const auto& clip : clips) {
        put_str(out, clip.id);
        put_f64(out, clip.fps);
        put_u8(out, static_cast<std::uint8_t>(clip.category));
        put_str(out, clip.annotation);
        put_u32(out, static_cast<std::uint32_t>(clip.frames.size()));
        for (const auto& f : clip.frames) {
            put_f64(out, f.root_position.x);
            put_f64(out, f.root_position.y);
            put_f64(out, f.root_position.z);
            for (const auto& r : f.joint_rotations) {
                for (double c : r) put_f64(out, c);
            }
        }
    }

    put_u32(out, static_cast<std::uint32_t>(windows.size()));
    const std::size_t width = db.feature_width();
    for (std::size_t w = 0; w < windows.size(); ++w) {
        put_u32(out, static_cast<std::uint32_t>(windows[w].clip_index));
        put_i32(out, windows[w].start);
        for (std::size_t d = 0; d < width; ++d) put_f64(out, features[w * width + d]);
    }

    for (const auto& e : embeddings) {
        put_u32(out, static_cast<std::uint32_t>(e.values.size()));
        for (double v : e.values) put_f64(out, v);
    }

    put_u32(out, static_cast<std::uint32_t>(pair_links.size()));
    for (const auto& [active, passive] : pair_links) {
        put_u32(out, static_cast<std::uint32_t>(active));
        put_u32(out, static_cast<std::uint32_t>(passive));
    }

    put_u8(out, finalized ? 1 : 0);
    if (finalized) {
        put_u32(out, static_cast<std::uint32_t>(stats.mean.size()));
        for (double v : stats.mean) put_f64(out, v);
        for (double v : stats.stddev) put_f64(out, v);
    }
    return out;
}

}  // namespace

void MotionDatabase::save(const std::string& path) const {
    if (clips_.empty()) throw EmptyDatabase("motion db: nothing to save");
    const std::string blob = serialize_db(*this, config_, clips_, annotation_embeddings_,
                                          windows_, features_.data(), pair_links_, stats_,
                                          finalized_);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write db file: " + path);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw IoError("short write on db file: " + path);
}

MotionDatabase MotionDatabase::load(const std::string& path,
                                    std::shared_ptr<const EmbedderPort> embedder) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open db file: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r{buf};

    r.need(sizeof(kMagic));
    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
        throw IoError("not a motion db file: " + path);
    }
    r.pos = sizeof(kMagic);
    const std::uint8_t version = r.get_u8();
    if (version != kVersion) {
        throw VersionMismatch("motion db version " + std::to_string(version) +
                              " not supported");
    }

    DbConfig config;
    config.k = r.get_i32();
    config.stride = r.get_i32();
    config.fps = r.get_f64();
    MotionDatabase db(config, std::move(embedder));

    auto skeleton = std::make_shared<Skeleton>();
    for (int j = 0; j < kJointCount; ++j) {
        skeleton->joint_names.push_back(r.get_str());
        skeleton->parent_index.push_back(r.get_i32());
        Vec3 o;
        o.x = r.get_f64();
        o.y = r.get_f64();
        o.z = r.get_f64();
        skeleton->rest_offsets.push_back(o);
    }

    const std::uint32_t clip_count = r.get_u32();
    for (std::uint32_t c = 0; c < clip_count; ++c) {
        MotionClip clip;
        clip.skeleton = skeleton;
        clip.id = r.get_str();
        clip.fps = r.get_f64();
        clip.category = static_cast<ClipCategory>(r.get_u8());
        clip.annotation = r.get_str();
        const std::uint32_t frames = r.get_u32();
        clip.frames.resize(frames);
        for (auto& f : clip.frames) {
            f.root_position.x = r.get_f64();
            f.root_position.y = r.get_f64();
            f.root_position.z = r.get_f64();
            for (auto& rot : f.joint_rotations) {
                for (double& cc : rot) cc = r.get_f64();
            }
        }
        db.clips_.push_back(std::move(clip));
        db.index_by_id_[db.clips_.back().id] = static_cast<int>(c);
        db.windows_by_clip_.emplace_back();
    }

    const std::uint32_t window_count = r.get_u32();
    const std::size_t width = db.feature_width();
    db.features_.resize(window_count * width);
    for (std::uint32_t w = 0; w < window_count; ++w) {
        WindowRef ref;
        ref.clip_index = static_cast<int>(r.get_u32());
        ref.start = r.get_i32();
        db.windows_.push_back(ref);
        for (std::size_t d = 0; d < width; ++d) db.features_[w * width + d] = r.get_f64();
        db.window_by_key_[{ref.clip_index, ref.start}] = static_cast<int>(w);
        db.windows_by_clip_[ref.clip_index].push_back(static_cast<int>(w));
    }

    for (std::uint32_t c = 0; c < clip_count; ++c) {
        TextEmbedding e;
        const std::uint32_t dim = r.get_u32();
        e.values.resize(dim);
        for (auto& v : e.values) v = r.get_f64();
        db.annotation_embeddings_.push_back(std::move(e));
    }

    const std::uint32_t link_count = r.get_u32();
    for (std::uint32_t i = 0; i < link_count; ++i) {
        const int active = static_cast<int>(r.get_u32());
        const int passive = static_cast<int>(r.get_u32());
        db.pair_links_[active] = passive;
    }

    const bool finalized = r.get_u8() != 0;
    if (finalized) {
        const std::uint32_t dims = r.get_u32();
        db.stats_.mean.resize(dims);
        for (auto& v : db.stats_.mean) v = r.get_f64();
        db.stats_.stddev.resize(dims);
        for (auto& v : db.stats_.stddev) v = r.get_f64();
        db.stats_.inv_std.resize(dims);
        for (std::uint32_t d = 0; d < dims; ++d) db.stats_.inv_std[d] = 1.0 / db.stats_.stddev[d];
        db.finalized_ = true;
    }
    return db;
}

bool MotionDatabase::structurally_equal(const MotionDatabase& other) const {
    if (clips_.empty() || other.clips_.empty()) return clips_.empty() == other.clips_.empty();
    const std::string a = serialize_db(*this, config_, clips_, annotation_embeddings_, windows_,
                                       features_.data(), pair_links_, stats_, finalized_);
    const std::string b = serialize_db(other, other.config_, other.clips_,
                                       other.annotation_embeddings_, other.windows_,
                                       other.features_.data(), other.pair_links_, other.stats_,
                                       other.finalized_);
    return a == b;
}

}  // namespace dlp
