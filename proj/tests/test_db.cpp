#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dlp/db/motion_database.hpp"
#include "dlp/evalkit/synthetic.hpp"
#include "dlp/kernels.hpp"

using namespace dlp;
namespace fs = std::filesystem;

namespace {

MotionClip frames_clip(const std::string& id, int frames) {
    MotionClip clip = evalkit::make_walk_clip(id, 1.0, 0.2, (frames - 1) / 30.0);
    clip.frames.resize(frames, clip.frames.back());
    return clip;
}

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("window extraction counts") {
    MotionDatabase db({30, 10, 30.0});
    db.ingest(frames_clip("ninety", 90), "walk");
    // floor((90-30)/10)+1 = 7 windows, starts 0..60
    CHECK(db.window_count() == 7);
    CHECK(db.window(0).start == 0);
    CHECK(db.window(6).start == 60);

    db.ingest(frames_clip("short", 12), "stub");
    CHECK(db.window_count() == 8);  // short clip clamp-pads into one window
    CHECK(db.window(7).start == 0);
}

TEST_CASE("duplicate ids and dangling pairs are rejected") {
    MotionDatabase db({30, 10, 30.0});
    db.ingest(frames_clip("a", 40), "walk");
    CHECK_THROWS_AS(db.ingest(frames_clip("a", 40), "walk"), DuplicateId);
    CHECK_THROWS_AS(db.ingest(frames_clip("b", 40), "walk", "missing"), DanglingPair);
}

TEST_CASE("feature length is 5k+193") {
    CHECK(KinematicFeature::length_for(30) == 343);
    CHECK(KinematicFeature::length_for(10) == 243);
    MotionDatabase db({30, 10, 30.0});
    db.ingest(frames_clip("a", 60), "walk");
    CHECK(db.feature_width() == 343);
}

TEST_CASE("query feature conventions") {
    const auto skel = evalkit::standard_skeleton();
    const Pose pose = evalkit::standing_pose();  // at origin, facing +z

    SUBCASE("partner directly ahead maps to local (0,0,1)") {
        const auto f = extract_query_feature(*skel, pose, nullptr, Vec3{0, 0, 1}, 30, 30.0);
        const FeatureLayout layout{30};
        CHECK(f.values[layout.p_off()] == doctest::Approx(0.0));
        CHECK(f.values[layout.p_off() + 1] == doctest::Approx(0.0));
        CHECK(f.values[layout.p_off() + 2] == doctest::Approx(1.0));
    }

    SUBCASE("straight +x trajectory gives increasing first coordinates") {
        Trajectory traj;
        for (int i = 0; i <= 40; ++i) traj.samples.push_back({i / 30.0, i / 30.0, 0.0, {1, 0, 0}});
        const auto f = extract_query_feature(*skel, pose, &traj, std::nullopt, 30, 30.0);
        const FeatureLayout layout{30};
        for (int s = 0; s < 30; ++s) {
            CHECK(f.values[layout.t_off() + 2 * s] == doctest::Approx(s / 30.0));
            CHECK(f.values[layout.t_off() + 2 * s + 1] == doctest::Approx(0.0));
        }
    }

    SUBCASE("no trajectory means a stationary window") {
        const auto f = extract_query_feature(*skel, pose, nullptr, std::nullopt, 30, 30.0);
        const FeatureLayout layout{30};
        for (int s = 0; s < 30; ++s) {
            CHECK(f.values[layout.t_off() + 2 * s] == doctest::Approx(0.0));
            CHECK(f.values[layout.t_off() + 2 * s + 1] == doctest::Approx(0.0));
        }
        CHECK(f.values[layout.h_off()] == doctest::Approx(0.95));
    }
}

TEST_CASE("norm stats hand values") {
    // single column (1,2,3): mean 2, population std sqrt(2/3)
    const double data[3] = {1, 2, 3};
    const NormStats stats = fit_norm_stats(data, 3, 1);
    CHECK(stats.mean[0] == doctest::Approx(2.0));
    CHECK(stats.stddev[0] == doctest::Approx(0.8164965809));
    CHECK((1.0 - stats.mean[0]) * stats.inv_std[0] == doctest::Approx(-1.2247448714));
    CHECK((3.0 - stats.mean[0]) * stats.inv_std[0] == doctest::Approx(1.2247448714));
}

TEST_CASE("constant columns floor to unit std") {
    const double data[6] = {5, 1, 5, 2, 5, 3};  // col0 constant, col1 = 1,2,3
    const NormStats stats = fit_norm_stats(data, 3, 2);
    CHECK(stats.stddev[0] == 1.0);
    CHECK((5.0 - stats.mean[0]) * stats.inv_std[0] == 0.0);
    CHECK(stats.stddev[1] == doctest::Approx(0.8164965809));
    CHECK_THROWS_AS(fit_norm_stats(data, 0, 2), EmptyDatabase);
}

TEST_CASE("z-score contract on a built database") {
    const MotionDatabase db = evalkit::build_locomotion_db(3, {30, 10, 30.0});
    const NormStats& stats = db.norm_stats();
    const std::size_t n = db.window_count();
    const std::size_t width = db.feature_width();

    // identify degenerate dims from the raw moments
    std::vector<double> raw_mean(width), raw_std(width);
    kernels::serial::column_moments(db.window_features(), n, width, raw_mean.data(),
                                    raw_std.data());
    for (std::size_t d = 0; d < width; ++d) {
        double sum = 0.0;
        for (std::size_t w = 0; w < n; ++w) {
            sum += (db.window_feature(w)[d] - stats.mean[d]) * stats.inv_std[d];
        }
        const double mean = sum / static_cast<double>(n);
        CHECK(std::fabs(mean) < 1e-9);
        double sq = 0.0;
        for (std::size_t w = 0; w < n; ++w) {
            const double v = (db.window_feature(w)[d] - stats.mean[d]) * stats.inv_std[d] - mean;
            sq += v * v;
        }
        const double std_ = std::sqrt(sq / static_cast<double>(n));
        if (raw_std[d] >= 1e-8) {
            CHECK(std::fabs(std_ - 1.0) < 1e-9);
        } else {
            CHECK(std_ < 1e-8);
        }
    }
}

TEST_CASE("length penalized similarity") {
    HashedEmbedder embedder(128);
    const auto a = embedder.embed("wave both arms");
    const auto b = embedder.embed("wave both arms");
    // equal lengths: plain cosine
    CHECK(length_penalized_similarity(a, b, 40, 40, 1.0) == doctest::Approx(1.0));
    // l_i = 2L, lambda 1, cosine 1 -> e^-0.5
    CHECK(length_penalized_similarity(a, b, 80, 40, 1.0) == doctest::Approx(std::exp(-0.5)));
    // zero cosine stays zero regardless of lengths
    TextEmbedding ex{{1, 0}};
    TextEmbedding ey{{0, 1}};
    CHECK(length_penalized_similarity(ex, ey, 10, 90, 3.0) == 0.0);
    CHECK_THROWS_AS(length_penalized_similarity(a, b, 0, 40, 1.0), DomainError);
}

TEST_CASE("persistence round trip is bit exact") {
    MotionDatabase db({20, 5, 30.0});
    db.ingest(frames_clip("walk1", 60), "walk forward");
    db.ingest(frames_clip("walk2", 45), "walk fast");
    const auto pair = evalkit::make_interaction_pair("hs", "shake hands");
    const std::string pid = db.ingest(MotionClip(pair.passive), "shake hands");
    db.ingest(MotionClip(pair.active), "shake hands", pid);
    db.finalize();

    const std::string path = temp_path("dlp_test_db.bin");
    db.save(path);
    const MotionDatabase loaded = MotionDatabase::load(path);
    CHECK(db.structurally_equal(loaded));
    CHECK(loaded.window_count() == db.window_count());
    CHECK(loaded.pair_links().size() == 1);
    for (std::size_t w = 0; w < db.window_count(); ++w) {
        for (std::size_t d = 0; d < db.feature_width(); ++d) {
            CHECK(loaded.window_feature(w)[d] == db.window_feature(w)[d]);
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("truncated and future-version files are rejected") {
    MotionDatabase db({20, 5, 30.0});
    db.ingest(frames_clip("walk1", 60), "walk forward");
    db.finalize();
    const std::string path = temp_path("dlp_test_db_corrupt.bin");
    db.save(path);

    std::string blob;
    {
        std::ifstream in(path, std::ios::binary);
        blob.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    {
        std::ofstream out(path, std::ios::binary);
        out.write(blob.data(), static_cast<std::streamsize>(blob.size() / 2));
    }
    CHECK_THROWS_AS(MotionDatabase::load(path), IoError);

    {
        std::string bumped = blob;
        bumped[6] = 9;  // version byte after the magic
        std::ofstream out(path, std::ios::binary);
        out.write(bumped.data(), static_cast<std::streamsize>(bumped.size()));
    }
    CHECK_THROWS_AS(MotionDatabase::load(path), VersionMismatch);

    {
        std::string wrong = blob;
        wrong[0] = 'X';
        std::ofstream out(path, std::ios::binary);
        out.write(wrong.data(), static_cast<std::streamsize>(wrong.size()));
    }
    CHECK_THROWS_AS(MotionDatabase::load(path), IoError);
    std::remove(path.c_str());
}

TEST_CASE("interactive pair features see the partner") {
    MotionDatabase db({30, 10, 30.0});
    const auto pair = evalkit::make_interaction_pair("hs", "shake hands", 0.0, 0.9);
    const std::string pid = db.ingest(MotionClip(pair.passive), "shake hands");
    db.ingest(MotionClip(pair.active), "shake hands", pid);
    db.finalize();

    const FeatureLayout layout{30};
    const int active_index = db.clip_index("hs_a");
    REQUIRE(active_index >= 0);
    CHECK(db.partner_of(active_index) == db.clip_index("hs_b"));
    const int w = db.clip_windows(active_index).front();
    const double* f = db.window_feature(w);
    // partner stands 0.9 m dead ahead at hip height
    CHECK(f[layout.p_off()] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(f[layout.p_off() + 2] == doctest::Approx(0.9));
    // and the passive clip's windows see the active partner back
    const int wp = db.clip_windows(db.clip_index("hs_b")).front();
    const double* fp = db.window_feature(wp);
    CHECK(fp[layout.p_off() + 2] == doctest::Approx(0.9));
}
