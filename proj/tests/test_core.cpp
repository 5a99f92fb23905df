#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dlp/core/clip_io.hpp"
#include "dlp/core/error.hpp"
#include "dlp/core/rng.hpp"
#include "dlp/core/scene.hpp"
#include "dlp/core/trajectory.hpp"
#include "dlp/evalkit/synthetic.hpp"
#include "dlp/kernels.hpp"

using namespace dlp;

namespace {

Rot6 random_rot6(Rng& rng) {
    Rot6 r;
    for (double& v : r) v = rng.normal();
    // reject degenerate draws so Gram-Schmidt stays well-posed
    const Vec3 a{r[0], r[1], r[2]};
    const Vec3 b{r[3], r[4], r[5]};
    if (norm(a) < 0.1 || norm(cross(a, b)) < 0.1) return identity_rot6();
    return r;
}

Pose random_pose(Rng& rng) {
    Pose p;
    p.root_position = {rng.uniform(-3, 3), rng.uniform(0.5, 1.2), rng.uniform(-3, 3)};
    for (int j = 0; j < kJointCount; ++j) p.joint_rotations[j] = random_rot6(rng);
    return p;
}

// Independent FK oracle: per joint, walk the parent chain down from the
// root multiplying plain 3x3 arrays (no shared code with the library
// beyond the rot6 layout).
struct OracleMat {
    double m[3][3];
};

OracleMat oracle_rot(const Rot6& r) {
    double a1[3] = {r[0], r[1], r[2]};
    double a2[3] = {r[3], r[4], r[5]};
    double n1 = std::sqrt(a1[0] * a1[0] + a1[1] * a1[1] + a1[2] * a1[2]);
    double b1[3] = {a1[0] / n1, a1[1] / n1, a1[2] / n1};
    double d = b1[0] * a2[0] + b1[1] * a2[1] + b1[2] * a2[2];
    double u[3] = {a2[0] - d * b1[0], a2[1] - d * b1[1], a2[2] - d * b1[2]};
    double n2 = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    double b2[3] = {u[0] / n2, u[1] / n2, u[2] / n2};
    double b3[3] = {b1[1] * b2[2] - b1[2] * b2[1], b1[2] * b2[0] - b1[0] * b2[2],
                    b1[0] * b2[1] - b1[1] * b2[0]};
    OracleMat out;
    for (int i = 0; i < 3; ++i) {
        out.m[i][0] = b1[i];
        out.m[i][1] = b2[i];
        out.m[i][2] = b3[i];
    }
    return out;
}

OracleMat oracle_mul(const OracleMat& a, const OracleMat& b) {
    OracleMat out{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
            out.m[i][j] = s;
        }
    }
    return out;
}

Vec3 oracle_apply(const OracleMat& a, const Vec3& v) {
    return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
            a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
            a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
}

Vec3 oracle_fk_joint(const Skeleton& skel, const Pose& pose, int joint) {
    // chain of ancestors from root to joint
    std::vector<int> chain;
    for (int j = joint; j != -1; j = skel.parent_index[j]) chain.push_back(j);
    std::reverse(chain.begin(), chain.end());
    Vec3 pos = pose.root_position;
    OracleMat rot = oracle_rot(pose.joint_rotations[chain[0]]);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const int j = chain[i];
        pos = pos + oracle_apply(rot, skel.rest_offsets[j]);
        rot = oracle_mul(rot, oracle_rot(pose.joint_rotations[j]));
    }
    return pos;
}

}  // namespace

TEST_CASE("forward kinematics identity accumulates rest offsets") {
    const auto skel = evalkit::standard_skeleton();
    Pose pose = Pose::identity();
    pose.root_position = {0, 0, 0};
    const auto positions = forward_kinematics(*skel, pose);
    for (int j = 0; j < kJointCount; ++j) {
        Vec3 expected{0, 0, 0};
        for (int a = j; a != -1; a = skel->parent_index[a]) expected += skel->rest_offsets[a];
        CHECK(distance(positions[j], expected) < 1e-12);
    }
}

TEST_CASE("forward kinematics is translation equivariant") {
    const auto skel = evalkit::standard_skeleton();
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Pose pose = random_pose(rng);
        const auto base = forward_kinematics(*skel, pose);
        Pose moved = pose;
        moved.root_position += {1, 0, 0};
        const auto shifted = forward_kinematics(*skel, moved);
        for (int j = 0; j < kJointCount; ++j) {
            CHECK(std::fabs(shifted[j].x - base[j].x - 1.0) < 1e-9);
            CHECK(std::fabs(shifted[j].y - base[j].y) < 1e-9);
            CHECK(std::fabs(shifted[j].z - base[j].z) < 1e-9);
        }
    }
}

TEST_CASE("forward kinematics matches the matrix-chain oracle") {
    const auto skel = evalkit::standard_skeleton();
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const Pose pose = random_pose(rng);
        const auto positions = forward_kinematics(*skel, pose);
        for (int j = 0; j < kJointCount; ++j) {
            CHECK(distance(positions[j], oracle_fk_joint(*skel, pose, j)) < 1e-6);
        }
    }
}

TEST_CASE("degenerate 6D rotation is rejected") {
    Rot6 bad{1, 0, 0, 2, 0, 0};  // parallel columns
    CHECK_THROWS_AS(rot6_to_mat(bad), MalformedRotation);
    Rot6 zero{0, 0, 0, 0, 1, 0};
    CHECK_THROWS_AS(rot6_to_mat(zero), MalformedRotation);
}

TEST_CASE("gram-schmidt yields proper rotations") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat3 m = rot6_to_mat(random_rot6(rng));
        CHECK(std::fabs(det(m) - 1.0) < 1e-6);
    }
}

TEST_CASE("joint distance tensor zero and rigid-offset cases") {
    // coincident single-point motions: every entry is 0; after a 2 m
    // shift on x every entry is exactly 2 (kernel-level constructions)
    const double coincident[6] = {0.4, 0.9, -0.2, 0.4, 0.9, -0.2};  // 2 frames x 1 joint
    double out[2];
    kernels::serial::pairwise_distances(coincident, coincident, 2, 1, 1, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);

    const double shifted_b[6] = {2.4, 0.9, -0.2, 2.4, 0.9, -0.2};
    kernels::serial::pairwise_distances(coincident, shifted_b, 2, 1, 1, out);
    CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(2.0).epsilon(1e-12));

    // clip-level: a motion against itself has zero same-joint entries
    const auto skel = evalkit::standard_skeleton();
    MotionClip a;
    a.id = "a";
    a.skeleton = skel;
    a.fps = 30;
    Rng rng(5);
    for (int i = 0; i < 4; ++i) a.frames.push_back(random_pose(rng));
    const auto self = joint_distance_tensor(a, a);
    for (int i = 0; i < self.frames; ++i) {
        for (int j = 0; j < kJointCount; ++j) CHECK(self.at(i, j, j) == 0.0);
    }

    MotionClip b = a;
    b.id = "b";
    for (auto& f : b.frames) f.root_position += {2, 0, 0};
    const auto shifted = joint_distance_tensor(a, b);
    for (int i = 0; i < shifted.frames; ++i) {
        for (int j = 0; j < kJointCount; ++j) {
            CHECK(shifted.at(i, j, j) == doctest::Approx(2.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("joint distance tensor matches elementwise computation") {
    // 2 frames x 2 joints through the kernel directly
    const double a[12] = {0, 0, 0, 1, 0, 0, /* frame 2 */ 0, 1, 0, 2, 2, 2};
    const double b[12] = {1, 0, 0, 0, 0, 1, /* frame 2 */ 0, 0, 0, 1, 1, 1};
    double out[8];
    kernels::serial::pairwise_distances(a, b, 2, 2, 2, out);
    CHECK(out[0] == doctest::Approx(1.0));                  // (0,0,0)-(1,0,0)
    CHECK(out[1] == doctest::Approx(1.0));                  // (0,0,0)-(0,0,1)
    CHECK(out[2] == doctest::Approx(0.0));                  // (1,0,0)-(1,0,0)
    CHECK(out[3] == doctest::Approx(std::sqrt(2.0)));       // (1,0,0)-(0,0,1)
    CHECK(out[4] == doctest::Approx(1.0));                  // (0,1,0)-(0,0,0)
    CHECK(out[7] == doctest::Approx(std::sqrt(3.0)));       // (2,2,2)-(1,1,1)
}

TEST_CASE("joint distance tensor symmetry under swap") {
    const auto skel = evalkit::standard_skeleton();
    Rng rng(31);
    MotionClip a, b;
    a.skeleton = b.skeleton = skel;
    a.id = "a";
    b.id = "b";
    a.fps = b.fps = 30;
    for (int i = 0; i < 3; ++i) {
        a.frames.push_back(random_pose(rng));
        b.frames.push_back(random_pose(rng));
    }
    const auto ab = joint_distance_tensor(a, b);
    const auto ba = joint_distance_tensor(b, a);
    for (int i = 0; i < 3; ++i) {
        for (int j1 = 0; j1 < kJointCount; ++j1) {
            for (int j2 = 0; j2 < kJointCount; ++j2) {
                CHECK(ab.at(i, j1, j2) == ba.at(i, j2, j1));
            }
        }
    }
}

TEST_CASE("joint distance tensor rejects length mismatch") {
    const auto skel = evalkit::standard_skeleton();
    MotionClip a, b;
    a.skeleton = b.skeleton = skel;
    a.id = "a";
    b.id = "b";
    a.fps = b.fps = 30;
    a.frames.assign(3, Pose::identity());
    b.frames.assign(4, Pose::identity());
    CHECK_THROWS_AS(joint_distance_tensor(a, b), LengthMismatch);
}

TEST_CASE("resample identity at matching fps") {
    const MotionClip clip = evalkit::make_walk_clip("w", 1.2, 0.3, 2.0);
    const MotionClip out = resample(clip, clip.fps);
    REQUIRE(out.frames.size() == clip.frames.size());
    for (std::size_t i = 0; i < out.frames.size(); ++i) {
        CHECK(distance(out.frames[i].root_position, clip.frames[i].root_position) == 0.0);
    }
}

TEST_CASE("downsampling linear motion stays on the segment") {
    const auto skel = evalkit::standard_skeleton();
    MotionClip clip;
    clip.id = "line";
    clip.skeleton = skel;
    clip.fps = 60;
    for (int i = 0; i <= 60; ++i) {
        Pose p = Pose::identity();
        p.root_position = {i / 60.0, 0.9, 0.0};
        clip.frames.push_back(p);
    }
    const MotionClip out = resample(clip, 30);
    for (const auto& f : out.frames) {
        CHECK(f.root_position.y == doctest::Approx(0.9));
        CHECK(f.root_position.z == doctest::Approx(0.0));
        CHECK(f.root_position.x >= -1e-12);
        CHECK(f.root_position.x <= 1.0 + 1e-12);
    }
    CHECK(out.frames.size() == 31);
}

TEST_CASE("resample round trip on smooth input") {
    const MotionClip clip = evalkit::make_walk_clip("smooth", 1.0, 0.4, 2.0);
    const MotionClip up = resample(clip, 90);
    const MotionClip back = resample(up, 30);
    REQUIRE(back.frames.size() == clip.frames.size());
    double max_err = 0.0;
    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        const auto pa = forward_kinematics(*clip.skeleton, clip.frames[i]);
        const auto pb = forward_kinematics(*clip.skeleton, back.frames[i]);
        for (int j = 0; j < kJointCount; ++j) max_err = std::max(max_err, distance(pa[j], pb[j]));
    }
    CHECK(max_err < 1e-4);
}

TEST_CASE("resample preserves the first and last frames") {
    const MotionClip clip = evalkit::make_walk_clip("ends", 1.4, -0.5, 3.0);
    for (double fps : {15.0, 45.0, 90.0}) {
        const MotionClip out = resample(clip, fps);
        CHECK(distance(out.frames.front().root_position, clip.frames.front().root_position) <
              1e-6);
        CHECK(distance(out.frames.back().root_position, clip.frames.back().root_position) < 1e-6);
    }
}

TEST_CASE("clip json round trip") {
    const MotionClip clip = evalkit::make_walk_clip("json_rt", 0.9, 0.2, 1.0);
    const std::string text = clip_to_json_text(clip);
    const MotionClip back = clip_from_json_text(text);
    REQUIRE(back.frames.size() == clip.frames.size());
    CHECK(back.id == clip.id);
    CHECK(back.fps == clip.fps);
    CHECK(back.category == clip.category);
    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        CHECK(back.frames[i].root_position.x == clip.frames[i].root_position.x);
        for (int j = 0; j < kJointCount; ++j) {
            for (int c = 0; c < 6; ++c) {
                CHECK(back.frames[i].joint_rotations[j][c] ==
                      clip.frames[i].joint_rotations[j][c]);
            }
        }
    }
}

TEST_CASE("character frame round trips points") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const Pose pose = random_pose(rng);
        const CharacterFrame frame = frame_of(pose);
        const Vec3 world{rng.uniform(-5, 5), rng.uniform(0, 2), rng.uniform(-5, 5)};
        const Vec3 back = frame.to_world(frame.to_local(world));
        CHECK(distance(world, back) < 1e-9);
    }
}

TEST_CASE("align_frames maps one frame onto another") {
    Rng rng(78);
    for (int trial = 0; trial < 50; ++trial) {
        const Pose a = random_pose(rng);
        const Pose b = random_pose(rng);
        const CharacterFrame fa = frame_of(a);
        const CharacterFrame fb = frame_of(b);
        const GroundTransform t = align_frames(fa, fb);
        CHECK(distance(t.apply_point(fa.origin), fb.origin) < 1e-9);
        CHECK(distance(t.apply_dir(fa.forward), fb.forward) < 1e-9);
        // transform_pose agrees with the frame mapping
        const Pose placed = transform_pose(a, t);
        const CharacterFrame fp = frame_of(placed);
        CHECK(distance(fp.origin, fb.origin) < 1e-9);
        CHECK(distance(fp.forward, fb.forward) < 1e-9);
    }
}

TEST_CASE("trajectory validation and interpolation") {
    Trajectory t;
    t.samples = {{0.0, 0, 0, {0, 0, 1}}, {1.0, 1, 0, {0, 0, 1}}, {2.0, 1, 2, {1, 0, 0}}};
    t.validate();
    const auto mid = t.at(0.5);
    CHECK(mid.x == doctest::Approx(0.5));
    CHECK(mid.z == doctest::Approx(0.0));
    CHECK(t.at(-1.0).x == doctest::Approx(0.0));
    CHECK(t.at(9.0).z == doctest::Approx(2.0));

    Trajectory bad = t;
    bad.samples[1].time = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    Trajectory bad2 = t;
    bad2.samples[0].facing = {0, 0, 2};
    CHECK_THROWS_AS(bad2.validate(), DomainError);
}

TEST_CASE("scene json and spot validation") {
    const char* text = R"({
      "grid": {"width": 8, "height": 8, "cell_size": 0.5, "blocked": [[7,7]]},
      "spots": [
        {"name": "center", "position": [2.0, 0.0, 2.0], "facing": [0,0,1], "basic_state": "standing"},
        {"name": "sofa", "position": [0.75, 0.0, 0.75], "facing": [0,0,1], "basic_state": "seated"}
      ]
    })";
    const Scene scene = scene_from_json_text(text);
    CHECK(scene.spots.size() == 2);
    CHECK(scene.find_spot("sofa") != nullptr);
    CHECK(scene.find_spot("missing") == nullptr);
    const auto cell = scene.grid.nearest_free_cell({3.9, 0, 3.9});
    CHECK(scene.grid.free_cell(cell.first, cell.second));

    // spot on a blocked cell fails validation
    Scene bad = scene;
    bad.grid.blocked.insert(bad.grid.cell_of(bad.spots[0].position));
    CHECK_THROWS_AS(bad.validate(), Error);

    const Scene round = scene_from_json_text(scene_to_json_text(scene));
    CHECK(round.spots.size() == scene.spots.size());
}
