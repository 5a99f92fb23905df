#include "dlp/evalkit/synthetic.hpp"

#include <cmath>

namespace dlp::evalkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHipHeight = 0.95;
constexpr double kSeatHeight = 0.55;

Mat3 rotation_x(double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    Mat3 m;
    m.m = {1, 0, 0, 0, c, -s, 0, s, c};
    return m;
}

Mat3 rotation_z(double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    Mat3 m;
    m.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return m;
}

enum Joint {
    Pelvis = 0,
    Spine,
    Chest,
    Neck,
    Head,
    LCollar,
    LShoulder,
    LElbow,
    LWrist,
    RCollar,
    RShoulder,
    RElbow,
    RWrist,
    LHip,
    LKnee,
    LAnkle,
    LFoot,
    RHip,
    RKnee,
    RAnkle,
    RFoot,
};

}  // namespace

SkeletonRef standard_skeleton() {
    static const SkeletonRef skeleton = [] {
        auto s = std::make_shared<Skeleton>();
        auto add = [&](const char* name, int parent, Vec3 offset) {
            s->joint_names.push_back(name);
            s->parent_index.push_back(parent);
            s->rest_offsets.push_back(offset);
        };
        add("pelvis", -1, {0, 0, 0});
        add("spine", Pelvis, {0, 0.12, 0});
        add("chest", Spine, {0, 0.14, 0});
        add("neck", Chest, {0, 0.12, 0});
        add("head", Neck, {0, 0.10, 0});
        add("l_collar", Chest, {-0.06, 0.08, 0});
        add("l_shoulder", LCollar, {-0.12, 0, 0});
        add("l_elbow", LShoulder, {-0.26, 0, 0});
        add("l_wrist", LElbow, {-0.25, 0, 0});
        add("r_collar", Chest, {0.06, 0.08, 0});
        add("r_shoulder", RCollar, {0.12, 0, 0});
        add("r_elbow", RShoulder, {0.26, 0, 0});
        add("r_wrist", RElbow, {0.25, 0, 0});
        add("l_hip", Pelvis, {-0.09, -0.06, 0});
        add("l_knee", LHip, {0, -0.42, 0});
        add("l_ankle", LKnee, {0, -0.42, 0});
        add("l_foot", LAnkle, {0, -0.05, 0.12});
        add("r_hip", Pelvis, {0.09, -0.06, 0});
        add("r_knee", RHip, {0, -0.42, 0});
        add("r_ankle", RKnee, {0, -0.42, 0});
        add("r_foot", RAnkle, {0, -0.05, 0.12});
        s->validate();
        return s;
    }();
    return skeleton;
}

Pose standing_pose(double heading, const Vec3& ground_position) {
    Pose p = Pose::identity();
    p.root_position = {ground_position.x, kHipHeight, ground_position.z};
    p.joint_rotations[Pelvis] = mat_to_rot6(Mat3::rotation_y(heading));
    return p;
}

Pose seated_pose(double heading, const Vec3& ground_position) {
    Pose p = Pose::identity();
    p.root_position = {ground_position.x, kSeatHeight, ground_position.z};
    p.joint_rotations[Pelvis] = mat_to_rot6(Mat3::rotation_y(heading));
    const Rot6 thigh = mat_to_rot6(rotation_x(-kPi / 2));
    const Rot6 shin = mat_to_rot6(rotation_x(kPi / 2));
    p.joint_rotations[LHip] = thigh;
    p.joint_rotations[RHip] = thigh;
    p.joint_rotations[LKnee] = shin;
    p.joint_rotations[RKnee] = shin;
    return p;
}

namespace {

// Sinusoidal limb swing on top of a heading-aligned root.
void apply_gait(Pose& pose, double stride_phase, double swing) {
    const double leg = swing * std::sin(stride_phase);
    pose.joint_rotations[LHip] = mat_to_rot6(rotation_x(leg));
    pose.joint_rotations[RHip] = mat_to_rot6(rotation_x(-leg));
    const double knee_l = swing * 0.8 * std::max(0.0, -std::sin(stride_phase - 0.6));
    const double knee_r = swing * 0.8 * std::max(0.0, std::sin(stride_phase - 0.6));
    pose.joint_rotations[LKnee] = mat_to_rot6(rotation_x(knee_l));
    pose.joint_rotations[RKnee] = mat_to_rot6(rotation_x(knee_r));
    const double arm = 0.5 * swing * std::sin(stride_phase);
    pose.joint_rotations[LShoulder] = mat_to_rot6(rotation_x(-arm));
    pose.joint_rotations[RShoulder] = mat_to_rot6(rotation_x(arm));
}

}  // namespace

MotionClip make_walk_clip(const std::string& id, double speed, double turn_rate,
                          double duration, double fps, double phase, double heading0) {
    MotionClip clip;
    clip.id = id;
    clip.skeleton = standard_skeleton();
    clip.fps = fps;
    clip.category = ClipCategory::basic;

    const int frames = static_cast<int>(std::lround(duration * fps)) + 1;
    const double dt = 1.0 / fps;
    const double stride_freq = 2.0 * kPi * 1.4 * std::max(0.6, speed / 1.2);
    const double swing = 0.55 * std::min(1.0, speed / 1.5);

    double heading = heading0;
    Vec3 pos{0, 0, 0};
    for (int i = 0; i < frames; ++i) {
        const double t = i * dt;
        Pose p = Pose::identity();
        const double bob = speed > 0.05 ? 0.02 * std::sin(2.0 * (stride_freq * t + phase)) : 0.0;
        p.root_position = {pos.x, kHipHeight + bob, pos.z};
        p.joint_rotations[Pelvis] = mat_to_rot6(Mat3::rotation_y(heading));
        apply_gait(p, stride_freq * t + phase, swing);
        clip.frames.push_back(p);

        const double mid = heading + 0.5 * turn_rate * dt;
        pos.x += speed * dt * std::sin(mid);
        pos.z += speed * dt * std::cos(mid);
        heading += turn_rate * dt;
    }
    return clip;
}

MotionClip make_idle_clip(const std::string& id, bool seated, double duration, double fps) {
    MotionClip clip;
    clip.id = id;
    clip.skeleton = standard_skeleton();
    clip.fps = fps;
    clip.category = ClipCategory::basic;
    const int frames = static_cast<int>(std::lround(duration * fps)) + 1;
    for (int i = 0; i < frames; ++i) {
        const double t = i / fps;
        Pose p = seated ? seated_pose() : standing_pose();
        p.root_position.y += 0.005 * std::sin(2.0 * kPi * 0.25 * t);
        const double sway = 0.03 * std::sin(2.0 * kPi * 0.2 * t);
        p.joint_rotations[Spine] = mat_to_rot6(rotation_z(sway));
        clip.frames.push_back(p);
    }
    return clip;
}

MotionClip make_transition_clip(const std::string& id, bool stand_up, double duration,
                                double fps) {
    MotionClip clip;
    clip.id = id;
    clip.skeleton = standard_skeleton();
    clip.fps = fps;
    clip.category = ClipCategory::basic;
    const int frames = static_cast<int>(std::lround(duration * fps)) + 1;
    for (int i = 0; i < frames; ++i) {
        const double u = frames == 1 ? 1.0 : static_cast<double>(i) / (frames - 1);
        const double a = smoothstep(stand_up ? u : 1.0 - u);  // 0 = seated, 1 = standing
        Pose seated = seated_pose();
        Pose standing = standing_pose();
        Pose p = Pose::identity();
        p.root_position = lerp(seated.root_position, standing.root_position, a);
        for (int j = 0; j < kJointCount; ++j) {
            p.joint_rotations[j] =
                slerp_rot6(seated.joint_rotations[j], standing.joint_rotations[j], a);
        }
        clip.frames.push_back(p);
    }
    return clip;
}

PairClips make_interaction_pair(const std::string& id_prefix, const std::string& annotation,
                                double bearing, double distance, double arm_raise,
                                double duration, double fps) {
    PairClips pair;
    const int frames = static_cast<int>(std::lround(duration * fps)) + 1;

    const Vec3 partner_pos{distance * std::sin(bearing), 0.0, distance * std::cos(bearing)};
    const double partner_heading = bearing + kPi;  // face back toward the active character

    auto build = [&](bool is_active) {
        MotionClip clip;
        clip.id = id_prefix + (is_active ? "_a" : "_b");
        clip.skeleton = standard_skeleton();
        clip.fps = fps;
        clip.category = ClipCategory::interactive;
        for (int i = 0; i < frames; ++i) {
            const double u = frames == 1 ? 1.0 : static_cast<double>(i) / (frames - 1);
            const double reach = arm_raise * std::sin(kPi * std::min(1.0, u * 1.2));
            Pose p = is_active ? standing_pose(bearing, {0, 0, 0})
                               : standing_pose(partner_heading, partner_pos);
            // raise the right arm toward the partner
            p.joint_rotations[RShoulder] = mat_to_rot6(rotation_x(-reach));
            p.joint_rotations[RElbow] = mat_to_rot6(rotation_x(-0.3 * reach));
            clip.frames.push_back(p);
        }
        return clip;
    };
    pair.active = build(true);
    pair.passive = build(false);
    pair.active.annotation = annotation;
    pair.passive.annotation = annotation;
    return pair;
}

namespace {

void ingest_locomotion(MotionDatabase& db, Rng& rng) {
    const double speeds[] = {0.5, 0.8, 1.1, 1.4, 1.8, 2.3};
    const double turns_deg[] = {0, 20, -20, 45, -45, 75, -75, 110, -110, 150, -150};
    int n = 0;
    for (double v : speeds) {
        for (double t : turns_deg) {
            const std::string dir = t > 0 ? "turning right" : (t < 0 ? "turning left" : "straight");
            const std::string pace = v < 0.9 ? "walk slowly" : (v < 1.6 ? "walk" : "jog");
            db.ingest(make_walk_clip("walk_" + std::to_string(n++), v, t * kPi / 180.0),
                      pace + " " + dir);
        }
    }
    // jittered variants for corpus density
    for (int i = 0; i < 110; ++i) {
        const double v = 0.4 + 2.0 * rng.uniform();
        const double t = (rng.uniform() * 2.0 - 1.0) * 160.0;
        const double phase = rng.uniform() * 2.0 * kPi;
        const std::string pace = v < 0.9 ? "walk slowly" : (v < 1.6 ? "walk" : "jog");
        db.ingest(make_walk_clip("walkvar_" + std::to_string(i), v, t * kPi / 180.0, 4.0, 30.0,
                                 phase),
                  pace);
    }
    // ramps: accelerate from rest
    for (int i = 0; i < 6; ++i) {
        const double v = 0.6 + 0.3 * i;
        MotionClip ramp = make_walk_clip("ramp_" + std::to_string(i), v, 0.0, 4.0, 30.0);
        // scale early root motion toward a standing start
        for (std::size_t f = 0; f < ramp.frames.size(); ++f) {
            const double u = std::min(1.0, f / (ramp.fps * 1.0));
            ramp.frames[f].root_position.x *= u;
            ramp.frames[f].root_position.z *= u;
        }
        db.ingest(std::move(ramp), "start walking");
    }
    // turning in place
    const double spins_deg[] = {45, -45, 90, -90, 135, -135};
    for (std::size_t i = 0; i < std::size(spins_deg); ++i) {
        db.ingest(make_walk_clip("spin_" + std::to_string(i), 0.05, spins_deg[i] * kPi / 180.0),
                  "turn in place");
    }
    db.ingest(make_idle_clip("idle_stand", false), "standing idle");
    db.ingest(make_idle_clip("idle_sit", true), "seated idle");
    db.ingest(make_transition_clip("stand_up", true), "stand up");
    db.ingest(make_transition_clip("sit_down", false), "sit down");
}

void ingest_interactions(MotionDatabase& db) {
    struct Spec {
        const char* id;
        const char* annotation;
        double bearing;
        double distance;
        double raise;
    };
    const Spec specs[] = {
        {"handshake", "shake hands", 0.0, 0.9, 0.9},
        {"highfive", "high five", 0.0, 0.8, 1.6},
        {"fistbump", "fist bump", 0.0, 0.8, 1.1},
        {"hug", "hug warmly", 0.0, 0.5, 1.3},
        {"bow", "bow politely", 0.0, 1.1, 0.4},
        {"wave_greet", "waves right hand", 0.0, 1.2, 1.5},
        {"handshake_l", "shake hands on the left", -0.7, 0.9, 0.9},
        {"handshake_r", "shake hands on the right", 0.7, 0.9, 0.9},
    };
    for (const auto& s : specs) {
        PairClips pair = make_interaction_pair(s.id, s.annotation, s.bearing, s.distance,
                                               s.raise);
        const std::string passive_id = db.ingest(std::move(pair.passive), s.annotation);
        db.ingest(std::move(pair.active), s.annotation, passive_id);
    }
}

}  // namespace

MotionDatabase build_locomotion_db(std::uint64_t seed, DbConfig config,
                                   std::shared_ptr<const EmbedderPort> embedder) {
    MotionDatabase db(config, std::move(embedder));
    Rng rng(seed);
    ingest_locomotion(db, rng);
    db.finalize();
    return db;
}

MotionDatabase build_full_db(std::uint64_t seed, DbConfig config,
                             std::shared_ptr<const EmbedderPort> embedder) {
    MotionDatabase db(config, std::move(embedder));
    Rng rng(seed);
    ingest_locomotion(db, rng);
    ingest_interactions(db);
    db.finalize();
    return db;
}

Pose random_seed_pose(const MotionDatabase& db, Rng& rng) {
    const std::size_t w = rng.uniform_index(db.window_count());
    const WindowRef& ref = db.window(w);
    const MotionClip& clip = db.clip(ref.clip_index);
    const int idx = std::min(ref.start, static_cast<int>(clip.frames.size()) - 1);
    return clip.frames[idx];
}

}  // namespace dlp::evalkit
