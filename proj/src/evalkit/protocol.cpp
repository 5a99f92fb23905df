#include "dlp/evalkit/protocol.hpp"

#include <cmath>

#include "dlp/evalkit/synthetic.hpp"

namespace dlp::evalkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* to_string(TrajKind k) {
    switch (k) {
        case TrajKind::wave: return "wave";
        case TrajKind::circle: return "circle";
        case TrajKind::square: return "square";
    }
    return "square";
}

TrajKind traj_kind_from_string(const std::string& s) {
    if (s == "wave" || s == "sine") return TrajKind::wave;
    if (s == "circle") return TrajKind::circle;
    if (s == "square") return TrajKind::square;
    throw DomainError("unknown trajectory kind: " + s);
}

Trajectory protocol_trajectory(const TrajProtocolConfig& config, double fps) {
    (void)fps;
    Trajectory traj;
    const double dt = 0.1;

    auto push = [&](double t, double x, double z, double dx, double dz) {
        Vec3 f{dx, 0.0, dz};
        const double n = norm(f);
        traj.samples.push_back({t, x, z, n > 1e-9 ? f * (1.0 / n) : Vec3{0, 0, 1}});
    };

    switch (config.kind) {
        case TrajKind::wave: {
            // x(t) = 2 sin(t), advancing along +z
            for (double t = 0.0; t <= config.duration + 1e-9; t += dt) {
                push(t, 2.0 * std::sin(t), config.wave_forward_speed * t, 2.0 * std::cos(t),
                     config.wave_forward_speed);
            }
            break;
        }
        case TrajKind::circle: {
            // diameter 5, starting at the origin heading +z
            const double r = 2.5;
            const double length = 2.0 * kPi * r;
            const double duration = length / config.speed;
            const double omega = 2.0 * kPi / duration;
            for (double t = 0.0; t <= duration + 1e-9; t += dt) {
                const double th = omega * t;
                push(t, r - r * std::cos(th), r * std::sin(th), r * omega * std::sin(th),
                     r * omega * std::cos(th));
            }
            break;
        }
        case TrajKind::square: {
            // side 5, starting at the origin heading +z, counter-clockwise
            const double side = 5.0;
            const double leg_time = side / config.speed;
            const Vec3 corners[5] = {{0, 0, 0}, {0, 0, side}, {side, 0, side}, {side, 0, 0},
                                     {0, 0, 0}};
            for (int leg = 0; leg < 4; ++leg) {
                const Vec3 from = corners[leg];
                const Vec3 to = corners[leg + 1];
                const Vec3 dir = normalized(to - from);
                for (double s = 0.0; s < leg_time - 1e-9; s += dt) {
                    const double u = s / leg_time;
                    push(leg * leg_time + s, from.x + (to.x - from.x) * u,
                         from.z + (to.z - from.z) * u, dir.x, dir.z);
                }
            }
            push(4 * leg_time, 0, 0, -1, 0);
            break;
        }
    }
    traj.validate();
    return traj;
}

TrajReport run_traj_protocol(const MotionDatabase& db, const TrajProtocolConfig& config,
                             std::uint64_t seed) {
    const Trajectory traj = protocol_trajectory(config, db.config().fps);
    TrajReport report;
    report.per_seed.reserve(config.n_seeds);
    for (int i = 0; i < config.n_seeds; ++i) {
        // per-seed stream independent of execution order
        Rng rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull * (i + 1));
        const Pose pose = random_seed_pose(db, rng);
        momat::FollowConfig fc = config.follow;
        fc.kinematics_enabled = config.kinematic_features_enabled;
        if (!fc.kinematics_enabled) fc.stall_check = false;
        const auto result = momat::follow_trajectory(db, pose, traj, fc, rng);
        report.per_seed.push_back(trajectory_error(result.motion, traj));
    }
    double sum = 0.0;
    for (double e : report.per_seed) sum += e;
    report.mean = sum / config.n_seeds;
    double sq = 0.0;
    for (double e : report.per_seed) sq += (e - report.mean) * (e - report.mean);
    report.stddev = std::sqrt(sq / config.n_seeds);
    return report;
}

}  // namespace dlp::evalkit
