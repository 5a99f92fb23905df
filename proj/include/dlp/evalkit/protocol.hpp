#pragma once

#include <string>
#include <vector>

#include "dlp/evalkit/metrics.hpp"
#include "dlp/momat/follow.hpp"

namespace dlp::evalkit {

enum class TrajKind { wave, circle, square };

const char* to_string(TrajKind k);
TrajKind traj_kind_from_string(const std::string& s);

struct TrajProtocolConfig {
    TrajKind kind = TrajKind::square;
    int n_seeds = 50;
    bool kinematic_features_enabled = true;
    // Shape constants: wave x(t) = 2 sin(t) advancing at wave_forward_speed,
    // square side 5 m, circle diameter 5 m.
    double duration = 30.0;          // wave traversal, seconds
    double wave_forward_speed = 1.0; // m/s along the advance axis
    double speed = 1.0;              // traversal speed for circle/square
    momat::FollowConfig follow;
};

// The reference trajectory for a protocol configuration.
Trajectory protocol_trajectory(const TrajProtocolConfig& config, double fps);

struct TrajReport {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> per_seed;
};

// Samples n_seeds seed poses (seeded rng), runs follow_trajectory per
// seed with kinematics toggled per config, aggregates the errors.
TrajReport run_traj_protocol(const MotionDatabase& db, const TrajProtocolConfig& config,
                             std::uint64_t seed);

}  // namespace dlp::evalkit
