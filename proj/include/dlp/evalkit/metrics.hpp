#pragma once

#include <vector>

#include "dlp/core/skeleton.hpp"
#include "dlp/core/trajectory.hpp"
#include "dlp/mogen/diffusion.hpp"

namespace dlp::evalkit {

// Mean over frames of the ground-plane distance between the hip
// projection and the trajectory point at the frame's timestamp.
double trajectory_error(const MotionClip& motion, const Trajectory& target);

struct ContactPreservation {
    std::size_t active_set_count = 0;
    double mean_abs_error = 0.0;  // reported as 0 when the active set is empty
    bool empty_active_set = false;
};

// |Dbar - D| summary over the reference's active set (Dbar < gamma).
ContactPreservation contact_preservation(const mogen::MotionPairTensor& refined,
                                         const mogen::MotionPairTensor& reference,
                                         double gamma);

// Mean over unordered motion pairs of the frame-averaged RMS joint
// distance. Motions are flat frames x joints x 3 position arrays of
// equal shape; requires at least two.
double diversity_proxy(const std::vector<std::vector<double>>& motions, int frames, int joints);

// Flat joint positions of a clip (forward kinematics per frame).
std::vector<double> clip_positions(const MotionClip& clip);

}  // namespace dlp::evalkit
