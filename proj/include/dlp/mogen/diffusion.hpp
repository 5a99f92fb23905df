#pragma once

#include <functional>
#include <vector>

#include "dlp/core/error.hpp"
#include "dlp/core/rng.hpp"

namespace dlp::mogen {

struct NoiseSchedule {
    int steps = 0;                  // T
    std::vector<double> betas;      // beta_1 .. beta_T (index 0 = t=1)
    std::vector<double> alphas;     // 1 - beta
    std::vector<double> alpha_bars; // alpha_bars[t] for t = 0..T, alpha_bar_0 = 1

    double beta(int t) const { return betas[t - 1]; }          // t in [1, T]
    double alpha(int t) const { return alphas[t - 1]; }
    double alpha_bar(int t) const { return alpha_bars[t]; }    // t in [0, T]
};

// beta_t = start + (t-1)/(T-1) * (end-start); requires
// 0 < start < end < 1 (start == end allowed only when T == 1) and T >= 1.
NoiseSchedule linear_beta_schedule(int steps, double beta_start = 1e-4,
                                   double beta_end = 2e-2);

// Paired joint-position sequences (two characters), frames x joints x 3.
struct MotionPairTensor {
    int frames = 0;
    int joints = 0;
    std::vector<double> x;  // first character
    std::vector<double> y;  // second character

    std::size_t size() const { return static_cast<std::size_t>(frames) * joints * 3; }
    static MotionPairTensor zeros(int frames, int joints);
    void check_shape(const MotionPairTensor& other) const;  // throws ShapeMismatch
};

// Inter-character distances |x[i,j1] - y[i,j2]|, frames x joints x joints.
std::vector<double> pair_distances(const MotionPairTensor& pair);

struct ContactConstraint {
    std::vector<double> reference;  // Dbar, frames x joints x joints
    int frames = 0;
    int joints = 0;
    double gamma = 0.3;       // activation radius, meters
    double lambda_g = 0.01;   // guidance step size

    static ContactConstraint from_reference_pair(const MotionPairTensor& reference,
                                                 double gamma = 0.3, double lambda_g = 0.01);
};

// Closed-form forward marginal: sqrt(abar_t) * pair0 + sqrt(1-abar_t) * eps
// with independent noise per member; t = 0 returns pair0 unchanged.
MotionPairTensor forward_noise(const MotionPairTensor& pair0, int t,
                               const NoiseSchedule& schedule, Rng& rng);

// sum |Dbar - D| over entries with Dbar < gamma.
double contact_loss(const MotionPairTensor& pair, const ContactConstraint& constraint);

// One guidance step: descend the contact loss along its analytic
// gradient, sample' = sample - lambda * grad. Zero subgradient at the
// |.| kink and at coincident joints.
MotionPairTensor contact_guidance_step(const MotionPairTensor& sample,
                                       const ContactConstraint& constraint, double lambda_g);

// Denoiser port: estimate the clean pair from the noised pair at step t
// given the retrieval prior (text is carried for real backends).
using DenoiserPort = std::function<MotionPairTensor(
    const MotionPairTensor& noised, int t, const MotionPairTensor& prior,
    const std::string& text)>;

// Deterministic default backend: pulls the noised sample toward the
// prior, estimate = (1-w) * noised + w * prior.
DenoiserPort prior_pull_denoiser(double w = 0.8);

struct SampleConfig {
    std::string text;
    bool guided = true;
};

// Ancestral sampling from t = T down to 1; the denoiser's clean estimate
// gets a contact guidance step before each posterior draw.
MotionPairTensor sample_with_guidance(const NoiseSchedule& schedule,
                                      const DenoiserPort& denoiser,
                                      const MotionPairTensor& prior_pair,
                                      const ContactConstraint& constraint, Rng& rng,
                                      const SampleConfig& config = {});

}  // namespace dlp::mogen
