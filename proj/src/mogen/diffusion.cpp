#include "dlp/mogen/diffusion.hpp"

#include <cmath>

#include "dlp/kernels.hpp"

namespace dlp::mogen {

NoiseSchedule linear_beta_schedule(int steps, double beta_start, double beta_end) {
    if (steps < 1 || !(beta_start > 0.0) || beta_end >= 1.0 ||
        (steps > 1 && !(beta_start < beta_end))) {
        throw DomainError("linear_beta_schedule: need 0 < start < end < 1 and T >= 1");
    }
    NoiseSchedule s;
    s.steps = steps;
    s.betas.resize(steps);
    s.alphas.resize(steps);
    s.alpha_bars.resize(steps + 1);
    s.alpha_bars[0] = 1.0;
    for (int t = 1; t <= steps; ++t) {
        const double beta =
            steps == 1 ? beta_start
                       : beta_start + (t - 1) * (beta_end - beta_start) / (steps - 1);
        s.betas[t - 1] = beta;
        s.alphas[t - 1] = 1.0 - beta;
        s.alpha_bars[t] = s.alpha_bars[t - 1] * (1.0 - beta);
    }
    return s;
}

MotionPairTensor MotionPairTensor::zeros(int frames, int joints) {
    MotionPairTensor t;
    t.frames = frames;
    t.joints = joints;
    t.x.assign(static_cast<std::size_t>(frames) * joints * 3, 0.0);
    t.y.assign(t.x.size(), 0.0);
    return t;
}

void MotionPairTensor::check_shape(const MotionPairTensor& other) const {
    if (frames != other.frames || joints != other.joints) {
        throw ShapeMismatch("motion pair tensors differ in shape");
    }
}

std::vector<double> pair_distances(const MotionPairTensor& pair) {
    std::vector<double> d(static_cast<std::size_t>(pair.frames) * pair.joints * pair.joints);
    kernels::pairwise_distances(pair.x.data(), pair.y.data(), pair.frames, pair.joints,
                                pair.joints, d.data());
    return d;
}

ContactConstraint ContactConstraint::from_reference_pair(const MotionPairTensor& reference,
                                                         double gamma, double lambda_g) {
    ContactConstraint c;
    c.reference = pair_distances(reference);
    c.frames = reference.frames;
    c.joints = reference.joints;
    c.gamma = gamma;
    c.lambda_g = lambda_g;
    return c;
}

MotionPairTensor forward_noise(const MotionPairTensor& pair0, int t,
                               const NoiseSchedule& schedule, Rng& rng) {
    if (t < 0 || t > schedule.steps) throw DomainError("forward_noise: t out of range");
    if (t == 0) return pair0;
    const double abar = schedule.alpha_bar(t);
    const double signal = std::sqrt(abar);
    const double noise = std::sqrt(1.0 - abar);
    MotionPairTensor out = pair0;
    for (double& v : out.x) v = signal * v + noise * rng.normal();
    for (double& v : out.y) v = signal * v + noise * rng.normal();
    return out;
}

namespace {

void check_constraint(const MotionPairTensor& pair, const ContactConstraint& c) {
    if (pair.frames != c.frames || pair.joints != c.joints ||
        c.reference.size() != static_cast<std::size_t>(c.frames) * c.joints * c.joints) {
        throw ShapeMismatch("contact constraint shape does not match the pair");
    }
}

}  // namespace

double contact_loss(const MotionPairTensor& pair, const ContactConstraint& constraint) {
    check_constraint(pair, constraint);
    return kernels::contact_loss_grad(pair.x.data(), pair.y.data(), constraint.reference.data(),
                                      pair.frames, pair.joints, constraint.gamma, nullptr,
                                      nullptr);
}

MotionPairTensor contact_guidance_step(const MotionPairTensor& sample,
                                       const ContactConstraint& constraint, double lambda_g) {
    check_constraint(sample, constraint);
    MotionPairTensor out = sample;
    std::vector<double> grad_x(sample.size()), grad_y(sample.size());
    kernels::contact_loss_grad(sample.x.data(), sample.y.data(), constraint.reference.data(),
                               sample.frames, sample.joints, constraint.gamma, grad_x.data(),
                               grad_y.data());
    for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] -= lambda_g * grad_x[i];
    for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] -= lambda_g * grad_y[i];
    return out;
}

DenoiserPort prior_pull_denoiser(double w) {
    return [w](const MotionPairTensor& noised, int, const MotionPairTensor& prior,
               const std::string&) {
        noised.check_shape(prior);
        MotionPairTensor est = noised;
        for (std::size_t i = 0; i < est.x.size(); ++i) {
            est.x[i] = (1.0 - w) * noised.x[i] + w * prior.x[i];
            est.y[i] = (1.0 - w) * noised.y[i] + w * prior.y[i];
        }
        return est;
    };
}

MotionPairTensor sample_with_guidance(const NoiseSchedule& schedule,
                                      const DenoiserPort& denoiser,
                                      const MotionPairTensor& prior_pair,
                                      const ContactConstraint& constraint, Rng& rng,
                                      const SampleConfig& config) {
    MotionPairTensor current = MotionPairTensor::zeros(prior_pair.frames, prior_pair.joints);
    for (double& v : current.x) v = rng.normal();
    for (double& v : current.y) v = rng.normal();

    for (int t = schedule.steps; t >= 1; --t) {
        MotionPairTensor estimate = denoiser(current, t, prior_pair, config.text);
        if (config.guided) {
            estimate = contact_guidance_step(estimate, constraint, constraint.lambda_g);
        }
        const double abar_t = schedule.alpha_bar(t);
        const double abar_prev = schedule.alpha_bar(t - 1);
        const double beta = schedule.beta(t);
        const double alpha = schedule.alpha(t);
        const double coef0 = std::sqrt(abar_prev) * beta / (1.0 - abar_t);
        const double coef_t = std::sqrt(alpha) * (1.0 - abar_prev) / (1.0 - abar_t);
        const double var = (1.0 - abar_prev) / (1.0 - abar_t) * beta;
        const double sigma = t > 1 ? std::sqrt(var) : 0.0;
        for (std::size_t i = 0; i < current.x.size(); ++i) {
            current.x[i] = coef0 * estimate.x[i] + coef_t * current.x[i] +
                           (sigma > 0.0 ? sigma * rng.normal() : 0.0);
        }
        for (std::size_t i = 0; i < current.y.size(); ++i) {
            current.y[i] = coef0 * estimate.y[i] + coef_t * current.y[i] +
                           (sigma > 0.0 ? sigma * rng.normal() : 0.0);
        }
    }
    return current;
}

}  // namespace dlp::mogen
