#include "hsom/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "hsom/error.hpp"
#include "hsom/random.hpp"

namespace hsom::dataset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rest pose, y up, actor facing +z, right side at +x.
SkeletonFrame rest_pose()
{
    SkeletonFrame f;
    f[JointId::Stomach] = {0.0, 0.0, 0.0};
    f[JointId::Torso] = {0.0, 0.25, 0.0};
    f[JointId::Neck] = {0.0, 0.5, 0.0};
    f[JointId::Head] = {0.0, 0.7, 0.02};
    f[JointId::RightShoulder] = {0.2, 0.45, 0.0};
    f[JointId::LeftShoulder] = {-0.2, 0.45, 0.0};
    f[JointId::RightHip] = {0.1, -0.1, 0.0};
    f[JointId::LeftHip] = {-0.1, -0.1, 0.0};
    f.confidence.fill(1.0);
    return f;
}

struct LimbMotion {
    double swing_amp;   // forward/backward swing amplitude (rad)
    double swing_bias;
    double swing_freq;  // cycles per action
    double swing_phase;
    double spread_amp;  // sideways raise (rad)
    double spread_freq;
    double spread_phase;
    double bend_amp;    // extra swing of the distal segment (rad)
};

struct ClassMotion {
    LimbMotion limbs[4];  // right arm, left arm, right leg, left leg
};

double frac(double v) { return v - std::floor(v); }

// Low-discrepancy parameters so every class index gets a distinct motion.
ClassMotion class_motion(std::size_t k)
{
    ClassMotion m{};
    const double c = static_cast<double>(k + 1);
    for (int l = 0; l < 4; ++l) {
        const double ld = static_cast<double>(l);
        const double scale = l < 2 ? 1.0 : 0.45;
        auto& limb = m.limbs[l];
        limb.swing_amp = scale * (0.3 + 0.9 * frac(c * 0.6180339887 + ld * 0.31));
        limb.swing_bias = scale * (0.6 * frac(c * 0.4142135623 + ld * 0.57));
        limb.swing_freq = 0.5 + std::floor(3.0 * frac(c * 0.7320508075 + ld * 0.23)) * 0.5;
        limb.swing_phase = kTwoPi * frac(c * 0.2360679774 + ld * 0.41);
        limb.spread_amp = scale * 0.8 * frac(c * 0.1547005383 + ld * 0.77);
        limb.spread_freq = 0.5 + std::floor(2.0 * frac(c * 0.8284271247 + ld * 0.13)) * 0.5;
        limb.spread_phase = kTwoPi * frac(c * 0.3027756377 + ld * 0.61);
        limb.bend_amp = scale * 0.9 * frac(c * 0.5615528128 + ld * 0.37);
    }
    return m;
}

// Monotone time warp onto [0, 1]; profile 0 is uniform speed.
double warp(std::size_t profile, double tau)
{
    if (profile == 0)
        return tau;
    const double m = 1.0 + static_cast<double>((profile - 1) / 2);
    const double amp = (profile % 2 == 1) ? 0.8 : -0.8;
    return tau + amp * std::sin(kTwoPi * m * tau) / (kTwoPi * m);
}

Vec3 limb_direction(double swing, double spread, double side)
{
    return {side * std::sin(spread), -std::cos(spread) * std::cos(swing), std::cos(spread) * std::sin(swing)};
}

SkeletonFrame pose_at(const ClassMotion& motion, double u)
{
    auto f = rest_pose();
    struct Chain {
        JointId root, mid, end, tip;
        double upper, lower, tip_len, side;
    };
    static constexpr Chain chains[4] = {
        {JointId::RightShoulder, JointId::RightElbow, JointId::RightWrist, JointId::RightHand, 0.28, 0.26, 0.08, 1.0},
        {JointId::LeftShoulder, JointId::LeftElbow, JointId::LeftWrist, JointId::LeftHand, 0.28, 0.26, 0.08, -1.0},
        {JointId::RightHip, JointId::RightKnee, JointId::RightAnkle, JointId::RightFoot, 0.42, 0.40, 0.10, 1.0},
        {JointId::LeftHip, JointId::LeftKnee, JointId::LeftAnkle, JointId::LeftFoot, 0.42, 0.40, 0.10, -1.0},
    };
    for (int l = 0; l < 4; ++l) {
        const auto& lm = motion.limbs[l];
        const auto& ch = chains[l];
        const double swing = lm.swing_bias + lm.swing_amp * std::sin(kTwoPi * lm.swing_freq * u + lm.swing_phase);
        const double spread =
            lm.spread_amp * (0.5 + 0.5 * std::sin(kTwoPi * lm.spread_freq * u + lm.spread_phase));
        const double bend =
            lm.bend_amp * (0.5 + 0.5 * std::sin(kTwoPi * lm.swing_freq * u + lm.swing_phase + 1.0));
        // Knees bend backwards, elbows forwards.
        const double distal = l < 2 ? swing + bend : swing - bend;
        const Vec3 d1 = limb_direction(swing, spread, ch.side);
        const Vec3 d2 = limb_direction(distal, spread, ch.side);
        f[ch.mid] = f[ch.root] + ch.upper * d1;
        f[ch.end] = f[ch.mid] + ch.lower * d2;
        f[ch.tip] = f[ch.end] + ch.tip_len * (l < 2 ? d2 : Vec3{d2.x, 0.0, 1.0});
    }
    return f;
}

} // namespace

Corpus generate_synthetic(const SyntheticSpec& spec)
{
    if (spec.classes < 2)
        raise(ErrorCode::InvalidSpec, "synthetic corpus needs at least 2 classes");
    if (spec.samples_per_class < 1)
        raise(ErrorCode::InvalidSpec, "samples per class must be positive");
    if (spec.min_frames < 3 || spec.max_frames < spec.min_frames)
        raise(ErrorCode::InvalidSpec, "frame range must satisfy 3 <= min <= max");
    if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise))
        raise(ErrorCode::InvalidSpec, "noise level must be finite and non-negative");

    const bool speed = spec.profile == SyntheticProfile::Speed;
    Corpus corpus;
    char buf[160];
    std::snprintf(buf, sizeof buf, "synthetic:classes=%zu,per_class=%zu,frames=%zu-%zu,noise=%.17g,seed=%llu,profile=%s",
                  spec.classes, spec.samples_per_class, spec.min_frames, spec.max_frames, spec.noise,
                  static_cast<unsigned long long>(spec.seed), speed ? "speed" : "shape");
    corpus.provenance = buf;

    // Separate streams so the frame counts do not depend on the noise level.
    Rng rng(spec.seed);
    Rng noise(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t k = 0; k < spec.classes; ++k) {
        std::snprintf(buf, sizeof buf, "%s%02zu", speed ? "speed" : "action", k + 1);
        corpus.class_names.emplace_back(buf);
        const ClassMotion motion = class_motion(speed ? 0 : k);
        for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
            ActionSample sample;
            sample.label = k;
            sample.subject = static_cast<int>(s / 3 + 1);
            sample.event = static_cast<int>(s % 3 + 1);
            const std::size_t n = spec.min_frames + rng.below(spec.max_frames - spec.min_frames + 1);
            sample.frames.reserve(n);
            for (std::size_t t = 0; t < n; ++t) {
                const double tau = static_cast<double>(t) / static_cast<double>(n - 1);
                auto frame = pose_at(motion, speed ? warp(k, tau) : tau);
                if (spec.noise > 0.0) {
                    for (auto& p : frame.joints) {
                        p.x += noise.uniform(-spec.noise, spec.noise);
                        p.y += noise.uniform(-spec.noise, spec.noise);
                        p.z += noise.uniform(-spec.noise, spec.noise);
                    }
                }
                sample.frames.push_back(frame);
            }
            corpus.samples.push_back(std::move(sample));
        }
    }
    return corpus;
}

} // namespace hsom::dataset
