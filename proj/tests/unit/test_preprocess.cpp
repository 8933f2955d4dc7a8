#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hsom/error.hpp"
#include "hsom/preprocess.hpp"
#include "hsom/random.hpp"
#include "hsom/synthetic.hpp"

using namespace hsom;
using namespace hsom::preprocess;

namespace {

template <typename F>
ErrorCode code_of(F f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an hsom::Error");
    return ErrorCode::IoError;
}

SkeletonFrame fixture_frame(std::uint64_t seed = 2, std::size_t index = 0)
{
    dataset::SyntheticSpec spec;
    spec.classes = 2;
    spec.samples_per_class = 1;
    spec.min_frames = 10;
    spec.max_frames = 10;
    spec.noise = 0.02;
    spec.seed = seed;
    return dataset::generate_synthetic(spec).samples[0].frames[index];
}

// Rotation about world +y, then a translation.
SkeletonFrame rotate_y(const SkeletonFrame& f, double theta, Vec3 shift = {})
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    SkeletonFrame out = f;
    for (auto& p : out.joints)
        p = Vec3{c * p.x + s * p.z, p.y, -s * p.x + c * p.z} + shift;
    return out;
}

double max_diff(const SkeletonFrame& a, const SkeletonFrame& b)
{
    double m = 0.0;
    for (std::size_t j = 0; j < kJointCount; ++j)
        m = std::max(m, norm(a.joints[j] - b.joints[j]));
    return m;
}

FeatureSequence scalar_sequence(std::initializer_list<double> values)
{
    FeatureSequence s;
    s.dim = 1;
    s.data = values;
    s.channels = Channel::Position;
    s.joints = {JointId::Head};
    return s;
}

FeatureSequence random_sequence(Rng& rng, std::size_t n, std::size_t joints, Channel channel)
{
    FeatureSequence s;
    s.dim = 3 * joints;
    s.channels = channel;
    for (std::size_t j = 0; j < joints; ++j)
        s.joints.push_back(static_cast<JointId>(j));
    for (std::size_t i = 0; i < n * s.dim; ++i)
        s.data.push_back(rng.uniform(-1, 1));
    return s;
}

} // namespace

TEST_CASE("ego_transform: canonical actor is left unchanged")
{
    auto f = fixture_frame();
    // Re-pose the fixture so it is centered at the Stomach with a horizontal
    // hip line along +x.
    const auto basis = ego_basis(f);
    SkeletonFrame canon = f;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const auto d = f.joints[j] - basis.origin;
        canon.joints[j] = {dot(d, basis.axes[0]), dot(d, basis.axes[1]), dot(d, basis.axes[2])};
    }
    CHECK(canon[JointId::Stomach] == Vec3{0, 0, 0});
    CHECK(max_diff(ego_transform(canon), canon) < 1e-9);

    SkeletonFrame hand;
    Rng rng(5);
    for (auto& p : hand.joints)
        p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    hand[JointId::Stomach] = {0, 0, 0};
    hand[JointId::LeftHip] = {-0.2, -0.1, 0};
    hand[JointId::RightHip] = {0.2, -0.1, 0};
    CHECK(max_diff(ego_transform(hand), hand) < 1e-9);
}

TEST_CASE("ego_transform: a quarter turn about vertical gives the same output")
{
    const auto f = fixture_frame();
    const auto base = ego_transform(f);
    CHECK(max_diff(ego_transform(rotate_y(f, std::numbers::pi / 2)), base) < 1e-9);
    CHECK(max_diff(ego_transform(rotate_y(f, -std::numbers::pi / 2)), base) < 1e-9);
}

TEST_CASE("ego_transform: invariant to random vertical rotations and translations")
{
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = fixture_frame(trial, trial % 10);
        const Vec3 shift{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const auto moved = rotate_y(f, rng.uniform(-10, 10), shift);
        CHECK(max_diff(ego_transform(moved), ego_transform(f)) < 1e-9);
    }
}

TEST_CASE("ego_transform: output basis is orthonormal and right-handed")
{
    const auto b = ego_basis(rotate_y(fixture_frame(), 0.7, {1, 2, 3}));
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(dot(b.axes[i], b.axes[k]) == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-12));
    CHECK(dot(cross(b.axes[0], b.axes[1]), b.axes[2]) == doctest::Approx(1.0));
}

TEST_CASE("ego_transform: degenerate geometry")
{
    auto f = fixture_frame();
    auto same = f;
    same[JointId::RightHip] = same[JointId::LeftHip];
    CHECK(code_of([&] { ego_transform(same); }) == ErrorCode::DegenerateBasis);

    auto vertical = f;
    vertical[JointId::RightHip] = vertical[JointId::LeftHip] + Vec3{0, 0.3, 0};
    CHECK(code_of([&] { ego_transform(vertical); }) == ErrorCode::DegenerateBasis);

    auto collinear = f;
    collinear[JointId::Stomach] = 0.5 * (f[JointId::LeftHip] + f[JointId::RightHip]);
    CHECK(code_of([&] { ego_transform(collinear); }) == ErrorCode::DegenerateBasis);
}

TEST_CASE("scale_frame: identity at the canonical length, invariant to uniform scaling")
{
    const auto f = ego_transform(fixture_frame());
    const double ref = norm(f[JointId::Neck] - f[JointId::Stomach]);
    CHECK(max_diff(scale_frame(f, ref), f) < 1e-9);

    SkeletonFrame big = f;
    for (auto& p : big.joints)
        p = 2.5 * p;
    CHECK(max_diff(scale_frame(big), scale_frame(f)) < 1e-9);

    const auto world = fixture_frame(4);
    SkeletonFrame world_big = world;
    for (auto& p : world_big.joints)
        p = 2.5 * p;
    CHECK(max_diff(scale_frame(ego_transform(world_big)), scale_frame(ego_transform(world))) < 1e-9);

    const auto s = scale_frame(f, 1.0);
    CHECK(norm(s[JointId::Neck] - s[JointId::Stomach]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scale_frame: zero reference")
{
    auto f = fixture_frame();
    f[JointId::Neck] = f[JointId::Stomach];
    CHECK(code_of([&] { scale_frame(f); }) == ErrorCode::ZeroReference);
}

TEST_CASE("apply_attention: dimensions of the shipped masks")
{
    std::vector<SkeletonFrame> frames(4, fixture_frame());
    CHECK(apply_attention(frames, AttentionMask::preset("left-arm")).dim == 9);
    CHECK(apply_attention(frames, AttentionMask::preset("msr-exp1")).dim == 9);
    const auto exp2 = AttentionMask::preset("msr-exp2");
    const auto jog = apply_attention(frames, exp2, "Jogging");
    CHECK(jog.dim == 12);
    CHECK(jog.joints
          == std::vector<JointId>{JointId::RightWrist, JointId::LeftWrist, JointId::RightAnkle, JointId::LeftAnkle});
    CHECK(code_of([&] { apply_attention(frames, exp2, "Swim"); }) == ErrorCode::UnknownClass);
    CHECK(code_of([&] { apply_attention(frames, exp2); }) == ErrorCode::UnknownClass);
    CHECK(exp2.union_joints().size() == 12);
}

TEST_CASE("apply_attention: the full mask keeps every coordinate in joint order")
{
    std::vector<SkeletonFrame> frames{fixture_frame(1, 0), fixture_frame(1, 5)};
    const auto seq = apply_attention(frames, AttentionMask::preset("all"));
    REQUIRE(seq.dim == 60);
    REQUIRE(seq.size() == 2);
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t j = 0; j < kJointCount; ++j) {
            CHECK(seq.frame(t)[3 * j] == frames[t].joints[j].x);
            CHECK(seq.frame(t)[3 * j + 1] == frames[t].joints[j].y);
            CHECK(seq.frame(t)[3 * j + 2] == frames[t].joints[j].z);
        }
}

TEST_CASE("dynamics: finite differences")
{
    CHECK(first_order(scalar_sequence({1, 3, 6})).data == std::vector<double>{2, 3});
    CHECK(second_order(scalar_sequence({0, 1, 4, 9})).data == std::vector<double>{2, 2});
    CHECK(first_order(scalar_sequence({4, 4, 4, 4})).data == std::vector<double>{0, 0, 0});
    CHECK(first_order(scalar_sequence({1, 3})).channels == ChannelSet(Channel::Velocity));
    CHECK(second_order(scalar_sequence({1, 3, 5})).channels == ChannelSet(Channel::Acceleration));

    // p(t) = p0 + t v
    FeatureSequence lin;
    lin.dim = 3;
    lin.channels = Channel::Position;
    const double p0[3] = {0.5, -1.0, 2.0};
    const double v[3] = {0.25, 3.0, -0.5};
    for (int t = 0; t < 6; ++t)
        for (int d = 0; d < 3; ++d)
            lin.data.push_back(p0[d] + t * v[d]);
    const auto vel = first_order(lin);
    for (std::size_t t = 0; t < vel.size(); ++t)
        for (int d = 0; d < 3; ++d)
            CHECK(vel.frame(t)[d] == doctest::Approx(v[d]).epsilon(1e-12));
    for (double x : second_order(lin).data)
        CHECK(std::abs(x) < 1e-12);
    for (double x : first_order(vel).data)
        CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("dynamics: linear in the input")
{
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_sequence(rng, 7, 2, Channel::Position);
        const auto y = random_sequence(rng, 7, 2, Channel::Position);
        const double a = rng.uniform(-3, 3);
        const double b = rng.uniform(-3, 3);
        auto combo = x;
        for (std::size_t i = 0; i < combo.data.size(); ++i)
            combo.data[i] = a * x.data[i] + b * y.data[i];
        const auto dc = second_order(combo);
        const auto dx = second_order(x);
        const auto dy = second_order(y);
        for (std::size_t i = 0; i < dc.data.size(); ++i)
            CHECK(dc.data[i] == doctest::Approx(a * dx.data[i] + b * dy.data[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("dynamics: too short")
{
    CHECK(code_of([] { first_order(scalar_sequence({1})); }) == ErrorCode::TooShort);
    CHECK(code_of([] { second_order(scalar_sequence({1, 2})); }) == ErrorCode::TooShort);
}

TEST_CASE("merge: counting and channel order")
{
    Rng rng(3);
    const auto pos = random_sequence(rng, 10, 4, Channel::Position);
    const auto vel = first_order(pos);
    const auto acc = first_order(vel);
    const std::vector<FeatureSequence> shuffled{acc, pos, vel};
    const auto merged = merge(shuffled, ChannelNorm::Frame);
    CHECK(merged.size() == 8);
    CHECK(merged.dim == 36);
    CHECK(merged.channels == ChannelSet(7u));
    // Frame-normalized blocks, in pos/vel/acc order.
    for (std::size_t t = 0; t < merged.size(); ++t) {
        const auto f = merged.frame(t);
        const auto p = pos.frame(t);
        double np = 0.0;
        for (double x : p)
            np += x * x;
        np = std::sqrt(np);
        for (std::size_t d = 0; d < 12; ++d)
            CHECK(f[d] * np == doctest::Approx(p[d]));
    }

    const std::vector<FeatureSequence> only{pos};
    CHECK(merge(only, ChannelNorm::Frame) == pos);
    CHECK(merge(only, ChannelNorm::Sequence) == pos);

    const std::vector<FeatureSequence> twice{pos, pos};
    CHECK(code_of([&] { merge(twice, ChannelNorm::Frame); }) == ErrorCode::ChannelMismatch);
    auto other = random_sequence(rng, 9, 3, Channel::Velocity);
    const std::vector<FeatureSequence> mismatched{pos, other};
    CHECK(code_of([&] { merge(mismatched, ChannelNorm::Frame); }) == ErrorCode::ChannelMismatch);
}

TEST_CASE("merge: sequence normalization gives unit RMS per channel")
{
    Rng rng(8);
    const auto pos = random_sequence(rng, 12, 2, Channel::Position);
    const std::vector<FeatureSequence> parts{pos, first_order(pos)};
    const auto m = merge(parts, ChannelNorm::Sequence);
    for (std::size_t c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (std::size_t t = 0; t < m.size(); ++t)
            for (std::size_t d = 0; d < 6; ++d)
                sum += m.frame(t)[6 * c + d] * m.frame(t)[6 * c + d];
        CHECK(std::sqrt(sum / static_cast<double>(m.size())) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("extract_features: the pos+vel per-class configuration")
{
    std::vector<SkeletonFrame> frames;
    for (std::size_t t = 0; t < 10; ++t)
        frames.push_back(fixture_frame(6, t));
    Options opt;
    opt.channels = ChannelSet::parse("pos,vel");
    opt.mask = AttentionMask::preset("msr-exp2");
    const auto f = extract_features(frames, opt, "Jogging");
    CHECK(f.size() == 9);
    CHECK(f.dim == 24);

    opt.union_mask = true;
    CHECK(extract_features(frames, opt).dim == 2 * 3 * 12);

    opt.union_mask = false;
    opt.channels = ChannelSet::parse("pos,vel,acc");
    opt.mask = AttentionMask::preset("all");
    const std::vector<SkeletonFrame> two(frames.begin(), frames.begin() + 2);
    CHECK(code_of([&] { extract_features(two, opt); }) == ErrorCode::TooShort);
    CHECK(extract_features(std::span(frames).first(3), opt).size() == 1);
}

TEST_CASE("channel lists")
{
    CHECK(ChannelSet::parse("pos, vel,acc").bits() == 7u);
    CHECK(ChannelSet::parse("acc,pos").to_string() == "pos,acc");
    CHECK(code_of([] { ChannelSet::parse("pos,jerk"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { ChannelSet::parse(""); }) == ErrorCode::InvalidArgument);
    CHECK(min_frames(ChannelSet::parse("vel")) == 2);
}
