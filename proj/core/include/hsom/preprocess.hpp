#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsom/skeleton.hpp"

namespace hsom::preprocess {

inline constexpr Vec3 kDefaultUp{0.0, 1.0, 0.0};

// Body-anchored frame: origin at the Stomach; axes are lateral (left hip to
// right hip, horizontal), up, and lateral x up.
struct EgoBasis {
    Vec3 origin;
    std::array<Vec3, 3> axes;
};

EgoBasis ego_basis(const SkeletonFrame& frame, Vec3 up = kDefaultUp);

/// Expresses every joint in the ego basis. The result does not change under
/// rotations of the input about `up` or under translations.
/// Throws DegenerateBasis when the hips coincide, the hip line is vertical, or
/// Stomach lies on the hip line.
SkeletonFrame ego_transform(const SkeletonFrame& frame, Vec3 up = kDefaultUp);

/// Multiplies all joint vectors by canonical_length / |Neck - Stomach|.
SkeletonFrame scale_frame(const SkeletonFrame& frame, double canonical_length = 1.0);

enum class Channel : unsigned { Position = 1u, Velocity = 2u, Acceleration = 4u };

class ChannelSet {
public:
    constexpr ChannelSet() = default;
    constexpr explicit ChannelSet(unsigned bits) : bits_(bits & 7u) {}
    constexpr ChannelSet(Channel c) : bits_(static_cast<unsigned>(c)) {}

    constexpr bool has(Channel c) const noexcept { return (bits_ & static_cast<unsigned>(c)) != 0; }
    constexpr ChannelSet with(Channel c) const noexcept { return ChannelSet(bits_ | static_cast<unsigned>(c)); }
    constexpr unsigned bits() const noexcept { return bits_; }
    constexpr std::size_t count() const noexcept
    {
        return (bits_ & 1u) + ((bits_ >> 1) & 1u) + ((bits_ >> 2) & 1u);
    }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    // Highest difference order present: 0 pos, 1 vel, 2 acc.
    constexpr std::size_t order() const noexcept
    {
        return has(Channel::Acceleration) ? 2 : has(Channel::Velocity) ? 1 : 0;
    }

    // "pos,vel,acc" style lists.
    static ChannelSet parse(std::string_view list);
    std::string to_string() const;

    friend constexpr bool operator==(ChannelSet, ChannelSet) = default;

private:
    unsigned bits_ = 0;
};

/// Per-frame feature vectors of uniform dimension, stored frame-major.
struct FeatureSequence {
    std::size_t dim = 0;
    std::vector<double> data;
    ChannelSet channels;
    std::vector<JointId> joints;

    std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
    std::span<const double> frame(std::size_t t) const { return {data.data() + t * dim, dim}; }
    std::span<double> frame(std::size_t t) { return {data.data() + t * dim, dim}; }

    friend bool operator==(const FeatureSequence&, const FeatureSequence&) = default;
};

/// Either one global joint subset or one subset per action class name.
using MaskTable = std::map<std::string, std::vector<JointId>, std::less<>>;

class AttentionMask {
public:
    AttentionMask() = default;
    static AttentionMask global(std::vector<JointId> joints);
    static AttentionMask per_class(MaskTable masks);

    bool is_global() const noexcept { return per_class_.empty(); }
    // Joints for the class, sorted by JointId. Throws UnknownClass.
    const std::vector<JointId>& joints_for(std::optional<std::string_view> class_name) const;
    // Union of every subset, sorted.
    std::vector<JointId> union_joints() const;
    const MaskTable& class_masks() const noexcept { return per_class_; }
    const std::vector<JointId>& global_joints() const noexcept { return global_; }

    // Named presets: "all", "left-arm", "msr-exp1", "msr-exp2".
    static AttentionMask preset(std::string_view name);

private:
    std::vector<JointId> global_;
    MaskTable per_class_;
};

FeatureSequence apply_attention(std::span<const SkeletonFrame> frames, const AttentionMask& mask,
                                std::optional<std::string_view> class_name = std::nullopt);

// out[t] = seq[t+1] - seq[t]. Throws TooShort for fewer than 2 frames.
FeatureSequence first_order(const FeatureSequence& seq);
// first_order applied twice. Throws TooShort for fewer than 3 frames.
FeatureSequence second_order(const FeatureSequence& seq);

enum class ChannelNorm {
    None,
    // Every channel of every frame scaled to unit length.
    Frame,
    // Every channel scaled so its RMS frame norm over the sequence is 1.
    Sequence,
};

/// Concatenates channels frame by frame in position, velocity, acceleration
/// order after truncating to the shortest length. Normalization is applied
/// only when two or more channels are merged.
FeatureSequence merge(std::span<const FeatureSequence> channels, ChannelNorm norm);

struct Options {
    Vec3 up = kDefaultUp;
    double canonical_length = 1.0;
    ChannelSet channels = Channel::Position;
    ChannelNorm norm = ChannelNorm::Frame;
    AttentionMask mask = AttentionMask::preset("all");
    // Collapse per-class masks into their union (no label needed at inference).
    bool union_mask = false;
};

// Minimum number of frames a sample needs for the configured channels.
std::size_t min_frames(ChannelSet channels) noexcept;

/// ego -> scale -> attention -> dynamics -> merge for one sample.
FeatureSequence extract_features(std::span<const SkeletonFrame> frames, const Options& options,
                                 std::optional<std::string_view> class_name = std::nullopt);

} // namespace hsom::preprocess
