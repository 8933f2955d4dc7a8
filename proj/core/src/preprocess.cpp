#include "hsom/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "hsom/error.hpp"

namespace hsom::preprocess {

EgoBasis ego_basis(const SkeletonFrame& frame, Vec3 up)
{
    const double up_len = norm(up);
    if (!(up_len > 0.0))
        raise(ErrorCode::InvalidArgument, "up axis must be non-zero");
    const Vec3 y = (1.0 / up_len) * up;

    const Vec3 stomach = frame[JointId::Stomach];
    const Vec3 right = frame[JointId::RightHip];
    const Vec3 left = frame[JointId::LeftHip];

    const Vec3 hips = right - left;
    const double hip_len = norm(hips);
    if (!(hip_len > 0.0))
        raise(ErrorCode::DegenerateBasis, "left and right hip coincide");

    const Vec3 a = right - stomach;
    const Vec3 b = left - stomach;
    const double na = norm(a);
    const double nb = norm(b);
    if (!(na > 0.0) || !(nb > 0.0) || norm(cross(a, b)) <= 1e-12 * na * nb)
        raise(ErrorCode::DegenerateBasis, "stomach and hips are collinear");

    const Vec3 lateral = hips - dot(hips, y) * y;
    const double lat_len = norm(lateral);
    if (lat_len <= 1e-12 * hip_len)
        raise(ErrorCode::DegenerateBasis, "hip line is parallel to the up axis");
    const Vec3 x = (1.0 / lat_len) * lateral;

    return {stomach, {x, y, cross(x, y)}};
}

SkeletonFrame ego_transform(const SkeletonFrame& frame, Vec3 up)
{
    const auto basis = ego_basis(frame, up);
    SkeletonFrame out = frame;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const Vec3 d = frame.joints[j] - basis.origin;
        out.joints[j] = {dot(d, basis.axes[0]), dot(d, basis.axes[1]), dot(d, basis.axes[2])};
    }
    return out;
}

SkeletonFrame scale_frame(const SkeletonFrame& frame, double canonical_length)
{
    if (!(canonical_length > 0.0))
        raise(ErrorCode::InvalidArgument, "canonical trunk length must be positive");
    const double ref = norm(frame[JointId::Neck] - frame[JointId::Stomach]);
    if (!(ref > 0.0) || !std::isfinite(ref))
        raise(ErrorCode::ZeroReference, "neck and stomach coincide");
    const double k = canonical_length / ref;
    SkeletonFrame out = frame;
    for (auto& p : out.joints)
        p = k * p;
    return out;
}

ChannelSet ChannelSet::parse(std::string_view list)
{
    ChannelSet set;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto e = list.find(',', pos);
        if (e == std::string_view::npos)
            e = list.size();
        auto item = list.substr(pos, e - pos);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (item == "pos" || item == "position")
            set = set.with(Channel::Position);
        else if (item == "vel" || item == "velocity")
            set = set.with(Channel::Velocity);
        else if (item == "acc" || item == "acceleration")
            set = set.with(Channel::Acceleration);
        else
            raise(ErrorCode::InvalidArgument, "unknown channel '" + std::string(item) + "'");
        pos = e + 1;
    }
    if (set.empty())
        raise(ErrorCode::InvalidArgument, "channel list is empty");
    return set;
}

std::string ChannelSet::to_string() const
{
    std::string out;
    auto add = [&out](const char* s) {
        if (!out.empty())
            out += ',';
        out += s;
    };
    if (has(Channel::Position))
        add("pos");
    if (has(Channel::Velocity))
        add("vel");
    if (has(Channel::Acceleration))
        add("acc");
    return out;
}

namespace {

std::vector<JointId> canonical(std::vector<JointId> joints)
{
    std::sort(joints.begin(), joints.end());
    joints.erase(std::unique(joints.begin(), joints.end()), joints.end());
    if (joints.empty())
        raise(ErrorCode::InvalidSpec, "attention subset is empty");
    for (auto j : joints)
        if (index(j) >= kJointCount)
            raise(ErrorCode::InvalidSpec, "attention subset names an undeclared joint");
    return joints;
}

} // namespace

AttentionMask AttentionMask::global(std::vector<JointId> joints)
{
    AttentionMask m;
    m.global_ = canonical(std::move(joints));
    return m;
}

AttentionMask AttentionMask::per_class(MaskTable masks)
{
    if (masks.empty())
        raise(ErrorCode::InvalidSpec, "per-class attention needs at least one class");
    AttentionMask m;
    for (auto& [name, joints] : masks)
        m.per_class_.emplace(name, canonical(std::move(joints)));
    return m;
}

const std::vector<JointId>& AttentionMask::joints_for(std::optional<std::string_view> class_name) const
{
    if (is_global())
        return global_;
    if (!class_name)
        raise(ErrorCode::UnknownClass, "per-class attention needs a class hint");
    const auto it = per_class_.find(*class_name);
    if (it == per_class_.end())
        raise(ErrorCode::UnknownClass, "no attention subset for class '" + std::string(*class_name) + "'");
    return it->second;
}

std::vector<JointId> AttentionMask::union_joints() const
{
    if (is_global())
        return global_;
    std::vector<JointId> all;
    for (const auto& [name, joints] : per_class_)
        all.insert(all.end(), joints.begin(), joints.end());
    return canonical(std::move(all));
}

AttentionMask AttentionMask::preset(std::string_view name)
{
    using J = JointId;
    if (name == "all")
        return global({all_joints().begin(), all_joints().end()});
    if (name == "left-arm" || name == "msr-exp1")
        return global({J::LeftShoulder, J::LeftElbow, J::LeftWrist});
    if (name == "msr-exp2") {
        const std::vector<JointId> arms{J::LeftElbow, J::LeftWrist, J::RightElbow, J::RightWrist};
        const std::vector<JointId> legs{J::LeftKnee, J::LeftAnkle, J::RightKnee, J::RightAnkle};
        MaskTable t;
        for (const char* a : {"HandClap", "TwoHandWave", "SideBoxing", "TennisServe", "GolfSwing", "PickUpThrow"})
            t[a] = arms;
        t["Bend"] = {J::Head, J::Neck, J::Torso, J::Stomach};
        t["Jogging"] = {J::LeftAnkle, J::LeftWrist, J::RightAnkle, J::RightWrist};
        t["ForwardKick"] = legs;
        t["SideKick"] = legs;
        return per_class(std::move(t));
    }
    raise(ErrorCode::InvalidArgument, "unknown attention profile '" + std::string(name) + "'");
}

FeatureSequence apply_attention(std::span<const SkeletonFrame> frames, const AttentionMask& mask,
                                std::optional<std::string_view> class_name)
{
    const auto& joints = mask.joints_for(class_name);
    FeatureSequence out;
    out.dim = 3 * joints.size();
    out.channels = Channel::Position;
    out.joints = joints;
    out.data.reserve(frames.size() * out.dim);
    for (const auto& f : frames) {
        for (auto j : joints) {
            const auto& p = f[j];
            out.data.insert(out.data.end(), {p.x, p.y, p.z});
        }
    }
    return out;
}

FeatureSequence first_order(const FeatureSequence& seq)
{
    const auto n = seq.size();
    if (n < 2)
        raise(ErrorCode::TooShort, "first-order dynamics need at least 2 frames");
    FeatureSequence out;
    out.dim = seq.dim;
    out.joints = seq.joints;
    if (seq.channels == ChannelSet(Channel::Position))
        out.channels = Channel::Velocity;
    else if (seq.channels == ChannelSet(Channel::Velocity))
        out.channels = Channel::Acceleration;
    else
        out.channels = seq.channels;
    out.data.resize((n - 1) * seq.dim);
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const auto a = seq.frame(t);
        const auto b = seq.frame(t + 1);
        auto o = out.frame(t);
        for (std::size_t d = 0; d < seq.dim; ++d)
            o[d] = b[d] - a[d];
    }
    return out;
}

FeatureSequence second_order(const FeatureSequence& seq)
{
    if (seq.size() < 3)
        raise(ErrorCode::TooShort, "second-order dynamics need at least 3 frames");
    return first_order(first_order(seq));
}

namespace {

double block_norm(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

} // namespace

FeatureSequence merge(std::span<const FeatureSequence> channels, ChannelNorm norm)
{
    if (channels.empty())
        raise(ErrorCode::ChannelMismatch, "nothing to merge");

    std::vector<const FeatureSequence*> ordered;
    ChannelSet present;
    for (const auto& c : channels) {
        if (c.channels.count() != 1)
            raise(ErrorCode::ChannelMismatch, "merge inputs must each hold exactly one channel");
        if ((present.bits() & c.channels.bits()) != 0)
            raise(ErrorCode::ChannelMismatch, "channel " + c.channels.to_string() + " given twice");
        if (c.joints != channels.front().joints || c.dim != channels.front().dim)
            raise(ErrorCode::ChannelMismatch, "channels were attended over different joints");
        present = ChannelSet(present.bits() | c.channels.bits());
        ordered.push_back(&c);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->channels.bits() < b->channels.bits(); });

    std::size_t length = ordered.front()->size();
    for (const auto* c : ordered)
        length = std::min(length, c->size());
    if (length == 0)
        raise(ErrorCode::TooShort, "a channel has no frames");

    const bool normalize = ordered.size() > 1 && norm != ChannelNorm::None;
    std::vector<double> seq_scale(ordered.size(), 1.0);
    if (normalize && norm == ChannelNorm::Sequence) {
        for (std::size_t c = 0; c < ordered.size(); ++c) {
            double sum = 0.0;
            for (std::size_t t = 0; t < length; ++t) {
                const double n = block_norm(ordered[c]->frame(t));
                sum += n * n;
            }
            const double rms = std::sqrt(sum / static_cast<double>(length));
            seq_scale[c] = rms > 0.0 ? 1.0 / rms : 1.0;
        }
    }

    FeatureSequence out;
    out.dim = ordered.front()->dim * ordered.size();
    out.channels = present;
    out.joints = ordered.front()->joints;
    out.data.reserve(length * out.dim);
    for (std::size_t t = 0; t < length; ++t) {
        for (std::size_t c = 0; c < ordered.size(); ++c) {
            const auto v = ordered[c]->frame(t);
            double k = 1.0;
            if (normalize && norm == ChannelNorm::Frame) {
                const double n = block_norm(v);
                k = n > 0.0 ? 1.0 / n : 1.0;
            } else if (normalize) {
                k = seq_scale[c];
            }
            for (double x : v)
                out.data.push_back(k == 1.0 ? x : k * x);
        }
    }
    return out;
}

std::size_t min_frames(ChannelSet channels) noexcept { return channels.order() + 1; }

FeatureSequence extract_features(std::span<const SkeletonFrame> frames, const Options& options,
                                 std::optional<std::string_view> class_name)
{
    if (options.channels.empty())
        raise(ErrorCode::InvalidArgument, "no feature channels selected");
    if (frames.size() < min_frames(options.channels))
        raise(ErrorCode::TooShort, std::to_string(frames.size()) + " frames are too few for channels "
                                       + options.channels.to_string());

    std::vector<SkeletonFrame> prepared;
    prepared.reserve(frames.size());
    for (const auto& f : frames)
        prepared.push_back(scale_frame(ego_transform(f, options.up), options.canonical_length));

    const auto position = options.union_mask && !options.mask.is_global()
                              ? apply_attention(prepared, AttentionMask::global(options.mask.union_joints()))
                              : apply_attention(prepared, options.mask, class_name);

    std::vector<FeatureSequence> parts;
    if (options.channels.has(Channel::Position))
        parts.push_back(position);
    if (options.channels.order() >= 1) {
        auto velocity = first_order(position);
        if (options.channels.has(Channel::Acceleration))
            parts.push_back(first_order(velocity));
        if (options.channels.has(Channel::Velocity))
            parts.push_back(std::move(velocity));
    }
    return merge(parts, options.norm);
}

} // namespace hsom::preprocess
