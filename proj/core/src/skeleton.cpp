#include "hsom/skeleton.hpp"

#include <cmath>

#include "hsom/error.hpp"

namespace hsom {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "RightShoulder", "LeftShoulder", "Neck",      "Torso",      "RightHip",
    "LeftHip",       "Stomach",      "RightElbow", "LeftElbow",  "RightWrist",
    "LeftWrist",     "RightHand",    "LeftHand",   "RightKnee",  "LeftKnee",
    "RightAnkle",    "LeftAnkle",    "RightFoot",  "LeftFoot",   "Head",
};

constexpr std::array<JointId, kJointCount> make_all_joints()
{
    std::array<JointId, kJointCount> out{};
    for (std::size_t i = 0; i < kJointCount; ++i)
        out[i] = static_cast<JointId>(i);
    return out;
}

constexpr std::array<JointId, kJointCount> kAllJoints = make_all_joints();

} // namespace

std::string_view joint_name(JointId j) noexcept
{
    const auto i = index(j);
    return i < kJointCount ? kJointNames[i] : std::string_view{"?"};
}

std::optional<JointId> joint_from_name(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kJointCount; ++i)
        if (kJointNames[i] == name)
            return static_cast<JointId>(i);
    return std::nullopt;
}

const std::array<JointId, kJointCount>& all_joints() noexcept { return kAllJoints; }

double norm(Vec3 a) noexcept { return std::sqrt(dot(a, a)); }

bool SkeletonFrame::finite() const noexcept
{
    for (const auto& p : joints)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            return false;
    return true;
}

std::string Corpus::sample_id(std::size_t i) const
{
    const auto& s = samples.at(i);
    const std::string cls = s.label < class_names.size() ? class_names[s.label] : std::to_string(s.label);
    return cls + "/" + std::to_string(s.subject) + "_" + std::to_string(s.event);
}

void Corpus::validate() const
{
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].label >= class_names.size())
            raise(ErrorCode::InvalidSpec, "sample " + std::to_string(i) + " has label "
                                              + std::to_string(samples[i].label)
                                              + " outside the class table");
}

} // namespace hsom
