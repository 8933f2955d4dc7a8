#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsom {

inline constexpr std::size_t kJointCount = 20;

// Joint indices follow the row order of the MSR Action3D skeleton files.
// Neck is the shoulder centre, Torso the spine joint, Stomach the hip centre.
enum class JointId : std::size_t {
    RightShoulder = 0,
    LeftShoulder,
    Neck,
    Torso,
    RightHip,
    LeftHip,
    Stomach,
    RightElbow,
    LeftElbow,
    RightWrist,
    LeftWrist,
    RightHand,
    LeftHand,
    RightKnee,
    LeftKnee,
    RightAnkle,
    LeftAnkle,
    RightFoot,
    LeftFoot,
    Head,
};

constexpr std::size_t index(JointId j) noexcept { return static_cast<std::size_t>(j); }

std::string_view joint_name(JointId j) noexcept;
std::optional<JointId> joint_from_name(std::string_view name) noexcept;
const std::array<JointId, kJointCount>& all_joints() noexcept;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double k, Vec3 a) noexcept { return {k * a.x, k * a.y, k * a.z}; }
    friend constexpr bool operator==(Vec3, Vec3) noexcept = default;
};

constexpr double dot(Vec3 a, Vec3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) noexcept
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(Vec3 a) noexcept;

struct SkeletonFrame {
    std::array<Vec3, kJointCount> joints{};
    std::array<double, kJointCount> confidence{};

    Vec3& operator[](JointId j) noexcept { return joints[index(j)]; }
    const Vec3& operator[](JointId j) const noexcept { return joints[index(j)]; }

    bool finite() const noexcept;
    friend bool operator==(const SkeletonFrame&, const SkeletonFrame&) = default;
};

using ClassId = std::size_t;

struct ActionSample {
    ClassId label = 0;
    int subject = 0;
    int event = 0;
    std::vector<SkeletonFrame> frames;

    friend bool operator==(const ActionSample&, const ActionSample&) = default;
};

struct Corpus {
    std::vector<ActionSample> samples;
    std::vector<std::string> class_names;
    std::string provenance;

    std::size_t class_count() const noexcept { return class_names.size(); }
    // Stable identifier "<class>/<subject>_<event>".
    std::string sample_id(std::size_t i) const;
    // Throws InvalidSpec when a label falls outside the class table.
    void validate() const;

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

} // namespace hsom
