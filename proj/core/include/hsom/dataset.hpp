#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hsom/skeleton.hpp"

namespace hsom::dataset {

// Maps file row k (within a frame) to the joint it describes. The default is
// the identity over JointId, which matches the MSR Action3D row order.
class JointOrder {
public:
    JointOrder();
    // Throws InvalidSpec unless `rows` is a permutation of the 20 joints.
    explicit JointOrder(std::array<JointId, kJointCount> rows);
    static JointOrder from_names(std::span<const std::string> names);

    JointId joint_at_row(std::size_t row) const noexcept { return rows_[row]; }
    const std::array<JointId, kJointCount>& rows() const noexcept { return rows_; }
    bool is_identity() const noexcept;

private:
    std::array<JointId, kJointCount> rows_;
};

struct SampleMeta {
    int subject = 0;
    int event = 0;
};

/// Parses the skeleton text format: one joint per row with columns
/// `x y z [confidence]`, 20 consecutive rows per frame, and an optional first
/// line `frames joints [columns]`. Blank lines are ignored.
ActionSample parse_skeleton_file(std::string_view text, ClassId label, SampleMeta meta,
                                 const JointOrder& order = {});

/// Inverse of parse_skeleton_file; emits the header line and shortest
/// round-trip decimal representations.
std::string serialize_sample(const ActionSample& sample, const JointOrder& order = {});

// <root>/<action>/<subject>_<event>.txt; classes sorted by directory name.
Corpus load_corpus(const std::filesystem::path& root, const JointOrder& order = {});
void write_corpus(const Corpus& corpus, const std::filesystem::path& root,
                  const JointOrder& order = {});

// Canonical names for the 20 MSR Action3D actions (a01..a20).
const std::array<std::string_view, 20>& msr_action_names() noexcept;
// Action ids (1-based) used by the two experiment subsets.
std::vector<int> msr_experiment_actions(int experiment);

/// Loads files named `aNN_sNN_eNN_skeleton*.txt` from a flat directory,
/// keeping only the listed action ids (class table in the given order).
Corpus load_msr_directory(const std::filesystem::path& root, std::span<const int> action_ids,
                          const JointOrder& order = {});

/// Stratified split: in every class, round(train_fraction * count) samples
/// are drawn into the training part. Both parts keep corpus order.
std::pair<Corpus, Corpus> split_dataset(const Corpus& corpus, double train_fraction,
                                        std::uint64_t seed);

// One sample id per line.
std::string manifest_text(const Corpus& corpus);
std::vector<std::string> parse_manifest(std::string_view text);
// Keeps the samples whose id appears in `ids`, in manifest order.
Corpus select(const Corpus& corpus, std::span<const std::string> ids);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace hsom::dataset
