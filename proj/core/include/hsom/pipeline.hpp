#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsom/classifier.hpp"
#include "hsom/config.hpp"
#include "hsom/ovr.hpp"
#include "hsom/skeleton.hpp"
#include "hsom/som.hpp"

namespace hsom::pipeline {

inline constexpr int kModelFormatVersion = 1;

struct Manifest {
    std::uint64_t seed = 0;
    std::string provenance;
    std::vector<std::string> train_ids;

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct PipelineModel {
    Config config;
    som::Model layer1;
    std::size_t n_max = 0;
    som::Model layer2;
    classifier::OutputLayer output;
    Manifest manifest;

    const std::vector<std::string>& class_names() const noexcept { return output.class_names(); }
    // Throws ConfigMismatch when the layer dimensions disagree.
    void validate() const;
};

/// Two-phase training: layer 1 on pooled frames, then layer 2 and the output
/// layer on ordered vectors of the frozen layer-1 traces.
PipelineModel train_system(const Corpus& train, const Config& config);

// Everything computed for one sample on the way to its label.
struct Inference {
    preprocess::FeatureSequence features;
    ovr::ActivityTrace trace;
    ovr::OrderedVector ordered;
    som::GridCoord layer2_bmu;
    std::vector<double> layer2_activity;
    std::vector<double> classifier_input;
    ClassId predicted = 0;
};

/// `class_hint` selects the attention subset when per-class masks are used.
Inference infer(const PipelineModel& model, const ActionSample& sample,
                std::optional<std::string_view> class_hint);

/// Uses the sample's own label (in the model's class table) as hint.
ClassId classify(const PipelineModel& model, const ActionSample& sample);
ClassId classify(const PipelineModel& model, const ActionSample& sample,
                 std::optional<std::string_view> class_hint);

struct EvalReport {
    std::vector<std::string> class_names;
    std::vector<std::vector<std::size_t>> confusion;  // true x predicted
    std::size_t correct = 0;
    std::size_t total = 0;

    double overall_accuracy() const noexcept;       // percent
    double class_accuracy(ClassId k) const noexcept; // percent, 0 when unseen
    std::size_t class_count(ClassId k) const noexcept;
};

/// Test labels are matched to the model by class name. Throws EmptyCorpus.
EvalReport evaluate(const PipelineModel& model, const Corpus& test);

inline constexpr std::size_t kRegionCount = 9;

/// 1-based region in a 3x3 partition: region 1 is bottom-left (row band 0,
/// column band 0) and region 9 top-right. Bands are floor(n / 3) cells wide;
/// the remainder joins the last band.
int region_of(som::GridCoord c, std::size_t rows, std::size_t cols);

struct RegionHistogram {
    std::vector<std::string> class_names;
    std::vector<std::array<std::size_t, kRegionCount>> counts;

    // Percent of the class's activations per region; zeros when unseen.
    std::array<double, kRegionCount> percent(ClassId k) const noexcept;
    std::size_t class_total(ClassId k) const noexcept;
};

RegionHistogram region_histogram(const PipelineModel& model, const Corpus& corpus);

std::string model_to_json(const PipelineModel& model);
PipelineModel model_from_json(const std::string& text);
void save_model(const PipelineModel& model, const std::filesystem::path& path);
PipelineModel load_model(const std::filesystem::path& path);

} // namespace hsom::pipeline
