#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hsom/classifier.hpp"
#include "hsom/preprocess.hpp"
#include "hsom/som.hpp"

namespace hsom::pipeline {

struct LayerConfig {
    std::size_t rows = 30;
    std::size_t cols = 30;
    double activation_sigma = som::kDefaultActivationSigma;
    som::Schedule schedule = som::Schedule::standard(30, 30, 20);

    friend bool operator==(const LayerConfig&, const LayerConfig&) = default;
};

enum class ClassifierInput {
    // Per-map affine stretch of the layer-2 activity to [0, 1].
    Stretched,
    // Layer-2 activity as computed.
    Raw,
};

enum class Phase2Mode {
    // Layer 2 and the output layer are updated together for each sample.
    Interleaved,
    // Layer 2 is trained first, then the output layer on the frozen map.
    Sequential,
};

struct Config {
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    std::vector<std::string> joint_order;  // empty: default row order

    preprocess::Options preprocess;
    LayerConfig layer1;
    LayerConfig layer2{35, 35, som::kDefaultActivationSigma, som::Schedule::standard(35, 35, 50)};

    double beta = 0.1;
    classifier::UpdateRule update_rule = classifier::UpdateRule::Delta;
    ClassifierInput classifier_input = ClassifierInput::Stretched;
    Phase2Mode phase2 = Phase2Mode::Interleaved;
    // Output-layer passes in sequential mode; interleaved mode uses layer2 epochs.
    std::size_t output_epochs = 50;
};

/// Parses the JSON config format documented in the README. Missing keys keep
/// their values in `base`; unknown keys are rejected with InvalidArgument.
Config parse_config(const std::string& json_text, Config base = {});
std::string config_to_json(const Config& config);

// Experiment presets: "synthetic", "msr-exp1", "msr-exp2".
Config preset_config(const std::string& name);

} // namespace hsom::pipeline
