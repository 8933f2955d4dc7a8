#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsom/skeleton.hpp"

namespace hsom::classifier {

enum class UpdateRule {
    // w += beta * (d - y) * x / |x|
    Delta,
    // w_l += beta * (y - d) for every component l, as the update is printed.
    Printed,
};

/// One cosine neuron per action class.
class OutputLayer {
public:
    OutputLayer() = default;
    // Weights uniform in [0, 1], normalized to unit length.
    OutputLayer(std::vector<std::string> class_names, std::size_t dim, double beta,
                std::uint64_t seed, UpdateRule rule = UpdateRule::Delta);
    static OutputLayer from_weights(std::vector<std::string> class_names, std::size_t dim,
                                    std::vector<double> weights, double beta,
                                    UpdateRule rule = UpdateRule::Delta);

    std::size_t classes() const noexcept { return names_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    double beta() const noexcept { return beta_; }
    UpdateRule rule() const noexcept { return rule_; }
    const std::vector<std::string>& class_names() const noexcept { return names_; }

    std::span<const double> weight(ClassId k) const { return {weights_.data() + k * dim_, dim_}; }
    std::span<double> weight(ClassId k) { return {weights_.data() + k * dim_, dim_}; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    friend bool operator==(const OutputLayer&, const OutputLayer&) = default;

private:
    std::vector<std::string> names_;
    std::size_t dim_ = 0;
    double beta_ = 0.1;
    UpdateRule rule_ = UpdateRule::Delta;
    std::vector<double> weights_;
};

// Cosine similarity. Throws ZeroVector, DimensionMismatch.
double out_activity(std::span<const double> x, std::span<const double> w);

/// One supervised update with a one-hot desired activity. Throws UnknownClass.
void train_step(OutputLayer& layer, std::span<const double> x, ClassId target);

/// Class with the highest activity; ties go to the smallest index.
ClassId predict(const OutputLayer& layer, std::span<const double> x);

// Activities of every class neuron.
std::vector<double> activities(const OutputLayer& layer, std::span<const double> x);

} // namespace hsom::classifier
