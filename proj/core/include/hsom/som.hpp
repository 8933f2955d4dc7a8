#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsom/rows.hpp"

namespace hsom::som {

// Default exponential factor of the activation function.
inline constexpr double kDefaultActivationSigma = 1e6;

struct GridCoord {
    std::size_t i = 0;
    std::size_t j = 0;

    friend constexpr bool operator==(GridCoord, GridCoord) = default;
};

enum class Neighborhood {
    // exp(-|r_c - r_ij| / (2 sigma^2))
    Printed,
    // exp(-|r_c - r_ij|^2 / (2 sigma^2))
    Squared,
};

// Exponential interpolation from the initial to the final value over all
// presentations of a training run.
struct Schedule {
    std::size_t epochs = 20;
    double alpha0 = 0.1;
    double alpha1 = 0.01;
    double sigma0 = 1.0;
    double sigma1 = 1.0;
    Neighborhood neighborhood = Neighborhood::Printed;

    // sigma0 = max(rows, cols) / 2, sigma1 = 1.
    static Schedule standard(std::size_t rows, std::size_t cols, std::size_t epochs);
    // Throws InvalidArgument unless epochs >= 1, alpha0 >= alpha1 >= 0,
    // alpha0 <= 1 and sigma0 >= sigma1 > 0.
    void validate() const;

    double alpha_at(std::size_t t, std::size_t total) const noexcept;
    double sigma_at(std::size_t t, std::size_t total) const noexcept;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// I x J grid of unit-norm weight vectors, stored row-major.
class Model {
public:
    Model() = default;
    /// Weights drawn uniformly from [0, 1] and normalized to unit length.
    Model(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed,
          double activation_sigma = kDefaultActivationSigma);

    /// Adopts the given weights after renormalizing them.
    static Model from_weights(std::size_t rows, std::size_t cols, std::size_t dim,
                              std::vector<double> weights,
                              double activation_sigma = kDefaultActivationSigma);

    /// Adopts weights exactly as given; throws CorruptFile unless every
    /// vector is finite and unit length within 1e-9.
    static Model restore(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> weights,
                         double activation_sigma, std::uint64_t init_seed);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t units() const noexcept { return rows_ * cols_; }
    double activation_sigma() const noexcept { return activation_sigma_; }
    std::uint64_t seed() const noexcept { return seed_; }

    std::span<const double> weight(std::size_t unit) const { return {weights_.data() + unit * dim_, dim_}; }
    std::span<double> weight(std::size_t unit) { return {weights_.data() + unit * dim_, dim_}; }
    std::span<const double> weight(GridCoord c) const { return weight(c.i * cols_ + c.j); }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::vector<double>& mutable_weights() noexcept { return weights_; }

    GridCoord coord(std::size_t unit) const noexcept { return {unit / cols_, unit % cols_}; }
    std::size_t unit(GridCoord c) const noexcept { return c.i * cols_ + c.j; }

    // Training bookkeeping persisted with the weights.
    Schedule schedule;
    std::size_t epochs_trained = 0;
    std::size_t presentations = 0;
    std::uint64_t training_seed = 0;

    bool unit_norm(double tolerance = 1e-9) const noexcept;
    void normalize_all() noexcept;

    friend bool operator==(const Model&, const Model&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t dim_ = 0;
    double activation_sigma_ = kDefaultActivationSigma;
    std::uint64_t seed_ = 0;
    std::vector<double> weights_;
};

// |x - w|_2. Throws DimensionMismatch.
double net_input(std::span<const double> x, std::span<const double> w);
// exp(-s / sigma).
double activation(double s, double sigma);
// Grid-distance weighting of the adaptation step.
double neighborhood(double grid_distance, double sigma_n, Neighborhood kind) noexcept;

/// Unit with the strongest activation, i.e. the smallest net input. Ties go
/// to the smallest row-major index.
GridCoord best_matching_unit(const Model& model, std::span<const double> x);

/// w_ij += alpha * G_ijc * (x - w_ij) for every unit, then renormalizes all
/// weights.
void adapt(Model& model, std::span<const double> x, GridCoord c, double alpha, double sigma_n,
           Neighborhood kind = Neighborhood::Printed);

/// Steps a model through a schedule one presentation at a time. Used directly
/// when SOM training is interleaved with other learners.
class Trainer {
public:
    Trainer(Model& model, const Schedule& schedule, std::size_t total_presentations);

    // BMU of x followed by adaptation; returns the BMU.
    GridCoord present(std::span<const double> x);
    void end_epoch() noexcept { ++model_->epochs_trained; }

    std::size_t step() const noexcept { return step_; }

private:
    Model* model_;
    Schedule schedule_;
    std::size_t total_;
    std::size_t step_ = 0;
};

/// Runs schedule.epochs passes over the inputs, each in a fresh order
/// shuffled from `seed`. Throws EmptyInput.
void train(Model& model, RowsView inputs, const Schedule& schedule, std::uint64_t seed);

/// Activation of every unit, row-major.
std::vector<double> activity_map(const Model& model, std::span<const double> x);

/// Mean distance from each input to its best-matching weight.
double quantization_error(const Model& model, RowsView inputs);

std::string to_json_text(const Model& model);
Model from_json_text(const std::string& text);

} // namespace hsom::som
