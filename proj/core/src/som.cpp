#include "hsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hsom/error.hpp"
#include "hsom/random.hpp"
#include "json_io.hpp"

namespace hsom::som {

Schedule Schedule::standard(std::size_t rows, std::size_t cols, std::size_t epochs)
{
    Schedule s;
    s.epochs = epochs;
    s.sigma0 = std::max(1.0, static_cast<double>(std::max(rows, cols)) / 2.0);
    s.sigma1 = 1.0;
    return s;
}

void Schedule::validate() const
{
    if (epochs < 1)
        raise(ErrorCode::InvalidArgument, "schedule needs at least one epoch");
    if (!(alpha0 <= 1.0 && alpha0 >= alpha1 && alpha1 >= 0.0))
        raise(ErrorCode::InvalidArgument, "schedule needs 1 >= alpha0 >= alpha1 >= 0");
    if (!(sigma0 >= sigma1 && sigma1 > 0.0))
        raise(ErrorCode::InvalidArgument, "schedule needs sigma0 >= sigma1 > 0");
}

namespace {

double interpolate(double from, double to, std::size_t t, std::size_t total) noexcept
{
    if (total <= 1 || from == to || from == 0.0)
        return from;
    const double frac = static_cast<double>(t) / static_cast<double>(total - 1);
    return from * std::pow(to / from, frac);
}

} // namespace

double Schedule::alpha_at(std::size_t t, std::size_t total) const noexcept
{
    return interpolate(alpha0, alpha1, t, total);
}

double Schedule::sigma_at(std::size_t t, std::size_t total) const noexcept
{
    return interpolate(sigma0, sigma1, t, total);
}

namespace {

double squared_norm(std::span<const double> v) noexcept
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return s;
}

// Returns false (leaving w untouched) for a zero vector.
bool normalize(std::span<double> w) noexcept
{
    const double n = std::sqrt(squared_norm(w));
    if (!(n > 0.0))
        return false;
    for (double& x : w)
        x /= n;
    return true;
}

void check_grid(std::size_t rows, std::size_t cols, std::size_t dim)
{
    if (rows == 0 || cols == 0 || dim == 0)
        raise(ErrorCode::InvalidArgument, "SOM grid and input dimension must be positive");
}

} // namespace

Model::Model(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed, double activation_sigma)
    : rows_(rows), cols_(cols), dim_(dim), activation_sigma_(activation_sigma), seed_(seed)
{
    check_grid(rows, cols, dim);
    if (!(activation_sigma > 0.0))
        raise(ErrorCode::InvalidArgument, "activation sigma must be positive");
    schedule = Schedule::standard(rows, cols, 1);
    Rng rng(seed);
    weights_.resize(rows * cols * dim);
    for (std::size_t u = 0; u < units(); ++u) {
        auto w = weight(u);
        do {
            for (double& x : w)
                x = rng.uniform01();
        } while (!normalize(w));
    }
}

Model Model::from_weights(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> weights,
                          double activation_sigma)
{
    check_grid(rows, cols, dim);
    if (weights.size() != rows * cols * dim)
        raise(ErrorCode::DimensionMismatch, "weight count does not match the grid");
    if (!(activation_sigma > 0.0))
        raise(ErrorCode::InvalidArgument, "activation sigma must be positive");
    Model m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.dim_ = dim;
    m.activation_sigma_ = activation_sigma;
    m.schedule = Schedule::standard(rows, cols, 1);
    m.weights_ = std::move(weights);
    for (std::size_t u = 0; u < m.units(); ++u)
        if (!normalize(m.weight(u)))
            raise(ErrorCode::ZeroVector, "SOM weight vectors must be non-zero");
    return m;
}

bool Model::unit_norm(double tolerance) const noexcept
{
    for (std::size_t u = 0; u < units(); ++u) {
        const double n = std::sqrt(squared_norm(weight(u)));
        if (!std::isfinite(n) || std::abs(n - 1.0) > tolerance)
            return false;
    }
    return true;
}

void Model::normalize_all() noexcept
{
    for (std::size_t u = 0; u < units(); ++u)
        normalize(weight(u));
}

double net_input(std::span<const double> x, std::span<const double> w)
{
    if (x.size() != w.size())
        raise(ErrorCode::DimensionMismatch, "input has dimension " + std::to_string(x.size()) + ", weight "
                                                + std::to_string(w.size()));
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - w[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double activation(double s, double sigma)
{
    if (!(sigma > 0.0))
        raise(ErrorCode::InvalidArgument, "activation sigma must be positive");
    return std::exp(-s / sigma);
}

double neighborhood(double grid_distance, double sigma_n, Neighborhood kind) noexcept
{
    const double d = kind == Neighborhood::Squared ? grid_distance * grid_distance : grid_distance;
    return std::exp(-d / (2.0 * sigma_n * sigma_n));
}

GridCoord best_matching_unit(const Model& model, std::span<const double> x)
{
    if (x.size() != model.dim())
        raise(ErrorCode::DimensionMismatch, "input has dimension " + std::to_string(x.size()) + ", map expects "
                                                + std::to_string(model.dim()));
    // exp(-s / sigma) is strictly decreasing in s and sqrt is monotone, so the
    // strongest activation is the smallest squared distance.
    std::size_t best = 0;
    double best_d = 0.0;
    const double* w = model.weights().data();
    const std::size_t dim = model.dim();
    for (std::size_t u = 0; u < model.units(); ++u, w += dim) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = x[k] - w[k];
            s += d * d;
        }
        if (u == 0 || s < best_d) {
            best = u;
            best_d = s;
        }
    }
    return model.coord(best);
}

void adapt(Model& model, std::span<const double> x, GridCoord c, double alpha, double sigma_n, Neighborhood kind)
{
    if (x.size() != model.dim())
        raise(ErrorCode::DimensionMismatch, "input has dimension " + std::to_string(x.size()) + ", map expects "
                                                + std::to_string(model.dim()));
    if (c.i >= model.rows() || c.j >= model.cols())
        raise(ErrorCode::InvalidArgument, "winner coordinate outside the grid");
    if (!(sigma_n > 0.0))
        raise(ErrorCode::InvalidArgument, "neighborhood width must be positive");

    const std::size_t dim = model.dim();
    std::vector<double> previous(dim);
    for (std::size_t u = 0; u < model.units(); ++u) {
        const auto g = model.coord(u);
        const double di = static_cast<double>(g.i) - static_cast<double>(c.i);
        const double dj = static_cast<double>(g.j) - static_cast<double>(c.j);
        const double step = alpha * neighborhood(std::sqrt(di * di + dj * dj), sigma_n, kind);
        if (step == 0.0)
            continue;
        auto w = model.weight(u);
        std::copy(w.begin(), w.end(), previous.begin());
        for (std::size_t k = 0; k < dim; ++k)
            w[k] += step * (x[k] - w[k]);
        if (!normalize(w))
            std::copy(previous.begin(), previous.end(), w.begin());
    }
}

Trainer::Trainer(Model& model, const Schedule& schedule, std::size_t total_presentations)
    : model_(&model), schedule_(schedule), total_(total_presentations)
{
    schedule_.validate();
    model_->schedule = schedule_;
}

GridCoord Trainer::present(std::span<const double> x)
{
    const double alpha = schedule_.alpha_at(step_, total_);
    const double sigma = schedule_.sigma_at(step_, total_);
    const auto c = best_matching_unit(*model_, x);
    adapt(*model_, x, c, alpha, sigma, schedule_.neighborhood);
    ++step_;
    ++model_->presentations;
    return c;
}

void train(Model& model, RowsView inputs, const Schedule& schedule, std::uint64_t seed)
{
    if (inputs.size() == 0)
        raise(ErrorCode::EmptyInput, "no training vectors");
    if (inputs.dim != model.dim())
        raise(ErrorCode::DimensionMismatch, "inputs have dimension " + std::to_string(inputs.dim) + ", map expects "
                                                + std::to_string(model.dim()));
    const std::size_t n = inputs.size();
    Trainer trainer(model, schedule, schedule.epochs * n);
    model.training_seed = seed;
    Rng rng(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t e = 0; e < schedule.epochs; ++e) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(order));
        for (auto i : order)
            trainer.present(inputs[i]);
        trainer.end_epoch();
    }
}

std::vector<double> activity_map(const Model& model, std::span<const double> x)
{
    if (x.size() != model.dim())
        raise(ErrorCode::DimensionMismatch, "input has dimension " + std::to_string(x.size()) + ", map expects "
                                                + std::to_string(model.dim()));
    std::vector<double> out(model.units());
    for (std::size_t u = 0; u < model.units(); ++u)
        out[u] = activation(net_input(x, model.weight(u)), model.activation_sigma());
    return out;
}

double quantization_error(const Model& model, RowsView inputs)
{
    if (inputs.size() == 0)
        raise(ErrorCode::EmptyInput, "no vectors to quantize");
    double sum = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        sum += net_input(inputs[i], model.weight(best_matching_unit(model, inputs[i])));
    return sum / static_cast<double>(inputs.size());
}

std::string to_json_text(const Model& model) { return detail::to_json(model).dump(2) + "\n"; }

Model from_json_text(const std::string& text)
{
    return detail::guarded_parse(text, [](const nlohmann::json& j) { return detail::som_from_json(j); });
}

} // namespace hsom::som

namespace hsom::som {

Model Model::restore(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> weights,
                     double activation_sigma, std::uint64_t init_seed)
{
    if (rows == 0 || cols == 0 || dim == 0 || weights.size() != rows * cols * dim || !(activation_sigma > 0.0))
        raise(ErrorCode::CorruptFile, "SOM shape and weight count disagree");
    Model m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.dim_ = dim;
    m.activation_sigma_ = activation_sigma;
    m.seed_ = init_seed;
    m.weights_ = std::move(weights);
    if (!m.unit_norm(1e-9))
        raise(ErrorCode::CorruptFile, "SOM weights are not unit vectors");
    return m;
}

} // namespace hsom::som

namespace hsom::detail {

using nlohmann::json;

json to_json(const som::Schedule& s)
{
    return json{{"epochs", s.epochs},
                {"alpha0", s.alpha0},
                {"alpha1", s.alpha1},
                {"sigma0", s.sigma0},
                {"sigma1", s.sigma1},
                {"neighborhood", s.neighborhood == som::Neighborhood::Squared ? "squared" : "printed"}};
}

som::Schedule schedule_from_json(const json& j, som::Schedule s)
{
    for (const auto& [key, value] : j.items()) {
        if (key == "epochs")
            s.epochs = value.get<std::size_t>();
        else if (key == "alpha0")
            s.alpha0 = value.get<double>();
        else if (key == "alpha1")
            s.alpha1 = value.get<double>();
        else if (key == "sigma0")
            s.sigma0 = value.get<double>();
        else if (key == "sigma1")
            s.sigma1 = value.get<double>();
        else if (key == "neighborhood") {
            const auto n = value.get<std::string>();
            if (n == "printed")
                s.neighborhood = som::Neighborhood::Printed;
            else if (n == "squared")
                s.neighborhood = som::Neighborhood::Squared;
            else
                raise(ErrorCode::InvalidArgument, "neighborhood must be 'printed' or 'squared'");
        } else
            raise(ErrorCode::InvalidArgument, "unknown schedule key '" + key + "'");
    }
    return s;
}

json to_json(const som::Model& m)
{
    return json{{"format", "hsom-som"},
                {"version", kSomFormatVersion},
                {"rows", m.rows()},
                {"cols", m.cols()},
                {"dim", m.dim()},
                {"activation_sigma", m.activation_sigma()},
                {"init_seed", m.seed()},
                {"training",
                 {{"seed", m.training_seed},
                  {"epochs_trained", m.epochs_trained},
                  {"presentations", m.presentations},
                  {"schedule", to_json(m.schedule)}}},
                {"weights", m.weights()}};
}

som::Model som_from_json(const json& j)
{
    expect_format(j, "hsom-som", kSomFormatVersion);
    auto m = som::Model::restore(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                                 j.at("dim").get<std::size_t>(), j.at("weights").get<std::vector<double>>(),
                                 j.at("activation_sigma").get<double>(), j.at("init_seed").get<std::uint64_t>());
    const auto& t = j.at("training");
    m.training_seed = t.at("seed").get<std::uint64_t>();
    m.epochs_trained = t.at("epochs_trained").get<std::size_t>();
    m.presentations = t.at("presentations").get<std::size_t>();
    m.schedule = schedule_from_json(t.at("schedule"), m.schedule);
    return m;
}

void expect_format(const json& j, std::string_view format, int version)
{
    if (!j.is_object() || !j.contains("format") || j.at("format") != format)
        raise(ErrorCode::CorruptFile, "not a " + std::string(format) + " document");
    const int v = j.at("version").get<int>();
    if (v != version)
        raise(ErrorCode::VersionMismatch, std::string(format) + " version " + std::to_string(v) + ", expected "
                                              + std::to_string(version));
}

} // namespace hsom::detail
