#include "hsom/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "hsom/error.hpp"
#include "hsom/random.hpp"
#include "json_io.hpp"

namespace hsom::classifier {

namespace {

double squared_norm(std::span<const double> v) noexcept
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return s;
}

} // namespace

OutputLayer::OutputLayer(std::vector<std::string> class_names, std::size_t dim, double beta, std::uint64_t seed,
                         UpdateRule rule)
    : names_(std::move(class_names)), dim_(dim), beta_(beta), rule_(rule)
{
    if (names_.empty() || dim_ == 0)
        raise(ErrorCode::InvalidArgument, "output layer needs classes and a positive input dimension");
    Rng rng(seed);
    weights_.resize(names_.size() * dim_);
    for (ClassId k = 0; k < names_.size(); ++k) {
        auto w = weight(k);
        double n = 0.0;
        while (!(n > 0.0)) {
            for (double& x : w)
                x = rng.uniform01();
            n = std::sqrt(squared_norm(w));
        }
        for (double& x : w)
            x /= n;
    }
}

OutputLayer OutputLayer::from_weights(std::vector<std::string> class_names, std::size_t dim,
                                      std::vector<double> weights, double beta, UpdateRule rule)
{
    if (class_names.empty() || dim == 0 || weights.size() != class_names.size() * dim)
        raise(ErrorCode::DimensionMismatch, "output weights do not match classes x dimension");
    OutputLayer layer;
    layer.names_ = std::move(class_names);
    layer.dim_ = dim;
    layer.weights_ = std::move(weights);
    layer.beta_ = beta;
    layer.rule_ = rule;
    return layer;
}

double out_activity(std::span<const double> x, std::span<const double> w)
{
    if (x.size() != w.size())
        raise(ErrorCode::DimensionMismatch, "activity vector and weight differ in dimension");
    double xw = 0.0;
    double xx = 0.0;
    double ww = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        xw += x[k] * w[k];
        xx += x[k] * x[k];
        ww += w[k] * w[k];
    }
    if (!(xx > 0.0) || !(ww > 0.0))
        raise(ErrorCode::ZeroVector, "cosine activity is undefined for a zero vector");
    return std::clamp(xw / (std::sqrt(xx) * std::sqrt(ww)), -1.0, 1.0);
}

std::vector<double> activities(const OutputLayer& layer, std::span<const double> x)
{
    std::vector<double> y(layer.classes());
    for (ClassId k = 0; k < layer.classes(); ++k)
        y[k] = out_activity(x, layer.weight(k));
    return y;
}

void train_step(OutputLayer& layer, std::span<const double> x, ClassId target)
{
    if (target >= layer.classes())
        raise(ErrorCode::UnknownClass, "target class " + std::to_string(target) + " is not in the output layer");
    const auto y = activities(layer, x);
    const double x_norm = std::sqrt(squared_norm(x));
    for (ClassId k = 0; k < layer.classes(); ++k) {
        const double d = k == target ? 1.0 : 0.0;
        if (y[k] == d)
            continue;
        auto w = layer.weight(k);
        if (layer.rule() == UpdateRule::Delta) {
            const double step = layer.beta() * (d - y[k]) / x_norm;
            for (std::size_t l = 0; l < w.size(); ++l)
                w[l] += step * x[l];
        } else {
            const double step = layer.beta() * (y[k] - d);
            for (double& v : w)
                v += step;
        }
    }
}

ClassId predict(const OutputLayer& layer, std::span<const double> x)
{
    const auto y = activities(layer, x);
    ClassId best = 0;
    for (ClassId k = 1; k < y.size(); ++k)
        if (y[k] > y[best])
            best = k;
    return best;
}

} // namespace hsom::classifier

namespace hsom::detail {

nlohmann::json to_json(const classifier::OutputLayer& layer)
{
    return nlohmann::json{{"classes", layer.class_names()},
                          {"dim", layer.dim()},
                          {"beta", layer.beta()},
                          {"update_rule", layer.rule() == classifier::UpdateRule::Delta ? "delta" : "printed"},
                          {"weights", layer.weights()}};
}

classifier::OutputLayer output_from_json(const nlohmann::json& j)
{
    const auto rule_name = j.at("update_rule").get<std::string>();
    if (rule_name != "delta" && rule_name != "printed")
        raise(ErrorCode::CorruptFile, "unknown output update rule '" + rule_name + "'");
    try {
        return classifier::OutputLayer::from_weights(
            j.at("classes").get<std::vector<std::string>>(), j.at("dim").get<std::size_t>(),
            j.at("weights").get<std::vector<double>>(), j.at("beta").get<double>(),
            rule_name == "delta" ? classifier::UpdateRule::Delta : classifier::UpdateRule::Printed);
    } catch (const Error& e) {
        raise(ErrorCode::CorruptFile, e.what());
    }
}

} // namespace hsom::detail
