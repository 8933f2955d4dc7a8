#include "hsom/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "hsom/dataset.hpp"
#include "hsom/error.hpp"
#include "hsom/random.hpp"
#include "json_io.hpp"

namespace hsom::pipeline {

namespace {

// splitmix64 finalizer; gives each consumer of the run seed its own stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum Stream : std::uint64_t { Layer1Init, Layer1Order, Layer2Init, Layer2Order, OutputInit, OutputOrder };

std::optional<std::string_view> hint_for(const Config& config, const std::vector<std::string>& names, ClassId label)
{
    if (config.preprocess.mask.is_global() || config.preprocess.union_mask)
        return std::nullopt;
    if (label >= names.size())
        raise(ErrorCode::UnknownClass, "label " + std::to_string(label) + " has no class name");
    return names[label];
}

std::size_t feature_dim(const Config& config)
{
    const auto& p = config.preprocess;
    std::size_t joints = 0;
    if (p.mask.is_global())
        joints = p.mask.global_joints().size();
    else if (p.union_mask)
        joints = p.mask.union_joints().size();
    else {
        for (const auto& [name, js] : p.mask.class_masks()) {
            if (joints != 0 && js.size() != joints)
                raise(ErrorCode::ConfigMismatch, "per-class attention subsets differ in size; the first-layer "
                                                 "map needs one input dimension");
            joints = js.size();
        }
    }
    return p.channels.count() * 3 * joints;
}

std::vector<double> classifier_input(const Config& config, const som::Model& layer2, std::span<const double> ordered)
{
    auto y = som::activity_map(layer2, ordered);
    if (config.classifier_input == ClassifierInput::Raw)
        return y;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double min = *lo;
    const double range = *hi - *lo;
    for (double& v : y)
        v = range > 0.0 ? (v - min) / range : 1.0;
    return y;
}

template <typename F>
void parallel_for(std::size_t n, F f)
{
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers)
                    f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace

void PipelineModel::validate() const
{
    const auto dim = feature_dim(config);
    if (layer1.dim() != dim)
        raise(ErrorCode::ConfigMismatch, "layer-1 map expects dimension " + std::to_string(layer1.dim())
                                             + " but the preprocessing config yields " + std::to_string(dim));
    if (n_max == 0 || layer2.dim() != ovr::ordered_vector_dim(n_max))
        raise(ErrorCode::ConfigMismatch, "layer-2 dimension does not equal 2 * (n_max + 1)");
    if (output.dim() != layer2.units())
        raise(ErrorCode::ConfigMismatch, "output layer dimension does not equal the layer-2 grid size");
    if (output.classes() == 0)
        raise(ErrorCode::ConfigMismatch, "output layer has no classes");
}

PipelineModel train_system(const Corpus& train, const Config& config)
{
    if (train.samples.empty())
        raise(ErrorCode::EmptyCorpus, "training corpus is empty");
    train.validate();
    const std::size_t dim = feature_dim(config);

    std::vector<preprocess::FeatureSequence> features;
    features.reserve(train.samples.size());
    std::vector<double> pooled;
    for (const auto& s : train.samples) {
        features.push_back(preprocess::extract_features(s.frames, config.preprocess,
                                                        hint_for(config, train.class_names, s.label)));
        if (features.back().dim != dim)
            raise(ErrorCode::ConfigMismatch, "feature dimension differs from the configured layer-1 input");
        pooled.insert(pooled.end(), features.back().data.begin(), features.back().data.end());
    }

    PipelineModel model;
    model.config = config;
    model.manifest.seed = config.seed;
    model.manifest.provenance = train.provenance;
    for (std::size_t i = 0; i < train.samples.size(); ++i)
        model.manifest.train_ids.push_back(train.sample_id(i));

    // Phase 1: posture map over every training frame.
    model.layer1 = som::Model(config.layer1.rows, config.layer1.cols, dim, derive_seed(config.seed, Layer1Init),
                              config.layer1.activation_sigma);
    som::train(model.layer1, RowsView{pooled, dim}, config.layer1.schedule, derive_seed(config.seed, Layer1Order));

    // Phase 2: frozen layer 1, ordered vectors into layer 2 and the output layer.
    std::vector<ovr::ActivityTrace> traces;
    traces.reserve(features.size());
    for (const auto& f : features)
        traces.push_back(ovr::extract_trace(model.layer1, RowsView{f.data, f.dim}));
    model.n_max = ovr::compute_n_max(traces);

    const std::size_t n = traces.size();
    const std::size_t ov_dim = ovr::ordered_vector_dim(model.n_max);
    std::vector<double> ordered;
    ordered.reserve(n * ov_dim);
    for (const auto& t : traces) {
        const auto ov = ovr::ordered_vector(t, model.n_max);
        ordered.insert(ordered.end(), ov.values.begin(), ov.values.end());
    }
    const RowsView ov_rows{ordered, ov_dim};

    model.layer2 = som::Model(config.layer2.rows, config.layer2.cols, ov_dim, derive_seed(config.seed, Layer2Init),
                              config.layer2.activation_sigma);
    model.output = classifier::OutputLayer(train.class_names, model.layer2.units(), config.beta,
                                           derive_seed(config.seed, OutputInit), config.update_rule);

    std::vector<std::size_t> order(n);
    if (config.phase2 == Phase2Mode::Interleaved) {
        const auto& schedule = config.layer2.schedule;
        som::Trainer trainer(model.layer2, schedule, schedule.epochs * n);
        model.layer2.training_seed = derive_seed(config.seed, Layer2Order);
        Rng rng(model.layer2.training_seed);
        for (std::size_t e = 0; e < schedule.epochs; ++e) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            rng.shuffle(std::span<std::size_t>(order));
            for (auto i : order) {
                trainer.present(ov_rows[i]);
                classifier::train_step(model.output, classifier_input(config, model.layer2, ov_rows[i]),
                                       train.samples[i].label);
            }
            trainer.end_epoch();
        }
    } else {
        som::train(model.layer2, ov_rows, config.layer2.schedule, derive_seed(config.seed, Layer2Order));
        std::vector<std::vector<double>> inputs;
        inputs.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            inputs.push_back(classifier_input(config, model.layer2, ov_rows[i]));
        Rng rng(derive_seed(config.seed, OutputOrder));
        for (std::size_t e = 0; e < config.output_epochs; ++e) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            rng.shuffle(std::span<std::size_t>(order));
            for (auto i : order)
                classifier::train_step(model.output, inputs[i], train.samples[i].label);
        }
    }
    model.validate();
    return model;
}

Inference infer(const PipelineModel& model, const ActionSample& sample, std::optional<std::string_view> class_hint)
{
    Inference r;
    r.features = preprocess::extract_features(sample.frames, model.config.preprocess, class_hint);
    r.trace = ovr::extract_trace(model.layer1, RowsView{r.features.data, r.features.dim});
    r.ordered = ovr::ordered_vector(r.trace, model.n_max);
    r.layer2_bmu = som::best_matching_unit(model.layer2, r.ordered.values);
    r.layer2_activity = som::activity_map(model.layer2, r.ordered.values);
    r.classifier_input = classifier_input(model.config, model.layer2, r.ordered.values);
    r.predicted = classifier::predict(model.output, r.classifier_input);
    return r;
}

ClassId classify(const PipelineModel& model, const ActionSample& sample, std::optional<std::string_view> class_hint)
{
    return infer(model, sample, class_hint).predicted;
}

ClassId classify(const PipelineModel& model, const ActionSample& sample)
{
    return classify(model, sample, hint_for(model.config, model.class_names(), sample.label));
}

double EvalReport::overall_accuracy() const noexcept
{
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::size_t EvalReport::class_count(ClassId k) const noexcept
{
    return k < confusion.size() ? std::accumulate(confusion[k].begin(), confusion[k].end(), std::size_t{0}) : 0;
}

double EvalReport::class_accuracy(ClassId k) const noexcept
{
    const auto n = class_count(k);
    return n == 0 ? 0.0 : 100.0 * static_cast<double>(confusion[k][k]) / static_cast<double>(n);
}

namespace {

// Relabels the corpus into the model's class table by name.
Corpus align_labels(const PipelineModel& model, const Corpus& corpus)
{
    corpus.validate();
    std::unordered_map<std::string, ClassId> model_index;
    for (ClassId k = 0; k < model.class_names().size(); ++k)
        model_index.emplace(model.class_names()[k], k);
    std::vector<ClassId> remap(corpus.class_count());
    for (ClassId k = 0; k < corpus.class_count(); ++k) {
        const auto it = model_index.find(corpus.class_names[k]);
        remap[k] = it == model_index.end() ? model.class_names().size() : it->second;
    }
    Corpus out;
    out.class_names = model.class_names();
    out.provenance = corpus.provenance;
    out.samples = corpus.samples;
    for (auto& s : out.samples) {
        if (remap[s.label] >= model.class_names().size())
            raise(ErrorCode::UnknownClass, "class '" + corpus.class_names[s.label] + "' is unknown to the model");
        s.label = remap[s.label];
    }
    return out;
}

} // namespace

EvalReport evaluate(const PipelineModel& model, const Corpus& test)
{
    if (test.samples.empty())
        raise(ErrorCode::EmptyCorpus, "evaluation corpus is empty");
    const auto aligned = align_labels(model, test);
    std::vector<ClassId> predicted(aligned.samples.size());
    parallel_for(aligned.samples.size(), [&](std::size_t i) { predicted[i] = classify(model, aligned.samples[i]); });

    EvalReport report;
    report.class_names = model.class_names();
    const auto k = report.class_names.size();
    report.confusion.assign(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto truth = aligned.samples[i].label;
        ++report.confusion[truth][predicted[i]];
        report.correct += truth == predicted[i] ? 1 : 0;
    }
    report.total = predicted.size();
    return report;
}

int region_of(som::GridCoord c, std::size_t rows, std::size_t cols)
{
    if (rows < 3 || cols < 3)
        raise(ErrorCode::InvalidArgument, "region partition needs a grid of at least 3 x 3");
    if (c.i >= rows || c.j >= cols)
        raise(ErrorCode::InvalidArgument, "coordinate outside the grid");
    const auto band = [](std::size_t idx, std::size_t n) { return std::min<std::size_t>(idx / (n / 3), 2); };
    return static_cast<int>(3 * band(c.i, rows) + band(c.j, cols) + 1);
}

std::size_t RegionHistogram::class_total(ClassId k) const noexcept
{
    return k < counts.size() ? std::accumulate(counts[k].begin(), counts[k].end(), std::size_t{0}) : 0;
}

std::array<double, kRegionCount> RegionHistogram::percent(ClassId k) const noexcept
{
    std::array<double, kRegionCount> out{};
    const auto total = class_total(k);
    if (total == 0)
        return out;
    for (std::size_t r = 0; r < kRegionCount; ++r)
        out[r] = 100.0 * static_cast<double>(counts[k][r]) / static_cast<double>(total);
    return out;
}

RegionHistogram region_histogram(const PipelineModel& model, const Corpus& corpus)
{
    if (corpus.samples.empty())
        raise(ErrorCode::EmptyCorpus, "region histogram needs samples");
    const auto aligned = align_labels(model, corpus);
    std::vector<som::GridCoord> bmus(aligned.samples.size());
    parallel_for(aligned.samples.size(), [&](std::size_t i) {
        const auto& s = aligned.samples[i];
        bmus[i] = infer(model, s, hint_for(model.config, model.class_names(), s.label)).layer2_bmu;
    });

    RegionHistogram hist;
    hist.class_names = model.class_names();
    hist.counts.assign(hist.class_names.size(), {});
    for (std::size_t i = 0; i < bmus.size(); ++i) {
        const int r = region_of(bmus[i], model.layer2.rows(), model.layer2.cols());
        ++hist.counts[aligned.samples[i].label][static_cast<std::size_t>(r - 1)];
    }
    return hist;
}

std::string model_to_json(const PipelineModel& model)
{
    using nlohmann::json;
    const json j{{"format", "hsom-pipeline"},
                 {"version", kModelFormatVersion},
                 {"config", detail::to_json(model.config)},
                 {"layer1", detail::to_json(model.layer1)},
                 {"n_max", model.n_max},
                 {"layer2", detail::to_json(model.layer2)},
                 {"output", detail::to_json(model.output)},
                 {"manifest",
                  {{"seed", model.manifest.seed},
                   {"provenance", model.manifest.provenance},
                   {"train_ids", model.manifest.train_ids}}}};
    return j.dump(1) + "\n";
}

PipelineModel model_from_json(const std::string& text)
{
    return detail::guarded_parse(text, [](const nlohmann::json& j) {
        detail::expect_format(j, "hsom-pipeline", kModelFormatVersion);
        PipelineModel m;
        try {
            m.config = detail::config_from_json(j.at("config"));
        } catch (const Error& e) {
            raise(ErrorCode::CorruptFile, std::string("embedded config: ") + e.what());
        }
        m.layer1 = detail::som_from_json(j.at("layer1"));
        m.n_max = j.at("n_max").get<std::size_t>();
        m.layer2 = detail::som_from_json(j.at("layer2"));
        m.output = detail::output_from_json(j.at("output"));
        const auto& man = j.at("manifest");
        m.manifest.seed = man.at("seed").get<std::uint64_t>();
        m.manifest.provenance = man.at("provenance").get<std::string>();
        m.manifest.train_ids = man.at("train_ids").get<std::vector<std::string>>();
        try {
            m.validate();
        } catch (const Error& e) {
            raise(ErrorCode::CorruptFile, e.what());
        }
        return m;
    });
}

void save_model(const PipelineModel& model, const std::filesystem::path& path)
{
    dataset::write_file(path, model_to_json(model));
}

PipelineModel load_model(const std::filesystem::path& path) { return model_from_json(dataset::read_file(path)); }

} // namespace hsom::pipeline
