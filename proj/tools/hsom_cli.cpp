#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "hsom/dataset.hpp"
#include "hsom/error.hpp"
#include "hsom/pipeline.hpp"
#include "hsom/report.hpp"
#include "hsom/synthetic.hpp"

namespace fs = std::filesystem;
using namespace hsom;

namespace {

// Options shared by subcommands that read a corpus.
struct DataArgs {
    std::string root;
    int msr_experiment = 0;
};

void add_data_options(CLI::App* cmd, DataArgs& d, bool required)
{
    auto* opt = cmd->add_option("-d,--data", d.root,
                                "Corpus root: <root>/<action>/<subject>_<event>.txt, or a flat MSR "
                                "directory with --msr-experiment");
    if (required)
        opt->required();
    cmd->add_option("--msr-experiment", d.msr_experiment, "Read aNN_sNN_eNN_skeleton files for experiment 1 or 2")
        ->check(CLI::IsMember({1, 2}));
}

dataset::JointOrder joint_order(const pipeline::Config& config)
{
    if (config.joint_order.empty())
        return {};
    return dataset::JointOrder::from_names(config.joint_order);
}

Corpus load_data(const DataArgs& d, const pipeline::Config& config)
{
    const auto order = joint_order(config);
    if (d.msr_experiment != 0) {
        const auto ids = dataset::msr_experiment_actions(d.msr_experiment);
        return dataset::load_msr_directory(d.root, ids, order);
    }
    return dataset::load_corpus(d.root, order);
}

Corpus select_manifest(const Corpus& corpus, const std::string& manifest_path)
{
    const auto ids = dataset::parse_manifest(dataset::read_file(manifest_path));
    return dataset::select(corpus, ids);
}

// Samples whose ids were not used for training.
Corpus held_out(const Corpus& corpus, const pipeline::PipelineModel& model)
{
    const std::set<std::string> seen(model.manifest.train_ids.begin(), model.manifest.train_ids.end());
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
        auto id = corpus.sample_id(i);
        if (!seen.contains(id))
            ids.push_back(std::move(id));
    }
    return dataset::select(corpus, ids);
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty())
        return;
    dataset::write_file(path, content);
    std::cerr << "wrote " << path << "\n";
}

ActionSample load_sample(const std::string& path, const pipeline::PipelineModel& model)
{
    return dataset::parse_skeleton_file(dataset::read_file(path), 0, {}, joint_order(model.config));
}

std::optional<std::string_view> hint_of(const std::string& name)
{
    if (name.empty())
        return std::nullopt;
    return name;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hierarchical SOM action recognition"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Train a model and write it as JSON");
    DataArgs train_data;
    std::string config_path;
    std::string preset = "synthetic";
    std::string model_out;
    std::string train_manifest;
    std::string split_dir;
    std::optional<std::uint64_t> seed;
    std::string channels;
    std::string attention;
    add_data_options(train, train_data, true);
    train->add_option("-c,--config", config_path, "JSON config; keys missing there keep the preset values");
    train->add_option("--preset", preset, "Base preset: synthetic, msr-exp1, msr-exp2")->capture_default_str();
    train->add_option("-m,--model", model_out, "Output model path")->required();
    train->add_option("--train-manifest", train_manifest, "Train on exactly these sample ids instead of splitting");
    train->add_option("--split-dir", split_dir, "Write train.txt and test.txt manifests here");
    train->add_option("--seed", seed, "Run seed (split, initialization, presentation order)");
    train->add_option("--channels", channels, "Feature channels, e.g. pos,vel,acc");
    train->add_option("--attention", attention, "Attention profile: all, left-arm, msr-exp1, msr-exp2");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a model on labeled samples");
    DataArgs eval_data;
    std::string model_in;
    std::string test_manifest;
    bool eval_all = false;
    std::string confusion_out;
    std::string per_class_out;
    add_data_options(eval, eval_data, true);
    eval->add_option("-m,--model", model_in, "Model path")->required();
    eval->add_option("--test-manifest", test_manifest, "Evaluate exactly these sample ids");
    eval->add_flag("--all", eval_all, "Include the samples the model was trained on");
    eval->add_option("--confusion-csv", confusion_out, "Write the confusion matrix as CSV");
    eval->add_option("--per-class-csv", per_class_out, "Write per-class accuracy as CSV");

    // classify
    auto* classify = app.add_subcommand("classify", "Print the predicted class of one skeleton file");
    std::string sample_path;
    std::string class_hint;
    classify->add_option("-m,--model", model_in, "Model path")->required();
    classify->add_option("sample", sample_path, "Skeleton text file")->required();
    classify->add_option("--class-hint", class_hint, "Class name that selects a per-class attention mask");

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
    dataset::SyntheticSpec spec;
    std::string synth_out;
    std::string profile = "shape";
    synth->add_option("-o,--out", synth_out, "Output corpus root")->required();
    synth->add_option("--classes", spec.classes)->capture_default_str();
    synth->add_option("--per-class", spec.samples_per_class)->capture_default_str();
    synth->add_option("--min-frames", spec.min_frames)->capture_default_str();
    synth->add_option("--max-frames", spec.max_frames)->capture_default_str();
    synth->add_option("--noise", spec.noise)->capture_default_str();
    synth->add_option("--seed", spec.seed)->capture_default_str();
    synth->add_option("--profile", profile, "shape or speed")->check(CLI::IsMember({"shape", "speed"}))
        ->capture_default_str();

    // export-maps
    auto* maps = app.add_subcommand("export-maps", "Write the activity trace and map images for one sample");
    std::string maps_out;
    maps->add_option("-m,--model", model_in, "Model path")->required();
    maps->add_option("sample", sample_path, "Skeleton text file")->required();
    maps->add_option("-o,--out", maps_out, "Output directory")->required();
    maps->add_option("--class-hint", class_hint, "Class name that selects a per-class attention mask");

    // region-hist
    auto* regions = app.add_subcommand("region-hist", "Share of second-layer winners per 3x3 map region");
    DataArgs region_data;
    std::string region_manifest;
    std::string region_csv_out;
    add_data_options(regions, region_data, true);
    regions->add_option("-m,--model", model_in, "Model path")->required();
    regions->add_option("--manifest", region_manifest, "Sample ids to include (default: the training set)");
    regions->add_option("--csv", region_csv_out, "Write the table as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            auto config = pipeline::preset_config(preset);
            if (!config_path.empty())
                config = pipeline::parse_config(dataset::read_file(config_path), config);
            if (seed)
                config.seed = *seed;
            if (!channels.empty())
                config.preprocess.channels = preprocess::ChannelSet::parse(channels);
            if (!attention.empty())
                config.preprocess.mask = preprocess::AttentionMask::preset(attention);

            const auto corpus = load_data(train_data, config);
            Corpus train_set;
            Corpus test_set;
            if (!train_manifest.empty()) {
                train_set = select_manifest(corpus, train_manifest);
            } else {
                std::tie(train_set, test_set) = dataset::split_dataset(corpus, config.train_fraction, config.seed);
            }
            if (!split_dir.empty()) {
                fs::create_directories(split_dir);
                write_output((fs::path(split_dir) / "train.txt").string(), dataset::manifest_text(train_set));
                if (!test_set.samples.empty())
                    write_output((fs::path(split_dir) / "test.txt").string(), dataset::manifest_text(test_set));
            }
            std::cerr << "training on " << train_set.samples.size() << " samples, " << train_set.class_names.size()
                      << " classes\n";
            const auto model = pipeline::train_system(train_set, config);
            pipeline::save_model(model, model_out);
            std::cerr << "wrote " << model_out << "\n";
            if (!test_set.samples.empty())
                std::cout << report::eval_text(pipeline::evaluate(model, test_set));
        } else if (*eval) {
            const auto model = pipeline::load_model(model_in);
            const auto corpus = load_data(eval_data, model.config);
            const auto test = !test_manifest.empty() ? select_manifest(corpus, test_manifest)
                              : eval_all             ? corpus
                                                     : held_out(corpus, model);
            const auto result = pipeline::evaluate(model, test);
            std::cout << report::eval_text(result);
            write_output(confusion_out, report::confusion_csv(result));
            write_output(per_class_out, report::per_class_csv(result));
        } else if (*classify) {
            const auto model = pipeline::load_model(model_in);
            const auto sample = load_sample(sample_path, model);
            const auto k = pipeline::classify(model, sample, hint_of(class_hint));
            std::cout << model.class_names()[k] << "\n";
        } else if (*synth) {
            spec.profile = profile == "speed" ? dataset::SyntheticProfile::Speed : dataset::SyntheticProfile::Shape;
            const auto corpus = dataset::generate_synthetic(spec);
            dataset::write_corpus(corpus, synth_out);
            std::cerr << "wrote " << corpus.samples.size() << " samples to " << synth_out << "\n";
        } else if (*maps) {
            const auto model = pipeline::load_model(model_in);
            const auto sample = load_sample(sample_path, model);
            const auto inf = pipeline::infer(model, sample, hint_of(class_hint));
            fs::create_directories(maps_out);
            const fs::path dir(maps_out);

            std::vector<double> hits(model.layer1.units(), 0.0);
            for (const auto& p : inf.trace.points)
                hits[static_cast<std::size_t>(p.x) * model.layer1.cols() + static_cast<std::size_t>(p.y)] += 1.0;
            const auto r1 = model.layer1.rows();
            const auto c1 = model.layer1.cols();
            const auto r2 = model.layer2.rows();
            const auto c2 = model.layer2.cols();
            write_output((dir / "trace.csv").string(), ovr::trace_csv(inf.trace));
            write_output((dir / "layer1_hits.pgm").string(), report::activity_pgm(hits, r1, c1));
            write_output((dir / "layer1_hits.csv").string(), report::activity_csv(hits, r1, c1));
            write_output((dir / "layer2_activity.pgm").string(), report::activity_pgm(inf.layer2_activity, r2, c2));
            write_output((dir / "layer2_activity.csv").string(), report::activity_csv(inf.layer2_activity, r2, c2));
            std::cout << model.class_names()[inf.predicted] << "\n";
        } else if (*regions) {
            const auto model = pipeline::load_model(model_in);
            const auto corpus = load_data(region_data, model.config);
            Corpus chosen;
            if (!region_manifest.empty())
                chosen = select_manifest(corpus, region_manifest);
            else
                chosen = dataset::select(corpus, model.manifest.train_ids);
            const auto hist = pipeline::region_histogram(model, chosen);
            std::cout << report::region_table(hist);
            write_output(region_csv_out, report::region_csv(hist));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
