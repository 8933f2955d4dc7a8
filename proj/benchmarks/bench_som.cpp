#include <benchmark/benchmark.h>

#include <vector>

#include "hsom/dataset.hpp"
#include "hsom/ovr.hpp"
#include "hsom/pipeline.hpp"
#include "hsom/random.hpp"
#include "hsom/som.hpp"
#include "hsom/synthetic.hpp"

using namespace hsom;

namespace {

std::vector<double> random_input(std::size_t dim, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> x(dim);
    for (auto& v : x)
        v = rng.uniform(-1.0, 1.0);
    return x;
}

void BM_BestMatchingUnit(benchmark::State& state)
{
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto dim = static_cast<std::size_t>(state.range(1));
    const som::Model m(side, side, dim, 1);
    const auto x = random_input(dim, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(som::best_matching_unit(m, x));
}
BENCHMARK(BM_BestMatchingUnit)->Args({30, 9})->Args({30, 60})->Args({35, 122});

void BM_TrainerPresent(benchmark::State& state)
{
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto dim = static_cast<std::size_t>(state.range(1));
    som::Model m(side, side, dim, 1);
    som::Trainer trainer(m, som::Schedule::standard(side, side, 1), 1000000);
    const auto x = random_input(dim, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(trainer.present(x));
}
BENCHMARK(BM_TrainerPresent)->Args({30, 60})->Args({35, 122});

void BM_OrderedVector(benchmark::State& state)
{
    Rng rng(4);
    ovr::ActivityTrace t;
    for (int k = 0; k < state.range(0); ++k)
        t.points.push_back({static_cast<double>(rng.below(30)), static_cast<double>(rng.below(30))});
    for (auto _ : state)
        benchmark::DoNotOptimize(ovr::ordered_vector(t, 60));
}
BENCHMARK(BM_OrderedVector)->Arg(30)->Arg(120);

void BM_ClassifySample(benchmark::State& state)
{
    dataset::SyntheticSpec spec;
    spec.samples_per_class = 6;
    const auto corpus = dataset::generate_synthetic(spec);
    auto config = pipeline::preset_config("synthetic");
    config.layer1.schedule.epochs = 2;
    config.layer2.schedule.epochs = 2;
    const auto model = pipeline::train_system(corpus, config);
    const auto& sample = corpus.samples.front();
    for (auto _ : state)
        benchmark::DoNotOptimize(pipeline::classify(model, sample));
}
BENCHMARK(BM_ClassifySample)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
