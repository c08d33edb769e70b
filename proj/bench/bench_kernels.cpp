// OpenMP kernels against their serial references, plus row-parallel corpus
// generation. Thread count follows OMP_NUM_THREADS.
#include <filesystem>
#include <random>

#include <benchmark/benchmark.h>

#include "diagsynth/corpus.hpp"
#include "diagsynth/kernels.hpp"

using namespace diagsynth;
namespace k = diagsynth::kernels;

namespace {

RasterImage noise(int w, int h) {
    RasterImage img(w, h);
    std::mt19937 gen(7);
    for (auto& v : img.pixels) v = static_cast<std::uint8_t>(gen() & 0xff);
    return img;
}

const RasterImage& frame() {
    static const RasterImage img = noise(1024, 768);
    return img;
}

k::Kernel2D box(int n) {
    return {n, n, std::vector<float>(static_cast<std::size_t>(n * n), 1.0f / static_cast<float>(n * n))};
}

const k::Projective kTilt{0.98, 0.03, 6.0, -0.02, 1.01, -4.0, 1e-5, 2e-5, 1.0};

template <auto Fn>
void run(benchmark::State& state, auto&&... args) {
    for (auto _ : state) benchmark::DoNotOptimize(Fn(frame(), args...));
    state.SetItemsProcessed(state.iterations() * frame().width * frame().height);
}

void BM_Convolve(benchmark::State& s) { run<k::convolve>(s, box(5)); }
void BM_ConvolveReference(benchmark::State& s) { run<k::reference::convolve>(s, box(5)); }
void BM_Median(benchmark::State& s) { run<k::median_blur>(s, 3); }
void BM_MedianReference(benchmark::State& s) { run<k::reference::median_blur>(s, 3); }
void BM_Warp(benchmark::State& s) { run<k::warp>(s, kTilt); }
void BM_WarpReference(benchmark::State& s) { run<k::reference::warp>(s, kTilt); }
void BM_Clahe(benchmark::State& s) { run<k::clahe>(s, k::ClaheParams{}); }
void BM_ClaheReference(benchmark::State& s) { run<k::reference::clahe>(s, k::ClaheParams{}); }

// threads == 1 is the serial baseline.
void BM_GenCorpus(benchmark::State& state) {
    const auto dir = std::filesystem::temp_directory_path() / "diagsynth-bench";
    auto ctx = default_context();
    ctx.threads = static_cast<int>(state.range(0));
    const auto recipe = eval_recipe(100, 3);
    for (auto _ : state) benchmark::DoNotOptimize(gen_corpus(recipe, ctx, dir).rows.size());
    state.SetItemsProcessed(state.iterations() * recipe.total());
    std::filesystem::remove_all(dir);
}

}  // namespace

BENCHMARK(BM_Convolve)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConvolveReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Median)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MedianReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Warp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WarpReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Clahe)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClaheReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GenCorpus)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
