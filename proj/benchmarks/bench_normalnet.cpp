#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "normalnet/cherry_seq.hpp"
#include "normalnet/display.hpp"
#include "normalnet/gen.hpp"
#include "normalnet/normalize.hpp"
#include "normalnet/phylo.hpp"
#include "normalnet/reconstruct.hpp"

using namespace normalnet;

namespace {

PhyloNetwork dense_net(int n, int rets, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_binary_normal(default_labels(n), rets, rng);
}

}  // namespace

static void BM_display_set(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    PhyloNetwork net = dense_net(n, n - 2, 11);
    for (auto _ : state) {
        DisplaySet ds = display_set(net);
        benchmark::DoNotOptimize(ds);
    }
}
BENCHMARK(BM_display_set)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

static void BM_canonical_text(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    PhyloNetwork net = dense_net(n, n - 2, 13);
    for (auto _ : state) {
        std::string s = canonical_text(net);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_canonical_text)->Arg(8)->Arg(12)->Arg(16);

static void BM_construct_sequence(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    PhyloNetwork net = dense_net(n, n - 2, 17);
    for (auto _ : state) {
        PickSequence seq = construct_sequence(net);
        benchmark::DoNotOptimize(seq);
    }
}
BENCHMARK(BM_construct_sequence)->Arg(6)->Arg(8)->Arg(10);

static void BM_reconstruct(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    PhyloNetwork net = dense_net(n, n - 2, 19);
    std::vector<PhyloTree> trees = display_set(net).trees;
    for (auto _ : state) {
        ReconstructionOutcome out = reconstruct(trees);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_reconstruct)->Arg(5)->Arg(6)->Arg(7);

// min_sequence is an exhaustive search; keep the instances small
static void BM_min_sequence_pair(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(23);
    std::vector<std::string> labels = default_labels(n);
    PhyloTree t1 = random_binary_tree(labels, rng);
    PhyloTree t2 = random_binary_tree(labels, rng);
    for (auto _ : state) {
        MinSequenceResult r = min_sequence({t1, t2}, SequenceMode::normal);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_min_sequence_pair)->Arg(4)->Arg(5)->Arg(6);

static void BM_normalize_pair(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(29);
    std::vector<std::string> labels = default_labels(n);
    PhyloTree t1 = random_binary_tree(labels, rng);
    PhyloTree t2 = random_binary_tree(labels, rng);
    for (auto _ : state) {
        PhyloNetwork net = normalize_pair(t1, t2);
        benchmark::DoNotOptimize(net);
    }
}
BENCHMARK(BM_normalize_pair)->Arg(5)->Arg(6)->Arg(7)->Arg(8);

BENCHMARK_MAIN();
