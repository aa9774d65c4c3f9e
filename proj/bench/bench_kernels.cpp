#include <benchmark/benchmark.h>

#include "polyparse/evaluation.hpp"
#include "polyparse/parser.hpp"
#include "polyparse/synthetic.hpp"

using namespace polyparse;

namespace {

struct Fixture {
  ParserModel model;
  Treebank test;
  EvalReport a;
  EvalReport b;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    const Treebank train = generate_toy_treebank(toy_language_a(), 300, 1);
    const Treebank dev = generate_toy_treebank(toy_language_a(), 100, 2);
    TrainParams params;
    params.epochs = 3;
    x.model = train_parser(train, dev, params);
    x.test = generate_toy_treebank(toy_language_a(), 2000, 3);
    Treebank noisy = x.test;
    for (std::size_t i = 0; i < noisy.size(); i += 3) noisy.sentences[i].tokens.back().deprel = "dep";
    x.a = score(x.test, parse_treebank_serial(x.model, x.test));
    x.b = score(x.test, noisy);
    return x;
  }();
  return f;
}

void BM_ParseSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(parse_treebank_serial(f.model, f.test));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.test.size()));
}

void BM_ParseParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(parse_treebank(f.model, f.test));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.test.size()));
}

void BM_ComparatorSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        randomized_comparator_serial(f.a, f.b, Metric::LAS, static_cast<std::uint64_t>(state.range(0)), 1));
  }
}

void BM_ComparatorParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(randomized_comparator(f.a, f.b, Metric::LAS, static_cast<std::uint64_t>(state.range(0)), 1));
  }
}

}  // namespace

BENCHMARK(BM_ParseSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParseParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComparatorSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComparatorParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
