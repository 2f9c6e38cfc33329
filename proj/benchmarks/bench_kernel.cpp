#include <random>

#include <benchmark/benchmark.h>

#include "datasignal/kernel.hpp"
#include "datasignal/mnist.hpp"

using namespace datasignal;

namespace {

Matrix random_points(Eigen::Index m, Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix x(m, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  return x;
}

void BM_BuildGram(benchmark::State& state) {
  const Matrix x = random_points(state.range(0), state.range(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_gram(x, {}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGram)->Args({64, 2})->Args({256, 2})->Args({1024, 2})->Args({50, 784});

void BM_FitSignal(benchmark::State& state) {
  const Eigen::Index m = state.range(0);
  const LabeledPointSet data(random_points(m, 2, 2), random_points(m, 10, 3));
  for (auto _ : state) benchmark::DoNotOptimize(fit_signal(data, {1.0, 1.0}));
}
BENCHMARK(BM_FitSignal)->Arg(50)->Arg(256)->Arg(1024);

void BM_EvaluateSignal(benchmark::State& state) {
  const LabeledPointSet data(random_points(1024, 2, 4), random_points(1024, 1, 5));
  const Signal s = fit_signal(data, {1.0, 1.0});
  const Matrix q = random_points(state.range(0), 2, 6);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_signal(s, q));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateSignal)->Arg(256)->Arg(4096);

mnist::FeatureMatrix synthetic_digits(std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> px(0, 255);
  mnist::MnistSet set;
  set.pixels.resize(count * mnist::kPixels);
  for (auto& p : set.pixels) p = static_cast<std::uint8_t>(px(rng));
  for (std::size_t i = 0; i < count; ++i) {
    set.labels.push_back(static_cast<std::uint8_t>(i % mnist::kDigits));
    set.provenance.push_back({static_cast<std::uint32_t>(i), mnist::Variant::Original});
  }
  return mnist::normalize(std::move(set));
}

void BM_KnnScan(benchmark::State& state) {
  const auto train = synthetic_digits(static_cast<std::size_t>(state.range(0)), 7);
  const auto queries = synthetic_digits(16, 8);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mnist::knn_per_class(train, queries, q, 5));
    q = (q + 1) % queries.size();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KnnScan)->Arg(10000)->Arg(60000);

void BM_ClassifyLocal(benchmark::State& state) {
  const auto train = synthetic_digits(2000, 9);
  const auto queries = synthetic_digits(1, 10);
  const auto problem = mnist::knn_per_class(train, queries, 0, 5);
  for (auto _ : state) benchmark::DoNotOptimize(mnist::classify_local(problem));
}
BENCHMARK(BM_ClassifyLocal);

}  // namespace
BENCHMARK_MAIN();
