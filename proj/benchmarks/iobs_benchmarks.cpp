// Copyright 2026 The iobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "iobs/harness.hpp"
#include "iobs/iterative_prune.hpp"
#include "iobs/pruner.hpp"
#include "iobs/solvers.hpp"

namespace iobs {
namespace {

DenseMatrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (double& v : m.row(r)) v = normal(rng);
  return m;
}

DenseVector gaussian_vector(std::size_t d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseVector v(d);
  for (double& x : v) x = normal(rng);
  return v;
}

SparseRegressionInstance gaussian_instance(std::size_t d) {
  ExperimentSpec spec;
  spec.d = d;
  spec.n = 2 * d;
  spec.kstar = d / 8;
  spec.k = d / 2;
  Rng rng(1);
  return gen_instance(spec, rng);
}

void BM_Cholesky(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const DenseMatrix h = gram(gaussian(2 * d, d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(cholesky(h));
}
BENCHMARK(BM_Cholesky)->Arg(32)->Arg(128)->Arg(512);

void BM_TopK(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const DenseVector v = gaussian_vector(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(top_k(v, d / 4));
}
BENCHMARK(BM_TopK)->Arg(128)->Arg(4096);

void BM_IhtStep(benchmark::State& state) {
  const SparseRegressionInstance inst = gaussian_instance(static_cast<std::size_t>(state.range(0)));
  const LeastSquaresObjective obj = inst.objective();
  SolverConfig cfg;
  cfg.k = inst.theta_star.size() / 2;
  cfg.eta = resolve_eta(obj, DenseVector(inst.theta_star.size()), cfg);
  DenseVector theta(inst.theta_star.size());
  for (auto _ : state) {
    theta = iht_step(obj, theta, cfg);
    benchmark::DoNotOptimize(theta);
  }
}
BENCHMARK(BM_IhtStep)->Arg(128)->Arg(784);

void BM_TopkIobsStep(benchmark::State& state) {
  const SparseRegressionInstance inst = gaussian_instance(static_cast<std::size_t>(state.range(0)));
  const LeastSquaresObjective obj = inst.objective();
  SolverConfig cfg;
  cfg.k = inst.theta_star.size() / 2;
  const DenseVector theta(inst.theta_star.size());
  for (auto _ : state) benchmark::DoNotOptimize(iobs_step_topk(obj, theta, cfg));
}
BENCHMARK(BM_TopkIobsStep)->Arg(128)->Arg(784);

void BM_ExactIobsStep(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const DenseMatrix x = gaussian(2 * d, d, rng);
  const QuadraticObjective obj(gram(x), multiply_transposed(x, gaussian_vector(2 * d, rng)));
  SolverConfig cfg;
  cfg.k = d / 2;
  const DenseVector theta(d);
  for (auto _ : state) benchmark::DoNotOptimize(iobs_step_exact(obj, theta, cfg));
}
BENCHMARK(BM_ExactIobsStep)->Arg(8)->Arg(14);

void BM_PruneRowGreedy(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const DenseMatrix h = layer_hessian(gaussian(d, 4 * d, rng));
  const DenseVector w = gaussian_vector(d, rng);
  const double damp = relative_damp(h, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(prune_row_greedy(w, h, damp, d / 2));
}
BENCHMARK(BM_PruneRowGreedy)->Arg(16)->Arg(64)->Arg(256);

void BM_PrunePass(benchmark::State& state) {
  Rng rng(5);
  const TinyMlp mlp = random_mlp({16, 8, 4}, rng);
  const DenseMatrix x = gaussian_inputs(16, 256, rng);
  for (auto _ : state) benchmark::DoNotOptimize(prune_pass(mlp, x, {8, 4}, 0.01));
}
BENCHMARK(BM_PrunePass);

}  // namespace
}  // namespace iobs

BENCHMARK_MAIN();
