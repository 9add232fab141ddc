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

// Synthetic sparse recovery experiments: instance generation, multi-run
// benchmarks with averaged traces, and image-signal recovery.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iobs/error.hpp"
#include "iobs/image.hpp"
#include "iobs/instance_io.hpp"
#include "iobs/rng.hpp"
#include "iobs/solvers.hpp"

namespace iobs {

/// Defaults are the 128-dimensional Gaussian setup: n = 256 measurements,
/// 16 nonzeros, budget 64, 750 iterations, 20 runs.
struct ExperimentSpec {
  std::string prior = "gaussian";  // gaussian | image
  std::size_t d = 128;
  std::size_t n = 256;
  std::size_t kstar = 16;
  std::size_t k = 64;
  std::size_t iters = 750;
  std::size_t runs = 20;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::kIht, Method::kTopkIobs};
  std::filesystem::path image_path;
  /// Unset means 1/lambda_max(H).
  std::optional<double> eta;
  double damp = 0.0;
  double lambda = 0.0;
  std::size_t batch = 1;
  double tol = 0.0;
};

/// Sets one field from its spec-file key (prior, d, n, kstar, k, iters, runs,
/// seed, methods, image, eta, damp, lambda, batch, tol). ParseError on an
/// unknown key or malformed value.
void apply_spec_entry(ExperimentSpec& spec, std::string_view key, std::string_view value);
/// key=value lines; '#' starts a comment; blank lines ignored.
ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec load_spec(const std::filesystem::path& path);
void write_spec(std::ostream& out, const ExperimentSpec& spec);

/// Throws InvalidArgument / KOutOfRange unless kstar <= k <= d, runs >= 1,
/// the method list is nonempty and the prior is known.
void validate(const ExperimentSpec& spec);

/// For the image prior: d = pixels, n = 2d, kstar = nonzero pixels, k = 2 kstar.
/// EmptySignal for an all-zero image.
ExperimentSpec resolve_image_spec(ExperimentSpec spec, const GrayImage& image);

/// theta* with standard normal entries on a uniformly random kstar-subset,
/// X with N(0, 1/n) entries, y = X theta*.
SparseRegressionInstance gen_instance(const ExperimentSpec& spec, Rng& rng);
/// As gen_instance with theta* the row-major pixel values (0..255 scale) and
/// n = 2d. EmptySignal for an all-zero image.
SparseRegressionInstance gen_image_instance(const GrayImage& image, const ExperimentSpec& spec, Rng& rng);

/// Seed of run r; independent of spec.runs.
std::uint64_t run_seed(const ExperimentSpec& spec, std::size_t run);
/// Solver settings for run r (the stochastic stream is derived from run_seed).
SolverConfig solver_config(const ExperimentSpec& spec, std::size_t run);

struct RunOutcome {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  Method method = Method::kIht;
  std::optional<ErrorCode> failure;
  std::string message;
  std::vector<TraceRecord> trace;
};

struct MethodAggregate {
  Method method = Method::kIht;
  std::size_t successes = 0;
  /// Per iteration index: mean and population standard deviation over the
  /// successful runs that reached it.
  std::vector<TraceRecord> mean;
  std::vector<TraceRecord> stddev;
};

struct BenchResult {
  ExperimentSpec spec;
  std::vector<RunOutcome> outcomes;  // ordered by run, then method
  std::vector<MethodAggregate> aggregates;
};

/// Solves every method on a fresh instance per run, starting from zero.
/// Runs execute on up to `jobs` threads; the result does not depend on jobs.
/// Throws the first failure's code if fewer than half the runs of some
/// method succeed. For the image prior the spec must already be resolved
/// and `image` supplied.
BenchResult run_bench(const ExperimentSpec& spec, std::size_t jobs = 1, const GrayImage* image = nullptr);

/// Writes spec.txt, summary.csv, <method>.mean.csv, <method>.std.csv and
/// runs/run_<r>.<method>.csv under outdir.
void write_bench(const BenchResult& result, const std::filesystem::path& outdir);

struct RecoveryResult {
  SolverState state;
  /// Final iterate clamped to [0, 255].
  DenseVector recovered;
  /// Of the 8-bit rounding of `recovered` against theta*; +inf if identical.
  double psnr = 0.0;
  bool exact = false;
};

RecoveryResult recover_image(const SparseRegressionInstance& instance, Method method, const SolverConfig& cfg);

}  // namespace iobs
