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

// iobs: command-line front end.
//
// Exit codes: 0 success, 2 usage or input error, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "iobs/error.hpp"
#include "iobs/harness.hpp"
#include "iobs/image.hpp"
#include "iobs/instance_io.hpp"
#include "iobs/iterative_prune.hpp"
#include "iobs/matrix_io.hpp"
#include "iobs/mlp.hpp"
#include "iobs/objectives.hpp"
#include "iobs/solvers.hpp"
#include "iobs/trace_io.hpp"

namespace fs = std::filesystem;
using namespace iobs;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::optional<double> parse_eta(const std::string& text) {
  if (text == "auto") return std::nullopt;
  return parse_real(text);
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, "expected a comma-separated list of integers, got '" + text + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void write_text(const fs::path& path, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  writer(out);
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string prior = "gaussian";
  std::size_t d = 128, n = 256, kstar = 16;
  std::uint64_t seed = 0;
  std::string out, image;
};

void cmd_gen(const GenArgs& a) {
  ExperimentSpec spec;
  spec.prior = a.prior;
  spec.d = a.d;
  spec.n = a.n;
  spec.kstar = a.kstar;
  spec.k = a.kstar;
  spec.seed = a.seed;
  spec.image_path = a.image;
  Rng rng = make_rng(run_seed(spec, 0), 0);
  SparseRegressionInstance inst;
  if (a.prior == "image") {
    if (a.image.empty()) throw Error(ErrorCode::kInvalidArgument, "--prior image needs --image");
    inst = gen_image_instance(load_pgm(a.image), spec, rng);
  } else if (a.prior == "gaussian") {
    if (a.kstar > a.d) throw Error(ErrorCode::kKOutOfRange, "--kstar exceeds --d");
    inst = gen_instance(spec, rng);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown prior '" + a.prior + "'");
  }
  write_instance(a.out, inst);
  std::cout << "wrote " << a.out << ": d=" << inst.meta.d << " n=" << inst.meta.n << " kstar=" << inst.meta.kstar
            << '\n';
}

// --- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string method = "topk-iobs";
  std::size_t k = 0, iters = 100, batch = 1;
  std::string eta = "auto";
  double damp = 0.0, lambda = 0.0, tol = 0.0;
  std::uint64_t seed = 0;
  std::string data, trace, out;
};

void cmd_solve(const SolveArgs& a) {
  const SparseRegressionInstance inst = read_instance(a.data);
  SolverConfig cfg;
  cfg.k = a.k;
  cfg.max_iters = a.iters;
  cfg.eta = parse_eta(a.eta);
  cfg.damp = a.damp;
  cfg.stoch_lambda = a.lambda;
  cfg.batch_size = a.batch;
  cfg.tol = a.tol;
  cfg.seed = a.seed;
  const LeastSquaresObjective obj = inst.objective();
  const SolverState state =
      run(obj, parse_method(a.method), DenseVector(obj.dim()), cfg, std::optional<DenseVector>(inst.theta_star));
  if (a.trace.empty()) {
    write_trace_csv(std::cout, state.trace);
  } else {
    save_trace_csv(a.trace, state.trace);
    const TraceRecord& last = state.trace.back();
    std::cout << "t=" << last.t << " loss=" << format_real(last.loss);
    if (last.dist_to_opt) std::cout << " dist_to_opt=" << format_real(*last.dist_to_opt);
    std::cout << (state.stopped_early ? " (stopped early)" : "") << '\n';
  }
  if (!a.out.empty()) save_vector(a.out, state.theta);
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string spec_file, outdir;
  std::size_t jobs = 1;
  // Inline overrides, applied on top of the spec file as key=value entries.
  std::vector<std::pair<std::string, std::string>> overrides;
};

void cmd_bench(const BenchArgs& a) {
  ExperimentSpec spec = a.spec_file.empty() ? ExperimentSpec{} : load_spec(a.spec_file);
  for (const auto& [key, value] : a.overrides) apply_spec_entry(spec, key, value);
  std::optional<GrayImage> image;
  if (spec.prior == "image") {
    if (spec.image_path.empty()) throw Error(ErrorCode::kInvalidArgument, "image prior needs image=PATH");
    image = load_pgm(spec.image_path);
    spec = resolve_image_spec(spec, *image);
  }
  const BenchResult result = run_bench(spec, a.jobs, image ? &*image : nullptr);
  write_bench(result, a.outdir);
  for (const auto& agg : result.aggregates) {
    const TraceRecord& last = agg.mean.back();
    std::cout << method_name(agg.method) << ": " << agg.successes << "/" << spec.runs
              << " runs, mean final loss " << format_real(last.loss);
    if (last.dist_to_opt) std::cout << ", mean final dist_to_opt " << format_real(*last.dist_to_opt);
    std::cout << '\n';
  }
}

// --- recover ---------------------------------------------------------------

struct RecoverArgs {
  std::string image, method = "topk-iobs", eta = "auto", out;
  std::size_t iters = 1;
  double damp = 0.0;
  std::uint64_t seed = 0;
};

void cmd_recover(const RecoverArgs& a) {
  const GrayImage image = load_pgm(a.image);
  ExperimentSpec spec;
  spec.prior = "image";
  spec.image_path = a.image;
  spec.seed = a.seed;
  spec.iters = a.iters;
  spec.eta = parse_eta(a.eta);
  spec.damp = a.damp;
  spec = resolve_image_spec(spec, image);
  Rng rng = make_rng(run_seed(spec, 0), 0);
  const SparseRegressionInstance inst = gen_image_instance(image, spec, rng);
  const RecoveryResult rec = recover_image(inst, parse_method(a.method), solver_config(spec, 0));

  fs::create_directories(a.out);
  save_vector(fs::path(a.out) / "truth.vec", inst.theta_star);
  save_vector(fs::path(a.out) / "recovered.vec", rec.recovered);
  save_pgm(fs::path(a.out) / "recovered.pgm", signal_to_image(rec.recovered, image.width, image.height));
  save_trace_csv(fs::path(a.out) / "trace.csv", rec.state.trace);
  std::cout << "d=" << spec.d << " n=" << spec.n << " kstar=" << spec.kstar << " k=" << spec.k << " psnr="
            << (rec.exact ? std::string("inf") : format_real(rec.psnr)) << (rec.exact ? " (exact)" : "") << '\n';
}

// --- model / prune ---------------------------------------------------------

struct ModelArgs {
  std::string widths = "16,8,4", out;
  std::uint64_t seed = 0;
};

void cmd_model(const ModelArgs& a) {
  Rng rng = make_rng(a.seed, 0);
  save_model(a.out, random_mlp(parse_size_list(a.widths), rng));
}

struct PruneArgs {
  std::string model, krow, report, out;
  std::size_t rounds = 10, batch = 256;
  double lr = 0.05, damp = 0.01;
  std::uint64_t seed = 0;
};

void cmd_prune(const PruneArgs& a) {
  const TinyMlp model = load_model(a.model);
  std::vector<std::size_t> k_row = parse_size_list(a.krow);
  if (k_row.size() == 1) k_row.assign(model.num_layers(), k_row.front());

  IterativePruneOptions opts;
  opts.rounds = a.rounds;
  opts.lr = a.lr;
  opts.k_row = k_row;
  opts.rel_damp = a.damp;
  // The unpruned network labels the data, so the loss measures drift from it.
  Rng rng = make_rng(a.seed, 0);
  const IterativePruneResult result = iterative_prune_loop(model, teacher_sampler(model, a.batch), opts, rng);

  if (a.report.empty()) {
    write_prune_report(std::cout, result.report);
  } else {
    write_text(a.report, [&](std::ostream& out) { write_prune_report(out, result.report); });
  }
  if (!a.out.empty()) save_model(a.out, result.model);
}

// --- probe -----------------------------------------------------------------

struct ProbeArgs {
  std::string data;
  std::size_t k = 1, samples = 4, directions = 64;
  std::uint64_t seed = 0;
};

void cmd_probe(const ProbeArgs& a) {
  const SparseRegressionInstance inst = read_instance(a.data);
  const LeastSquaresObjective obj = inst.objective();
  Rng rng = make_rng(a.seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DenseVector> points;
  for (std::size_t s = 0; s < a.samples; ++s) {
    DenseVector p(obj.dim());
    for (double& v : p) v = normal(rng);
    points.push_back(std::move(p));
  }
  const SmoothnessProbe probe = probe_constants(obj, points, a.k, ProbeOptions{a.directions, a.seed});
  std::cout << "mu=" << format_real(probe.mu) << "\nL=" << format_real(probe.L) << "\nM=" << format_real(probe.M)
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative second-order sparse recovery and pruning"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a sparse regression instance");
  gen_cmd->add_option("--prior", gen.prior, "gaussian|image")->capture_default_str();
  gen_cmd->add_option("--d", gen.d, "Signal dimension")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Number of measurements")->capture_default_str();
  gen_cmd->add_option("--kstar", gen.kstar, "Nonzeros in the signal")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--image", gen.image, "PGM image used as the signal (image prior)");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on an instance");
  solve_cmd->add_option("--data", solve.data, "Instance directory")->required();
  solve_cmd->add_option("--method", solve.method, "iht|topk-iobs|exact-iobs|stoch-iobs")->capture_default_str();
  solve_cmd->add_option("--k", solve.k, "Sparsity budget")->required();
  solve_cmd->add_option("--iters", solve.iters)->capture_default_str();
  solve_cmd->add_option("--eta", solve.eta, "auto or a step size (iht)")->capture_default_str();
  solve_cmd->add_option("--damp", solve.damp, "Added to the Hessian diagonal")->capture_default_str();
  solve_cmd->add_option("--lambda", solve.lambda, "Stochastic step-size regularizer")->capture_default_str();
  solve_cmd->add_option("--batch", solve.batch, "Stochastic minibatch size")->capture_default_str();
  solve_cmd->add_option("--tol", solve.tol, "Stop when the step norm falls to tol")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed)->capture_default_str();
  solve_cmd->add_option("--trace", solve.trace, "Trace CSV (default: stdout)");
  solve_cmd->add_option("--out", solve.out, "Write the final iterate here");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Multi-run benchmark with averaged traces");
  bench_cmd->add_option("--spec", bench.spec_file, "key=value spec file");
  bench_cmd->add_option("--outdir", bench.outdir, "Output directory")->required();
  bench_cmd->add_option("--jobs", bench.jobs, "Concurrent runs")->capture_default_str();
  const std::vector<std::string> bench_keys = {"prior", "d",   "n",    "kstar",  "k",     "iters", "runs", "seed",
                                               "methods", "image", "eta", "damp", "lambda", "batch", "tol"};
  std::vector<std::string> bench_values(bench_keys.size());
  std::vector<CLI::Option*> bench_opts;
  for (std::size_t i = 0; i < bench_keys.size(); ++i) {
    bench_opts.push_back(bench_cmd->add_option("--" + bench_keys[i], bench_values[i], "Overrides spec key"));
  }

  RecoverArgs recover;
  auto* recover_cmd = app.add_subcommand("recover", "Recover a PGM image used as a sparse signal");
  recover_cmd->add_option("--image", recover.image, "8-bit PGM")->required();
  recover_cmd->add_option("--method", recover.method)->capture_default_str();
  recover_cmd->add_option("--iters", recover.iters)->capture_default_str();
  recover_cmd->add_option("--eta", recover.eta)->capture_default_str();
  recover_cmd->add_option("--damp", recover.damp)->capture_default_str();
  recover_cmd->add_option("--seed", recover.seed)->capture_default_str();
  recover_cmd->add_option("--out", recover.out, "Output directory")->required();

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Write a random MLP model file");
  model_cmd->add_option("--widths", model.widths, "Comma-separated layer widths")->capture_default_str();
  model_cmd->add_option("--seed", model.seed)->capture_default_str();
  model_cmd->add_option("--out", model.out)->required();

  PruneArgs prune;
  auto* prune_cmd = app.add_subcommand("prune", "Iterative prune-then-finetune of an MLP");
  prune_cmd->add_option("--model", prune.model, "Model file")->required();
  prune_cmd->add_option("--krow", prune.krow, "Weights kept per row: one value or one per layer")->required();
  prune_cmd->add_option("--rounds", prune.rounds)->capture_default_str();
  prune_cmd->add_option("--lr", prune.lr)->capture_default_str();
  prune_cmd->add_option("--batch", prune.batch, "Samples per round")->capture_default_str();
  prune_cmd->add_option("--damp", prune.damp, "Dampening relative to the mean Hessian diagonal")->capture_default_str();
  prune_cmd->add_option("--seed", prune.seed)->capture_default_str();
  prune_cmd->add_option("--report", prune.report, "Report CSV (default: stdout)");
  prune_cmd->add_option("--out", prune.out, "Write the pruned model here");

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Estimate curvature constants of an instance");
  probe_cmd->add_option("--data", probe.data, "Instance directory")->required();
  probe_cmd->add_option("--k", probe.k, "Sparsity budget")->capture_default_str();
  probe_cmd->add_option("--samples", probe.samples, "Random sample points")->capture_default_str();
  probe_cmd->add_option("--directions", probe.directions, "Random directions for L")->capture_default_str();
  probe_cmd->add_option("--seed", probe.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) cmd_gen(gen);
    if (*solve_cmd) cmd_solve(solve);
    if (*bench_cmd) {
      for (std::size_t i = 0; i < bench_keys.size(); ++i)
        if (bench_opts[i]->count() > 0) bench.overrides.emplace_back(bench_keys[i], bench_values[i]);
      cmd_bench(bench);
    }
    if (*recover_cmd) cmd_recover(recover);
    if (*model_cmd) cmd_model(model);
    if (*prune_cmd) cmd_prune(prune);
    if (*probe_cmd) cmd_probe(probe);
  } catch (const Error& e) {
    std::cerr << "iobs: " << e.what() << '\n';
    return is_numeric_failure(e.code()) ? kExitNumeric : kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "iobs: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
