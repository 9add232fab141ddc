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

#include "iobs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "iobs/matrix_io.hpp"
#include "iobs/trace_io.hpp"

namespace iobs {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kParseError, "spec: '" + std::string(key) + "' needs a nonnegative integer, got '" +
                                            std::string(value) + "'");
  }
  return out;
}

std::vector<Method> parse_methods(std::string_view value) {
  std::vector<Method> methods;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) methods.push_back(parse_method(item));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return methods;
}

void fill_measurements(SparseRegressionInstance& inst, std::size_t n, Rng& rng) {
  const std::size_t d = inst.theta_star.size();
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  inst.x = DenseMatrix(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (double& v : inst.x.row(r)) v = normal(rng);
  inst.y = multiply(inst.x, inst.theta_star);
}

std::vector<RunOutcome> run_one(const ExperimentSpec& spec, std::size_t index, const GrayImage* image) {
  const std::uint64_t seed = run_seed(spec, index);
  Rng rng = make_rng(seed, 0);
  const SparseRegressionInstance inst =
      spec.prior == "image" ? gen_image_instance(*image, spec, rng) : gen_instance(spec, rng);
  const LeastSquaresObjective obj = inst.objective();
  const SolverConfig cfg = solver_config(spec, index);
  const DenseVector theta0(inst.theta_star.size());

  std::vector<RunOutcome> outcomes;
  for (Method method : spec.methods) {
    RunOutcome out;
    out.run = index;
    out.seed = seed;
    out.method = method;
    try {
      out.trace = run(obj, method, theta0, cfg, inst.theta_star).trace;
    } catch (const Error& e) {
      out.failure = e.code();
      out.message = e.what();
    }
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

MethodAggregate aggregate(Method method, const std::vector<const RunOutcome*>& ok) {
  MethodAggregate agg;
  agg.method = method;
  agg.successes = ok.size();
  std::size_t len = 0;
  for (const RunOutcome* o : ok) len = std::max(len, o->trace.size());

  for (std::size_t t = 0; t < len; ++t) {
    std::vector<const TraceRecord*> rows;
    for (const RunOutcome* o : ok)
      if (t < o->trace.size()) rows.push_back(&o->trace[t]);
    const double count = static_cast<double>(rows.size());

    auto moments = [&](auto getter) -> std::optional<std::pair<double, double>> {
      double sum = 0.0;
      for (const TraceRecord* r : rows) {
        const std::optional<double> v = getter(*r);
        if (!v) return std::nullopt;
        sum += *v;
      }
      const double mean = sum / count;
      double sq = 0.0;
      for (const TraceRecord* r : rows) sq += (*getter(*r) - mean) * (*getter(*r) - mean);
      return std::pair{mean, std::sqrt(sq / count)};
    };

    TraceRecord mean_row, std_row;
    mean_row.t = std_row.t = rows.front()->t;
    const auto loss = moments([](const TraceRecord& r) { return std::optional<double>(r.loss); });
    const auto dist = moments([](const TraceRecord& r) { return r.dist_to_opt; });
    const auto recall = moments([](const TraceRecord& r) { return r.support_recall; });
    const auto step = moments([](const TraceRecord& r) { return std::optional<double>(r.step_norm); });
    mean_row.loss = loss->first;
    std_row.loss = loss->second;
    mean_row.step_norm = step->first;
    std_row.step_norm = step->second;
    if (dist) {
      mean_row.dist_to_opt = dist->first;
      std_row.dist_to_opt = dist->second;
    }
    if (recall) {
      mean_row.support_recall = recall->first;
      std_row.support_recall = recall->second;
    }
    agg.mean.push_back(mean_row);
    agg.stddev.push_back(std_row);
  }
  return agg;
}

void write_file(const std::filesystem::path& path, const std::string& what, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + what + " " + path.string());
  writer(out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

std::string optional_field(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

void apply_spec_entry(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "prior") {
    spec.prior = std::string(value);
  } else if (key == "d") {
    spec.d = parse_unsigned<std::size_t>(key, value);
  } else if (key == "n") {
    spec.n = parse_unsigned<std::size_t>(key, value);
  } else if (key == "kstar") {
    spec.kstar = parse_unsigned<std::size_t>(key, value);
  } else if (key == "k") {
    spec.k = parse_unsigned<std::size_t>(key, value);
  } else if (key == "iters") {
    spec.iters = parse_unsigned<std::size_t>(key, value);
  } else if (key == "runs") {
    spec.runs = parse_unsigned<std::size_t>(key, value);
  } else if (key == "seed") {
    spec.seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "methods") {
    spec.methods = parse_methods(value);
  } else if (key == "image") {
    spec.image_path = std::filesystem::path(std::string(value));
  } else if (key == "eta") {
    if (value == "auto") {
      spec.eta.reset();
    } else {
      spec.eta = parse_real(value);
    }
  } else if (key == "damp") {
    spec.damp = parse_real(value);
  } else if (key == "lambda") {
    spec.lambda = parse_real(value);
  } else if (key == "batch") {
    spec.batch = parse_unsigned<std::size_t>(key, value);
  } else if (key == "tol") {
    spec.tol = parse_real(value);
  } else {
    throw Error(ErrorCode::kParseError, "spec: unknown key '" + std::string(key) + "'");
  }
}

ExperimentSpec parse_spec(std::istream& in) {
  ExperimentSpec spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "spec line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_spec_entry(spec, trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read spec " + path.string());
  return parse_spec(in);
}

void write_spec(std::ostream& out, const ExperimentSpec& spec) {
  out << "prior=" << spec.prior << "\nd=" << spec.d << "\nn=" << spec.n << "\nkstar=" << spec.kstar
      << "\nk=" << spec.k << "\niters=" << spec.iters << "\nruns=" << spec.runs << "\nseed=" << spec.seed
      << "\nmethods=";
  for (std::size_t i = 0; i < spec.methods.size(); ++i) out << (i ? "," : "") << method_name(spec.methods[i]);
  out << '\n';
  if (!spec.image_path.empty()) out << "image=" << spec.image_path.generic_string() << '\n';
  out << "eta=" << (spec.eta ? format_real(*spec.eta) : std::string("auto")) << "\ndamp=" << format_real(spec.damp)
      << "\nlambda=" << format_real(spec.lambda) << "\nbatch=" << spec.batch << "\ntol=" << format_real(spec.tol)
      << '\n';
}

void validate(const ExperimentSpec& spec) {
  if (spec.prior != "gaussian" && spec.prior != "image") {
    throw Error(ErrorCode::kInvalidArgument, "unknown prior '" + spec.prior + "' (gaussian|image)");
  }
  if (spec.runs == 0) throw Error(ErrorCode::kInvalidArgument, "runs must be at least 1");
  if (spec.methods.empty()) throw Error(ErrorCode::kInvalidArgument, "no methods requested");
  if (spec.prior == "image" && spec.image_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "image prior needs an image path");
  }
  if (spec.d == 0 || spec.n == 0) throw Error(ErrorCode::kInvalidArgument, "d and n must be positive");
  if (spec.kstar > spec.k || spec.k > spec.d || spec.k == 0) {
    throw Error(ErrorCode::kKOutOfRange, "need kstar <= k <= d with k >= 1 (kstar=" + std::to_string(spec.kstar) +
                                             ", k=" + std::to_string(spec.k) + ", d=" + std::to_string(spec.d) + ")");
  }
  if (spec.batch == 0 || spec.batch > spec.n) {
    throw Error(ErrorCode::kBatchOutOfRange, "batch must be in [1, n]");
  }
  if (spec.eta && !(*spec.eta > 0.0 && std::isfinite(*spec.eta))) {
    throw Error(ErrorCode::kInvalidArgument, "eta must be positive and finite");
  }
  if (!(spec.damp >= 0.0) || !(spec.lambda >= 0.0) || !(spec.tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "damp, lambda and tol must be nonnegative");
  }
}

ExperimentSpec resolve_image_spec(ExperimentSpec spec, const GrayImage& image) {
  const std::size_t nonzero =
      static_cast<std::size_t>(std::count_if(image.pixels.begin(), image.pixels.end(), [](auto p) { return p != 0; }));
  if (nonzero == 0) throw Error(ErrorCode::kEmptySignal, "image has no nonzero pixels");
  spec.prior = "image";
  spec.d = image.pixels.size();
  spec.n = 2 * spec.d;
  spec.kstar = nonzero;
  spec.k = std::min(2 * nonzero, spec.d);
  return spec;
}

SparseRegressionInstance gen_instance(const ExperimentSpec& spec, Rng& rng) {
  if (spec.kstar > spec.d) throw Error(ErrorCode::kKOutOfRange, "kstar exceeds d");
  SparseRegressionInstance inst;
  std::normal_distribution<double> standard(0.0, 1.0);
  DenseVector dense(spec.d);
  for (double& v : dense) v = standard(rng);

  // Partial Fisher-Yates: the first kstar entries of perm are a uniform subset.
  std::vector<std::size_t> perm(spec.d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < spec.kstar; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, spec.d - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  inst.theta_star = DenseVector(spec.d);
  for (std::size_t i = 0; i < spec.kstar; ++i) inst.theta_star[perm[i]] = dense[perm[i]];

  fill_measurements(inst, spec.n, rng);
  inst.meta = InstanceMeta{spec.d, spec.n, spec.kstar, spec.seed, "gaussian"};
  return inst;
}

SparseRegressionInstance gen_image_instance(const GrayImage& image, const ExperimentSpec& spec, Rng& rng) {
  const ExperimentSpec resolved = resolve_image_spec(spec, image);
  SparseRegressionInstance inst;
  inst.theta_star = image_to_signal(image);
  fill_measurements(inst, resolved.n, rng);
  inst.meta = InstanceMeta{resolved.d, resolved.n, resolved.kstar, spec.seed, "image"};
  return inst;
}

std::uint64_t run_seed(const ExperimentSpec& spec, std::size_t run) { return derive_seed(spec.seed, run); }

SolverConfig solver_config(const ExperimentSpec& spec, std::size_t run) {
  SolverConfig cfg;
  cfg.k = spec.k;
  cfg.max_iters = spec.iters;
  cfg.eta = spec.eta;
  cfg.damp = spec.damp;
  cfg.stoch_lambda = spec.lambda;
  cfg.batch_size = spec.batch;
  cfg.tol = spec.tol;
  cfg.seed = derive_seed(run_seed(spec, run), 1);
  return cfg;
}

BenchResult run_bench(const ExperimentSpec& spec, std::size_t jobs, const GrayImage* image) {
  validate(spec);
  if (spec.prior == "image" && image == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "image prior benchmark needs the loaded image");
  }

  std::vector<std::vector<RunOutcome>> per_run(spec.runs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < spec.runs; r = next++) {
      try {
        per_run[r] = run_one(spec, r, image);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, spec.runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  BenchResult result;
  result.spec = spec;
  for (auto& outs : per_run)
    for (auto& o : outs) result.outcomes.push_back(std::move(o));

  for (Method method : spec.methods) {
    std::vector<const RunOutcome*> ok;
    const RunOutcome* first_failure = nullptr;
    for (const auto& o : result.outcomes) {
      if (o.method != method) continue;
      if (o.failure) {
        if (!first_failure) first_failure = &o;
      } else {
        ok.push_back(&o);
      }
    }
    if (2 * ok.size() < spec.runs) {
      throw Error(*first_failure->failure, std::string(method_name(method)) + ": only " + std::to_string(ok.size()) +
                                               " of " + std::to_string(spec.runs) +
                                               " runs succeeded; first failure (run " +
                                               std::to_string(first_failure->run) + "): " + first_failure->message);
    }
    result.aggregates.push_back(aggregate(method, ok));
  }
  return result;
}

void write_bench(const BenchResult& result, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir / "runs", ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + (outdir / "runs").string() + ": " + ec.message());

  write_file(outdir / "spec.txt", "spec", [&](std::ostream& out) { write_spec(out, result.spec); });
  for (const auto& agg : result.aggregates) {
    const std::string name(method_name(agg.method));
    write_file(outdir / (name + ".mean.csv"), "trace", [&](std::ostream& out) { write_trace_csv(out, agg.mean); });
    write_file(outdir / (name + ".std.csv"), "trace", [&](std::ostream& out) { write_trace_csv(out, agg.stddev); });
  }
  for (const auto& o : result.outcomes) {
    if (o.failure) continue;
    const std::string file = "run_" + std::to_string(o.run) + "." + std::string(method_name(o.method)) + ".csv";
    write_file(outdir / "runs" / file, "trace", [&](std::ostream& out) { write_trace_csv(out, o.trace); });
  }
  write_file(outdir / "summary.csv", "summary", [&](std::ostream& out) {
    out << "run,seed,method,status,iterations,final_loss,final_dist_to_opt,final_support_recall\n";
    for (const auto& o : result.outcomes) {
      out << o.run << ',' << o.seed << ',' << method_name(o.method) << ',';
      if (o.failure) {
        out << error_code_name(*o.failure) << ",,,,\n";
        continue;
      }
      const TraceRecord& last = o.trace.back();
      out << "ok," << last.t << ',' << format_real(last.loss) << ',' << optional_field(last.dist_to_opt) << ','
          << optional_field(last.support_recall) << '\n';
    }
  });
}

RecoveryResult recover_image(const SparseRegressionInstance& instance, Method method, const SolverConfig& cfg) {
  const LeastSquaresObjective obj = instance.objective();
  RecoveryResult result;
  result.state = run(obj, method, DenseVector(instance.theta_star.size()), cfg, instance.theta_star);
  result.recovered = clamp(result.state.theta, 0.0, 255.0);
  DenseVector pixels = result.recovered;
  for (double& v : pixels) v = std::round(v);
  result.psnr = psnr(instance.theta_star, pixels);
  result.exact = std::isinf(result.psnr);
  return result;
}

}  // namespace iobs
