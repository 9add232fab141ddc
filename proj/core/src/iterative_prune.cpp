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

#include "iobs/iterative_prune.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "iobs/error.hpp"
#include "iobs/matrix_io.hpp"
#include "iobs/pruner.hpp"

namespace iobs {
namespace {

void check_finite_model(const TinyMlp& mlp, std::size_t round) {
  for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
    if (!all_finite(mlp.layer(l).weights)) {
      throw Error(ErrorCode::kNonFiniteLoss, "weights of layer " + std::to_string(l) + " became non-finite in round " +
                                                 std::to_string(round) + "; lower the learning rate");
    }
  }
}

void record_pass(const PrunePassResult& pass, const DataBatch& batch, std::size_t round,
                 std::vector<PruneRoundRecord>& report) {
  const double train_loss = mse_loss(pass.model, batch.inputs, batch.targets);
  if (!std::isfinite(train_loss)) {
    throw Error(ErrorCode::kNonFiniteLoss, "training loss is non-finite in round " + std::to_string(round));
  }
  for (std::size_t l = 0; l < pass.model.num_layers(); ++l) {
    report.push_back({round, l, pass.recon_loss[l], train_loss, sparsity(pass.model.layer(l).weights)});
  }
}

}  // namespace

BatchSampler teacher_sampler(TinyMlp teacher, std::size_t batch_size) {
  return [teacher = std::move(teacher), batch_size](Rng& rng) {
    DataBatch batch;
    batch.inputs = gaussian_inputs(teacher.input_dim(), batch_size, rng);
    batch.targets = teacher.forward(batch.inputs);
    return batch;
  };
}

PrunePassResult prune_pass(const TinyMlp& mlp, const DenseMatrix& inputs, const std::vector<std::size_t>& k_row,
                           double rel_damp) {
  if (k_row.size() != mlp.num_layers()) {
    throw Error(ErrorCode::kDimensionMismatch, "need one k_row per layer (" + std::to_string(mlp.num_layers()) +
                                                   "), got " + std::to_string(k_row.size()));
  }
  if (!(rel_damp >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "relative dampening must be nonnegative");
  if (inputs.rows() != mlp.input_dim()) throw Error(ErrorCode::kDimensionMismatch, "batch width != network input");

  PrunePassResult result{mlp, {}};
  const double n = static_cast<double>(inputs.cols());
  DenseMatrix act = inputs;
  for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
    LayerProblem problem;
    problem.weights = mlp.layer(l).weights;
    problem.h_layer = layer_hessian(act);
    if (!all_finite(problem.h_layer)) {
      throw Error(ErrorCode::kNonFiniteLoss, "calibration inputs of layer " + std::to_string(l) + " overflowed");
    }
    problem.damp = relative_damp(problem.h_layer, rel_damp);
    // All-zero calibration input: every saliency ties, any positive damp works.
    if (rel_damp > 0.0 && !(problem.damp > 0.0)) problem.damp = rel_damp;
    problem.k_row = k_row[l];
    LayerPruneResult pruned = prune_layer(problem);
    result.recon_loss.push_back(pruned.loss / n);
    result.model.set_weights(l, std::move(pruned.weights));

    DenseMatrix z = multiply(result.model.layer(l).weights, act);
    if (result.model.layer(l).activation == Activation::kRelu) {
      for (std::size_t r = 0; r < z.rows(); ++r)
        for (double& v : z.row(r)) v = v > 0.0 ? v : 0.0;
    }
    act = std::move(z);
  }
  return result;
}

IterativePruneResult iterative_prune_loop(const TinyMlp& mlp, const BatchSampler& sampler,
                                          const IterativePruneOptions& options, Rng& rng) {
  if (options.rounds == 0) throw Error(ErrorCode::kInvalidArgument, "iterative pruning needs at least one round");
  if (!std::isfinite(options.lr)) throw Error(ErrorCode::kInvalidArgument, "learning rate must be finite");

  IterativePruneResult result{mlp, {}};
  for (std::size_t round = 1; round <= options.rounds; ++round) {
    const DataBatch batch = sampler(rng);
    PrunePassResult pass = prune_pass(result.model, batch.inputs, options.k_row, options.rel_damp);
    record_pass(pass, batch, round, result.report);
    result.model = std::move(pass.model);

    // Dense step: pruned weights may regrow and are re-pruned next round.
    const std::vector<DenseMatrix> grads = backprop(result.model, batch.inputs, batch.targets);
    for (std::size_t l = 0; l < grads.size(); ++l) {
      DenseMatrix w = result.model.layer(l).weights;
      w -= options.lr * grads[l];
      result.model.set_weights(l, std::move(w));
    }
    check_finite_model(result.model, round);
  }

  const DataBatch batch = sampler(rng);
  PrunePassResult pass = prune_pass(result.model, batch.inputs, options.k_row, options.rel_damp);
  record_pass(pass, batch, options.rounds + 1, result.report);
  result.model = std::move(pass.model);
  return result;
}

void write_prune_report(std::ostream& out, const std::vector<PruneRoundRecord>& report) {
  out << kPruneReportHeader << '\n';
  for (const auto& r : report) {
    out << r.round << ',' << r.layer << ',' << format_real(r.recon_loss) << ',' << format_real(r.train_loss) << ','
        << format_real(r.sparsity) << '\n';
  }
}

}  // namespace iobs
