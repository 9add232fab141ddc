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

// Prune-then-finetune rounds on a TinyMlp.
//
// Each round draws a batch, prunes the layers front to back (layer l is
// calibrated on the outputs of the already pruned layers 0..l-1), then takes
// one dense gradient step on the batch. A terminal prune on a fresh batch
// makes the returned model meet the per-row budgets.

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "iobs/mlp.hpp"
#include "iobs/rng.hpp"

namespace iobs {

struct DataBatch {
  DenseMatrix inputs;   // d_in x n
  DenseMatrix targets;  // d_out x n
};

using BatchSampler = std::function<DataBatch(Rng&)>;

/// Gaussian inputs labelled by a fixed teacher network.
BatchSampler teacher_sampler(TinyMlp teacher, std::size_t batch_size);

struct PrunePassResult {
  TinyMlp model;
  /// Per layer: ||W A - W_hat A||_F^2 / n on that layer's calibration input A.
  std::vector<double> recon_loss;
};

/// One front-to-back pass of prune_layer over every layer. k_row[l] is the
/// number of weights each row of layer l keeps; the dampening for layer l is
/// rel_damp * mean(diag(2 A A^T)).
PrunePassResult prune_pass(const TinyMlp& mlp, const DenseMatrix& inputs, const std::vector<std::size_t>& k_row,
                           double rel_damp);

struct IterativePruneOptions {
  std::size_t rounds = 1;
  double lr = 0.0;
  std::vector<std::size_t> k_row;
  double rel_damp = 0.01;
};

struct PruneRoundRecord {
  /// 1..rounds for the prune-and-step rounds, rounds + 1 for the terminal prune.
  std::size_t round = 0;
  std::size_t layer = 0;
  double recon_loss = 0.0;
  /// mse_loss of the freshly pruned model on the round's batch.
  double train_loss = 0.0;
  double sparsity = 0.0;
};

struct IterativePruneResult {
  TinyMlp model;
  std::vector<PruneRoundRecord> report;
};

/// Throws NonFiniteLoss if the loss or the weights stop being finite.
IterativePruneResult iterative_prune_loop(const TinyMlp& mlp, const BatchSampler& sampler,
                                          const IterativePruneOptions& options, Rng& rng);

inline constexpr const char* kPruneReportHeader = "round,layer,recon_loss,train_loss,sparsity";
void write_prune_report(std::ostream& out, const std::vector<PruneRoundRecord>& report);

}  // namespace iobs
