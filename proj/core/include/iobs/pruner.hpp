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

// Second-order layerwise pruning.
//
// A linear layer W (rows x d_in) with calibration inputs X (d_in x n) is
// pruned row by row against the quadratic loss ||w X - w_hat X||^2, whose
// Hessian is H = 2 X X^T. Each row is pruned greedily: remove the weight with
// the smallest saliency w_i^2 / [H^-1]_ii, compensate the remaining weights by
// -w_i / [H^-1]_ii * H^-1 e_i, downdate H^-1, repeat until k_row remain.

#pragma once

#include <cstddef>

#include "iobs/numerics.hpp"
#include "iobs/sparsity.hpp"

namespace iobs {

struct PruneDecision {
  std::size_t index = 0;
  /// w_i^2 / [H^-1]_ii
  double score = 0.0;
  /// Weight update; (w + delta)_index is exactly zero.
  DenseVector delta;
};

/// Picks the active coordinate with the smallest saliency (ties to the lower
/// index). h_inv is d-by-d; only active rows/columns are consulted. Throws
/// NumericallySingularDiagonal if an active [H^-1]_ii is at or below
/// 1e-12 * (mean active diagonal).
PruneDecision obs_remove_one(const DenseVector& weights, const DenseMatrix& h_inv, const Mask& active);

/// In-place rank-one downdate removing coordinate i: h_inv -= h_inv e_i e_i^T h_inv / [h_inv]_ii,
/// with row and column i then set to exactly zero. Restricted to the
/// remaining coordinates this is the inverse of the corresponding principal
/// submatrix of H.
void downdate_inverse(DenseMatrix& h_inv, std::size_t i);

/// downdate_inverse followed by deleting row and column i.
DenseMatrix shrink_inverse(const DenseMatrix& h_inv, std::size_t i);

struct RowPruneResult {
  DenseVector weights;
  Mask kept;
  /// ||w X - w_hat X||^2 = 1/2 (w - w_hat)^T H (w - w_hat), undamped H.
  double loss = 0.0;
};

/// Greedy removal of d_in - k_row weights. The damped matrix H + damp I is
/// used for saliencies and compensation.
RowPruneResult prune_row_greedy(const DenseVector& row, const DenseMatrix& h_layer, double damp, std::size_t k_row);

struct LayerProblem {
  DenseMatrix weights;
  /// 2 X X^T for calibration inputs X (d_in x n).
  DenseMatrix h_layer;
  double damp = 0.0;
  std::size_t k_row = 0;
};

/// 2 X X^T for layer inputs stored one sample per column.
DenseMatrix layer_hessian(const DenseMatrix& inputs);

/// fraction * mean(diag(h)); the usual way to pick an absolute dampening.
double relative_damp(const DenseMatrix& h, double fraction);

struct LayerPruneResult {
  DenseMatrix weights;
  /// Sum of per-row reconstruction losses.
  double loss = 0.0;
};

/// prune_row_greedy on every row against the shared h_layer.
LayerPruneResult prune_layer(const LayerProblem& problem);

}  // namespace iobs
