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

#include "iobs/pruner.hpp"

#include <cmath>
#include <string>

#include "iobs/error.hpp"

namespace iobs {

PruneDecision obs_remove_one(const DenseVector& weights, const DenseMatrix& h_inv, const Mask& active) {
  const std::size_t d = weights.size();
  if (!h_inv.is_square() || h_inv.rows() != d || active.ambient_dim() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "obs_remove_one: weights, inverse Hessian and mask disagree");
  }
  if (active.cardinality() == 0) throw Error(ErrorCode::kInvalidArgument, "obs_remove_one: no active weights");

  double diag_sum = 0.0;
  for (std::size_t i : active.indices()) diag_sum += h_inv(i, i);
  const double floor = 1e-12 * diag_sum / static_cast<double>(active.cardinality());

  PruneDecision best;
  bool found = false;
  for (std::size_t i : active.indices()) {
    const double hii = h_inv(i, i);
    if (!(hii > floor) || !(hii > 0.0)) {
      throw Error(ErrorCode::kNumericallySingularDiagonal,
                  "inverse Hessian diagonal " + std::to_string(i) + " is numerically zero; increase dampening");
    }
    const double score = weights[i] * weights[i] / hii;
    if (!found || score < best.score) {
      best.index = i;
      best.score = score;
      found = true;
    }
  }

  const std::size_t i = best.index;
  const double scale = -weights[i] / h_inv(i, i);
  best.delta = DenseVector(d);
  for (std::size_t r = 0; r < d; ++r) best.delta[r] = scale * h_inv(r, i);
  best.delta[i] = -weights[i];
  return best;
}

void downdate_inverse(DenseMatrix& h_inv, std::size_t i) {
  const std::size_t d = h_inv.rows();
  if (!h_inv.is_square() || i >= d) throw Error(ErrorCode::kDimensionMismatch, "downdate_inverse index");
  const double hii = h_inv(i, i);
  if (!(hii > 0.0)) {
    throw Error(ErrorCode::kNumericallySingularDiagonal, "cannot downdate on a nonpositive diagonal");
  }
  const DenseVector col = h_inv.column(i);
  for (std::size_t r = 0; r < d; ++r) {
    const double f = col[r] / hii;
    if (f == 0.0) continue;
    auto row = h_inv.row(r);
    for (std::size_t c = 0; c < d; ++c) row[c] -= f * col[c];
  }
  for (std::size_t k = 0; k < d; ++k) {
    h_inv(i, k) = 0.0;
    h_inv(k, i) = 0.0;
  }
}

DenseMatrix shrink_inverse(const DenseMatrix& h_inv, std::size_t i) {
  DenseMatrix work = h_inv;
  downdate_inverse(work, i);
  const std::size_t d = h_inv.rows();
  DenseMatrix out(d - 1, d - 1);
  for (std::size_t r = 0, rr = 0; r < d; ++r) {
    if (r == i) continue;
    for (std::size_t c = 0, cc = 0; c < d; ++c) {
      if (c == i) continue;
      out(rr, cc++) = work(r, c);
    }
    ++rr;
  }
  return out;
}

RowPruneResult prune_row_greedy(const DenseVector& row, const DenseMatrix& h_layer, double damp, std::size_t k_row) {
  const std::size_t d = row.size();
  if (!h_layer.is_square() || h_layer.rows() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "prune_row_greedy: row and layer Hessian disagree");
  }
  if (k_row > d) {
    throw Error(ErrorCode::kKOutOfRange, "k_row=" + std::to_string(k_row) + " exceeds " + std::to_string(d));
  }

  RowPruneResult result{row, Mask::full(d), 0.0};
  if (k_row == d) return result;

  DenseMatrix h_inv = inverse(cholesky(h_layer, damp));
  std::vector<bool> alive(d, true);
  for (std::size_t removed = 0; removed < d - k_row; ++removed) {
    const PruneDecision decision = obs_remove_one(result.weights, h_inv, result.kept);
    result.weights += decision.delta;
    result.weights[decision.index] = 0.0;
    downdate_inverse(h_inv, decision.index);
    alive[decision.index] = false;
    std::vector<std::size_t> kept;
    kept.reserve(result.kept.cardinality() - 1);
    for (std::size_t i : result.kept.indices())
      if (alive[i]) kept.push_back(i);
    result.kept = Mask(d, std::move(kept));
  }
  // Pruned coordinates see zero columns of the downdated inverse; pin them anyway.
  for (std::size_t i = 0; i < d; ++i)
    if (!alive[i]) result.weights[i] = 0.0;

  const DenseVector diff = row - result.weights;
  result.loss = 0.5 * dot(diff, multiply(h_layer, diff));
  return result;
}

DenseMatrix layer_hessian(const DenseMatrix& inputs) { return 2.0 * outer_gram(inputs); }

double relative_damp(const DenseMatrix& h, double fraction) {
  if (!h.is_square() || h.rows() == 0) throw Error(ErrorCode::kDimensionMismatch, "relative_damp: empty matrix");
  return fraction * trace(h) / static_cast<double>(h.rows());
}

LayerPruneResult prune_layer(const LayerProblem& problem) {
  const DenseMatrix& w = problem.weights;
  if (!problem.h_layer.is_square() || problem.h_layer.rows() != w.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "prune_layer: weights and layer Hessian disagree");
  }
  LayerPruneResult out{DenseMatrix(w.rows(), w.cols()), 0.0};
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto src = w.row(r);
    const DenseVector row(std::vector<double>(src.begin(), src.end()));
    const RowPruneResult pruned = prune_row_greedy(row, problem.h_layer, problem.damp, problem.k_row);
    auto dst = out.weights.row(r);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = pruned.weights[c];
    out.loss += pruned.loss;
  }
  return out;
}

}  // namespace iobs
