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

#include "iobs/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "iobs/error.hpp"

namespace iobs {

DenseVector Objective::stochastic_gradient(const DenseVector&, Rng&, std::size_t) const {
  throw Error(ErrorCode::kUnsupported, "objective has no stochastic gradient");
}

LeastSquaresObjective::LeastSquaresObjective(DenseMatrix x, DenseVector y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "least squares: X has " + std::to_string(x_.rows()) +
                                                   " rows but y has " + std::to_string(y_.size()));
  }
  hessian_ = 2.0 * gram(x_);
}

void LeastSquaresObjective::check_dim(const DenseVector& theta) const {
  if (theta.size() != dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "theta has dimension " + std::to_string(theta.size()) + ", expected " + std::to_string(dim()));
  }
}

double LeastSquaresObjective::value(const DenseVector& theta) const {
  check_dim(theta);
  return squared_norm(multiply(x_, theta) - y_);
}

DenseVector LeastSquaresObjective::gradient(const DenseVector& theta) const {
  check_dim(theta);
  return 2.0 * multiply_transposed(x_, multiply(x_, theta) - y_);
}

DenseMatrix LeastSquaresObjective::hessian(const DenseVector& theta) const {
  check_dim(theta);
  return hessian_;
}

DenseVector LeastSquaresObjective::batch_gradient(const DenseVector& theta,
                                                  std::span<const std::size_t> batch) const {
  check_dim(theta);
  if (batch.empty() || batch.size() > samples()) {
    throw Error(ErrorCode::kBatchOutOfRange, "batch size " + std::to_string(batch.size()) + " not in [1, " +
                                                 std::to_string(samples()) + "]");
  }
  DenseVector g(dim());
  for (std::size_t r : batch) {
    if (r >= samples()) throw Error(ErrorCode::kBatchOutOfRange, "batch row out of range");
    const auto row = x_.row(r);
    double residual = -y_[r];
    for (std::size_t c = 0; c < row.size(); ++c) residual += row[c] * theta[c];
    for (std::size_t c = 0; c < row.size(); ++c) g[c] += row[c] * residual;
  }
  g *= 2.0 * static_cast<double>(samples()) / static_cast<double>(batch.size());
  return g;
}

DenseVector LeastSquaresObjective::stochastic_gradient(const DenseVector& theta, Rng& rng,
                                                       std::size_t batch_size) const {
  const std::size_t n = samples();
  if (batch_size < 1 || batch_size > n) {
    throw Error(ErrorCode::kBatchOutOfRange,
                "batch size " + std::to_string(batch_size) + " not in [1, " + std::to_string(n) + "]");
  }
  // Partial Fisher-Yates: the first batch_size slots form a uniform subset.
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (std::size_t i = 0; i < batch_size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(rows[i], rows[pick(rng)]);
  }
  rows.resize(batch_size);
  std::sort(rows.begin(), rows.end());
  return batch_gradient(theta, rows);
}

QuadraticObjective::QuadraticObjective(DenseMatrix a, DenseVector b, double c)
    : a_(std::move(a)), b_(std::move(b)), c_(c) {
  if (!a_.is_square() || a_.rows() != b_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "quadratic: A must be d-by-d with b of length d");
  }
  double scale = 0.0;
  for (double v : a_.data()) scale = std::max(scale, std::abs(v));
  if (max_asymmetry(a_) > 1e-10 * scale) throw Error(ErrorCode::kNotSymmetric, "quadratic: A not symmetric");
  a_ = symmetrized(a_);
}

QuadraticObjective QuadraticObjective::isotropic(const DenseVector& center, double curvature) {
  DenseMatrix a = curvature * DenseMatrix::identity(center.size());
  DenseVector b = curvature * center;
  return QuadraticObjective(std::move(a), std::move(b), 0.5 * curvature * squared_norm(center));
}

double QuadraticObjective::value(const DenseVector& theta) const {
  if (theta.size() != dim()) throw Error(ErrorCode::kDimensionMismatch, "quadratic: theta dimension");
  return 0.5 * dot(theta, multiply(a_, theta)) - dot(b_, theta) + c_;
}

DenseVector QuadraticObjective::gradient(const DenseVector& theta) const {
  if (theta.size() != dim()) throw Error(ErrorCode::kDimensionMismatch, "quadratic: theta dimension");
  return multiply(a_, theta) - b_;
}

DenseMatrix QuadraticObjective::hessian(const DenseVector& theta) const {
  if (theta.size() != dim()) throw Error(ErrorCode::kDimensionMismatch, "quadratic: theta dimension");
  return a_;
}

SmoothnessProbe probe_constants(const Objective& obj, std::span<const DenseVector> samples, std::size_t k,
                                const ProbeOptions& options) {
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "probe_constants needs at least one sample");
  const std::size_t d = obj.dim();
  if (k > d) throw Error(ErrorCode::kKOutOfRange, "probe sparsity exceeds dimension");
  const std::size_t nnz = std::max<std::size_t>(1, d - k);

  std::vector<DenseMatrix> hessians;
  hessians.reserve(samples.size());
  for (const auto& theta : samples) hessians.push_back(obj.hessian(theta));

  SmoothnessProbe probe;
  probe.mu = std::numeric_limits<double>::infinity();
  Rng rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<std::size_t> coords(d);

  for (const auto& h : hessians) {
    probe.mu = std::min(probe.mu, symmetric_eigenvalues(h).front());
    for (std::size_t trial = 0; trial < options.directions; ++trial) {
      std::iota(coords.begin(), coords.end(), std::size_t{0});
      for (std::size_t i = 0; i < nnz; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, d - 1);
        std::swap(coords[i], coords[pick(rng)]);
      }
      DenseVector v(d);
      for (std::size_t i = 0; i < nnz; ++i) v[coords[i]] = normal(rng);
      const double norm = norm2(v);
      if (norm == 0.0) continue;
      v *= 1.0 / norm;
      probe.L = std::max(probe.L, dot(v, multiply(h, v)));
    }
  }
  // Every Rayleigh quotient is >= lambda_min; only rounding can break mu <= L.
  probe.L = std::max(probe.L, probe.mu);

  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      const double dist = norm2(samples[a] - samples[b]);
      if (dist == 0.0) continue;
      probe.M = std::max(probe.M, symmetric_spectral_norm(hessians[a] - hessians[b]) / dist);
    }
  }
  return probe;
}

}  // namespace iobs
