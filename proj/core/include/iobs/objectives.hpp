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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iobs/numerics.hpp"
#include "iobs/rng.hpp"

namespace iobs {

/// A twice-differentiable objective f: R^d -> R.
///
/// Implementations must be immutable after construction; all evaluation
/// methods are const and may be called concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const DenseVector& theta) const = 0;
  virtual DenseVector gradient(const DenseVector& theta) const = 0;
  virtual DenseMatrix hessian(const DenseVector& theta) const = 0;

  /// When true, hessian() is independent of theta and solvers may factor it
  /// once per run.
  virtual bool has_constant_hessian() const { return false; }

  virtual bool has_stochastic_gradient() const { return false; }
  /// Unbiased estimate of gradient(theta) from a random minibatch. The
  /// default throws Unsupported.
  virtual DenseVector stochastic_gradient(const DenseVector& theta, Rng& rng, std::size_t batch_size) const;
};

/// f(theta) = ||y - X theta||^2 with X n-by-d.
///
/// Calculus convention: gradient 2 X^T (X theta - y), Hessian 2 X^T X. The
/// factor 2 is kept so the Hessian is the exact derivative of the gradient;
/// step sizes such as 1/lambda_max are computed from this Hessian.
class LeastSquaresObjective final : public Objective {
 public:
  LeastSquaresObjective(DenseMatrix x, DenseVector y);

  std::size_t dim() const override { return x_.cols(); }
  std::size_t samples() const { return x_.rows(); }
  const DenseMatrix& design() const { return x_; }
  const DenseVector& targets() const { return y_; }

  double value(const DenseVector& theta) const override;
  DenseVector gradient(const DenseVector& theta) const override;
  DenseMatrix hessian(const DenseVector& theta) const override;
  bool has_constant_hessian() const override { return true; }

  bool has_stochastic_gradient() const override { return true; }
  /// Uniform batch without replacement, rescaled by n/b so the estimate is
  /// unbiased. Throws BatchOutOfRange unless 1 <= batch_size <= n.
  DenseVector stochastic_gradient(const DenseVector& theta, Rng& rng, std::size_t batch_size) const override;
  /// (n/|batch|) * 2 X_B^T (X_B theta - y_B) for an explicit row subset.
  DenseVector batch_gradient(const DenseVector& theta, std::span<const std::size_t> batch) const;

 private:
  void check_dim(const DenseVector& theta) const;

  DenseMatrix x_;
  DenseVector y_;
  DenseMatrix hessian_;
};

/// f(theta) = 1/2 theta^T A theta - b^T theta + c. Handy for exercising
/// solvers on arbitrary curvature; A must be symmetric.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(DenseMatrix a, DenseVector b, double c = 0.0);

  /// 1/2 ||theta - center||^2 scaled by `curvature`, i.e. A = curvature * I.
  static QuadraticObjective isotropic(const DenseVector& center, double curvature = 1.0);

  std::size_t dim() const override { return b_.size(); }
  double value(const DenseVector& theta) const override;
  DenseVector gradient(const DenseVector& theta) const override;
  DenseMatrix hessian(const DenseVector& theta) const override;
  bool has_constant_hessian() const override { return true; }

 private:
  DenseMatrix a_;
  DenseVector b_;
  double c_;
};

/// Empirical estimates of the curvature constants used in the convergence
/// analysis. Diagnostic only; no solver consumes these.
struct SmoothnessProbe {
  double mu = 0.0;  ///< min over samples of lambda_min(hessian)
  double L = 0.0;   ///< max v^T H v over samples and random sparse unit v
  double M = 0.0;   ///< max ||H(a) - H(b)||_2 / ||a - b||_2 over sample pairs
};

struct ProbeOptions {
  std::size_t directions = 64;
  std::uint64_t seed = 0;
};

/// L is probed along random unit vectors with max(1, d - k) nonzeros.
SmoothnessProbe probe_constants(const Objective& obj, std::span<const DenseVector> samples, std::size_t k,
                                const ProbeOptions& options = {});

}  // namespace iobs
