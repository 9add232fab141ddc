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

// Sparsity-constrained iterative solvers for min f(theta) s.t. ||theta||_0 <= k.
//
//   iht         theta+ = T_k(theta - eta * grad)
//   topk-iobs   theta+ = T_k(theta - H^-1 grad)
//   exact-iobs  Newton point, then the prune set S (|S| = d - k) minimizing
//               p^T H^S p with H^S = I_S^T (I_S H^-1 I_S^T)^-1 I_S, then the
//               curvature-compensated update (I - H^-1 H^S) p
//   stoch-iobs  theta+ = T_k(theta - eta_t g), eta_t = 1 / (lambda + ||E_Q g||^2 / ||g||)
//               with Q = supp(theta) and g a minibatch gradient
//
// H is always hessian(theta) + damp * I. Every step is a pure function of its
// inputs (plus the caller's RNG for the stochastic variant).

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "iobs/numerics.hpp"
#include "iobs/objectives.hpp"
#include "iobs/rng.hpp"
#include "iobs/sparsity.hpp"

namespace iobs {

enum class Method { kIht, kTopkIobs, kExactIobs, kStochIobs };

std::string_view method_name(Method method);
/// Accepts "iht", "topk-iobs", "exact-iobs", "stoch-iobs".
Method parse_method(std::string_view name);

/// Bounds on brute-force mask enumeration. A search is allowed when
/// d <= max_dim or the number of candidate prune sets is <= max_subsets.
struct SearchLimits {
  std::size_t max_dim = 24;
  std::uint64_t max_subsets = 2'000'000;
};

struct SolverConfig {
  std::size_t k = 1;
  std::size_t max_iters = 1;
  /// nullopt means 1 / lambda_max(H) (IHT only).
  std::optional<double> eta;
  double damp = 0.0;
  /// lambda of the stochastic variant.
  double stoch_lambda = 0.0;
  std::size_t batch_size = 1;
  /// Stop once ||theta_{t+1} - theta_t|| <= tol; 0 runs the full budget.
  double tol = 0.0;
  std::uint64_t seed = 0;
  SearchLimits search;
};

/// hessian + damp * I together with its Cholesky factor.
class Curvature {
 public:
  Curvature(const DenseMatrix& hessian, double damp);

  const DenseMatrix& damped_hessian() const noexcept { return damped_; }
  const SpdFactor& factor() const noexcept { return factor_; }
  double damp() const noexcept { return factor_.damp(); }

 private:
  DenseMatrix damped_;
  SpdFactor factor_;
};

/// theta - (H + damp I)^-1 grad.
DenseVector newton_point(const DenseVector& theta, const DenseVector& grad, const Curvature& curvature);

/// g^T (theta - theta_t) + 1/2 (theta - theta_t)^T H (theta - theta_t).
double quadratic_model(const DenseVector& grad, const DenseMatrix& h, const DenseVector& theta_t,
                       const DenseVector& theta);

/// cfg.eta if set, else 1 / lambda_max(hessian(theta) + damp I).
double resolve_eta(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg);

DenseVector iht_step(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg);

/// H^S as a dense d-by-d matrix, given H^-1. Used for diagnostics and the
/// projection property P = H^-1 H^S; the solvers never form it.
DenseMatrix masked_curvature(const DenseMatrix& h_inv, const Mask& prune);

/// Minimizer of the local quadratic model subject to theta_S = 0. The result
/// is exactly zero on `prune`. Throws SingularSubmatrix when the S-block of
/// H^-1 cannot be factored.
DenseVector masked_newton_update(const Objective& obj, const DenseVector& theta, const Mask& prune, double damp);

/// p^T H^S p with p the Newton point. This is twice the increase of the
/// quadratic model caused by forcing theta_S = 0.
double mask_objective(const Objective& obj, const DenseVector& theta, const Mask& prune, double damp);

/// Exhaustive search over prune sets of size d - k. Ties resolve to the
/// lexicographically smallest index list. Throws SearchTooLarge beyond limits.
Mask select_mask_exact(const Objective& obj, const DenseVector& theta, std::size_t k, double damp,
                       const SearchLimits& limits = {});

DenseVector iobs_step_exact(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg);
DenseVector iobs_step_topk(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg);

/// 1 / (lambda + ||E_Q g||^2 / ||g||), where the ratio is taken as 0 for
/// g = 0. Throws UndefinedStepSize when the denominator is zero.
double stochastic_step_size(const Mask& q, const DenseVector& g, double lambda);

/// Closed-form minimizer of the stochastic over-approximation
///   <g, d> + <g, d>^2 / (2||g||) + lambda/2 ||d||^2,  d = theta - theta_t,
/// subject to theta vanishing off q: E_Q(theta_t - eta g). Exact whenever
/// supp(theta_t) is contained in q.
DenseVector stochastic_fixed_mask_update(const DenseVector& theta, const DenseVector& g, const Mask& q,
                                         double lambda);

struct StochasticStep {
  DenseVector theta;
  double eta = 0.0;
  /// Set when lambda = 0 and the sampled gradient is zero; theta is returned
  /// unchanged.
  bool converged = false;
};

StochasticStep stochastic_iobs_step(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg,
                                    Rng& rng);

struct TraceRecord {
  std::size_t t = 0;
  double loss = 0.0;
  std::optional<double> dist_to_opt;
  std::optional<double> support_recall;
  double step_norm = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

struct SolverState {
  DenseVector theta;
  std::size_t t = 0;
  std::vector<TraceRecord> trace;
  bool stopped_early = false;
};

/// Applies `method` up to cfg.max_iters times from theta0, recording one
/// TraceRecord per iterate including t = 0. The stochastic variant draws from
/// a stream derived from cfg.seed.
SolverState run(const Objective& obj, Method method, const DenseVector& theta0, const SolverConfig& cfg,
                const std::optional<DenseVector>& theta_star = std::nullopt);

}  // namespace iobs
