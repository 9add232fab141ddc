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

#include "iobs/solvers.hpp"

#include <cmath>
#include <string>

#include "iobs/error.hpp"

namespace iobs {
namespace {

void check_theta(const Objective& obj, const DenseVector& theta) {
  if (theta.size() != obj.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "theta has dimension " + std::to_string(theta.size()) +
                                                   ", objective has " + std::to_string(obj.dim()));
  }
}

void check_k(std::size_t k, std::size_t d) {
  if (k == 0 || k > d) {
    throw Error(ErrorCode::kKOutOfRange, "k=" + std::to_string(k) + " must lie in [1, " + std::to_string(d) + "]");
  }
}

// Number of k-subsets of n, saturating just above `cap`.
std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

// Everything a pruning step needs at the current iterate.
struct NewtonFrame {
  DenseVector theta_plus;
  DenseMatrix h_inv;
};

NewtonFrame make_frame(const DenseVector& theta, const DenseVector& grad, const Curvature& curvature) {
  return {newton_point(theta, grad, curvature), inverse(curvature.factor())};
}

struct MaskedSolution {
  DenseVector theta;
  double objective = 0.0;
};

// lambda = (I_S H^-1 I_S^T)^-1 I_S p;  theta = p - H^-1 I_S^T lambda;  objective = p_S^T lambda.
MaskedSolution solve_masked(const NewtonFrame& frame, const Mask& prune) {
  const DenseVector& p = frame.theta_plus;
  const std::size_t d = p.size();
  if (prune.ambient_dim() != d) throw Error(ErrorCode::kDimensionMismatch, "prune mask dimension");
  if (prune.cardinality() == 0) return {p, 0.0};

  const DenseMatrix block = submatrix(frame.h_inv, prune, prune);
  std::optional<SpdFactor> block_factor;
  try {
    block_factor.emplace(cholesky(block, 0.0));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotPositiveDefinite && e.code() != ErrorCode::kNotSymmetric) throw;
    throw Error(ErrorCode::kSingularSubmatrix,
                "S-block of the inverse Hessian is not positive definite; increase dampening");
  }
  const DenseVector p_s = gather(p, prune);
  const DenseVector lambda = solve(*block_factor, p_s);

  MaskedSolution out{p, dot(p_s, lambda)};
  for (std::size_t j = 0; j < prune.cardinality(); ++j) {
    const std::size_t col = prune.indices()[j];
    const double lj = lambda[j];
    for (std::size_t r = 0; r < d; ++r) out.theta[r] -= frame.h_inv(r, col) * lj;
  }
  for (std::size_t i : prune.indices()) out.theta[i] = 0.0;
  return out;
}

void check_search(std::size_t d, std::size_t prune_size, const SearchLimits& limits) {
  const std::uint64_t count = binomial_capped(d, prune_size, limits.max_subsets);
  if (d > limits.max_dim && count > limits.max_subsets) {
    throw Error(ErrorCode::kSearchTooLarge, "exhaustive mask search over C(" + std::to_string(d) + "," +
                                                std::to_string(prune_size) + ") subsets exceeds limits");
  }
}

Mask search_mask(const NewtonFrame& frame, std::size_t k, const SearchLimits& limits) {
  const std::size_t d = frame.theta_plus.size();
  check_k(k, d);
  const std::size_t s = d - k;
  check_search(d, s, limits);

  std::vector<std::size_t> combo(s);
  for (std::size_t i = 0; i < s; ++i) combo[i] = i;
  std::optional<Mask> best;
  double best_value = 0.0;
  while (true) {
    Mask candidate(d, combo);
    const double value = solve_masked(frame, candidate).objective;
    if (!best || value < best_value) {
      best = std::move(candidate);
      best_value = value;
    }
    // Advance to the next combination in lexicographic order.
    std::size_t i = s;
    while (i > 0 && combo[i - 1] == d - s + (i - 1)) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t j = i; j < s; ++j) combo[j] = combo[j - 1] + 1;
  }
  return *best;
}

DenseVector exact_step(const NewtonFrame& frame, std::size_t k, const SearchLimits& limits) {
  return solve_masked(frame, search_mask(frame, k, limits)).theta;
}

TraceRecord make_record(const Objective& obj, std::size_t t, const DenseVector& theta, double step_norm,
                        const std::optional<DenseVector>& theta_star, const std::optional<Mask>& star_support) {
  TraceRecord rec;
  rec.t = t;
  rec.loss = obj.value(theta);
  if (!std::isfinite(rec.loss)) {
    throw Error(ErrorCode::kNonFiniteLoss, "loss became non-finite at iteration " + std::to_string(t));
  }
  rec.step_norm = step_norm;
  if (theta_star) {
    rec.dist_to_opt = norm2(theta - *theta_star);
    const std::size_t kstar = star_support->cardinality();
    rec.support_recall =
        kstar == 0 ? 1.0 : static_cast<double>(intersection_size(support(theta), *star_support)) / kstar;
  }
  return rec;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kIht: return "iht";
    case Method::kTopkIobs: return "topk-iobs";
    case Method::kExactIobs: return "exact-iobs";
    case Method::kStochIobs: return "stoch-iobs";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "iht") return Method::kIht;
  if (name == "topk-iobs") return Method::kTopkIobs;
  if (name == "exact-iobs") return Method::kExactIobs;
  if (name == "stoch-iobs") return Method::kStochIobs;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

Curvature::Curvature(const DenseMatrix& hessian, double damp)
    : damped_(hessian), factor_(cholesky(hessian, damp)) {
  for (std::size_t i = 0; i < damped_.rows(); ++i) damped_(i, i) += damp;
}

DenseVector newton_point(const DenseVector& theta, const DenseVector& grad, const Curvature& curvature) {
  return theta - solve(curvature.factor(), grad);
}

double quadratic_model(const DenseVector& grad, const DenseMatrix& h, const DenseVector& theta_t,
                       const DenseVector& theta) {
  const DenseVector delta = theta - theta_t;
  return dot(grad, delta) + 0.5 * dot(delta, multiply(h, delta));
}

double resolve_eta(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg) {
  if (cfg.eta) {
    if (!(*cfg.eta > 0.0) || !std::isfinite(*cfg.eta)) {
      throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive and finite");
    }
    return *cfg.eta;
  }
  const double top = lambda_max(obj.hessian(theta)).value + cfg.damp;
  if (!(top > 0.0)) throw Error(ErrorCode::kUndefinedStepSize, "lambda_max(H) is not positive");
  return 1.0 / top;
}

DenseVector iht_step(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg) {
  check_theta(obj, theta);
  check_k(cfg.k, obj.dim());
  const double eta = resolve_eta(obj, theta, cfg);
  return top_k(theta - eta * obj.gradient(theta), cfg.k).vector;
}

DenseMatrix masked_curvature(const DenseMatrix& h_inv, const Mask& prune) {
  const std::size_t d = h_inv.rows();
  DenseMatrix out(d, d);
  if (prune.cardinality() == 0) return out;
  const DenseMatrix block_inv = inverse(cholesky(submatrix(h_inv, prune, prune), 0.0));
  for (std::size_t a = 0; a < prune.cardinality(); ++a)
    for (std::size_t b = 0; b < prune.cardinality(); ++b)
      out(prune.indices()[a], prune.indices()[b]) = block_inv(a, b);
  return out;
}

DenseVector masked_newton_update(const Objective& obj, const DenseVector& theta, const Mask& prune, double damp) {
  check_theta(obj, theta);
  if (prune.cardinality() >= obj.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "prune set must leave at least one coordinate");
  }
  const Curvature curvature(obj.hessian(theta), damp);
  return solve_masked(make_frame(theta, obj.gradient(theta), curvature), prune).theta;
}

double mask_objective(const Objective& obj, const DenseVector& theta, const Mask& prune, double damp) {
  check_theta(obj, theta);
  if (prune.cardinality() >= obj.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "prune set must leave at least one coordinate");
  }
  const Curvature curvature(obj.hessian(theta), damp);
  return solve_masked(make_frame(theta, obj.gradient(theta), curvature), prune).objective;
}

Mask select_mask_exact(const Objective& obj, const DenseVector& theta, std::size_t k, double damp,
                       const SearchLimits& limits) {
  check_theta(obj, theta);
  check_k(k, obj.dim());
  check_search(obj.dim(), obj.dim() - k, limits);
  const Curvature curvature(obj.hessian(theta), damp);
  return search_mask(make_frame(theta, obj.gradient(theta), curvature), k, limits);
}

DenseVector iobs_step_exact(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg) {
  check_theta(obj, theta);
  check_k(cfg.k, obj.dim());
  check_search(obj.dim(), obj.dim() - cfg.k, cfg.search);
  const Curvature curvature(obj.hessian(theta), cfg.damp);
  return exact_step(make_frame(theta, obj.gradient(theta), curvature), cfg.k, cfg.search);
}

DenseVector iobs_step_topk(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg) {
  check_theta(obj, theta);
  check_k(cfg.k, obj.dim());
  const Curvature curvature(obj.hessian(theta), cfg.damp);
  return top_k(newton_point(theta, obj.gradient(theta), curvature), cfg.k).vector;
}

double stochastic_step_size(const Mask& q, const DenseVector& g, double lambda) {
  if (q.ambient_dim() != g.size()) throw Error(ErrorCode::kDimensionMismatch, "mask vs gradient dimension");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be nonnegative");
  const double g_norm = norm2(g);
  double ratio = 0.0;
  if (g_norm > 0.0) {
    double on_mask = 0.0;
    for (std::size_t i : q.indices()) on_mask += g[i] * g[i];
    ratio = on_mask / g_norm;
  }
  const double denom = lambda + ratio;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::kUndefinedStepSize, "lambda + ||E_Q g||^2/||g|| is zero; use lambda > 0");
  }
  return 1.0 / denom;
}

DenseVector stochastic_fixed_mask_update(const DenseVector& theta, const DenseVector& g, const Mask& q,
                                         double lambda) {
  if (theta.size() != g.size()) throw Error(ErrorCode::kDimensionMismatch, "theta vs gradient dimension");
  const double eta = stochastic_step_size(q, g, lambda);
  return restrict(theta - eta * g, q);
}

StochasticStep stochastic_iobs_step(const Objective& obj, const DenseVector& theta, const SolverConfig& cfg,
                                    Rng& rng) {
  check_theta(obj, theta);
  check_k(cfg.k, obj.dim());
  const DenseVector g = obj.stochastic_gradient(theta, rng, cfg.batch_size);
  if (cfg.stoch_lambda == 0.0 && norm2(g) == 0.0) return {theta, 0.0, true};
  const double eta = stochastic_step_size(support(theta), g, cfg.stoch_lambda);
  return {top_k(theta - eta * g, cfg.k).vector, eta, false};
}

SolverState run(const Objective& obj, Method method, const DenseVector& theta0, const SolverConfig& cfg,
                const std::optional<DenseVector>& theta_star) {
  check_theta(obj, theta0);
  check_k(cfg.k, obj.dim());
  if (theta_star && theta_star->size() != obj.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "theta_star dimension");
  }
  if (method == Method::kExactIobs) check_search(obj.dim(), obj.dim() - cfg.k, cfg.search);
  std::optional<Mask> star_support;
  if (theta_star) star_support = support(*theta_star);

  SolverState state;
  state.theta = theta0;
  state.trace.push_back(make_record(obj, 0, theta0, 0.0, theta_star, star_support));

  // With a constant Hessian the factorization (and step size) is shared by all iterations.
  const bool reuse = obj.has_constant_hessian();
  std::optional<Curvature> fixed_curvature;
  std::optional<DenseMatrix> fixed_inverse;
  std::optional<double> fixed_eta;
  std::optional<Curvature> local_curvature;
  auto curvature_at = [&](const DenseVector& theta) -> const Curvature& {
    if (!reuse) return local_curvature.emplace(obj.hessian(theta), cfg.damp);
    if (!fixed_curvature) fixed_curvature.emplace(obj.hessian(theta), cfg.damp);
    return *fixed_curvature;
  };
  Rng rng = make_rng(cfg.seed, 0);

  for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
    const DenseVector& theta = state.theta;
    DenseVector next;
    bool converged = false;
    switch (method) {
      case Method::kIht: {
        double eta = 0.0;
        if (reuse) {
          if (!fixed_eta) fixed_eta = resolve_eta(obj, theta, cfg);
          eta = *fixed_eta;
        } else {
          eta = resolve_eta(obj, theta, cfg);
        }
        next = top_k(theta - eta * obj.gradient(theta), cfg.k).vector;
        break;
      }
      case Method::kTopkIobs: {
        const Curvature& curvature = curvature_at(theta);
        next = top_k(newton_point(theta, obj.gradient(theta), curvature), cfg.k).vector;
        break;
      }
      case Method::kExactIobs: {
        const Curvature& curvature = curvature_at(theta);
        NewtonFrame frame;
        frame.theta_plus = newton_point(theta, obj.gradient(theta), curvature);
        if (reuse) {
          if (!fixed_inverse) fixed_inverse = inverse(curvature.factor());
          frame.h_inv = *fixed_inverse;
        } else {
          frame.h_inv = inverse(curvature.factor());
        }
        next = exact_step(frame, cfg.k, cfg.search);
        break;
      }
      case Method::kStochIobs: {
        StochasticStep step = stochastic_iobs_step(obj, theta, cfg, rng);
        next = std::move(step.theta);
        converged = step.converged;
        break;
      }
    }
    const double step_norm = norm2(next - state.theta);
    state.theta = std::move(next);
    state.t = t;
    state.trace.push_back(make_record(obj, t, state.theta, step_norm, theta_star, star_support));
    if (converged || (cfg.tol > 0.0 && step_norm <= cfg.tol)) {
      state.stopped_early = true;
      break;
    }
  }
  return state;
}

}  // namespace iobs
