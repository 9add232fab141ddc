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

// Random problem generators and Eigen-backed reference computations shared by
// the unit and acceptance tests. Nothing here calls into the solver code it
// is used to check.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "iobs/numerics.hpp"
#include "iobs/objectives.hpp"
#include "iobs/rng.hpp"
#include "iobs/sparsity.hpp"

namespace iobs::testing {

inline Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

inline Eigen::VectorXd to_eigen(const DenseVector& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

inline DenseVector from_eigen(const Eigen::VectorXd& v) {
  DenseVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
  return out;
}

inline DenseVector random_vector(std::size_t d, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  DenseVector v(d);
  for (double& x : v) x = normal(rng);
  return v;
}

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (double& x : m.row(r)) x = normal(rng);
  return m;
}

/// A^T A / d + shift I with A Gaussian (2d x d): well conditioned, generic.
inline DenseMatrix random_spd(std::size_t d, Rng& rng, double shift = 0.1) {
  const Eigen::MatrixXd a = to_eigen(random_matrix(2 * d, d, rng));
  Eigen::MatrixXd h = a.transpose() * a / static_cast<double>(d);
  h.diagonal().array() += shift;
  return from_eigen(Eigen::MatrixXd(0.5 * (h + h.transpose())));
}

inline DenseMatrix random_symmetric(std::size_t d, Rng& rng) {
  const Eigen::MatrixXd a = to_eigen(random_matrix(d, d, rng));
  return from_eigen(Eigen::MatrixXd(0.5 * (a + a.transpose())));
}

inline std::vector<std::size_t> random_subset(std::size_t d, std::size_t size, Rng& rng) {
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline Mask random_mask(std::size_t d, std::size_t size, Rng& rng) { return Mask(d, random_subset(d, size, rng)); }

/// Vector with exactly `nnz` nonzero Gaussian entries at random positions.
inline DenseVector random_sparse(std::size_t d, std::size_t nnz, Rng& rng) {
  DenseVector v(d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i : random_subset(d, nnz, rng)) {
    double x = 0.0;
    while (x == 0.0) x = normal(rng);
    v[i] = x;
  }
  return v;
}

inline std::vector<std::size_t> complement_of(std::size_t d, const std::vector<std::size_t>& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) out.push_back(i);
  return out;
}

/// g^T (x - x0) + 1/2 (x - x0)^T H (x - x0)
inline double model_value(const Eigen::VectorXd& g, const Eigen::MatrixXd& h, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd& x) {
  const Eigen::VectorXd dx = x - x0;
  return g.dot(dx) + 0.5 * dx.dot(h * dx);
}

/// Minimizer of the quadratic model above subject to x_S = 0, by solving the
/// reduced stationarity system on the kept coordinates Q:
///   H_QQ x_Q = H_QQ x0_Q + H_QS x0_S - g_Q.
inline Eigen::VectorXd reduced_kkt_solve(const Eigen::VectorXd& g, const Eigen::MatrixXd& h, const Eigen::VectorXd& x0,
                                         const std::vector<std::size_t>& prune) {
  const std::size_t d = static_cast<std::size_t>(g.size());
  const std::vector<std::size_t> keep = complement_of(d, prune);
  const Eigen::Index q = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd hqq(q, q);
  Eigen::VectorXd rhs(q);
  for (Eigen::Index a = 0; a < q; ++a) {
    double acc = -g(keep[a]);
    for (std::size_t j = 0; j < d; ++j) acc += h(keep[a], j) * x0(j);
    rhs(a) = acc;
    for (Eigen::Index b = 0; b < q; ++b) hqq(a, b) = h(keep[a], keep[b]);
  }
  const Eigen::VectorXd xq = hqq.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  for (Eigen::Index a = 0; a < q; ++a) x(keep[a]) = xq(a);
  return x;
}

/// Calls f(subset) for every `size`-subset of [0, d) in lexicographic order.
template <typename F>
void for_each_subset(std::size_t d, std::size_t size, F&& f) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    f(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == d - size + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), std::numeric_limits<double>::min());
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), std::numeric_limits<double>::min());
}

/// Central finite-difference gradient with step 1e-6 (1 + |x_i|).
template <typename F>
Eigen::VectorXd finite_difference_gradient(F&& f, const DenseVector& x) {
  Eigen::VectorXd g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    DenseVector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Strongly convex, non-quadratic objective with a known sparse minimizer:
///   f(x) = 1/2 e^T A e + rho sum_i [(e_i + s)^4 / 4 - s^3 e_i - s^4 / 4],  e = x - c.
/// The Hessian A + 3 rho diag((e + s)^2) is locally Lipschitz. With s = 0
/// the third derivative vanishes at c and Newton converges cubically there;
/// s != 0 gives the generic quadratic rate.
class QuarticObjective final : public Objective {
 public:
  QuarticObjective(DenseMatrix a, DenseVector center, double rho, double shift = 0.0)
      : a_(std::move(a)), center_(std::move(center)), rho_(rho), shift_(shift) {}

  const DenseVector& minimizer() const { return center_; }
  std::size_t dim() const override { return center_.size(); }
  double value(const DenseVector& x) const override {
    const DenseVector e = x - center_;
    const double s = shift_;
    double quartic = 0.0;
    for (double v : e) quartic += 0.25 * std::pow(v + s, 4) - s * s * s * v - 0.25 * std::pow(s, 4);
    return 0.5 * dot(e, multiply(a_, e)) + rho_ * quartic;
  }
  DenseVector gradient(const DenseVector& x) const override {
    const DenseVector e = x - center_;
    DenseVector g = multiply(a_, e);
    const double s = shift_;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += rho_ * (std::pow(e[i] + s, 3) - s * s * s);
    return g;
  }
  DenseMatrix hessian(const DenseVector& x) const override {
    DenseMatrix h = a_;
    for (std::size_t i = 0; i < h.rows(); ++i) {
      const double e = x[i] - center_[i] + shift_;
      h(i, i) += 3.0 * rho_ * e * e;
    }
    return h;
  }

 private:
  DenseMatrix a_;
  DenseVector center_;
  double rho_;
  double shift_;
};

/// Least-squares slope of log e_{t+1} against log e_t.
inline double loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pairs.size());
  for (const auto& [e0, e1] : pairs) {
    const double x = std::log(e0), y = std::log(e1);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace iobs::testing
