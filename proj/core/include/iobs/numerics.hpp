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

// Dense linear algebra substrate: row-major matrices, vectors, Cholesky
// factorization of (damped) SPD matrices, and extreme eigenvalues.
//
// Everything here is 64-bit IEEE-754. Values are immutable once built and can
// be shared freely between threads.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace iobs {

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
  explicit DenseVector(std::vector<double> data) : data_(std::move(data)) {}
  DenseVector(std::initializer_list<double> values) : data_(values) {}

  static DenseVector zeros(std::size_t dim) { return DenseVector(dim); }

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(double s);

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> data_;
};

DenseVector operator+(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a);
DenseVector operator*(double s, DenseVector v);

double dot(const DenseVector& a, const DenseVector& b);
double squared_norm(const DenseVector& v);
double norm2(const DenseVector& v);
double max_abs(const DenseVector& v);
/// ||v||_0, the number of exactly-nonzero entries.
std::size_t count_nonzero(const DenseVector& v);
bool all_finite(const DenseVector& v);

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return DenseMatrix(rows, cols); }
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const DenseVector& diag);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  DenseVector column(std::size_t c) const;
  DenseVector diag() const;

  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix m);

DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// a * x
DenseVector multiply(const DenseMatrix& a, const DenseVector& x);
/// a^T * x, without forming the transpose.
DenseVector multiply_transposed(const DenseMatrix& a, const DenseVector& x);
/// x^T x for an n-by-d matrix x (d-by-d result).
DenseMatrix gram(const DenseMatrix& x);
/// x x^T (rows-by-rows result).
DenseMatrix outer_gram(const DenseMatrix& x);
double frobenius_norm(const DenseMatrix& m);
double trace(const DenseMatrix& m);
/// (m + m^T) / 2
DenseMatrix symmetrized(const DenseMatrix& m);
/// max |m_ij - m_ji|
double max_asymmetry(const DenseMatrix& m);
bool all_finite(const DenseMatrix& m);

/// Lower-triangular Cholesky factor of (source + damp * I). Construct through
/// cholesky(); the factor reproduces the damped source to round-off.
class SpdFactor {
 public:
  std::size_t dim() const noexcept { return lower_.rows(); }
  double damp() const noexcept { return damp_; }
  const DenseMatrix& lower() const noexcept { return lower_; }

 private:
  friend SpdFactor cholesky(const DenseMatrix& m, double damp);
  SpdFactor(DenseMatrix lower, double damp) : lower_(std::move(lower)), damp_(damp) {}

  DenseMatrix lower_;
  double damp_ = 0.0;
};

/// Factors m + damp*I. m must be square and symmetric to 1e-10 relative to
/// its largest entry; it is symmetrized before factoring. Throws
/// NotPositiveDefinite when a pivot falls to 1e-14 * (max diagonal) or below.
SpdFactor cholesky(const DenseMatrix& m, double damp = 0.0);

DenseVector solve(const SpdFactor& f, const DenseVector& b);
/// Solves for every column of b.
DenseMatrix solve(const SpdFactor& f, const DenseMatrix& b);
/// Symmetric inverse of (source + damp*I).
DenseMatrix inverse(const SpdFactor& f);

struct EigenEstimate {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration from a
/// fixed-seed start vector. Stops once the eigen-residual ||m v - rho v|| is
/// within tol * rho; otherwise returns the best estimate with converged=false.
EigenEstimate lambda_max(const DenseMatrix& m, double tol = 1e-8, std::size_t max_iter = 10000);

/// All eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m);

/// ||m||_2 for symmetric m, i.e. max |eigenvalue|.
double symmetric_spectral_norm(const DenseMatrix& m);

}  // namespace iobs
