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

#include "iobs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "iobs/error.hpp"

namespace iobs {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  require_same_size(size(), other.size(), "vector +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  require_same_size(size(), other.size(), "vector -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
DenseVector operator-(DenseVector a) { return a *= -1.0; }
DenseVector operator*(double s, DenseVector v) { return v *= s; }

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const DenseVector& v) { return dot(v, v); }

double norm2(const DenseVector& v) { return std::sqrt(squared_norm(v)); }

double max_abs(const DenseVector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::size_t count_nonzero(const DenseVector& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

bool all_finite(const DenseVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require_same_size(data_.size(), rows * cols, "matrix data length");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const DenseVector& diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    require_same_size(row.size(), c, "from_rows row length");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

DenseVector DenseMatrix::column(std::size_t c) const {
  DenseVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

DenseVector DenseMatrix::diag() const {
  const std::size_t n = std::min(rows_, cols_);
  DenseVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(i, i);
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_size(rows_, other.rows_, "matrix += rows");
  require_same_size(cols_, other.cols_, "matrix += cols");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_size(rows_, other.rows_, "matrix -= rows");
  require_same_size(cols_, other.cols_, "matrix -= cols");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix m) { return m *= s; }

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a.cols(), b.rows(), "matrix product inner dimension");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      const auto b_row = b.row(p);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aip * b_row[j];
    }
  }
  return out;
}

DenseVector multiply(const DenseMatrix& a, const DenseVector& x) {
  require_same_size(a.cols(), x.size(), "matrix-vector product");
  DenseVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * x[c];
    out[r] = s;
  }
  return out;
}

DenseVector multiply_transposed(const DenseMatrix& a, const DenseVector& x) {
  require_same_size(a.rows(), x.size(), "transposed matrix-vector product");
  DenseVector out(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const auto row = a.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c] * xr;
  }
  return out;
}

DenseMatrix gram(const DenseMatrix& x) {
  const std::size_t d = x.cols();
  DenseMatrix g(d, d);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = row[i];
      if (xi == 0.0) continue;
      auto g_row = g.row(i);
      for (std::size_t j = i; j < d; ++j) g_row[j] += xi * row[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

DenseMatrix outer_gram(const DenseMatrix& x) {
  const std::size_t n = x.rows();
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = x.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto rj = x.row(j);
      double s = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) s += ri[c] * rj[c];
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

double frobenius_norm(const DenseMatrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

double trace(const DenseMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

DenseMatrix symmetrized(const DenseMatrix& m) {
  require_same_size(m.rows(), m.cols(), "symmetrized: square");
  DenseMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

double max_asymmetry(const DenseMatrix& m) {
  require_same_size(m.rows(), m.cols(), "max_asymmetry: square");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

bool all_finite(const DenseMatrix& m) {
  const auto d = m.data();
  return std::all_of(d.begin(), d.end(), [](double x) { return std::isfinite(x); });
}

SpdFactor cholesky(const DenseMatrix& m, double damp) {
  if (!m.is_square()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cholesky needs a square matrix, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  if (!(damp >= 0.0) || !std::isfinite(damp)) {
    throw Error(ErrorCode::kInvalidArgument, "cholesky dampening must be finite and nonnegative");
  }
  if (!all_finite(m)) throw Error(ErrorCode::kNotPositiveDefinite, "matrix has non-finite entries");

  double scale = 0.0;
  for (double x : m.data()) scale = std::max(scale, std::abs(x));
  if (max_asymmetry(m) > 1e-10 * scale) {
    throw Error(ErrorCode::kNotSymmetric, "matrix asymmetry exceeds 1e-10 relative tolerance");
  }

  const std::size_t n = m.rows();
  DenseMatrix a = symmetrized(m);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) += damp;
    max_diag = std::max(max_diag, a(i, i));
  }
  const double pivot_floor = 1e-14 * max_diag;

  DenseMatrix lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto lj = lower.row(j);
    double s = a(j, j);
    for (std::size_t p = 0; p < j; ++p) s -= lj[p] * lj[p];
    if (!(s > pivot_floor) || max_diag <= 0.0) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "pivot " + std::to_string(j) + " is " + std::to_string(s) +
                      "; increase dampening");
    }
    const double ljj = std::sqrt(s);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      const auto li = lower.row(i);
      double t = a(i, j);
      for (std::size_t p = 0; p < j; ++p) t -= li[p] * lj[p];
      lower(i, j) = t / ljj;
    }
  }
  return SpdFactor(std::move(lower), damp);
}

DenseVector solve(const SpdFactor& f, const DenseVector& b) {
  const std::size_t n = f.dim();
  require_same_size(b.size(), n, "solve right-hand side");
  const DenseMatrix& l = f.lower();

  DenseVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = l.row(i);
    double s = b[i];
    for (std::size_t p = 0; p < i; ++p) s -= li[p] * y[p];
    y[i] = s / li[i];
  }
  // L^T x = y, column-oriented so that rows of L are read contiguously.
  for (std::size_t ii = n; ii-- > 0;) {
    const auto li = l.row(ii);
    y[ii] /= li[ii];
    const double xi = y[ii];
    for (std::size_t p = 0; p < ii; ++p) y[p] -= li[p] * xi;
  }
  return y;
}

DenseMatrix solve(const SpdFactor& f, const DenseMatrix& b) {
  require_same_size(b.rows(), f.dim(), "solve right-hand side rows");
  DenseMatrix out(b.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    const DenseVector x = solve(f, b.column(c));
    for (std::size_t r = 0; r < b.rows(); ++r) out(r, c) = x[r];
  }
  return out;
}

DenseMatrix inverse(const SpdFactor& f) {
  const std::size_t n = f.dim();
  DenseMatrix inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    DenseVector e(n);
    e[c] = 1.0;
    const DenseVector x = solve(f, e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = x[r];
  }
  return symmetrized(inv);
}

EigenEstimate lambda_max(const DenseMatrix& m, double tol, std::size_t max_iter) {
  if (!m.is_square()) throw Error(ErrorCode::kDimensionMismatch, "lambda_max needs a square matrix");
  const std::size_t n = m.rows();
  EigenEstimate est;
  if (n == 0) {
    est.converged = true;
    return est;
  }

  std::mt19937_64 rng(0x5EEDF00DULL);
  std::normal_distribution<double> normal;
  DenseVector v(n);
  for (double& x : v) x = normal(rng);
  v *= 1.0 / norm2(v);

  for (std::size_t it = 1; it <= max_iter; ++it) {
    DenseVector w = multiply(m, v);
    const double rho = dot(v, w);
    const double w_norm = norm2(w);
    est.value = rho;
    est.iterations = it;
    if (w_norm == 0.0) {
      est.converged = true;
      return est;
    }
    DenseVector residual = w;
    for (std::size_t i = 0; i < n; ++i) residual[i] -= rho * v[i];
    if (norm2(residual) <= tol * std::abs(rho)) {
      est.converged = true;
      return est;
    }
    v = (1.0 / w_norm) * std::move(w);
  }
  return est;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::kDimensionMismatch, "eigenvalues need a square matrix");
  const std::size_t n = m.rows();
  DenseMatrix a = symmetrized(m);

  const double scale = frobenius_norm(a);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= 1e-15 * scale || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double symmetric_spectral_norm(const DenseMatrix& m) {
  const auto eig = symmetric_eigenvalues(m);
  if (eig.empty()) return 0.0;
  return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

}  // namespace iobs
