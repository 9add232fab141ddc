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

#include "iobs/sparsity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "iobs/error.hpp"

namespace iobs {
namespace {

void require_dim(const Mask& m, std::size_t d, const char* what) {
  if (m.ambient_dim() != d) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + ": mask dimension " +
                                                   std::to_string(m.ambient_dim()) + " vs " +
                                                   std::to_string(d));
  }
}

std::size_t parse_index(std::string_view text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kParseError, "bad mask index '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Mask::Mask(std::size_t ambient_dim, std::vector<std::size_t> indices)
    : ambient_dim_(ambient_dim), indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= ambient_dim_) {
      throw Error(ErrorCode::kInvalidMask, "index " + std::to_string(indices_[i]) +
                                               " out of range for dimension " +
                                               std::to_string(ambient_dim_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw Error(ErrorCode::kInvalidMask, "mask indices must be strictly increasing");
    }
  }
}

Mask Mask::full(std::size_t ambient_dim) {
  std::vector<std::size_t> idx(ambient_dim);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return Mask(ambient_dim, std::move(idx));
}

Mask Mask::from_unsorted(std::size_t ambient_dim, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  return Mask(ambient_dim, std::move(indices));
}

bool Mask::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::string Mask::to_string() const {
  std::string out = std::to_string(ambient_dim_) + ":";
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices_[i]);
  }
  return out;
}

Mask Mask::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kParseError, "mask text needs '<d>:' prefix");
  }
  const std::size_t d = parse_index(text.substr(0, colon));
  std::vector<std::size_t> idx;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    idx.push_back(parse_index(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
    if (rest.empty()) throw Error(ErrorCode::kParseError, "trailing comma in mask");
  }
  return Mask(d, std::move(idx));
}

TopK top_k(const DenseVector& v, std::size_t k) {
  const std::size_t d = v.size();
  if (k > d) {
    throw Error(ErrorCode::kKOutOfRange, "k=" + std::to_string(k) + " exceeds dimension " + std::to_string(d));
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_magnitude = [&v](std::size_t a, std::size_t b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), by_magnitude);
  order.resize(k);
  std::sort(order.begin(), order.end());

  DenseVector out(d);
  for (std::size_t i : order) out[i] = v[i];
  return {std::move(out), Mask(d, std::move(order))};
}

Mask support(const DenseVector& v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) idx.push_back(i);
  return Mask(v.size(), std::move(idx));
}

DenseVector restrict(const DenseVector& v, const Mask& m) {
  require_dim(m, v.size(), "restrict");
  DenseVector out(v.size());
  for (std::size_t i : m.indices()) out[i] = v[i];
  return out;
}

DenseVector gather(const DenseVector& v, const Mask& m) {
  require_dim(m, v.size(), "gather");
  DenseVector out(m.cardinality());
  for (std::size_t j = 0; j < m.cardinality(); ++j) out[j] = v[m.indices()[j]];
  return out;
}

DenseVector scatter(const DenseVector& values, const Mask& m) {
  if (values.size() != m.cardinality()) {
    throw Error(ErrorCode::kDimensionMismatch, "scatter: value count differs from mask cardinality");
  }
  DenseVector out(m.ambient_dim());
  for (std::size_t j = 0; j < m.cardinality(); ++j) out[m.indices()[j]] = values[j];
  return out;
}

DenseMatrix submatrix(const DenseMatrix& h, const Mask& rows, const Mask& cols) {
  if (!h.is_square()) throw Error(ErrorCode::kDimensionMismatch, "submatrix needs a square matrix");
  require_dim(rows, h.rows(), "submatrix rows");
  require_dim(cols, h.cols(), "submatrix cols");
  DenseMatrix out(rows.cardinality(), cols.cardinality());
  for (std::size_t i = 0; i < rows.cardinality(); ++i) {
    const auto src = h.row(rows.indices()[i]);
    for (std::size_t j = 0; j < cols.cardinality(); ++j) out(i, j) = src[cols.indices()[j]];
  }
  return out;
}

Mask complement(const Mask& m) {
  std::vector<std::size_t> idx;
  idx.reserve(m.ambient_dim() - m.cardinality());
  std::size_t next = 0;
  for (std::size_t i = 0; i < m.ambient_dim(); ++i) {
    if (next < m.cardinality() && m.indices()[next] == i) {
      ++next;
    } else {
      idx.push_back(i);
    }
  }
  return Mask(m.ambient_dim(), std::move(idx));
}

std::size_t intersection_size(const Mask& a, const Mask& b) {
  std::size_t count = 0;
  auto ia = a.indices().begin();
  auto ib = b.indices().begin();
  while (ia != a.indices().end() && ib != b.indices().end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace iobs
