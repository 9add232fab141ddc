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

// Index masks and the top-k operator.
//
// A Mask is a sorted subset of [0, d). The same type serves as a support Q
// (coordinates kept) and as a prune set S (coordinates forced to zero). The
// coordinate-projection and row-selection matrices from the math are never
// materialized; restrict() and gather()/scatter() implement their action.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "iobs/numerics.hpp"

namespace iobs {

class Mask {
 public:
  Mask() = default;
  /// indices must be strictly increasing and < ambient_dim (InvalidMask otherwise).
  Mask(std::size_t ambient_dim, std::vector<std::size_t> indices);

  static Mask empty(std::size_t ambient_dim) { return Mask(ambient_dim, {}); }
  static Mask full(std::size_t ambient_dim);
  /// Sorts an arbitrary index list; duplicates are still InvalidMask.
  static Mask from_unsorted(std::size_t ambient_dim, std::vector<std::size_t> indices);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t cardinality() const noexcept { return indices_.size(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  bool contains(std::size_t i) const;

  /// "<d>:i0,i1,..." e.g. "8:0,3,7"; an empty mask is "8:".
  std::string to_string() const;
  static Mask parse(std::string_view text);

  bool operator==(const Mask&) const = default;

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<std::size_t> indices_;
};

struct TopK {
  DenseVector vector;
  Mask mask;
};

/// Keeps the k largest-magnitude entries of v. Ties go to the lower index, so
/// the result is deterministic even for repeated magnitudes or zeros.
TopK top_k(const DenseVector& v, std::size_t k);

/// supp(v): indices of exactly-nonzero entries.
Mask support(const DenseVector& v);

/// Same-dimension projection: v on m, zero elsewhere.
DenseVector restrict(const DenseVector& v, const Mask& m);
/// |m|-dimensional vector of v's entries on m, in index order.
DenseVector gather(const DenseVector& v, const Mask& m);
/// Inverse of gather: places values at m's indices in a zero vector of
/// dimension m.ambient_dim().
DenseVector scatter(const DenseVector& values, const Mask& m);
/// Rows `rows` and columns `cols` of h, in index order.
DenseMatrix submatrix(const DenseMatrix& h, const Mask& rows, const Mask& cols);
Mask complement(const Mask& m);
std::size_t intersection_size(const Mask& a, const Mask& b);

}  // namespace iobs
