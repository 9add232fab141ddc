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

#include <gtest/gtest.h>

#include <algorithm>

#include "expect_error.hpp"
#include "oracles.hpp"

namespace iobs {
namespace {

using testing::expect_code;

TEST(Mask, ValidatesIndices) {
  EXPECT_EQ(Mask(4, {0, 2}).cardinality(), 2u);
  expect_code(ErrorCode::kInvalidMask, [] { Mask(4, {2, 1}); });
  expect_code(ErrorCode::kInvalidMask, [] { Mask(4, {1, 1}); });
  expect_code(ErrorCode::kInvalidMask, [] { Mask(4, {4}); });
  EXPECT_EQ(Mask::from_unsorted(5, {3, 0}), Mask(5, {0, 3}));
  expect_code(ErrorCode::kInvalidMask, [] { Mask::from_unsorted(5, {3, 0, 3}); });
}

TEST(Mask, TextRoundTrip) {
  const Mask m(8, {0, 3, 7});
  EXPECT_EQ(m.to_string(), "8:0,3,7");
  EXPECT_EQ(Mask::parse("8:0,3,7"), m);
  EXPECT_EQ(Mask::parse("5:"), Mask::empty(5));
  expect_code(ErrorCode::kParseError, [] { Mask::parse("8;1"); });
  expect_code(ErrorCode::kInvalidMask, [] { Mask::parse("3:5"); });
}

TEST(TopK, OrdersByMagnitude) {
  const TopK r = top_k(DenseVector{3, -5, 1}, 2);
  EXPECT_EQ(r.vector, (DenseVector{3, -5, 0}));
  EXPECT_EQ(r.mask, Mask(3, {0, 1}));
}

TEST(TopK, FullBudgetIsIdentity) {
  const TopK r = top_k(DenseVector{0, 0, 7}, 3);
  EXPECT_EQ(r.vector, (DenseVector{0, 0, 7}));
  EXPECT_EQ(r.mask, Mask::full(3));
}

TEST(TopK, TiesGoToLowestIndex) {
  const TopK r = top_k(DenseVector{2, -2, 1}, 1);
  EXPECT_EQ(r.vector, (DenseVector{2, 0, 0}));
  EXPECT_EQ(r.mask, Mask(3, {0}));
}

TEST(TopK, ZeroBudgetAndRangeCheck) {
  const TopK r = top_k(DenseVector{1, 2}, 0);
  EXPECT_EQ(r.vector, DenseVector(2));
  EXPECT_EQ(r.mask.cardinality(), 0u);
  expect_code(ErrorCode::kKOutOfRange, [] { top_k(DenseVector{1, 2}, 3); });
}

TEST(TopK, ResidualShrinksWithBudget) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseVector v = testing::random_vector(20, rng);
    double prev = norm2(v);
    for (std::size_t k = 0; k <= 20; ++k) {
      const double r = norm2(top_k(v, k).vector - v);
      EXPECT_LE(r, prev);
      prev = r;
    }
  }
}

TEST(Restrict, ZeroesOffMask) {
  const DenseVector v{1, 2, 3};
  EXPECT_EQ(restrict(v, Mask(3, {1})), (DenseVector{0, 2, 0}));
  EXPECT_EQ(restrict(v, Mask::full(3)), v);
  EXPECT_EQ(restrict(v, Mask::empty(3)), DenseVector(3));
  expect_code(ErrorCode::kDimensionMismatch, [] { restrict(DenseVector{1, 2}, Mask::full(3)); });
}

TEST(Restrict, IsIdempotent) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseVector v = testing::random_vector(12, rng);
    const Mask m = testing::random_mask(12, trial % 13, rng);
    EXPECT_EQ(restrict(restrict(v, m), m), restrict(v, m));
  }
}

TEST(GatherScatter, Basics) {
  EXPECT_EQ(gather(DenseVector{4, 5, 6}, Mask(3, {0, 2})), (DenseVector{4, 6}));
  EXPECT_EQ(gather(DenseVector{4, 5, 6}, Mask::empty(3)).size(), 0u);
  EXPECT_EQ(gather(DenseVector{4, 5, 6}, Mask::full(3)), (DenseVector{4, 5, 6}));
  EXPECT_EQ(scatter(DenseVector{4, 6}, Mask(3, {0, 2})), (DenseVector{4, 0, 6}));
}

TEST(GatherScatter, RoundTripEqualsRestrict) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseVector v = testing::random_vector(10, rng);
    const Mask m = testing::random_mask(10, trial % 11, rng);
    EXPECT_EQ(scatter(gather(v, m), m), restrict(v, m));
  }
}

TEST(Submatrix, ExtractsInIndexOrder) {
  const DenseMatrix h = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const Mask corners(3, {0, 2});
  EXPECT_EQ(submatrix(h, corners, corners), DenseMatrix::from_rows({{1, 3}, {7, 9}}));
  EXPECT_EQ(submatrix(h, Mask::full(3), Mask::full(3)), h);
  const Mask m(5, {1, 4});
  EXPECT_EQ(submatrix(DenseMatrix::identity(5), m, m), DenseMatrix::identity(2));
}

TEST(Complement, PartitionsTheAmbientSet) {
  EXPECT_EQ(complement(Mask(4, {1, 3})), Mask(4, {0, 2}));
  EXPECT_EQ(complement(Mask::empty(4)), Mask::full(4));
  EXPECT_EQ(complement(Mask::full(4)), Mask::empty(4));
  EXPECT_EQ(intersection_size(Mask(6, {0, 2, 4}), Mask(6, {2, 3, 4})), 2u);
}

TEST(Support, ListsExactNonzeros) { EXPECT_EQ(support(DenseVector{0, -1e-300, 0, 2}), Mask(4, {1, 3})); }

// ||T_k(u) - u||^2 <= (k_u - k)/(k_u - k_v) ||u - v||^2 for ||u||_0 = k_u,
// ||v||_0 = k_v < k_u and k_v <= k <= k_u.
TEST(TopK, SparseApproximationInequality) {
  Rng rng(6);
  std::uniform_int_distribution<std::size_t> dim(2, 64);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = dim(rng);
    const std::size_t ku = std::uniform_int_distribution<std::size_t>(1, d)(rng);
    const std::size_t kv = std::uniform_int_distribution<std::size_t>(0, ku - 1)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(kv, ku)(rng);
    const DenseVector u = testing::random_sparse(d, ku, rng);
    const DenseVector v = testing::random_sparse(d, kv, rng);
    const double lhs = squared_norm(top_k(u, k).vector - u);
    const double rhs = static_cast<double>(ku - k) / static_cast<double>(ku - kv) * squared_norm(u - v);
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

}  // namespace
}  // namespace iobs
