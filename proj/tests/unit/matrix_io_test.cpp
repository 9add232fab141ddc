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

#include "iobs/matrix_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "expect_error.hpp"
#include "oracles.hpp"

namespace iobs {
namespace {

using testing::expect_code;

TEST(FormatReal, RoundTripsExactly) {
  Rng rng(1);
  std::uniform_real_distribution<double> exponent(-300, 300);
  std::normal_distribution<double> mantissa(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = mantissa(rng) * std::pow(10.0, exponent(rng));
    EXPECT_EQ(parse_real(format_real(v)), v);
  }
  for (double v : {0.0, -0.0, 1.0, 0.1, std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max()}) {
    EXPECT_EQ(parse_real(format_real(v)), v);
  }
}

TEST(ParseReal, AcceptsPlusAndRejectsGarbage) {
  EXPECT_EQ(parse_real("+2.5"), 2.5);
  EXPECT_EQ(parse_real("1e-3"), 1e-3);
  expect_code(ErrorCode::kParseError, [] { parse_real("abc"); });
  expect_code(ErrorCode::kParseError, [] { parse_real("1.0x"); });
  expect_code(ErrorCode::kParseError, [] { parse_real(""); });
}

TEST(MatrixText, LayoutIsRowsColsThenRows) {
  std::ostringstream out;
  write_matrix(out, DenseMatrix::from_rows({{1, 2.5}, {-3, 0}}));
  EXPECT_EQ(out.str(), "2 2\n1 2.5\n-3 0\n");
}

TEST(MatrixText, RoundTripsRandomMatrix) {
  Rng rng(2);
  const DenseMatrix m = testing::random_matrix(7, 5, rng, 1e3);
  std::stringstream buf;
  write_matrix(buf, m);
  EXPECT_EQ(read_matrix(buf), m);
}

TEST(VectorText, IsAOneColumnMatrix) {
  std::stringstream buf;
  write_vector(buf, DenseVector{1, 2, 3});
  EXPECT_EQ(buf.str(), "3 1\n1\n2\n3\n");
  EXPECT_EQ(read_vector(buf), (DenseVector{1, 2, 3}));
}

TEST(MatrixText, RejectsMalformedInput) {
  expect_code(ErrorCode::kParseError, [] {
    std::istringstream in("2 2\n1 2\n3\n");
    read_matrix(in);
  });
  expect_code(ErrorCode::kParseError, [] {
    std::istringstream in("x 2\n");
    read_matrix(in);
  });
  expect_code(ErrorCode::kParseError, [] {
    std::istringstream in("2 2\n1 2\n3 4\n");
    read_vector(in);
  });
}

TEST(MatrixFiles, MissingFileIsIoError) {
  expect_code(ErrorCode::kIoError, [] { load_matrix("/nonexistent/dir/X.mat"); });
}

}  // namespace
}  // namespace iobs
