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

#include "iobs/image.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "expect_error.hpp"

namespace iobs {
namespace {

using testing::expect_code;

GrayImage read_bytes(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_pgm(in);
}

TEST(Pgm, ParsesHeaderWithComments) {
  const GrayImage img = read_bytes(std::string("P5\n# made by hand\n3 2\n255\n") + std::string("\x00\x01\x02\xfd\xfe\xff", 6));
  EXPECT_EQ(img.width, 3u);
  EXPECT_EQ(img.height, 2u);
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 1, 2, 253, 254, 255}));
}

TEST(Pgm, WriteThenReadRoundTrips) {
  const GrayImage img{4, 2, {0, 10, 20, 30, 40, 50, 60, 255}};
  std::stringstream buf;
  write_pgm(buf, img);
  EXPECT_EQ(buf.str().substr(0, 11), "P5\n4 2\n255\n");
  EXPECT_EQ(read_pgm(buf), img);
}

TEST(Pgm, RejectsUnsupportedInput) {
  expect_code(ErrorCode::kImageLoadError, [] { read_bytes("P2\n1 1\n255\n0\n"); });
  expect_code(ErrorCode::kImageLoadError, [] { read_bytes("P5\n1 1\n65535\n\x01\x02"); });
  expect_code(ErrorCode::kImageLoadError, [] { read_bytes("P5\n2 2\n255\n\x01"); });
  expect_code(ErrorCode::kImageLoadError, [] { read_bytes("P5\n0 2\n255\n"); });
  expect_code(ErrorCode::kImageLoadError, [] { load_pgm("/nonexistent/img.pgm"); });
}

TEST(Signal, FlattensRowMajorOnPixelScale) {
  const GrayImage img{2, 2, {0, 255, 7, 0}};
  EXPECT_EQ(image_to_signal(img), (DenseVector{0, 255, 7, 0}));
  EXPECT_EQ(signal_to_image(image_to_signal(img), 2, 2), img);
}

TEST(Signal, BackToImageClampsAndRounds) {
  const GrayImage img = signal_to_image(DenseVector{-3, 300, 127.5, 0.49}, 2, 2);
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 255, 128, 0}));
  expect_code(ErrorCode::kDimensionMismatch, [] { signal_to_image(DenseVector{1, 2, 3}, 2, 2); });
}

TEST(Clamp, BoundsEveryEntry) { EXPECT_EQ(clamp(DenseVector{-1, 0.5, 9}, 0, 1), (DenseVector{0, 0.5, 1})); }

TEST(Psnr, KnownValues) {
  EXPECT_TRUE(std::isinf(psnr(DenseVector{1, 2}, DenseVector{1, 2})));
  // MSE = 255^2 gives 0 dB; MSE = 1 gives 20 log10(255).
  EXPECT_NEAR(psnr(DenseVector{0}, DenseVector{255}), 0.0, 1e-12);
  EXPECT_NEAR(psnr(DenseVector{0, 0}, DenseVector{1, -1}), 20.0 * std::log10(255.0), 1e-12);
  expect_code(ErrorCode::kDimensionMismatch, [] { psnr(DenseVector{1}, DenseVector{1, 2}); });
}

}  // namespace
}  // namespace iobs
