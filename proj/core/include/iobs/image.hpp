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

// 8-bit grayscale images in binary PGM (P5).

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "iobs/numerics.hpp"

namespace iobs {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  bool operator==(const GrayImage&) const = default;
};

/// Throws ImageLoadError on anything but a P5 file with maxval <= 255.
GrayImage read_pgm(std::istream& in);
GrayImage load_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Row-major pixel values as reals in [0, 255].
DenseVector image_to_signal(const GrayImage& image);
/// Clamps to [0, 255] and rounds to the nearest integer.
GrayImage signal_to_image(const DenseVector& signal, std::size_t width, std::size_t height);

/// Elementwise clamp to [lo, hi].
DenseVector clamp(DenseVector v, double lo, double hi);

/// 10 log10(255^2 / MSE); +inf when the signals agree exactly.
double psnr(const DenseVector& truth, const DenseVector& estimate);

}  // namespace iobs
