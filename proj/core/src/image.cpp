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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "iobs/error.hpp"

namespace iobs {
namespace {

// Header tokens are whitespace separated; '#' starts a comment up to end of line.
std::size_t read_header_number(std::istream& in, const char* what) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c)) throw Error(ErrorCode::kImageLoadError, std::string("PGM header: bad ") + what);
  std::size_t value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + static_cast<std::size_t>(c - '0');
    if (value > (std::size_t{1} << 31)) throw Error(ErrorCode::kImageLoadError, std::string("PGM header: huge ") + what);
    c = in.get();
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (c == EOF || !std::isspace(c)) throw Error(ErrorCode::kImageLoadError, std::string("PGM header: bad ") + what);
  return value;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw Error(ErrorCode::kImageLoadError, "not a binary PGM (P5) image");
  }
  GrayImage image;
  image.width = read_header_number(in, "width");
  image.height = read_header_number(in, "height");
  const std::size_t maxval = read_header_number(in, "maxval");
  if (image.width == 0 || image.height == 0) throw Error(ErrorCode::kImageLoadError, "PGM has zero size");
  if (maxval == 0 || maxval > 255) {
    throw Error(ErrorCode::kImageLoadError, "only 8-bit PGM is supported (maxval " + std::to_string(maxval) + ")");
  }
  image.pixels.resize(image.width * image.height);
  in.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != image.pixels.size()) {
    throw Error(ErrorCode::kImageLoadError, "PGM raster is truncated");
  }
  return image;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kImageLoadError, "cannot open image " + path.string());
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  if (image.pixels.size() != image.width * image.height) {
    throw Error(ErrorCode::kDimensionMismatch, "image pixel count does not match its size");
  }
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_pgm(out, image);
}

DenseVector image_to_signal(const GrayImage& image) {
  DenseVector v(image.pixels.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = image.pixels[i];
  return v;
}

GrayImage signal_to_image(const DenseVector& signal, std::size_t width, std::size_t height) {
  if (signal.size() != width * height) throw Error(ErrorCode::kDimensionMismatch, "signal length != width*height");
  GrayImage image{width, height, std::vector<std::uint8_t>(signal.size())};
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double v = std::isnan(signal[i]) ? 0.0 : std::clamp(signal[i], 0.0, 255.0);
    image.pixels[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  return image;
}

DenseVector clamp(DenseVector v, double lo, double hi) {
  for (double& x : v) x = std::clamp(x, lo, hi);
  return v;
}

double psnr(const DenseVector& truth, const DenseVector& estimate) {
  if (truth.size() != estimate.size() || truth.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "psnr needs equal-length nonempty signals");
  }
  const double mse = squared_norm(truth - estimate) / static_cast<double>(truth.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace iobs
