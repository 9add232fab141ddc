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

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "iobs/error.hpp"

namespace iobs {

std::string format_real(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error(ErrorCode::kIoError, "cannot format real");
  return std::string(buf.data(), ptr);
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kParseError, "not a real number: '" + std::string(text) + "'");
  }
  return value;
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      out << format_real(row[c]);
    }
    out << '\n';
  }
}

DenseMatrix read_matrix(std::istream& in) {
  long long rows = -1;
  long long cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw Error(ErrorCode::kParseError, "bad matrix header; expected '<rows> <cols>'");
  }
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows * cols));
  std::string token;
  for (long long i = 0; i < rows * cols; ++i) {
    if (!(in >> token)) {
      throw Error(ErrorCode::kParseError, "matrix truncated after " + std::to_string(i) + " entries");
    }
    const double v = parse_real(token);
    if (!std::isfinite(v)) throw Error(ErrorCode::kParseError, "non-finite matrix entry");
    data.push_back(v);
  }
  return DenseMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(data));
}

void write_vector(std::ostream& out, const DenseVector& v) {
  out << v.size() << " 1\n";
  for (double x : v) out << format_real(x) << '\n';
}

DenseVector read_vector(std::istream& in) {
  const DenseMatrix m = read_matrix(in);
  if (m.cols() != 1) {
    throw Error(ErrorCode::kParseError, "vector file must have one column, got " + std::to_string(m.cols()));
  }
  return DenseVector(std::vector<double>(m.data().begin(), m.data().end()));
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return in;
}

}  // namespace

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

void save_vector(const std::filesystem::path& path, const DenseVector& v) {
  auto out = open_out(path);
  write_vector(out, v);
}

DenseVector load_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_vector(in);
}

}  // namespace iobs
