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

// Plain-text matrix format:
//
//   <rows> <cols>
//   v00 v01 ... v0(cols-1)
//   ...
//
// One line per row, space separated, 17 significant digits, newline
// terminated. A vector is a matrix with one column.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "iobs/numerics.hpp"

namespace iobs {

/// Shortest form that still carries 17 significant digits ("%.17g").
std::string format_real(double value);
/// Parses a decimal real; throws ParseError on trailing garbage.
double parse_real(std::string_view text);

void write_matrix(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& in);
void write_vector(std::ostream& out, const DenseVector& v);
DenseVector read_vector(std::istream& in);

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix load_matrix(const std::filesystem::path& path);
void save_vector(const std::filesystem::path& path, const DenseVector& v);
DenseVector load_vector(const std::filesystem::path& path);

}  // namespace iobs
