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

#include "iobs/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "iobs/error.hpp"
#include "iobs/matrix_io.hpp"

namespace iobs {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> optional_real(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return parse_real(field);
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& r : trace) {
    out << r.t << ',' << format_real(r.loss) << ',';
    if (r.dist_to_opt) out << format_real(*r.dist_to_opt);
    out << ',';
    if (r.support_recall) out << format_real(*r.support_recall);
    out << ',' << format_real(r.step_norm) << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw Error(ErrorCode::kParseError, "trace CSV header must be '" + std::string(kTraceCsvHeader) + "'");
  }
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 5) throw Error(ErrorCode::kParseError, "trace row needs 5 fields: " + line);
    TraceRecord r;
    try {
      r.t = std::stoull(f[0]);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, "bad iteration index: " + f[0]);
    }
    r.loss = parse_real(f[1]);
    r.dist_to_opt = optional_real(f[2]);
    r.support_recall = optional_real(f[3]);
    r.step_norm = parse_real(f[4]);
    trace.push_back(r);
  }
  return trace;
}

void save_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_trace_csv(out, trace);
}

std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return read_trace_csv(in);
}

}  // namespace iobs
