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

#include "iobs/instance_io.hpp"

#include <fstream>
#include <map>

#include "iobs/error.hpp"
#include "iobs/matrix_io.hpp"

namespace iobs {
namespace {

std::uint64_t to_u64(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorCode::kParseError, "meta is missing '" + key + "'");
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kParseError, "meta '" + key + "' is not an unsigned integer: " + it->second);
  }
}

}  // namespace

void write_instance(const std::filesystem::path& dir, const SparseRegressionInstance& instance) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  save_matrix(dir / "X.mat", instance.x);
  save_vector(dir / "y.vec", instance.y);
  save_vector(dir / "theta_star.vec", instance.theta_star);

  std::ofstream meta(dir / "meta", std::ios::binary);
  if (!meta) throw Error(ErrorCode::kIoError, "cannot write " + (dir / "meta").string());
  meta << "d=" << instance.meta.d << '\n'
       << "n=" << instance.meta.n << '\n'
       << "kstar=" << instance.meta.kstar << '\n'
       << "seed=" << instance.meta.seed << '\n'
       << "prior=" << instance.meta.prior << '\n';
}

SparseRegressionInstance read_instance(const std::filesystem::path& dir) {
  SparseRegressionInstance inst;
  inst.x = load_matrix(dir / "X.mat");
  inst.y = load_vector(dir / "y.vec");
  inst.theta_star = load_vector(dir / "theta_star.vec");

  std::ifstream meta(dir / "meta");
  if (!meta) throw Error(ErrorCode::kIoError, "cannot read " + (dir / "meta").string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(meta, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "meta line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  inst.meta.d = to_u64(kv, "d");
  inst.meta.n = to_u64(kv, "n");
  inst.meta.kstar = to_u64(kv, "kstar");
  inst.meta.seed = to_u64(kv, "seed");
  if (const auto it = kv.find("prior"); it != kv.end()) inst.meta.prior = it->second;

  if (inst.x.rows() != inst.meta.n || inst.x.cols() != inst.meta.d || inst.y.size() != inst.meta.n ||
      inst.theta_star.size() != inst.meta.d) {
    throw Error(ErrorCode::kDimensionMismatch, "instance files disagree with meta in " + dir.string());
  }
  return inst;
}

}  // namespace iobs
