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

// On-disk sparse regression instance: a directory holding
//
//   X.mat           sensing matrix, n-by-d
//   y.vec           labels, length n
//   theta_star.vec  ground-truth signal, length d
//   meta            key=value lines: d=, n=, kstar=, seed=, prior=

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "iobs/numerics.hpp"
#include "iobs/objectives.hpp"

namespace iobs {

struct InstanceMeta {
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t kstar = 0;
  std::uint64_t seed = 0;
  std::string prior = "gaussian";
};

struct SparseRegressionInstance {
  DenseMatrix x;
  DenseVector y;
  DenseVector theta_star;
  InstanceMeta meta;

  LeastSquaresObjective objective() const { return LeastSquaresObjective(x, y); }
};

void write_instance(const std::filesystem::path& dir, const SparseRegressionInstance& instance);
/// Loads and cross-checks shapes against the meta file.
SparseRegressionInstance read_instance(const std::filesystem::path& dir);

}  // namespace iobs
