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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "iobs/solvers.hpp"

namespace iobs {

inline constexpr const char* kTraceCsvHeader = "t,loss,dist_to_opt,support_recall,step_norm";

/// Header line then one row per record; missing optionals are empty fields.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

void save_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace);
std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path);

}  // namespace iobs
