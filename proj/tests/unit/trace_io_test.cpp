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

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>
#include <sstream>

#include "expect_error.hpp"
#include "oracles.hpp"

namespace iobs {
namespace {

using testing::expect_code;

TEST(TraceCsv, EmptyOptionalFieldsStayEmpty) {
  std::ostringstream out;
  const std::vector<TraceRecord> trace{{0, 2.5, std::nullopt, std::nullopt, 0.0}};
  write_trace_csv(out, trace);
  EXPECT_EQ(out.str(), "t,loss,dist_to_opt,support_recall,step_norm\n0,2.5,,,0\n");
}

TEST(TraceCsv, RoundTripsLosslessly) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TraceRecord> trace;
  for (std::size_t t = 0; t < 200; ++t) {
    TraceRecord r{t, u(rng) * 1e-3, u(rng) / 3.0, u(rng), u(rng) * 1e12};
    if (t % 7 == 0) r.dist_to_opt.reset();
    trace.push_back(r);
  }
  trace.push_back({200, std::numeric_limits<double>::denorm_min(), 0.0, 1.0, 0.0});
  std::stringstream buf;
  write_trace_csv(buf, trace);
  EXPECT_EQ(read_trace_csv(buf), trace);
}

TEST(TraceCsv, RejectsBadInput) {
  expect_code(ErrorCode::kParseError, [] {
    std::istringstream in("t,loss\n0,1\n");
    read_trace_csv(in);
  });
  expect_code(ErrorCode::kParseError, [] {
    std::istringstream in("t,loss,dist_to_opt,support_recall,step_norm\n0,1,,\n");
    read_trace_csv(in);
  });
  expect_code(ErrorCode::kParseError, [] {
    std::istringstream in("t,loss,dist_to_opt,support_recall,step_norm\nx,1,,,0\n");
    read_trace_csv(in);
  });
}

TEST(TraceCsv, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "iobs_trace_roundtrip.csv";
  const std::vector<TraceRecord> trace{{0, 1.0, 2.0, 0.5, 0.0}, {1, 0.25, 0.125, 1.0, 3.0}};
  save_trace_csv(path, trace);
  EXPECT_EQ(load_trace_csv(path), trace);
  std::filesystem::remove(path);
  expect_code(ErrorCode::kIoError, [&] { load_trace_csv(path); });
}

}  // namespace
}  // namespace iobs
