// Copyright 2026 The conicpd Authors.
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

#include "conicpd/bench.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>

#include "conicpd/io.h"

namespace conicpd {
namespace {

std::string Real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

BenchRow RunOne(const std::string& path, const SolverParams& params) {
  BenchRow row;
  row.name = std::filesystem::path(path).filename().string();
  const ConicProgram program = ReadInstance(path);
  const SolveReport report = Solve(program, params);
  row.status = report.status;
  row.seconds = report.wall_seconds;
  row.iterations = report.iterations;
  row.spmv_count = report.spmv_count;
  row.residuals = report.residuals;
  return row;
}

}  // namespace

std::vector<std::string> ListInstances(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".json" || ext == ".cbf") out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BenchRow> RunBench(const std::vector<std::string>& paths,
                               const SolverParams& params, bool parallel) {
  std::vector<BenchRow> rows;
  if (!parallel) {
    for (const std::string& path : paths) rows.push_back(RunOne(path, params));
    return rows;
  }
  std::vector<std::future<BenchRow>> jobs;
  for (const std::string& path : paths) {
    jobs.push_back(std::async(std::launch::async, RunOne, path, params));
  }
  for (auto& job : jobs) rows.push_back(job.get());
  return rows;
}

double BenchSgm(const std::vector<BenchRow>& rows, double shift,
                double time_limit) {
  std::vector<double> times;
  times.reserve(rows.size());
  for (const BenchRow& row : rows) {
    times.push_back(row.status == Status::kOptimal ? row.seconds : time_limit);
  }
  return Sgm(times, shift);
}

std::string BenchCsv(const std::vector<BenchRow>& rows, double shift,
                     double time_limit, bool include_sgm) {
  std::string out = "name,status,seconds,iterations,spmv_count,err_p,err_d,err_gap\n";
  for (const BenchRow& row : rows) {
    out += row.name + "," + std::string(StatusName(row.status)) + "," +
           Real(row.seconds) + "," + std::to_string(row.iterations) + "," +
           std::to_string(row.spmv_count) + "," + Real(row.residuals.err_p) +
           "," + Real(row.residuals.err_d) + "," + Real(row.residuals.err_gap) +
           "\n";
  }
  if (include_sgm && !rows.empty()) {
    out += "SGM(" + Real(shift) + "),," + Real(BenchSgm(rows, shift, time_limit)) +
           ",,,,,\n";
  }
  return out;
}

}  // namespace conicpd
