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

// Benchmark runs over a directory of instances and their CSV summary.

#ifndef CONICPD_BENCH_H_
#define CONICPD_BENCH_H_

#include <string>
#include <vector>

#include "conicpd/solver.h"

namespace conicpd {

struct BenchRow {
  std::string name;
  Status status = Status::kIterationLimit;
  double seconds = 0.0;
  std::int64_t iterations = 0;
  std::int64_t spmv_count = 0;
  Residuals residuals;
};

// Instance files (.json, .cbf) directly inside `dir`, sorted by name.
std::vector<std::string> ListInstances(const std::string& dir);

// Solves every instance. With `parallel` the instances run concurrently.
std::vector<BenchRow> RunBench(const std::vector<std::string>& paths,
                               const SolverParams& params, bool parallel);

// Shifted geometric mean of the run times with every non-optimal run
// charged `time_limit`.
double BenchSgm(const std::vector<BenchRow>& rows, double shift,
                double time_limit);

// Header, one line per row, and unless omitted a footer
// "SGM(<shift>),,<value>,,,,,".
std::string BenchCsv(const std::vector<BenchRow>& rows, double shift,
                     double time_limit, bool include_sgm);

}  // namespace conicpd

#endif  // CONICPD_BENCH_H_
