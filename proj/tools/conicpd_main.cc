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

// Command-line front end: solve, generate, bench.
//
// `solve` exits 0 on OPTIMAL, 2 on an iteration or time limit, 3 on a
// numerical failure and 1 on any other error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "conicpd/bench.h"
#include "conicpd/generators.h"
#include "conicpd/io.h"
#include "conicpd/solver.h"

namespace {

using conicpd::Status;

int ExitCode(Status status) {
  switch (status) {
    case Status::kOptimal:
      return 0;
    case Status::kIterationLimit:
    case Status::kTimeLimit:
      return 2;
    case Status::kNumericalError:
      return 3;
  }
  return 1;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

struct SolveArgs {
  std::string input;
  std::string out;
  bool verbose = false;
  bool no_scaling = false;
  bool omit_solution = false;
  conicpd::SolverParams params;
};

void AddSolverFlags(CLI::App* cmd, conicpd::SolverParams& p) {
  cmd->add_option("--tol", p.tol, "Tolerance on the relative KKT residuals")
      ->capture_default_str();
  cmd->add_option("--time-limit", p.time_limit, "Wall-clock limit in seconds")
      ->capture_default_str();
  cmd->add_option("--max-iters", p.max_iters, "Iteration limit")
      ->capture_default_str();
  cmd->add_option("--ruiz-iters", p.scaling_options.ruiz_iters,
                  "Ruiz equilibration rounds")
      ->capture_default_str();
  cmd->add_option("--check-interval", p.check_interval,
                  "Iterations between residual checks")
      ->capture_default_str();
  cmd->add_flag("--vanilla-pdhg", p.vanilla_pdhg,
                "Fixed-step PDHG without restarts, reflection or scaling");
}

int RunSolve(SolveArgs& args) {
  conicpd::SolverParams params = args.params;
  params.scaling = !args.no_scaling;
  if (args.verbose) {
    params.progress = &std::cerr;
    std::cerr << "iter\terr_p\terr_d\terr_gap\teta\tomega\tbeta\trestarts\n";
  }
  const conicpd::ConicProgram program = conicpd::ReadInstance(args.input);
  const conicpd::SolveReport report = conicpd::Solve(program, params);
  const std::string json = conicpd::ReportToJson(report, !args.omit_solution);
  if (args.out.empty()) {
    std::cout << json;
  } else {
    WriteText(args.out, json);
    std::cout << conicpd::StatusName(report.status)
              << " objective=" << report.residuals.primal_obj
              << " kkt=" << report.residuals.Max()
              << " iterations=" << report.iterations
              << " spmv=" << report.spmv_count << '\n';
  }
  return ExitCode(report.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restarted primal-dual conic solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("--input", solve.input, "Instance file (.json or .cbf)")
      ->required();
  AddSolverFlags(solve_cmd, solve.params);
  solve_cmd->add_flag("--no-scaling", solve.no_scaling, "Skip preconditioning");
  solve_cmd->add_flag("--no-solution", solve.omit_solution,
                      "Leave x and y out of the report");
  solve_cmd->add_option("--out", solve.out, "Report path (default stdout)");
  solve_cmd->add_flag("--verbose", solve.verbose,
                      "Tab-separated progress on stderr");

  std::string family;
  std::uint64_t seed = 0;
  conicpd::Index m = 10;
  conicpd::Index n = 20;
  conicpd::Index periods = 3;
  double sparsity = -1.0;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Write a synthetic instance");
  gen_cmd->add_option("family", family, "fisher, lasso or mpo")
      ->required()
      ->check(CLI::IsMember({"fisher", "lasso", "mpo"}));
  gen_cmd->add_option("--seed", seed)->capture_default_str();
  gen_cmd->add_option("--m", m, "Buyers (fisher) or rows (lasso)")->capture_default_str();
  gen_cmd->add_option("--n", n, "Goods, columns or assets")->capture_default_str();
  gen_cmd->add_option("--T", periods, "Periods (mpo)")->capture_default_str();
  gen_cmd->add_option("--sparsity", sparsity,
                      "Nonzero density (default 0.2 fisher, 1e-4 lasso)");
  gen_cmd->add_option("--out", gen_out, "Output path")->required();

  std::string bench_dir;
  std::string bench_out;
  double shift = 10.0;
  bool parallel = false;
  conicpd::SolverParams bench_params;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Solve a directory of instances");
  bench_cmd->add_option("--dir", bench_dir, "Directory of instances")->required();
  AddSolverFlags(bench_cmd, bench_params);
  bench_cmd->add_option("--sgm-shift", shift, "Shift of the geometric mean")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");
  bench_cmd->add_flag("--parallel", parallel,
                      "Run instances concurrently; omits the SGM footer");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return RunSolve(solve);
    if (*gen_cmd) {
      conicpd::ConicProgram program;
      if (family == "fisher") {
        conicpd::FisherSpec spec{m, n, sparsity > 0 ? sparsity : 0.2, seed};
        program = conicpd::GenerateFisher(spec).program;
      } else if (family == "lasso") {
        conicpd::LassoSpec spec{m, n, sparsity > 0 ? sparsity : 1e-4, seed};
        program = conicpd::GenerateLasso(spec).program;
      } else {
        conicpd::MpoSpec spec;
        spec.periods = periods;
        spec.n = n;
        spec.seed = seed;
        program = conicpd::GenerateMpo(spec).program;
      }
      conicpd::WriteInstance(program, gen_out);
      return 0;
    }
    if (*bench_cmd) {
      const std::vector<std::string> paths = conicpd::ListInstances(bench_dir);
      if (paths.empty()) throw std::runtime_error("no instances in '" + bench_dir + "'");
      const std::vector<conicpd::BenchRow> rows =
          conicpd::RunBench(paths, bench_params, parallel);
      const std::string csv =
          conicpd::BenchCsv(rows, shift, bench_params.time_limit, !parallel);
      if (bench_out.empty()) {
        std::cout << csv;
      } else {
        WriteText(bench_out, csv);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
