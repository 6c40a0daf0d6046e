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

// Synthetic instance families. Each builder is a pure function of its spec
// and returns the program, a point satisfying every constraint, and the raw
// data needed to check solutions against the original (pre-conic) model.
//
// Fisher market: variables [X row by row (m*n), (p_1, t_1), ..., (p_m, t_m)],
//   all box variables (X >= 0, p and t free). Rows: n market-clearing rows
//   sum_i X_ij = b_j, m rows U_i . X_i - t_i = 0, then one exponential block
//   (p_i, 1, t_i) per buyer, i.e. p_i <= log t_i. Objective -sum w_i p_i.
//
// Lasso: min |A x - b|^2 + lambda |x|_1 with x = x1 - x2 and y = A x - b.
//   With w = (s + d)/sqrt2 and r = (s - d)/sqrt2 the block (s, d, y) is a
//   second-order cone of dimension m + 2 whenever 2 w r >= |y|^2. Variables
//   [x1 (n), x2 (n) | s, d, y (m)]; x1, x2 >= 0 via bounds. Rows: w = 1 and
//   y - A x1 + A x2 = -b. Objective 2 r + lambda 1^T (x1 + x2).
//
// Multi-period portfolio: per period tau, variables
//   [w_{tau+1} (n+1), z_tau (n+1), u_tau (n)], all box variables with
//   w >= 0, -gamma2 <= z <= gamma2, u free. Rows per period:
//   Zero(n+3):    z_tau - w_{tau+1} + w_tau = 0, 1^T z_tau = 0,
//                 (w^m)^T Sigma w_{tau+1,[n]} = 0;
//   NonNeg(2n+1): u - (w - w_b) >= 0, u + (w - w_b) >= 0,
//                 gamma3 - sum_i sqrt(Sigma)_ii u_i >= 0;
//   SOC(n+1):     (gamma1, Sigma^{1/2} (w_{tau+1} - w_b)_{[n]}).
//   Objective -sum_tau r_{tau+1}^T w_{tau+1}. w_0 is the equal-weight
//   portfolio without cash and the benchmark w_b is all cash.

#ifndef CONICPD_GENERATORS_H_
#define CONICPD_GENERATORS_H_

#include <cstdint>
#include <vector>

#include "conicpd/model.h"

namespace conicpd {

struct FisherSpec {
  Index m = 10;  // buyers
  Index n = 20;  // goods
  double sparsity = 0.2;
  std::uint64_t seed = 0;
};

struct FisherInstance {
  ConicProgram program;
  Vector feasible_x;
  Index m = 0;
  Index n = 0;
  Vector utility;  // row-major m x n, zero where not sampled
  Vector budget;   // w, length m
  Vector supply;   // b, length n
};

FisherInstance GenerateFisher(const FisherSpec& spec);

struct LassoSpec {
  Index m = 100;
  Index n = 500;
  double sparsity = 1e-4;
  std::uint64_t seed = 0;
};

struct LassoInstance {
  ConicProgram program;
  Vector feasible_x;
  Index m = 0;
  Index n = 0;
  SparseMatrix a;
  Vector b;
  double lambda = 0.0;
};

LassoInstance GenerateLasso(const LassoSpec& spec);

// Lasso objective |A x - b|^2 + lambda |x|_1 of the coefficient vector
// encoded in a program point (x = x1 - x2).
double LassoObjective(const LassoInstance& instance, std::span<const double> x);
Vector LassoCoefficients(const LassoInstance& instance,
                         std::span<const double> x);

struct MpoSpec {
  Index periods = 3;  // T
  Index n = 20;       // assets
  double gamma2 = 0.05;
  double gamma3 = 0.05;
  std::uint64_t seed = 0;
};

struct MpoInstance {
  ConicProgram program;
  Vector feasible_x;
  Index periods = 0;
  Index n = 0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  Vector w0;        // n + 1
  Vector w_bench;   // n + 1
  // Per period.
  std::vector<Vector> returns;      // n + 1
  std::vector<Vector> sigma;        // n x n row-major
  std::vector<Vector> sigma_half;   // n x n row-major
  std::vector<Vector> neutral;      // w^m, n
  std::vector<double> gamma1;

  // Offsets of w_{tau+1}, z_tau, u_tau in the variable vector.
  Index WOffset(Index tau) const { return tau * (3 * n + 2); }
  Index ZOffset(Index tau) const { return WOffset(tau) + n + 1; }
  Index UOffset(Index tau) const { return ZOffset(tau) + n + 1; }
};

MpoInstance GenerateMpo(const MpoSpec& spec);

// Largest violation of the portfolio model's constraints at a program point:
// budget, nonnegativity, neutrality, absolute-value, weighted-u, risk and
// trade limits, evaluated directly on the model data.
double MpoMaxViolation(const MpoInstance& instance, std::span<const double> x);

}  // namespace conicpd

#endif  // CONICPD_GENERATORS_H_
