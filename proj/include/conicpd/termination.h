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

// Relative KKT residuals on the original program, the optimality test, and
// the shifted geometric mean used to summarize benchmark runs.
//
//   err_p   = |(Gx - h) - P(Gx - h)|_inf / (1 + max(|h|, |Gx|, |P(Gx - h)|))
//   err_d   = max(|l1 - P_Lambda(l1)|, |l2 - P_{K_var^*}(l2)|)
//             / (1 + max(|c|, |G^T y|))
//   err_gap = |c^T x - dual| / (1 + max(|c^T x|, |dual|))
//
// with P the projection onto K_row and lambda = c - G^T y.

#ifndef CONICPD_TERMINATION_H_
#define CONICPD_TERMINATION_H_

#include <span>
#include <string_view>

#include "conicpd/model.h"

namespace conicpd {

struct Residuals {
  double err_p = 0.0;
  double err_d = 0.0;
  double err_gap = 0.0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;

  double Max() const;
};

// Recomputes G x and G^T y (two matvecs).
Residuals ComputeResiduals(const ConicProgram& program,
                           std::span<const double> x,
                           std::span<const double> y);

// Same, from caller-supplied products gx = G x and gty = G^T y.
Residuals ResidualsFromProducts(const ConicProgram& program,
                                std::span<const double> x,
                                std::span<const double> y,
                                std::span<const double> gx,
                                std::span<const double> gty);

// Dual objective used by the gap residual: y^T h + l^T p^+ - u^T p^- with
// p = P_Lambda(lambda1). An infinite bound therefore only meets a zero part.
double ProjectedDualObjective(const ConicProgram& program,
                              std::span<const double> y,
                              std::span<const double> lambda1);

enum class Status {
  kOptimal,
  kIterationLimit,
  kTimeLimit,
  kNumericalError,
};

std::string_view StatusName(Status status);

// True iff max(err_p, err_d, err_gap) <= tol.
bool MeetsTolerance(const Residuals& residuals, double tol);

// (prod (t_i + shift))^(1/N) - shift, accumulated in log space. Throws
// std::invalid_argument on an empty list or a negative time.
double Sgm(std::span<const double> times, double shift);

}  // namespace conicpd

#endif  // CONICPD_TERMINATION_H_
