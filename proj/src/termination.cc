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

#include "conicpd/termination.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "conicpd/cones.h"

namespace conicpd {

double Residuals::Max() const { return std::max({err_p, err_d, err_gap}); }

double ProjectedDualObjective(const ConicProgram& program,
                              std::span<const double> y,
                              std::span<const double> lambda1) {
  const Vector p = ProjectLambdaSet(lambda1, program.l, program.u);
  return DualObjective(program, y, p);
}

Residuals ComputeResiduals(const ConicProgram& program,
                           std::span<const double> x,
                           std::span<const double> y) {
  const Vector gx = Spmv(program.G, x);
  const Vector gty = SpmvT(program.G, y);
  return ResidualsFromProducts(program, x, y, gx, gty);
}

Residuals ResidualsFromProducts(const ConicProgram& program,
                                std::span<const double> x,
                                std::span<const double> y,
                                std::span<const double> gx,
                                std::span<const double> gty) {
  const auto m = static_cast<std::size_t>(program.m());
  const auto n = static_cast<std::size_t>(program.n());
  const auto n1 = static_cast<std::size_t>(program.n1());
  if (x.size() != n || gty.size() != n || y.size() != m || gx.size() != m) {
    throw std::invalid_argument("residual inputs do not match the program");
  }

  Vector slack(m);
  for (std::size_t i = 0; i < m; ++i) slack[i] = gx[i] - program.h[i];
  Vector proj = slack;
  std::size_t offset = 0;
  for (const Cone& cone : program.dual_cones) {
    const auto dim = static_cast<std::size_t>(cone.dim);
    ProjectConeInPlace(std::span<double>(proj).subspan(offset, dim), cone.kind);
    offset += dim;
  }
  double primal_violation = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    primal_violation = std::max(primal_violation, std::abs(slack[i] - proj[i]));
  }

  Vector lambda(n);
  for (std::size_t j = 0; j < n; ++j) lambda[j] = program.c[j] - gty[j];
  const std::span<const double> lambda1 = std::span<const double>(lambda).first(n1);
  const Vector lambda1_proj = ProjectLambdaSet(lambda1, program.l, program.u);
  double dual_violation = 0.0;
  for (std::size_t j = 0; j < n1; ++j) {
    dual_violation = std::max(dual_violation, std::abs(lambda[j] - lambda1_proj[j]));
  }
  Vector lambda2(lambda.begin() + static_cast<std::ptrdiff_t>(n1), lambda.end());
  Vector lambda2_proj = lambda2;
  offset = 0;
  for (const Cone& cone : program.primal_cones) {
    const auto dim = static_cast<std::size_t>(cone.dim);
    ProjectDualConeInPlace(std::span<double>(lambda2_proj).subspan(offset, dim),
                           cone.kind);
    offset += dim;
  }
  for (std::size_t j = 0; j < lambda2.size(); ++j) {
    dual_violation = std::max(dual_violation, std::abs(lambda2[j] - lambda2_proj[j]));
  }

  Residuals res;
  res.primal_obj = Dot(program.c, x);
  res.dual_obj = DualObjective(program, y, lambda1_proj);
  res.err_p = primal_violation /
              (1.0 + std::max({NormInf(program.h), NormInf(gx), NormInf(proj)}));
  res.err_d = dual_violation / (1.0 + std::max(NormInf(program.c), NormInf(gty)));
  const double denom =
      1.0 + std::max(std::abs(res.primal_obj), std::abs(res.dual_obj));
  res.err_gap = std::isfinite(denom)
                    ? std::abs(res.primal_obj - res.dual_obj) / denom
                    : 1.0;
  return res;
}

std::string_view StatusName(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "OPTIMAL";
    case Status::kIterationLimit:
      return "ITERATION_LIMIT";
    case Status::kTimeLimit:
      return "TIME_LIMIT";
    case Status::kNumericalError:
      return "NUMERICAL_ERROR";
  }
  return "UNKNOWN";
}

bool MeetsTolerance(const Residuals& residuals, double tol) {
  return residuals.Max() <= tol;
}

double Sgm(std::span<const double> times, double shift) {
  if (times.empty()) throw std::invalid_argument("sgm of an empty list");
  double log_sum = 0.0;
  for (double t : times) {
    if (!(t >= 0.0)) {
      throw std::invalid_argument("sgm needs nonnegative times, got " +
                                  std::to_string(t));
    }
    log_sum += std::log(t + shift);
  }
  // A constant list is its own mean; skip the log/exp round trip.
  if (std::all_of(times.begin(), times.end(),
                  [&](double t) { return t == times.front(); })) {
    return times.front();
  }
  return std::exp(log_sum / static_cast<double>(times.size())) - shift;
}

}  // namespace conicpd
