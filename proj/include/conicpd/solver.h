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

// Restarted primal-dual hybrid gradient for conic programs.
//
// The outer loop runs epochs. Inside an epoch each iteration takes one
// line-searched PDHG step from z to z_hat, then moves z to a reflected Halpern
// combination of z_hat, z and the epoch anchor. The step-size weighted average
// of the z_hat points and the latest z_hat compete as restart candidates; the
// better of the two (by the largest relative KKT residual on the original
// program) becomes the next anchor when the error has decayed enough, and the
// primal weight is rebalanced from the anchor movement.
//
// Iterates live in the scaled space of RuizScale and carry G~x and G~^T y, so
// a PDHG step costs one Spmv and one SpmvT and all averages and Halpern
// combinations update the products linearly.

#ifndef CONICPD_SOLVER_H_
#define CONICPD_SOLVER_H_

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

#include "conicpd/cones.h"
#include "conicpd/model.h"
#include "conicpd/scaling.h"
#include "conicpd/termination.h"

namespace conicpd {

struct SolverParams {
  double tol = 1e-6;
  std::int64_t max_iters = 1'000'000;
  double time_limit = 3600.0;  // seconds
  // Stop once this many matvecs have been spent; 0 means no cap.
  std::int64_t max_spmv = 0;
  // Initial step size; 0 picks 1 / |G~|_inf.
  double eta0 = 0.0;
  // Initial primal weight; 0 picks |c~|_inf / |h~|_inf clipped to
  // [1e-4, 1e4], or 1 if either norm vanishes.
  double omega0 = 0.0;
  double reflection_beta_max = 1.0;
  int reflection_window = 40;
  double beta_sufficient = 0.2;
  double beta_necessary = 0.8;
  double artificial_fraction = 0.36;
  double primal_weight_smoothing = 0.5;
  double step_shrink = 0.5;
  double step_growth = 1.05;
  int max_step_rejects = 60;
  int check_interval = 40;
  bool scaling = true;
  ScalingOptions scaling_options;
  // Fixed steps 0.9 / |G|_2 on the unscaled program, no restarts, no
  // reflection, no averaging.
  bool vanilla_pdhg = false;
  // Tab-separated progress lines at every residual check, if set.
  std::ostream* progress = nullptr;
};

// A primal-dual point with the products of the working matrix.
struct Iterate {
  Vector x;
  Vector y;
  Vector gx;   // G x
  Vector gty;  // G^T y
};

// The PDHG operator of one (possibly scaled) program with its block
// projections.
class PdhgOperator {
 public:
  PdhgOperator(const ConicProgram& program, ConeScalingSlices slices);

  const ConicProgram& program() const { return *program_; }

  // Fills the products (one Spmv and one SpmvT).
  Iterate MakeIterate(Vector x, Vector y) const;

  // x_hat = P_X(x - tau (c - G^T y)),
  // y_hat = P_Y(y + sigma (h - 2 G x_hat + G x)).
  // Reuses z.gx, so the call costs one Spmv and one SpmvT.
  void Step(const Iterate& z, double tau, double sigma, Iterate& out) const;

  void ProjectPrimal(std::span<double> x) const;
  void ProjectDual(std::span<double> y) const;

  std::int64_t projection_count() const { return projection_count_; }

 private:
  const ConicProgram* program_;
  ConeScalingSlices slices_;
  mutable std::int64_t projection_count_ = 0;
};

Iterate OnePdhg(const PdhgOperator& op, const Iterate& z, double tau,
                double sigma);

// |z|_omega^2 = omega |x|^2 + |y|^2 / omega.
double WeightedNorm(std::span<const double> dx, std::span<const double> dy,
                    double omega);

struct StepResult {
  Iterate z_hat;
  double eta_used = 0.0;
  double eta_next = 0.0;
  int rejects = 0;
  bool failed = false;
};

// Largest step for which the trial (z, z_hat) passes the acceptance test
//   eta <= (omega |dx|^2 / 2 + |dy|^2 / (2 omega)) / |<dy, G dx>|.
// Infinite when the interaction term vanishes.
double StepBound(const Iterate& z, const Iterate& z_hat, double omega);

// Line-searched PDHG step with tau = eta / omega and sigma = eta omega.
// Rejected trials shrink eta by params.step_shrink; an accepted trial
// proposes min(step_growth * eta, bound) next. Fails if eta drops below
// eta_floor or the reject budget runs out.
StepResult AdaptiveStep(const PdhgOperator& op, const Iterate& z,
                        double omega, double eta, double eta_floor,
                        const SolverParams& params);

// Window rule for the reflection weight: residuals fill a window of
// `window` entries; once full, beta halves if the newest entry exceeds the
// oldest (and the window restarts), otherwise the oldest entry is dropped.
class ReflectionController {
 public:
  ReflectionController(double beta_max, int window);
  void Reset();
  void Record(double residual);
  double beta() const { return beta_; }

 private:
  double beta_max_;
  std::size_t window_;
  double beta_;
  std::deque<double> history_;
};

// The same rule replayed over a full history.
double ReflectionParameter(std::span<const double> history, double beta_max,
                           int window);

// ((k+1)/(k+2)) ((1+beta) z_hat - beta z) + anchor / (k+2), products
// included.
Iterate ReflectedHalpern(const Iterate& z_hat, const Iterate& z,
                         const Iterate& anchor, double beta, std::int64_t k);

// Step-size weighted running average of iterates.
class RestartEpoch {
 public:
  explicit RestartEpoch(Iterate anchor, double anchor_error = 0.0);

  void Add(const Iterate& z, double weight);
  Iterate Average() const;
  double weight_sum() const { return weight_sum_; }
  std::int64_t count() const { return count_; }
  const Iterate& anchor() const { return anchor_; }
  double anchor_error() const { return anchor_error_; }

 private:
  Iterate anchor_;
  double anchor_error_;
  Iterate sum_;
  double weight_sum_ = 0.0;
  std::int64_t count_ = 0;
};

struct Candidate {
  bool is_average = true;
  double error = 0.0;
};

// The smaller error wins; ties go to the average.
Candidate RestartCandidate(double current_error, double average_error);

// Sufficient decay, necessary decay after an increase, or an epoch that has
// grown past artificial_fraction of all iterations.
bool ShouldRestart(double candidate_error, double anchor_error,
                   double previous_candidate_error, std::int64_t epoch_iters,
                   std::int64_t total_iters, const SolverParams& params);

// exp(theta ln(|dy| / |dx|) + (1 - theta) ln omega) when both norms exceed
// 1e-10, else omega.
double PrimalWeightUpdate(std::span<const double> dx,
                          std::span<const double> dy, double omega,
                          double theta = 0.5);

struct SolveReport {
  Status status = Status::kIterationLimit;
  Residuals residuals;
  // KKT error of the last anchor, for comparison with the returned point.
  Residuals anchor_residuals;
  Vector x;
  Vector y;
  std::int64_t iterations = 0;
  std::int64_t restarts = 0;
  std::int64_t spmv_count = 0;
  std::int64_t projection_count = 0;
  double wall_seconds = 0.0;
  double final_eta = 0.0;
  double final_omega = 0.0;
  // Anchor KKT error at the start of every epoch.
  std::vector<double> anchor_errors;
  SolverParams params;
};

// Throws std::invalid_argument on an invalid program or parameters.
SolveReport Solve(const ConicProgram& program, const SolverParams& params);

}  // namespace conicpd

#endif  // CONICPD_SOLVER_H_
