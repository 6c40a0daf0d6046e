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

#include "conicpd/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace conicpd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void CheckParams(const SolverParams& p) {
  if (!(p.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (p.check_interval < 1) {
    throw std::invalid_argument("check_interval must be at least 1");
  }
  if (!(0.0 < p.beta_sufficient && p.beta_sufficient < p.beta_necessary &&
        p.beta_necessary < 1.0)) {
    throw std::invalid_argument(
        "restart thresholds must satisfy 0 < sufficient < necessary < 1");
  }
  if (!(p.reflection_beta_max >= 0.0 && p.reflection_beta_max <= 1.0)) {
    throw std::invalid_argument("reflection_beta_max must lie in [0, 1]");
  }
  if (p.reflection_window < 1) {
    throw std::invalid_argument("reflection_window must be at least 1");
  }
  if (p.max_iters < 0) throw std::invalid_argument("max_iters is negative");
  if (!(p.time_limit > 0.0)) {
    throw std::invalid_argument("time_limit must be positive");
  }
}

void CheckProgram(const ConicProgram& program) {
  const std::vector<std::string> violations = Validate(program);
  if (violations.empty()) return;
  std::string message = "invalid program:";
  for (const std::string& v : violations) message += " " + v + ";";
  throw std::invalid_argument(message);
}

// Maps a scaled iterate to the original space and evaluates the residuals
// from its cached products.
class OriginalSpace {
 public:
  OriginalSpace(const ConicProgram& original, const ScalingInfo& info)
      : original_(original), info_(info) {}

  void Unscale(const Iterate& z, Vector& x, Vector& y) const {
    x.resize(z.x.size());
    y.resize(z.y.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = z.x[j] / info_.col_scale[j];
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = z.y[i] / info_.row_scale[i];
  }

  Residuals Evaluate(const Iterate& z) const {
    Vector x, y;
    Unscale(z, x, y);
    Vector gx(z.gx.size());
    Vector gty(z.gty.size());
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] = z.gx[i] * info_.row_scale[i];
    for (std::size_t j = 0; j < gty.size(); ++j) gty[j] = z.gty[j] * info_.col_scale[j];
    return ResidualsFromProducts(original_, x, y, gx, gty);
  }

 private:
  const ConicProgram& original_;
  const ScalingInfo& info_;
};

bool Finite(const Residuals& r) {
  return std::isfinite(r.err_p) && std::isfinite(r.err_d) &&
         std::isfinite(r.err_gap);
}

void WriteProgress(const SolverParams& params, std::int64_t iter,
                   const Residuals& r, double eta, double omega, double beta,
                   std::int64_t restarts) {
  if (params.progress == nullptr) return;
  *params.progress << iter << '\t' << r.err_p << '\t' << r.err_d << '\t'
                   << r.err_gap << '\t' << eta << '\t' << omega << '\t' << beta
                   << '\t' << restarts << '\n';
}

bool SpmvBudgetExhausted(const SolverParams& params, std::int64_t start) {
  return params.max_spmv > 0 &&
         ThreadMatvecCount() - start >= params.max_spmv;
}

// Fresh residuals of the unscaled point, stored into the report.
void Finish(const ConicProgram& program, Vector x, Vector y,
            SolveReport& report) {
  report.residuals = ComputeResiduals(program, x, y);
  report.x = std::move(x);
  report.y = std::move(y);
}

SolveReport SolveVanilla(const ConicProgram& program,
                         const SolverParams& params) {
  const Clock::time_point start = Clock::now();
  const std::int64_t mv_start = ThreadMatvecCount();
  SolveReport report;
  report.params = params;

  const ScalingInfo identity = IdentityScaling(program);
  const PdhgOperator op(program, ComputeConeScalingSlices(identity, program));
  const double norm = EstimateSpectralNorm(program.G);
  const double step = norm > 0.0 ? 0.9 / norm : 1.0;

  Vector x0(static_cast<std::size_t>(program.n()), 0.0);
  op.ProjectPrimal(x0);
  Iterate z = op.MakeIterate(std::move(x0),
                             Vector(static_cast<std::size_t>(program.m()), 0.0));
  Iterate next;
  Vector best_x = z.x;
  Vector best_y = z.y;
  double best_error = kInf;
  bool optimal = false;
  report.status = Status::kIterationLimit;
  try {
    while (report.iterations < params.max_iters) {
      op.Step(z, step, step, next);
      std::swap(z, next);
      ++report.iterations;
      if (report.iterations % params.check_interval != 0) continue;
      const Residuals res = ResidualsFromProducts(program, z.x, z.y, z.gx, z.gty);
      WriteProgress(params, report.iterations, res, step, 1.0, 0.0, 0);
      if (!Finite(res)) {
        report.status = Status::kNumericalError;
        break;
      }
      if (res.Max() < best_error) {
        best_error = res.Max();
        best_x = z.x;
        best_y = z.y;
      }
      if (MeetsTolerance(res, params.tol) &&
          MeetsTolerance(ComputeResiduals(program, z.x, z.y), params.tol)) {
        optimal = true;
        break;
      }
      if (Seconds(start) >= params.time_limit) {
        report.status = Status::kTimeLimit;
        break;
      }
      if (SpmvBudgetExhausted(params, mv_start)) break;
    }
  } catch (const ProjectionError&) {
    report.status = Status::kNumericalError;
  }
  if (optimal) {
    report.status = Status::kOptimal;
    Finish(program, z.x, z.y, report);
  } else {
    Finish(program, best_x, best_y, report);
  }
  report.anchor_residuals = report.residuals;
  report.final_eta = step;
  report.final_omega = 1.0;
  report.projection_count = op.projection_count();
  report.spmv_count = ThreadMatvecCount() - mv_start;
  report.wall_seconds = Seconds(start);
  return report;
}

}  // namespace

PdhgOperator::PdhgOperator(const ConicProgram& program,
                           ConeScalingSlices slices)
    : program_(&program), slices_(std::move(slices)) {}

Iterate PdhgOperator::MakeIterate(Vector x, Vector y) const {
  Iterate z;
  z.gx = Spmv(program_->G, x);
  z.gty = SpmvT(program_->G, y);
  z.x = std::move(x);
  z.y = std::move(y);
  return z;
}

void PdhgOperator::ProjectPrimal(std::span<double> x) const {
  const auto n1 = static_cast<std::size_t>(program_->n1());
  for (std::size_t j = 0; j < n1; ++j) {
    x[j] = std::min(std::max(x[j], program_->l[j]), program_->u[j]);
  }
  projection_count_ += ApplyBlockProjections(x.subspan(n1), slices_.primal);
}

void PdhgOperator::ProjectDual(std::span<double> y) const {
  projection_count_ += ApplyBlockProjections(y, slices_.dual);
}

void PdhgOperator::Step(const Iterate& z, double tau, double sigma,
                        Iterate& out) const {
  const ConicProgram& p = *program_;
  const std::size_t n = p.c.size();
  const std::size_t m = p.h.size();
  out.x.resize(n);
  out.y.resize(m);
  out.gx.resize(m);
  out.gty.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.x[j] = z.x[j] - tau * (p.c[j] - z.gty[j]);
  }
  ProjectPrimal(out.x);
  Spmv(p.G, out.x, out.gx);
  for (std::size_t i = 0; i < m; ++i) {
    out.y[i] = z.y[i] + sigma * (p.h[i] - 2.0 * out.gx[i] + z.gx[i]);
  }
  ProjectDual(out.y);
  SpmvT(p.G, out.y, out.gty);
}

Iterate OnePdhg(const PdhgOperator& op, const Iterate& z, double tau,
                double sigma) {
  if (!(tau > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("PDHG step sizes must be positive");
  }
  Iterate out;
  op.Step(z, tau, sigma, out);
  return out;
}

double WeightedNorm(std::span<const double> dx, std::span<const double> dy,
                    double omega) {
  double sx = 0.0;
  double sy = 0.0;
  for (double v : dx) sx += v * v;
  for (double v : dy) sy += v * v;
  return std::sqrt(omega * sx + sy / omega);
}

double StepBound(const Iterate& z, const Iterate& z_hat, double omega) {
  double sx = 0.0;
  for (std::size_t j = 0; j < z.x.size(); ++j) {
    const double d = z_hat.x[j] - z.x[j];
    sx += d * d;
  }
  double sy = 0.0;
  double interaction = 0.0;
  for (std::size_t i = 0; i < z.y.size(); ++i) {
    const double d = z_hat.y[i] - z.y[i];
    sy += d * d;
    interaction += d * (z_hat.gx[i] - z.gx[i]);
  }
  if (interaction == 0.0) return kInf;
  return (0.5 * omega * sx + 0.5 * sy / omega) / std::abs(interaction);
}

StepResult AdaptiveStep(const PdhgOperator& op, const Iterate& z,
                        double omega, double eta, double eta_floor,
                        const SolverParams& params) {
  if (!(eta > 0.0) || !(omega > 0.0)) {
    throw std::invalid_argument("step size and primal weight must be positive");
  }
  StepResult result;
  double e = eta;
  while (true) {
    if (e < eta_floor) {
      result.failed = true;
      return result;
    }
    op.Step(z, e / omega, e * omega, result.z_hat);
    const double bound = StepBound(z, result.z_hat, omega);
    if (e <= bound) {
      result.eta_used = e;
      result.eta_next = std::min(params.step_growth * e, bound);
      return result;
    }
    if (result.rejects >= params.max_step_rejects) {
      result.failed = true;
      return result;
    }
    ++result.rejects;
    e *= params.step_shrink;
  }
}

ReflectionController::ReflectionController(double beta_max, int window)
    : beta_max_(beta_max),
      window_(static_cast<std::size_t>(std::max(window, 1))),
      beta_(beta_max) {}

void ReflectionController::Reset() {
  beta_ = beta_max_;
  history_.clear();
}

void ReflectionController::Record(double residual) {
  history_.push_back(residual);
  if (history_.size() < window_) return;
  if (history_.back() > history_.front()) {
    beta_ *= 0.5;
    history_.clear();
  } else {
    history_.pop_front();
  }
}

double ReflectionParameter(std::span<const double> history, double beta_max,
                           int window) {
  ReflectionController controller(beta_max, window);
  for (double r : history) controller.Record(r);
  return controller.beta();
}

Iterate ReflectedHalpern(const Iterate& z_hat, const Iterate& z,
                         const Iterate& anchor, double beta, std::int64_t k) {
  const double kk = static_cast<double>(k);
  const double a = (kk + 1.0) / (kk + 2.0);
  const double b = 1.0 / (kk + 2.0);
  auto combine = [&](const Vector& h, const Vector& p, const Vector& q) {
    Vector out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      out[i] = a * ((1.0 + beta) * h[i] - beta * p[i]) + b * q[i];
    }
    return out;
  };
  Iterate out;
  out.x = combine(z_hat.x, z.x, anchor.x);
  out.y = combine(z_hat.y, z.y, anchor.y);
  out.gx = combine(z_hat.gx, z.gx, anchor.gx);
  out.gty = combine(z_hat.gty, z.gty, anchor.gty);
  return out;
}

RestartEpoch::RestartEpoch(Iterate anchor, double anchor_error)
    : anchor_(std::move(anchor)), anchor_error_(anchor_error) {
  sum_.x.assign(anchor_.x.size(), 0.0);
  sum_.y.assign(anchor_.y.size(), 0.0);
  sum_.gx.assign(anchor_.gx.size(), 0.0);
  sum_.gty.assign(anchor_.gty.size(), 0.0);
}

void RestartEpoch::Add(const Iterate& z, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("average weight must be positive");
  auto accumulate = [weight](Vector& sum, const Vector& v) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += weight * v[i];
  };
  accumulate(sum_.x, z.x);
  accumulate(sum_.y, z.y);
  accumulate(sum_.gx, z.gx);
  accumulate(sum_.gty, z.gty);
  weight_sum_ += weight;
  ++count_;
}

Iterate RestartEpoch::Average() const {
  if (weight_sum_ == 0.0) return anchor_;
  auto divide = [this](const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / weight_sum_;
    return out;
  };
  return Iterate{divide(sum_.x), divide(sum_.y), divide(sum_.gx),
                 divide(sum_.gty)};
}

Candidate RestartCandidate(double current_error, double average_error) {
  if (current_error < average_error) return {false, current_error};
  return {true, average_error};
}

bool ShouldRestart(double candidate_error, double anchor_error,
                   double previous_candidate_error, std::int64_t epoch_iters,
                   std::int64_t total_iters, const SolverParams& params) {
  if (candidate_error <= params.beta_sufficient * anchor_error) return true;
  if (candidate_error <= params.beta_necessary * anchor_error &&
      candidate_error > previous_candidate_error) {
    return true;
  }
  return static_cast<double>(epoch_iters) >=
         params.artificial_fraction * static_cast<double>(total_iters);
}

double PrimalWeightUpdate(std::span<const double> dx,
                          std::span<const double> dy, double omega,
                          double theta) {
  const double nx = Norm2(dx);
  const double ny = Norm2(dy);
  if (nx > 1e-10 && ny > 1e-10) {
    return std::exp(theta * std::log(ny / nx) + (1.0 - theta) * std::log(omega));
  }
  return omega;
}

SolveReport Solve(const ConicProgram& program, const SolverParams& params) {
  CheckProgram(program);
  CheckParams(params);
  if (params.vanilla_pdhg) return SolveVanilla(program, params);

  const Clock::time_point start = Clock::now();
  const std::int64_t mv_start = ThreadMatvecCount();
  SolveReport report;
  report.params = params;

  ScaledProgram scaled;
  if (params.scaling) {
    scaled = RuizScale(program, params.scaling_options);
  } else {
    scaled.program = program;
    scaled.info = IdentityScaling(program);
  }
  const ConicProgram& work = scaled.program;
  const OriginalSpace original(program, scaled.info);
  const PdhgOperator op(work, ComputeConeScalingSlices(scaled.info, work));

  double omega = params.omega0;
  if (!(omega > 0.0)) {
    const double cn = NormInf(work.c);
    const double hn = NormInf(work.h);
    omega = (cn > 0.0 && hn > 0.0) ? std::clamp(cn / hn, 1e-4, 1e4) : 1.0;
  }
  double eta = params.eta0;
  if (!(eta > 0.0)) {
    const double gn = ComputeNorms(work.G).inf_norm;
    eta = gn > 0.0 ? 1.0 / gn : 1.0;
  }
  const double eta_floor = 1e-12 * eta;

  Vector x0(static_cast<std::size_t>(work.n()), 0.0);
  op.ProjectPrimal(x0);
  Iterate anchor = op.MakeIterate(std::move(x0),
                                  Vector(static_cast<std::size_t>(work.m()), 0.0));
  Residuals anchor_res = original.Evaluate(anchor);
  Iterate best = anchor;
  double best_error = anchor_res.Max();
  report.anchor_errors.push_back(anchor_res.Max());

  RestartEpoch epoch(anchor, anchor_res.Max());
  ReflectionController reflection(params.reflection_beta_max,
                                  params.reflection_window);
  Iterate z = anchor;
  Iterate z_hat = anchor;
  std::int64_t k = 0;
  double previous_candidate_error = kInf;
  bool optimal = false;
  Vector opt_x, opt_y;
  report.status = Status::kIterationLimit;

  try {
    while (report.iterations < params.max_iters) {
      StepResult step = AdaptiveStep(op, z, omega, eta, eta_floor, params);
      if (step.failed) {
        report.status = Status::kNumericalError;
        break;
      }
      eta = step.eta_next;
      z_hat = std::move(step.z_hat);
      {
        Vector dx(z.x.size());
        Vector dy(z.y.size());
        for (std::size_t j = 0; j < dx.size(); ++j) dx[j] = z_hat.x[j] - z.x[j];
        for (std::size_t i = 0; i < dy.size(); ++i) dy[i] = z_hat.y[i] - z.y[i];
        reflection.Record(WeightedNorm(dx, dy, omega));
      }
      epoch.Add(z_hat, step.eta_used);
      z = ReflectedHalpern(z_hat, z, epoch.anchor(), reflection.beta(), k);
      ++k;
      ++report.iterations;
      if (report.iterations % params.check_interval != 0) continue;

      const Residuals current_res = original.Evaluate(z_hat);
      const Iterate average = epoch.Average();
      const Residuals average_res = original.Evaluate(average);
      const Candidate candidate =
          RestartCandidate(current_res.Max(), average_res.Max());
      const Iterate& chosen = candidate.is_average ? average : z_hat;
      const Residuals& chosen_res = candidate.is_average ? average_res : current_res;
      WriteProgress(params, report.iterations, chosen_res, eta, omega,
                    reflection.beta(), report.restarts);
      if (!Finite(chosen_res)) {
        report.status = Status::kNumericalError;
        break;
      }
      if (candidate.error < best_error) {
        best_error = candidate.error;
        best = chosen;
      }
      if (MeetsTolerance(chosen_res, params.tol)) {
        // Confirm with products recomputed from scratch.
        Vector x, y;
        original.Unscale(chosen, x, y);
        if (MeetsTolerance(ComputeResiduals(program, x, y), params.tol)) {
          optimal = true;
          opt_x = std::move(x);
          opt_y = std::move(y);
          break;
        }
      }
      if (ShouldRestart(candidate.error, epoch.anchor_error(),
                        previous_candidate_error, k, report.iterations,
                        params)) {
        // Only an artificial restart can see a worse candidate; fall back to
        // the best point so anchor errors never increase.
        const bool improves = candidate.error <= epoch.anchor_error();
        const Iterate& target = improves ? chosen : best;
        const double target_error = improves ? candidate.error : best_error;
        Iterate next_anchor = op.MakeIterate(target.x, target.y);
        Vector dx(next_anchor.x.size());
        Vector dy(next_anchor.y.size());
        for (std::size_t j = 0; j < dx.size(); ++j) {
          dx[j] = next_anchor.x[j] - epoch.anchor().x[j];
        }
        for (std::size_t i = 0; i < dy.size(); ++i) {
          dy[i] = next_anchor.y[i] - epoch.anchor().y[i];
        }
        omega = PrimalWeightUpdate(dx, dy, omega,
                                   params.primal_weight_smoothing);
        anchor_res = improves ? chosen_res : original.Evaluate(next_anchor);
        z = next_anchor;
        epoch = RestartEpoch(std::move(next_anchor), target_error);
        reflection.Reset();
        k = 0;
        previous_candidate_error = kInf;
        ++report.restarts;
        report.anchor_errors.push_back(target_error);
      } else {
        previous_candidate_error = candidate.error;
      }
      if (Seconds(start) >= params.time_limit) {
        report.status = Status::kTimeLimit;
        break;
      }
      if (SpmvBudgetExhausted(params, mv_start)) break;
    }
  } catch (const ProjectionError&) {
    report.status = Status::kNumericalError;
  }

  if (optimal) {
    report.status = Status::kOptimal;
    Finish(program, std::move(opt_x), std::move(opt_y), report);
  } else {
    Vector x, y;
    original.Unscale(best, x, y);
    Finish(program, std::move(x), std::move(y), report);
  }
  report.anchor_residuals = anchor_res;
  report.final_eta = eta;
  report.final_omega = omega;
  report.projection_count = op.projection_count();
  report.spmv_count = ThreadMatvecCount() - mv_start;
  report.wall_seconds = Seconds(start);
  return report;
}

}  // namespace conicpd
