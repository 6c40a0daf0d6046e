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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "conicpd/cones.h"
#include "conicpd/rng.h"
#include "oracles.h"

namespace conicpd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConeScalingSlices UnitSlices(const ConicProgram& p) {
  return ComputeConeScalingSlices(IdentityScaling(p), p);
}

Iterate Point(Vector x, Vector y) {
  Iterate z;
  z.gx.assign(0, 0.0);
  z.x = std::move(x);
  z.y = std::move(y);
  return z;
}

// 1-var LP: min x s.t. x >= 0 as a row, x in [0, inf).
ConicProgram TinyLp() {
  ConicProgram p;
  p.c = {1.0};
  p.G = SparseMatrix::FromTriplets(1, 1, std::vector<Triplet>{{0, 0, 1.0}});
  p.h = {0.0};
  p.l = {0.0};
  p.u = {kInf};
  p.dual_cones = {{ConeKind::kNonNeg, 1}};
  return p;
}

TEST(OnePdhgTest, HandEvaluatedStep) {
  const ConicProgram p = TinyLp();
  const PdhgOperator op(p, UnitSlices(p));
  const Iterate z = op.MakeIterate({0.0}, {0.0});
  const Iterate out = OnePdhg(op, z, 0.5, 0.5);
  EXPECT_EQ(out.x, (Vector{0.0}));
  EXPECT_EQ(out.y, (Vector{0.0}));
}

TEST(OnePdhgTest, SaddlePointIsFixed) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const testing::SaddleInstance inst = testing::RandomSaddleInstance(seed);
    ASSERT_TRUE(Validate(inst.program).empty());
    const PdhgOperator op(inst.program, UnitSlices(inst.program));
    const Iterate z = op.MakeIterate(inst.x, inst.y);
    const Iterate out = OnePdhg(op, z, 0.3, 0.7);
    EXPECT_LE(testing::MaxAbsDiff(out.x, inst.x), 1e-10) << "seed " << seed;
    EXPECT_LE(testing::MaxAbsDiff(out.y, inst.y), 1e-10) << "seed " << seed;
  }
}

TEST(OnePdhgTest, MatchesDenseTranscription) {
  const testing::SaddleInstance inst = testing::RandomSaddleInstance(42);
  const ConicProgram& p = inst.program;
  const PdhgOperator op(p, UnitSlices(p));
  RandomStream rng(42, 1);
  Vector x(static_cast<std::size_t>(p.n())), y(static_cast<std::size_t>(p.m()));
  for (double& v : x) v = rng.Normal();
  for (double& v : y) v = rng.Normal();
  const double tau = 0.2, sigma = 0.4;
  const Iterate out = OnePdhg(op, op.MakeIterate(x, y), tau, sigma);

  // x_hat = P_X(x - tau (c - G^T y)), y_hat = P_{K*}(y + sigma (h - G(2 x_hat - x))).
  const Vector gty = testing::DenseMatvecT(p.G, y);
  Vector xh(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) xh[j] = x[j] - tau * (p.c[j] - gty[j]);
  const Index n1 = p.n1();
  const Vector box = ProjectBox(std::span(xh).first(n1), p.l, p.u);
  std::copy(box.begin(), box.end(), xh.begin());
  Index off = n1;
  for (const Cone& c : p.primal_cones) {
    const Vector b = ProjectCone(std::span(xh).subspan(off, c.dim), c);
    std::copy(b.begin(), b.end(), xh.begin() + off);
    off += c.dim;
  }
  Vector extrap(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) extrap[j] = 2.0 * xh[j] - x[j];
  const Vector gx = testing::DenseMatvec(p.G, extrap);
  Vector yh(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) yh[i] = y[i] + sigma * (p.h[i] - gx[i]);
  off = 0;
  for (const Cone& c : p.dual_cones) {
    const Vector b = ProjectDualCone(std::span(yh).subspan(off, c.dim), c);
    std::copy(b.begin(), b.end(), yh.begin() + off);
    off += c.dim;
  }
  EXPECT_LE(testing::MaxAbsDiff(out.x, xh), 1e-10);
  EXPECT_LE(testing::MaxAbsDiff(out.y, yh), 1e-10);
  // Cached products agree with fresh ones.
  EXPECT_LE(testing::MaxAbsDiff(out.gx, testing::DenseMatvec(p.G, out.x)), 1e-10);
  EXPECT_LE(testing::MaxAbsDiff(out.gty, testing::DenseMatvecT(p.G, out.y)), 1e-10);
}

TEST(AdaptiveStepTest, VanishingInteractionAcceptsAnyStep) {
  ConicProgram p = TinyLp();
  p.G = SparseMatrix::FromTriplets(1, 1, {});
  const PdhgOperator op(p, UnitSlices(p));
  const Iterate z = op.MakeIterate({1.0}, {1.0});
  const SolverParams params;
  const StepResult r = AdaptiveStep(op, z, 1.0, 123.0, 1e-9, params);
  EXPECT_FALSE(r.failed);
  EXPECT_EQ(r.rejects, 0);
  EXPECT_EQ(r.eta_used, 123.0);
  EXPECT_GE(r.eta_next, 123.0);
}

TEST(AdaptiveStepTest, ScalarToyAcceptance) {
  // G = [1], c = 1, h = 0, x free, y free: from (1, 1) with eta = 0.5,
  // omega = 1: x_hat = 1 - 0.5 (1 - 1) = 1, y_hat = 1 + 0.5 (0 - 1) = 0.5.
  ConicProgram p;
  p.c = {1.0};
  p.G = SparseMatrix::FromTriplets(1, 1, std::vector<Triplet>{{0, 0, 1.0}});
  p.h = {0.0};
  p.l = {-kInf};
  p.u = {kInf};
  p.dual_cones = {{ConeKind::kZero, 1}};
  const PdhgOperator op(p, UnitSlices(p));
  const Iterate z = op.MakeIterate({1.0}, {1.0});
  const SolverParams params;
  const StepResult r = AdaptiveStep(op, z, 1.0, 0.5, 1e-9, params);
  EXPECT_EQ(r.rejects, 0);
  EXPECT_EQ(r.z_hat.x, (Vector{1.0}));
  EXPECT_EQ(r.z_hat.y, (Vector{0.5}));
  // dx = 0 makes the interaction vanish, so the bound is infinite.
  EXPECT_EQ(StepBound(z, r.z_hat, 1.0), kInf);
  EXPECT_DOUBLE_EQ(r.eta_next, 0.5 * params.step_growth);

  // From (0, 0): x_hat = -0.5, y_hat = 0 - 0.5 (2 (-0.5) - 0) = 0.5, so
  // dx = -0.5, dy = 0.5 and the bound is (0.125 + 0.125) / 0.25 = 1.
  const Iterate z0 = op.MakeIterate({0.0}, {0.0});
  const StepResult r0 = AdaptiveStep(op, z0, 1.0, 0.5, 1e-9, params);
  EXPECT_EQ(r0.rejects, 0);
  EXPECT_EQ(r0.z_hat.x, (Vector{-0.5}));
  EXPECT_EQ(r0.z_hat.y, (Vector{0.5}));
  EXPECT_DOUBLE_EQ(StepBound(z0, r0.z_hat, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(r0.eta_next, std::min(0.5 * params.step_growth, 1.0));
}

ConicProgram StiffProgram() {
  ConicProgram p;
  p.c = {1.0, -2.0};
  p.G = SparseMatrix::FromTriplets(
      2, 2, std::vector<Triplet>{{0, 0, 1000.0}, {0, 1, 5.0}, {1, 1, 800.0}});
  p.h = {1.0, 2.0};
  p.l = {-kInf, -kInf};
  p.u = {kInf, kInf};
  p.dual_cones = {{ConeKind::kZero, 2}};
  return p;
}

TEST(AdaptiveStepTest, ShrinkPathRespectsBound) {
  const ConicProgram p = StiffProgram();
  const PdhgOperator op(p, UnitSlices(p));
  const Iterate z = op.MakeIterate({0.3, -0.2}, {0.1, 0.4});
  const SolverParams params;
  const StepResult r = AdaptiveStep(op, z, 1.0, 1.0, 1e-12, params);
  EXPECT_FALSE(r.failed);
  EXPECT_GT(r.rejects, 0);
  EXPECT_LT(r.eta_used, 1.0);
  EXPECT_LT(r.eta_next, 1.0);
  EXPECT_LE(r.eta_used, StepBound(z, r.z_hat, 1.0));
}

TEST(AdaptiveStepTest, FailsBelowFloor) {
  const ConicProgram p = StiffProgram();
  const PdhgOperator op(p, UnitSlices(p));
  const Iterate z = op.MakeIterate({0.3, -0.2}, {0.1, 0.4});
  const SolverParams params;
  EXPECT_TRUE(AdaptiveStep(op, z, 1.0, 1.0, 0.9, params).failed);
  SolverParams few = params;
  few.max_step_rejects = 1;
  EXPECT_TRUE(AdaptiveStep(op, z, 1.0, 1.0, 1e-12, few).failed);
}

TEST(ReflectionTest, Rules) {
  EXPECT_EQ(ReflectionParameter(std::vector<double>{}, 1.0, 40), 1.0);
  std::vector<double> decreasing(100);
  for (int i = 0; i < 100; ++i) decreasing[i] = 1.0 / (1 + i);
  EXPECT_EQ(ReflectionParameter(decreasing, 1.0, 40), 1.0);
  std::vector<double> rising(40);
  for (int i = 0; i < 40; ++i) rising[i] = 1.0 + i;
  EXPECT_EQ(ReflectionParameter(rising, 1.0, 40), 0.5);
  ReflectionController c(0.8, 3);
  for (double v : {1.0, 2.0, 3.0}) c.Record(v);
  EXPECT_EQ(c.beta(), 0.4);
  c.Reset();
  EXPECT_EQ(c.beta(), 0.8);
}

TEST(HalpernTest, Specializations) {
  const Iterate zh = Point({2.0}, {4.0});
  const Iterate z = Point({1.0}, {1.0});
  const Iterate a = Point({0.0}, {2.0});
  auto with_products = [](Iterate it) {
    it.gx = it.x;
    it.gty = it.y;
    return it;
  };
  const Iterate out0 = ReflectedHalpern(with_products(zh), with_products(z),
                                        with_products(a), 0.0, 0);
  EXPECT_DOUBLE_EQ(out0.x[0], 1.0);
  EXPECT_DOUBLE_EQ(out0.y[0], 3.0);
  const Iterate big = ReflectedHalpern(with_products(zh), with_products(z),
                                       with_products(a), 1.0, 1000000);
  EXPECT_NEAR(big.x[0], 3.0, 1e-5);
  EXPECT_NEAR(big.y[0], 7.0, 1e-5);
  const Iterate same = ReflectedHalpern(with_products(a), with_products(a),
                                        with_products(a), 0.7, 5);
  EXPECT_NEAR(same.x[0], 0.0, 1e-15);
  EXPECT_NEAR(same.y[0], 2.0, 1e-15);
}

TEST(HalpernTest, AnchorPullRate) {
  // Stalled operator (z_hat == z), beta = 0: the distance to the anchor
  // after k steps is the initial distance divided by k + 1.
  Iterate anchor = Point({3.0}, {-1.0});
  anchor.gx = anchor.x;
  anchor.gty = anchor.y;
  Iterate z = Point({0.0}, {0.0});
  z.gx = z.x;
  z.gty = z.y;
  for (int k = 0; k < 50; ++k) {
    z = ReflectedHalpern(z, z, anchor, 0.0, k);
    EXPECT_NEAR(z.x[0] - 3.0, -3.0 / (k + 2), 1e-13);
    EXPECT_NEAR(z.y[0] + 1.0, 1.0 / (k + 2), 1e-13);
  }
}

TEST(RestartEpochTest, WeightedAverage) {
  auto point = [](double v) {
    Iterate it;
    it.x = {v};
    it.y = {v};
    it.gx = {v};
    it.gty = {v};
    return it;
  };
  RestartEpoch single(point(0.0));
  single.Add(point(5.0), 2.0);
  EXPECT_EQ(single.Average().x, (Vector{5.0}));
  RestartEpoch pair(point(0.0));
  pair.Add(point(1.0), 1.0);
  pair.Add(point(3.0), 1.0);
  EXPECT_EQ(pair.Average().x, (Vector{2.0}));
  RestartEpoch weighted(point(0.0));
  weighted.Add(point(0.0), 1.0);
  weighted.Add(point(4.0), 3.0);
  EXPECT_EQ(weighted.Average().y, (Vector{3.0}));
  EXPECT_EQ(weighted.weight_sum(), 4.0);
  EXPECT_EQ(weighted.count(), 2);
  EXPECT_THROW(weighted.Add(point(1.0), 0.0), std::invalid_argument);
}

TEST(RestartTest, CandidateAndTriggers) {
  EXPECT_FALSE(RestartCandidate(0.0, 1.0).is_average);
  EXPECT_TRUE(RestartCandidate(0.5, 0.5).is_average);
  EXPECT_TRUE(RestartCandidate(0.6, 0.5).is_average);

  const SolverParams params;
  EXPECT_TRUE(ShouldRestart(0.0, 1.0, kInf, 1, 1000, params));
  EXPECT_FALSE(ShouldRestart(1.0, 1.0, kInf, 1, 1000, params));
  EXPECT_TRUE(ShouldRestart(5.0, 1.0, kInf, 400, 1000, params));
  // Necessary decay only after the candidate error went up.
  EXPECT_FALSE(ShouldRestart(0.7, 1.0, 0.8, 1, 1000, params));
  EXPECT_TRUE(ShouldRestart(0.7, 1.0, 0.6, 1, 1000, params));
}

TEST(RestartTest, CandidateMatchesDirectResiduals) {
  const testing::SaddleInstance inst = testing::RandomSaddleInstance(5);
  RandomStream rng(5, 2);
  Vector xa = inst.x, ya = inst.y, xb = inst.x, yb = inst.y;
  for (double& v : xa) v += 0.01 * rng.Normal();
  for (double& v : xb) v += 0.1 * rng.Normal();
  const double ea = ComputeResiduals(inst.program, xa, ya).Max();
  const double eb = ComputeResiduals(inst.program, xb, yb).Max();
  const Candidate c = RestartCandidate(ea, eb);
  EXPECT_EQ(c.is_average, eb <= ea);
  EXPECT_EQ(c.error, std::min(ea, eb));
}

TEST(PrimalWeightTest, Examples) {
  EXPECT_DOUBLE_EQ(PrimalWeightUpdate(Vector{3.0, 4.0}, Vector{5.0}, 1.0), 1.0);
  EXPECT_EQ(PrimalWeightUpdate(Vector{0.0}, Vector{5.0}, 2.5), 2.5);
  EXPECT_DOUBLE_EQ(PrimalWeightUpdate(Vector{1.0}, Vector{4.0}, 1.0, 0.5), 2.0);
}

TEST(SolveTest, BoundOnlyLp) {
  // min x s.t. x >= 0 through the box, no rows.
  ConicProgram p;
  p.c = {1.0};
  p.G = SparseMatrix::FromTriplets(0, 1, {});
  p.l = {0.0};
  p.u = {kInf};
  const SolveReport r = Solve(p, SolverParams{});
  EXPECT_EQ(r.status, Status::kOptimal);
  EXPECT_LE(r.iterations, 100);
  EXPECT_NEAR(r.x[0], 0.0, 1e-9);
  EXPECT_NEAR(r.residuals.primal_obj, 0.0, 1e-9);
}

TEST(SolveTest, AnalyticSecondOrderInstance) {
  // min t s.t. (t, a, b) in SOC, a = 3, b = 4: t* = 5.
  ConicProgram p;
  p.c = {1.0, 0.0, 0.0};
  p.G = SparseMatrix::FromTriplets(2, 3, std::vector<Triplet>{{0, 1, 1.0}, {1, 2, 1.0}});
  p.h = {3.0, 4.0};
  p.primal_cones = {{ConeKind::kSecondOrder, 3}};
  p.dual_cones = {{ConeKind::kZero, 2}};
  SolverParams params;
  params.tol = 1e-8;
  const SolveReport r = Solve(p, params);
  ASSERT_EQ(r.status, Status::kOptimal);
  EXPECT_NEAR(r.x[0], 5.0, 1e-6);
  EXPECT_NEAR(r.y[0], 0.6, 1e-6);
  EXPECT_NEAR(r.y[1], 0.8, 1e-6);
  EXPECT_LE(r.residuals.Max(), 1e-8);
}

TEST(SolveTest, SaddleInstancesReachTolerance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const testing::SaddleInstance inst = testing::RandomSaddleInstance(seed);
    SolverParams params;
    params.tol = 1e-7;
    params.max_iters = 200000;
    const SolveReport r = Solve(inst.program, params);
    EXPECT_EQ(r.status, Status::kOptimal) << "seed " << seed;
    const Residuals check = ComputeResiduals(inst.program, r.x, r.y);
    EXPECT_LE(check.Max(), 1e-7) << "seed " << seed;
    // Anchor errors never increase across restarts.
    for (std::size_t i = 1; i < r.anchor_errors.size(); ++i) {
      EXPECT_LE(r.anchor_errors[i], r.anchor_errors[i - 1]) << "seed " << seed;
    }
  }
}

TEST(SolveTest, DeterministicAndAccounted) {
  const testing::SaddleInstance inst = testing::RandomSaddleInstance(7);
  SolverParams params;
  params.tol = 1e-6;
  const std::int64_t before = ThreadMatvecCount();
  const SolveReport a = Solve(inst.program, params);
  const std::int64_t used = ThreadMatvecCount() - before;
  const SolveReport b = Solve(inst.program, params);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.spmv_count, b.spmv_count);
  EXPECT_EQ(a.spmv_count, used);
  // Two products per accepted or rejected trial plus residual work.
  EXPECT_GE(a.spmv_count, 2 * a.iterations);
}

TEST(SolveTest, LimitsAndStatuses) {
  const testing::SaddleInstance inst = testing::RandomSaddleInstance(3);
  SolverParams params;
  params.tol = 1e-12;
  params.max_iters = 80;
  const SolveReport r = Solve(inst.program, params);
  EXPECT_EQ(r.status, Status::kIterationLimit);
  EXPECT_EQ(r.iterations, 80);
  EXPECT_EQ(r.x.size(), static_cast<std::size_t>(inst.program.n()));

  params.max_iters = 1000000;
  params.time_limit = 1e-9;
  EXPECT_EQ(Solve(inst.program, params).status, Status::kTimeLimit);

  params.time_limit = 3600.0;
  params.max_spmv = 500;
  const SolveReport capped = Solve(inst.program, params);
  EXPECT_NE(capped.status, Status::kOptimal);
  EXPECT_LE(capped.spmv_count, 500 + 2 * params.check_interval * (params.max_step_rejects + 2));
}

TEST(SolveTest, RejectsBadInput) {
  SolverParams params;
  params.tol = 0.0;
  EXPECT_THROW(Solve(TinyLp(), params), std::invalid_argument);
  params = SolverParams{};
  params.beta_sufficient = 0.9;
  EXPECT_THROW(Solve(TinyLp(), params), std::invalid_argument);
  ConicProgram bad = TinyLp();
  bad.l = {1.0};
  bad.u = {0.0};
  EXPECT_THROW(Solve(bad, SolverParams{}), std::invalid_argument);
}

TEST(SolveTest, VanillaModeSolvesSmallInstance) {
  const testing::SaddleInstance inst = testing::RandomSaddleInstance(2);
  SolverParams params;
  params.vanilla_pdhg = true;
  params.tol = 1e-4;
  params.max_iters = 500000;
  const SolveReport r = Solve(inst.program, params);
  EXPECT_EQ(r.status, Status::kOptimal);
  EXPECT_EQ(r.restarts, 0);
}

TEST(SolveTest, ProgressLines) {
  std::ostringstream log;
  SolverParams params;
  params.progress = &log;
  params.max_iters = 80;
  Solve(testing::RandomSaddleInstance(1).program, params);
  std::istringstream lines(log.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 7);
  }
  EXPECT_EQ(count, 2);
}

}  // namespace
}  // namespace conicpd
