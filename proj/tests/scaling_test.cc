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

#include "conicpd/scaling.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "conicpd/rng.h"
#include "conicpd/termination.h"
#include "oracles.h"

namespace conicpd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConicProgram SquareProgram(const std::vector<Triplet>& entries, Index n) {
  ConicProgram p;
  p.G = SparseMatrix::FromTriplets(n, n, entries);
  p.c.assign(static_cast<std::size_t>(n), 1.0);
  p.h.assign(static_cast<std::size_t>(n), 1.0);
  p.primal_cones = {{ConeKind::kNonNeg, n}};
  p.dual_cones = {{ConeKind::kNonNeg, n}};
  return p;
}

TEST(RuizScaleTest, EquilibratedMatrixIsFixed) {
  const ConicProgram p =
      SquareProgram({{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}}, 2);
  const ScaledProgram s = RuizScale(p, {1, false, false});
  EXPECT_EQ(s.info.row_scale, (Vector{1.0, 1.0}));
  EXPECT_EQ(s.info.col_scale, (Vector{1.0, 1.0}));
}

TEST(RuizScaleTest, DiagonalTwoRounds) {
  const ConicProgram p = SquareProgram({{0, 0, 100.0}, {1, 1, 0.01}}, 2);
  const ScaledProgram s = RuizScale(p, {2, false, false});
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(s.info.row_scale[i], i == 0 ? 10.0 : 0.1, 1e-14);
    EXPECT_NEAR(s.info.col_scale[i], i == 0 ? 10.0 : 0.1, 1e-14);
  }
  const std::vector<Triplet> t = s.program.G.ToTriplets();
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t[0].value, 1.0, 1e-14);
  EXPECT_NEAR(t[1].value, 1.0, 1e-14);
}

TEST(RuizScaleTest, NoRoundsIsNoOp) {
  const ConicProgram p = SquareProgram({{0, 0, 100.0}, {1, 1, 0.01}}, 2);
  const ScaledProgram s = RuizScale(p, {0, false, false});
  EXPECT_EQ(s.info.row_scale, (Vector{1.0, 1.0}));
  EXPECT_EQ(s.info.col_scale, (Vector{1.0, 1.0}));
  EXPECT_EQ(s.program.c, p.c);
  EXPECT_EQ(s.program.h, p.h);
  EXPECT_EQ(s.program.G.ToTriplets()[0].value, 100.0);
}

TEST(RuizScaleTest, EmptyRowsAndColumnsKeepUnitFactor) {
  const ConicProgram p = SquareProgram({{0, 0, 4.0}}, 2);
  const ScaledProgram s = RuizScale(p, {});
  EXPECT_EQ(s.info.row_scale[1], 1.0);
  EXPECT_EQ(s.info.col_scale[1], 1.0);
  for (double v : s.info.row_scale) EXPECT_TRUE(std::isfinite(v) && v > 0.0);
}

TEST(RuizScaleTest, RotatedLeadingPairIsEqualized) {
  ConicProgram p;
  p.G = SparseMatrix::FromTriplets(1, 3, std::vector<Triplet>{{0, 0, 9.0}, {0, 1, 1.0}, {0, 2, 2.0}});
  p.c = {1.0, 1.0, 1.0};
  p.h = {1.0};
  p.primal_cones = {{ConeKind::kRotatedSecondOrder, 3}};
  p.dual_cones = {{ConeKind::kZero, 1}};
  const ScaledProgram s = RuizScale(p, {});
  EXPECT_DOUBLE_EQ(s.info.col_scale[0], s.info.col_scale[1]);
  EXPECT_NO_THROW(ComputeConeScalingSlices(s.info, s.program));
}

TEST(UnscaleTest, IdentityScalingIsIdentity) {
  const ConicProgram p = SquareProgram({{0, 0, 2.0}, {1, 1, 3.0}}, 2);
  const Solution s = UnscaleSolution(p, Vector{1.0, 2.0}, Vector{3.0, 4.0},
                                     IdentityScaling(p));
  EXPECT_EQ(s.x, (Vector{1.0, 2.0}));
  EXPECT_EQ(s.y, (Vector{3.0, 4.0}));
}

TEST(UnscaleTest, OneVariableLp) {
  // min 3x s.t. 2x - 4 >= 0, x >= 0: x* = 2, y* = 1.5.
  ConicProgram p;
  p.c = {3.0};
  p.G = SparseMatrix::FromTriplets(1, 1, std::vector<Triplet>{{0, 0, 2.0}});
  p.h = {4.0};
  p.l = {0.0};
  p.u = {kInf};
  p.dual_cones = {{ConeKind::kNonNeg, 1}};
  ScalingInfo info;
  info.col_scale = {2.0};
  info.row_scale = {4.0};
  const ConicProgram scaled = ApplyScaling(p, info);
  // Scaled: min 1.5 x~ s.t. 0.25 x~ - 1 >= 0 with x~ >= 0: x~ = 4, y~ = 6.
  EXPECT_DOUBLE_EQ(scaled.c[0], 1.5);
  EXPECT_DOUBLE_EQ(scaled.h[0], 1.0);
  EXPECT_DOUBLE_EQ(scaled.G.ToTriplets()[0].value, 0.25);
  const Solution s = UnscaleSolution(p, Vector{4.0}, Vector{6.0}, info);
  EXPECT_DOUBLE_EQ(s.x[0], 2.0);
  EXPECT_DOUBLE_EQ(s.y[0], 1.5);
  EXPECT_DOUBLE_EQ(s.primal_objective, 6.0);
  const Residuals r = ComputeResiduals(p, s.x, s.y);
  EXPECT_EQ(r.Max(), 0.0);
}

TEST(UnscaleTest, ResidualsAreInvariantUnderRoundTrip) {
  RandomStream rng(21, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const testing::SaddleInstance inst = testing::RandomSaddleInstance(100 + trial);
    const ScaledProgram s = RuizScale(inst.program, {});
    // Scaled image of a perturbed original point.
    Vector x = inst.x, y = inst.y;
    for (double& v : x) v += 0.1 * rng.Normal();
    for (double& v : y) v += 0.1 * rng.Normal();
    Vector xs(x.size()), ys(y.size());
    for (std::size_t j = 0; j < x.size(); ++j) xs[j] = x[j] * s.info.col_scale[j];
    for (std::size_t i = 0; i < y.size(); ++i) ys[i] = y[i] * s.info.row_scale[i];
    const Solution back = UnscaleSolution(inst.program, xs, ys, s.info);
    const Residuals a = ComputeResiduals(inst.program, x, y);
    const Residuals b = ComputeResiduals(inst.program, back.x, back.y);
    EXPECT_NEAR(a.err_p, b.err_p, 1e-9 * (1 + a.err_p));
    EXPECT_NEAR(a.err_d, b.err_d, 1e-9 * (1 + a.err_d));
    EXPECT_NEAR(a.err_gap, b.err_gap, 1e-9 * (1 + a.err_gap));
    // The scaled operator maps consistently: G~ x~ = (G x) / row.
    const Vector gx = Spmv(inst.program.G, x);
    const Vector gxs = Spmv(s.program.G, xs);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      EXPECT_NEAR(gxs[i], gx[i] / s.info.row_scale[i], 1e-10 * (1 + std::abs(gx[i])));
    }
  }
}

TEST(ConeScalingSlicesTest, UnitScalingGivesUnitParameters) {
  const testing::SaddleInstance inst = testing::RandomSaddleInstance(3);
  const ConeScalingSlices s =
      ComputeConeScalingSlices(IdentityScaling(inst.program), inst.program);
  for (const BlockProjection& b : s.primal) EXPECT_TRUE(b.scale.empty());
  for (const BlockProjection& b : s.dual) EXPECT_TRUE(b.scale.empty());
}

TEST(ConeScalingSlicesTest, SocAndExpParameters) {
  ConicProgram p;
  p.G = SparseMatrix::FromTriplets(1, 6, {});
  p.c.assign(6, 0.0);
  p.h = {0.0};
  p.primal_cones = {{ConeKind::kSecondOrder, 3}, {ConeKind::kExponential, 3}};
  p.dual_cones = {{ConeKind::kZero, 1}};
  ScalingInfo info;
  info.row_scale = {1.0};
  info.col_scale = {2.0, 4.0, 1.0, 0.5, 3.0, 7.0};
  const ConeScalingSlices s = ComputeConeScalingSlices(info, p);
  ASSERT_EQ(s.primal.size(), 2u);
  EXPECT_EQ(s.primal[0].scale, (Vector{2.0, 0.5}));
  EXPECT_EQ(s.primal[1].scale, (Vector{0.5, 3.0, 7.0}));
  EXPECT_EQ(s.primal[1].offset, 3);
}

TEST(ConeScalingSlicesTest, ScaledMembershipRoundTrip) {
  // A point of K mapped by diag(col) is left unchanged by the scaled
  // projection, and its image under the inverse map is in K.
  ConicProgram p;
  p.G = SparseMatrix::FromTriplets(1, 7, {});
  p.c.assign(7, 0.0);
  p.h = {0.0};
  p.primal_cones = {{ConeKind::kSecondOrder, 4}, {ConeKind::kExponential, 3}};
  p.dual_cones = {{ConeKind::kZero, 1}};
  ScalingInfo info;
  info.row_scale = {1.0};
  info.col_scale = {0.3, 2.0, 5.0, 1.5, 0.2, 4.0, 0.9};
  const ConeScalingSlices s = ComputeConeScalingSlices(info, p);
  const Vector in_k = {2.0, 1.0, -1.0, 0.5, 0.3, 1.0, 2.0 * std::exp(0.3)};
  ASSERT_TRUE(InCone(std::span(in_k).first(4), p.primal_cones[0], 0.0));
  ASSERT_TRUE(InCone(std::span(in_k).subspan(4), p.primal_cones[1], 1e-12));
  Vector v(7);
  for (int j = 0; j < 7; ++j) v[j] = in_k[j] * info.col_scale[j];
  const Vector before = v;
  ApplyBlockProjections(v, s.primal);
  EXPECT_LT(testing::MaxAbsDiff(v, before), 1e-12);
}

}  // namespace
}  // namespace conicpd
