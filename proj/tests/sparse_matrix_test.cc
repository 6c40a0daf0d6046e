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

#include "conicpd/sparse_matrix.h"

#include <gtest/gtest.h>

#include <cmath>

#include "conicpd/rng.h"
#include "oracles.h"

namespace conicpd {
namespace {

using testing::DenseMatvec;
using testing::DenseMatvecT;
using testing::MaxAbsDiff;
using testing::RandomSparse;

SparseMatrix Identity(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix::FromTriplets(n, n, t);
}

SparseMatrix Upper() {
  const std::vector<Triplet> t = {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}};
  return SparseMatrix::FromTriplets(2, 2, t);
}

TEST(SparseMatrixTest, IdentityProducts) {
  const SparseMatrix a = Identity(2);
  EXPECT_EQ(Spmv(a, Vector{3.0, -1.0}), (Vector{3.0, -1.0}));
  EXPECT_EQ(SpmvT(a, Vector{1.0, 2.0}), (Vector{1.0, 2.0}));
}

TEST(SparseMatrixTest, EmptyMatrixGivesZero) {
  const SparseMatrix a = SparseMatrix::FromTriplets(3, 2, {});
  EXPECT_EQ(Spmv(a, Vector{5.0, 7.0}), (Vector{0.0, 0.0, 0.0}));
  EXPECT_EQ(SpmvT(a, Vector{1.0, 1.0, 1.0}), (Vector{0.0, 0.0}));
}

TEST(SparseMatrixTest, SmallProducts) {
  EXPECT_EQ(Spmv(Upper(), Vector{1.0, 1.0}), (Vector{3.0, 3.0}));
  EXPECT_EQ(SpmvT(Upper(), Vector{1.0, 1.0}), (Vector{1.0, 5.0}));
}

TEST(SparseMatrixTest, MatchesDenseOracle) {
  RandomStream rng(11, 0);
  const SparseMatrix a = RandomSparse(rng, 20, 30, 0.2);
  Vector x(30), y(20);
  for (double& v : x) v = rng.Normal();
  for (double& v : y) v = rng.Normal();
  EXPECT_LT(MaxAbsDiff(Spmv(a, x), DenseMatvec(a, x)), 1e-12);
  EXPECT_LT(MaxAbsDiff(SpmvT(a, y), DenseMatvecT(a, y)), 1e-12);
}

TEST(SparseMatrixTest, DuplicatesAreSummedAndLayoutsAgree) {
  const std::vector<Triplet> t = {{1, 2, 1.0}, {0, 0, 2.0}, {1, 2, 3.0}, {1, 0, -1.0}};
  const SparseMatrix a = SparseMatrix::FromTriplets(2, 3, t);
  EXPECT_EQ(a.nnz(), 3);
  const std::vector<Triplet> back = a.ToTriplets();
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[2].row, 1);
  EXPECT_EQ(back[2].col, 2);
  EXPECT_EQ(back[2].value, 4.0);
  // Column layout holds the same entries.
  double col_sum = 0.0, row_sum = 0.0;
  for (double v : a.col_values()) col_sum += v;
  for (double v : a.row_values()) row_sum += v;
  EXPECT_EQ(col_sum, row_sum);
}

TEST(SparseMatrixTest, RejectsOutOfRange) {
  const std::vector<Triplet> t = {{2, 0, 1.0}};
  EXPECT_THROW(SparseMatrix::FromTriplets(2, 2, t), std::invalid_argument);
}

TEST(SparseMatrixTest, Norms) {
  const MatrixNorms id = ComputeNorms(Identity(3));
  EXPECT_EQ(id.inf_norm, 1.0);
  for (double v : id.row_inf) EXPECT_EQ(v, 1.0);
  for (double v : id.col_2) EXPECT_EQ(v, 1.0);

  const MatrixNorms zero = ComputeNorms(SparseMatrix::FromTriplets(2, 2, {}));
  EXPECT_EQ(zero.inf_norm, 0.0);
  for (double v : zero.col_inf) EXPECT_EQ(v, 0.0);

  const std::vector<Triplet> t = {{0, 0, 1.0}, {0, 1, -2.0}, {1, 1, 3.0}};
  const MatrixNorms n = ComputeNorms(SparseMatrix::FromTriplets(2, 2, t));
  EXPECT_EQ(n.inf_norm, 3.0);
  EXPECT_EQ(n.col_inf, (Vector{1.0, 3.0}));
}

TEST(SparseMatrixTest, AdjointIdentityOnRandomInstances) {
  RandomStream rng(5, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Index rows = 50 + static_cast<Index>(rng.Below(100));
    const Index cols = 50 + static_cast<Index>(rng.Below(100));
    const SparseMatrix a = RandomSparse(rng, rows, cols, 0.3);
    Vector x(static_cast<std::size_t>(cols)), y(static_cast<std::size_t>(rows));
    for (double& v : x) v = rng.Normal();
    for (double& v : y) v = rng.Normal();
    const double lhs = Dot(y, Spmv(a, x));
    const double rhs = Dot(SpmvT(a, y), x);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST(SparseMatrixTest, SpmvIsBitReproducible) {
  RandomStream rng(8, 2);
  const SparseMatrix a = RandomSparse(rng, 40, 40, 0.3);
  Vector x(40);
  for (double& v : x) v = rng.Normal();
  EXPECT_EQ(Spmv(a, x), Spmv(a, x));
  EXPECT_EQ(SpmvT(a, x), SpmvT(a, x));
}

TEST(SparseMatrixTest, MatvecCounter) {
  const SparseMatrix a = Identity(2);
  const std::int64_t before = ThreadMatvecCount();
  Spmv(a, Vector{1.0, 1.0});
  SpmvT(a, Vector{1.0, 1.0});
  EXPECT_EQ(ThreadMatvecCount() - before, 2);
}

TEST(SparseMatrixTest, SpectralNormEstimate) {
  const std::vector<Triplet> t = {{0, 0, 3.0}, {1, 1, 1.0}};
  EXPECT_NEAR(EstimateSpectralNorm(SparseMatrix::FromTriplets(2, 2, t), 200, 1e-12),
              3.0, 1e-6);
  EXPECT_EQ(EstimateSpectralNorm(SparseMatrix::FromTriplets(2, 2, {})), 0.0);
}

TEST(SparseMatrixTest, RescaledDividesRowsAndColumns) {
  const SparseMatrix a = Upper().Rescaled(Vector{2.0, 3.0}, Vector{1.0, 2.0});
  const std::vector<Triplet> t = a.ToTriplets();
  EXPECT_DOUBLE_EQ(t[0].value, 0.5);
  EXPECT_DOUBLE_EQ(t[1].value, 0.5);
  EXPECT_DOUBLE_EQ(t[2].value, 0.5);
}

}  // namespace
}  // namespace conicpd
