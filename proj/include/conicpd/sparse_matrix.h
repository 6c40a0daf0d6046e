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

#ifndef CONICPD_SPARSE_MATRIX_H_
#define CONICPD_SPARSE_MATRIX_H_

#include <cstdint>
#include <span>
#include <vector>

namespace conicpd {

using Index = std::int64_t;
using Vector = std::vector<double>;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Sparse matrix held simultaneously in compressed-row and compressed-column
// form, so that both A x and A^T y run as gathers without a factorization or
// an on-the-fly transpose. Immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Duplicate (row, col) pairs are summed. Explicit zeros are kept. Throws
  // std::invalid_argument on out-of-range indices.
  static SparseMatrix FromTriplets(Index rows, Index cols,
                                   std::span<const Triplet> triplets);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(row_values_.size()); }

  std::span<const Index> row_starts() const { return row_starts_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> row_values() const { return row_values_; }
  std::span<const Index> col_starts() const { return col_starts_; }
  std::span<const Index> row_indices() const { return row_indices_; }
  std::span<const double> col_values() const { return col_values_; }

  // Entries in row-major order.
  std::vector<Triplet> ToTriplets() const;

  // diag(1 ./ row_divisor) * A * diag(1 ./ col_divisor).
  SparseMatrix Rescaled(std::span<const double> row_divisor,
                        std::span<const double> col_divisor) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_starts_{0};
  std::vector<Index> col_indices_;
  std::vector<double> row_values_;
  std::vector<Index> col_starts_{0};
  std::vector<Index> row_indices_;
  std::vector<double> col_values_;
};

// Number of Spmv/SpmvT calls made by the current thread since it started.
// Solver reports are audited against this counter.
std::int64_t ThreadMatvecCount();

// out = A x. Row-major accumulation order, so results are bit-reproducible.
void Spmv(const SparseMatrix& a, std::span<const double> x,
          std::span<double> out);
Vector Spmv(const SparseMatrix& a, std::span<const double> x);

// out = A^T y, accumulated column by column in increasing row order.
void SpmvT(const SparseMatrix& a, std::span<const double> y,
           std::span<double> out);
Vector SpmvT(const SparseMatrix& a, std::span<const double> y);

struct MatrixNorms {
  Vector row_inf;
  Vector col_inf;
  Vector row_2;
  Vector col_2;
  Vector row_1;
  Vector col_1;
  // max_i sum_j |A_ij|
  double inf_norm = 0.0;
};

MatrixNorms ComputeNorms(const SparseMatrix& a);

// Estimate of the spectral norm by power iteration on A^T A from the
// normalized all-ones vector. Stops after `max_iters` rounds or when the
// estimate changes by less than `rel_tol` relatively. Each round costs one
// Spmv and one SpmvT.
double EstimateSpectralNorm(const SparseMatrix& a, int max_iters = 20,
                            double rel_tol = 1e-4);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm2(std::span<const double> a);
double NormInf(std::span<const double> a);

}  // namespace conicpd

#endif  // CONICPD_SPARSE_MATRIX_H_
