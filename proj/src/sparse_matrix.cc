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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conicpd {
namespace {

thread_local std::int64_t matvec_count = 0;

void CheckLength(std::size_t got, Index want, const char* what) {
  if (static_cast<Index>(got) != want) {
    throw std::invalid_argument(std::string(what) + ": length " +
                                std::to_string(got) + ", expected " +
                                std::to_string(want));
  }
}

}  // namespace

SparseMatrix SparseMatrix::FromTriplets(Index rows, Index cols,
                                        std::span<const Triplet> triplets) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("negative matrix dimension");
  }
  std::vector<Triplet> sorted(triplets.begin(), triplets.end());
  for (const Triplet& t : sorted) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument(
          "matrix entry (" + std::to_string(t.row) + ", " +
          std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
          std::to_string(cols));
    }
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  // Merge duplicates, summing in input order.
  std::vector<Triplet> merged;
  merged.reserve(sorted.size());
  for (const Triplet& t : sorted) {
    if (!merged.empty() && merged.back().row == t.row &&
        merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }

  SparseMatrix a;
  a.rows_ = rows;
  a.cols_ = cols;
  const std::size_t nnz = merged.size();
  a.row_starts_.assign(static_cast<std::size_t>(rows) + 1, 0);
  a.col_indices_.resize(nnz);
  a.row_values_.resize(nnz);
  a.col_starts_.assign(static_cast<std::size_t>(cols) + 1, 0);
  a.row_indices_.resize(nnz);
  a.col_values_.resize(nnz);
  for (const Triplet& t : merged) {
    ++a.row_starts_[static_cast<std::size_t>(t.row) + 1];
    ++a.col_starts_[static_cast<std::size_t>(t.col) + 1];
  }
  for (Index i = 0; i < rows; ++i) a.row_starts_[i + 1] += a.row_starts_[i];
  for (Index j = 0; j < cols; ++j) a.col_starts_[j + 1] += a.col_starts_[j];
  for (std::size_t k = 0; k < nnz; ++k) {
    a.col_indices_[k] = merged[k].col;
    a.row_values_[k] = merged[k].value;
  }
  // Row-major traversal fills each column in increasing row order.
  std::vector<Index> next(a.col_starts_.begin(), a.col_starts_.end() - 1);
  for (const Triplet& t : merged) {
    const Index pos = next[t.col]++;
    a.row_indices_[pos] = t.row;
    a.col_values_[pos] = t.value;
  }
  return a;
}

std::vector<Triplet> SparseMatrix::ToTriplets() const {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(nnz()));
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_starts_[i]; k < row_starts_[i + 1]; ++k) {
      out.push_back({i, col_indices_[k], row_values_[k]});
    }
  }
  return out;
}

SparseMatrix SparseMatrix::Rescaled(std::span<const double> row_divisor,
                                    std::span<const double> col_divisor) const {
  CheckLength(row_divisor.size(), rows_, "row divisor");
  CheckLength(col_divisor.size(), cols_, "column divisor");
  SparseMatrix a = *this;
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_starts_[i]; k < row_starts_[i + 1]; ++k) {
      a.row_values_[k] =
          row_values_[k] / (row_divisor[i] * col_divisor[col_indices_[k]]);
    }
  }
  for (Index j = 0; j < cols_; ++j) {
    for (Index k = col_starts_[j]; k < col_starts_[j + 1]; ++k) {
      a.col_values_[k] =
          col_values_[k] / (row_divisor[row_indices_[k]] * col_divisor[j]);
    }
  }
  return a;
}

std::int64_t ThreadMatvecCount() { return matvec_count; }

void Spmv(const SparseMatrix& a, std::span<const double> x,
          std::span<double> out) {
  CheckLength(x.size(), a.cols(), "spmv input");
  CheckLength(out.size(), a.rows(), "spmv output");
  ++matvec_count;
  const auto starts = a.row_starts();
  const auto cols = a.col_indices();
  const auto vals = a.row_values();
  for (Index i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (Index k = starts[i]; k < starts[i + 1]; ++k) {
      sum += vals[k] * x[cols[k]];
    }
    out[i] = sum;
  }
}

Vector Spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector out(static_cast<std::size_t>(a.rows()));
  Spmv(a, x, out);
  return out;
}

void SpmvT(const SparseMatrix& a, std::span<const double> y,
           std::span<double> out) {
  CheckLength(y.size(), a.rows(), "transpose spmv input");
  CheckLength(out.size(), a.cols(), "transpose spmv output");
  ++matvec_count;
  const auto starts = a.col_starts();
  const auto rows = a.row_indices();
  const auto vals = a.col_values();
  for (Index j = 0; j < a.cols(); ++j) {
    double sum = 0.0;
    for (Index k = starts[j]; k < starts[j + 1]; ++k) {
      sum += vals[k] * y[rows[k]];
    }
    out[j] = sum;
  }
}

Vector SpmvT(const SparseMatrix& a, std::span<const double> y) {
  Vector out(static_cast<std::size_t>(a.cols()));
  SpmvT(a, y, out);
  return out;
}

MatrixNorms ComputeNorms(const SparseMatrix& a) {
  MatrixNorms norms;
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  norms.row_inf.assign(m, 0.0);
  norms.row_2.assign(m, 0.0);
  norms.row_1.assign(m, 0.0);
  norms.col_inf.assign(n, 0.0);
  norms.col_2.assign(n, 0.0);
  norms.col_1.assign(n, 0.0);
  const auto starts = a.row_starts();
  const auto cols = a.col_indices();
  const auto vals = a.row_values();
  for (std::size_t i = 0; i < m; ++i) {
    for (Index k = starts[i]; k < starts[i + 1]; ++k) {
      const double v = std::abs(vals[k]);
      const auto j = static_cast<std::size_t>(cols[k]);
      norms.row_inf[i] = std::max(norms.row_inf[i], v);
      norms.col_inf[j] = std::max(norms.col_inf[j], v);
      norms.row_1[i] += v;
      norms.col_1[j] += v;
      norms.row_2[i] += v * v;
      norms.col_2[j] += v * v;
    }
  }
  for (double& v : norms.row_2) v = std::sqrt(v);
  for (double& v : norms.col_2) v = std::sqrt(v);
  for (double v : norms.row_1) norms.inf_norm = std::max(norms.inf_norm, v);
  return norms;
}

double EstimateSpectralNorm(const SparseMatrix& a, int max_iters,
                            double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0 || a.nnz() == 0) return 0.0;
  Vector v(static_cast<std::size_t>(a.cols()),
           1.0 / std::sqrt(static_cast<double>(a.cols())));
  Vector av(static_cast<std::size_t>(a.rows()));
  Vector w(static_cast<std::size_t>(a.cols()));
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Spmv(a, v, av);
    SpmvT(a, av, w);
    const double w_norm = Norm2(w);
    if (w_norm == 0.0) return std::sqrt(estimate);
    const double next = w_norm;  // ||A^T A v|| with ||v|| = 1
    for (std::size_t j = 0; j < w.size(); ++j) v[j] = w[j] / w_norm;
    const bool converged =
        it > 0 && std::abs(next - estimate) <= rel_tol * next;
    estimate = next;
    if (converged) break;
  }
  return std::sqrt(estimate);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckLength(b.size(), static_cast<Index>(a.size()), "dot operand");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Norm2(std::span<const double> a) {
  double sum = 0.0;
  for (double v : a) sum += v * v;
  return std::sqrt(sum);
}

double NormInf(std::span<const double> a) {
  double out = 0.0;
  for (double v : a) out = std::max(out, std::abs(v));
  return out;
}

}  // namespace conicpd
