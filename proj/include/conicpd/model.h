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

// Problem representation. A conic program is
//
//   min  <c, x>   s.t.  G x - h in K_row,  l <= x1 <= u,  x2 in K_var,
//
// where x = (x1, x2), x1 holds the n1 box-constrained coordinates and x2 the
// n2 cone-constrained ones. `primal_cones` lists K_var block by block over x2
// and `dual_cones` lists K_row block by block over the m rows. The dual
// iterate y lives in the dual cone of K_row, so an equality row is a Zero
// block in `dual_cones` (its dual is all of R^d, i.e. y is free there).

#ifndef CONICPD_MODEL_H_
#define CONICPD_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conicpd/sparse_matrix.h"

namespace conicpd {

enum class ConeKind {
  kZero,
  kNonNeg,
  kSecondOrder,
  kRotatedSecondOrder,
  kExponential,
  kDualExponential,
};

// Canonical lower-case names used by the file formats ("zero", "nonneg",
// "soc", "rsoc", "exp", "dual_exp").
std::string_view ConeKindName(ConeKind kind);
std::optional<ConeKind> ParseConeKind(std::string_view name);

// The kind of the dual cone. Zero maps to Zero as well; callers that need the
// dual of the zero cone (all of R^d) must special-case it.
ConeKind DualKind(ConeKind kind);

struct Cone {
  ConeKind kind = ConeKind::kZero;
  Index dim = 0;

  // Empty string when the dimension is admissible for the kind.
  std::string DimensionViolation() const;

  friend bool operator==(const Cone&, const Cone&) = default;
};

struct ConicProgram {
  Vector c;
  SparseMatrix G;
  Vector h;
  // Box on x1. Infinite bounds are IEEE +-infinity.
  Vector l;
  Vector u;
  std::vector<Cone> primal_cones;
  std::vector<Cone> dual_cones;

  Index n1() const { return static_cast<Index>(l.size()); }
  Index n() const { return static_cast<Index>(c.size()); }
  Index n2() const { return n() - n1(); }
  Index m() const { return static_cast<Index>(h.size()); }
};

// Every structural violation of `program`; empty iff the program is
// well-formed.
std::vector<std::string> Validate(const ConicProgram& program);

struct DualSlack {
  Vector lambda1;  // length n1
  Vector lambda2;  // length n2
};

// lambda = c - G^T y split at n1. Throws std::invalid_argument on a length
// mismatch.
DualSlack ComputeDualSlack(const ConicProgram& program,
                           std::span<const double> y);

// A primal-dual pair together with the derived slack and objectives.
struct Solution {
  Vector x;
  Vector y;
  Vector lambda;  // c - G^T y, recomputed by MakeSolution
  double primal_objective = 0.0;
  double dual_objective = 0.0;

  std::span<const double> lambda1(Index n1) const {
    return std::span<const double>(lambda).first(static_cast<size_t>(n1));
  }
  std::span<const double> lambda2(Index n1) const {
    return std::span<const double>(lambda).subspan(static_cast<size_t>(n1));
  }
};

Solution MakeSolution(const ConicProgram& program, Vector x, Vector y);

// y^T h + l^T lambda1^+ - u^T lambda1^-. Infinite bounds contribute only
// where the matching part of lambda1 is zero; otherwise the result is -inf.
double DualObjective(const ConicProgram& program, std::span<const double> y,
                     std::span<const double> lambda1);

}  // namespace conicpd

#endif  // CONICPD_MODEL_H_
