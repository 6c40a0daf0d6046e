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

// Diagonal preconditioning. The scaled program uses
//
//   G~ = diag(1/row) G diag(1/col),  c~ = c / col,  h~ = h / row,
//   l~ = l * col,  u~ = u * col,
//
// so a scaled point maps back by x = x~ / col and y = y~ / row. Under this
// change of variables a primal cone block K becomes diag(col) K and the dual
// variable of a row block with cone K lives in diag(row) K^*. Those rescaled
// cones are what the block projections returned by ConeScalingSlices target.

#ifndef CONICPD_SCALING_H_
#define CONICPD_SCALING_H_

#include <span>
#include <vector>

#include "conicpd/cones.h"
#include "conicpd/model.h"
#include "conicpd/sparse_matrix.h"

namespace conicpd {

struct ScalingOptions {
  int ruiz_iters = 10;
  bool pock_chambolle = true;
  // Replace the column (row) scalings inside every exponential block of the
  // primal (dual) side by their geometric mean.
  bool exp_uniform = false;
};

struct ScalingInfo {
  // Divisors: G~ = diag(1/row_scale) G diag(1/col_scale).
  Vector row_scale;
  Vector col_scale;
  int ruiz_rounds = 0;
  bool pock_chambolle = false;
  bool exp_uniform = false;
};

struct ScaledProgram {
  ConicProgram program;
  ScalingInfo info;
};

// All-ones scaling for `program`.
ScalingInfo IdentityScaling(const ConicProgram& program);

// Ruiz equilibration followed by an optional Pock-Chambolle pass. Rows and
// columns with no entries keep factor 1. The first two column (row) factors
// of every rotated second-order block are replaced by their geometric mean.
ScaledProgram RuizScale(const ConicProgram& program,
                        const ScalingOptions& options);

// Applies given divisors to `program`.
ConicProgram ApplyScaling(const ConicProgram& program, const ScalingInfo& info);

// Maps a scaled point back to the original space and recomputes the slack
// and objectives on `original`.
Solution UnscaleSolution(const ConicProgram& original,
                         std::span<const double> x_scaled,
                         std::span<const double> y_scaled,
                         const ScalingInfo& info);

struct ConeScalingSlices {
  // Offsets of primal blocks are relative to the start of x2.
  std::vector<BlockProjection> primal;
  std::vector<BlockProjection> dual;
};

// Projection parameters for the scaled program: primal blocks onto
// diag(col) K, dual blocks onto diag(row) K^*. Unit scaling yields empty
// scale vectors. Throws std::invalid_argument for a rotated block whose two
// leading factors differ.
ConeScalingSlices ComputeConeScalingSlices(const ScalingInfo& info,
                                           const ConicProgram& program);

}  // namespace conicpd

#endif  // CONICPD_SCALING_H_
