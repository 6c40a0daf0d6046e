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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conicpd {
namespace {

double SqrtOrOne(double v) { return v > 0.0 ? std::sqrt(v) : 1.0; }

// Geometric mean over `idx` of `scale`, written back to every listed entry.
void Equalize(Vector& scale, std::span<const std::size_t> idx) {
  double log_sum = 0.0;
  for (std::size_t i : idx) log_sum += std::log(scale[i]);
  const double mean = std::exp(log_sum / static_cast<double>(idx.size()));
  for (std::size_t i : idx) scale[i] = mean;
}

void ApplyBlockConstraints(const std::vector<Cone>& cones, std::size_t start,
                           bool exp_uniform, Vector& scale) {
  std::size_t offset = start;
  for (const Cone& cone : cones) {
    const auto dim = static_cast<std::size_t>(cone.dim);
    if (cone.kind == ConeKind::kRotatedSecondOrder) {
      const std::size_t idx[] = {offset, offset + 1};
      Equalize(scale, idx);
    } else if (exp_uniform && (cone.kind == ConeKind::kExponential ||
                               cone.kind == ConeKind::kDualExponential)) {
      const std::size_t idx[] = {offset, offset + 1, offset + 2};
      Equalize(scale, idx);
    }
    offset += dim;
  }
}

bool AllOnes(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return e == 1.0; });
}

// dhat_i = d_{i+1} / d_0 for a second-order block; empty if all equal one.
Vector SocScale(std::span<const double> d) {
  if (AllOnes(d)) return {};
  Vector dhat(d.size() - 1);
  for (std::size_t i = 1; i < d.size(); ++i) dhat[i - 1] = d[i] / d[0];
  return dhat;
}

BlockProjection MakeBlock(BlockTarget target, ConeKind kind, Index offset,
                          std::span<const double> d) {
  BlockProjection block;
  block.target = target;
  block.offset = offset;
  block.dim = static_cast<Index>(d.size());
  switch (kind) {
    case ConeKind::kSecondOrder:
      block.scale = SocScale(d);
      break;
    case ConeKind::kRotatedSecondOrder:
      if (d[0] != d[1]) {
        throw std::invalid_argument(
            "rotated cone block at offset " + std::to_string(offset) +
            " has unequal leading scalings");
      }
      // After rotation the block is a second-order cone scaled by
      // (d0, d0, d2, ...).
      if (!AllOnes(d)) {
        block.scale.assign(d.size() - 1, 1.0);
        for (std::size_t i = 2; i < d.size(); ++i) {
          block.scale[i - 1] = d[i] / d[0];
        }
      }
      break;
    case ConeKind::kExponential:
    case ConeKind::kDualExponential:
      if (!AllOnes(d)) block.scale.assign(d.begin(), d.end());
      break;
    default:
      break;
  }
  return block;
}

}  // namespace

ScalingInfo IdentityScaling(const ConicProgram& program) {
  ScalingInfo info;
  info.row_scale.assign(static_cast<std::size_t>(program.m()), 1.0);
  info.col_scale.assign(static_cast<std::size_t>(program.n()), 1.0);
  return info;
}

ScaledProgram RuizScale(const ConicProgram& program,
                        const ScalingOptions& options) {
  ScalingInfo info = IdentityScaling(program);
  info.exp_uniform = options.exp_uniform;
  SparseMatrix g = program.G;
  for (int round = 0; round < options.ruiz_iters; ++round) {
    const MatrixNorms norms = ComputeNorms(g);
    Vector r(norms.row_inf.size());
    Vector c(norms.col_inf.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = SqrtOrOne(norms.row_inf[i]);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = SqrtOrOne(norms.col_inf[j]);
    g = g.Rescaled(r, c);
    for (std::size_t i = 0; i < r.size(); ++i) info.row_scale[i] *= r[i];
    for (std::size_t j = 0; j < c.size(); ++j) info.col_scale[j] *= c[j];
    ++info.ruiz_rounds;
  }
  if (options.pock_chambolle) {
    const MatrixNorms norms = ComputeNorms(g);
    for (std::size_t i = 0; i < info.row_scale.size(); ++i) {
      info.row_scale[i] *= SqrtOrOne(norms.row_1[i]);
    }
    for (std::size_t j = 0; j < info.col_scale.size(); ++j) {
      info.col_scale[j] *= SqrtOrOne(norms.col_1[j]);
    }
    info.pock_chambolle = true;
  }
  ApplyBlockConstraints(program.primal_cones,
                        static_cast<std::size_t>(program.n1()),
                        options.exp_uniform, info.col_scale);
  ApplyBlockConstraints(program.dual_cones, 0, options.exp_uniform,
                        info.row_scale);
  ScaledProgram out;
  out.program = ApplyScaling(program, info);
  out.info = std::move(info);
  return out;
}

ConicProgram ApplyScaling(const ConicProgram& program,
                          const ScalingInfo& info) {
  ConicProgram out;
  out.G = program.G.Rescaled(info.row_scale, info.col_scale);
  out.c.resize(program.c.size());
  for (std::size_t j = 0; j < out.c.size(); ++j) {
    out.c[j] = program.c[j] / info.col_scale[j];
  }
  out.h.resize(program.h.size());
  for (std::size_t i = 0; i < out.h.size(); ++i) {
    out.h[i] = program.h[i] / info.row_scale[i];
  }
  out.l.resize(program.l.size());
  out.u.resize(program.u.size());
  for (std::size_t j = 0; j < out.l.size(); ++j) {
    out.l[j] = program.l[j] * info.col_scale[j];
    out.u[j] = program.u[j] * info.col_scale[j];
  }
  out.primal_cones = program.primal_cones;
  out.dual_cones = program.dual_cones;
  return out;
}

Solution UnscaleSolution(const ConicProgram& original,
                         std::span<const double> x_scaled,
                         std::span<const double> y_scaled,
                         const ScalingInfo& info) {
  if (x_scaled.size() != info.col_scale.size() ||
      y_scaled.size() != info.row_scale.size()) {
    throw std::invalid_argument("scaled point does not match the scaling");
  }
  Vector x(x_scaled.size());
  Vector y(y_scaled.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = x_scaled[j] / info.col_scale[j];
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y_scaled[i] / info.row_scale[i];
  return MakeSolution(original, std::move(x), std::move(y));
}

ConeScalingSlices ComputeConeScalingSlices(const ScalingInfo& info,
                                           const ConicProgram& program) {
  ConeScalingSlices slices;
  const std::span<const double> col(info.col_scale);
  const std::span<const double> row(info.row_scale);
  const auto n1 = static_cast<std::size_t>(program.n1());
  Index offset = 0;
  for (const Cone& cone : program.primal_cones) {
    const auto d = col.subspan(n1 + static_cast<std::size_t>(offset),
                               static_cast<std::size_t>(cone.dim));
    slices.primal.push_back(MakeBlock(TargetFor(cone.kind), cone.kind, offset, d));
    offset += cone.dim;
  }
  offset = 0;
  for (const Cone& cone : program.dual_cones) {
    const auto d = row.subspan(static_cast<std::size_t>(offset),
                               static_cast<std::size_t>(cone.dim));
    if (cone.kind == ConeKind::kZero) {
      BlockProjection block;
      block.target = BlockTarget::kFree;
      block.offset = offset;
      block.dim = cone.dim;
      slices.dual.push_back(block);
    } else {
      const ConeKind dual = DualKind(cone.kind);
      slices.dual.push_back(MakeBlock(TargetFor(dual), dual, offset, d));
    }
    offset += cone.dim;
  }
  return slices;
}

}  // namespace conicpd
