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

#include "conicpd/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conicpd {

std::string_view ConeKindName(ConeKind kind) {
  switch (kind) {
    case ConeKind::kZero:
      return "zero";
    case ConeKind::kNonNeg:
      return "nonneg";
    case ConeKind::kSecondOrder:
      return "soc";
    case ConeKind::kRotatedSecondOrder:
      return "rsoc";
    case ConeKind::kExponential:
      return "exp";
    case ConeKind::kDualExponential:
      return "dual_exp";
  }
  return "unknown";
}

std::optional<ConeKind> ParseConeKind(std::string_view name) {
  for (ConeKind kind :
       {ConeKind::kZero, ConeKind::kNonNeg, ConeKind::kSecondOrder,
        ConeKind::kRotatedSecondOrder, ConeKind::kExponential,
        ConeKind::kDualExponential}) {
    if (ConeKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

ConeKind DualKind(ConeKind kind) {
  switch (kind) {
    case ConeKind::kExponential:
      return ConeKind::kDualExponential;
    case ConeKind::kDualExponential:
      return ConeKind::kExponential;
    default:
      return kind;
  }
}

std::string Cone::DimensionViolation() const {
  const std::string name(ConeKindName(kind));
  if (dim < 1) return name + " cone with dimension " + std::to_string(dim);
  switch (kind) {
    case ConeKind::kSecondOrder:
      if (dim < 2) return "soc cone needs dimension >= 2";
      break;
    case ConeKind::kRotatedSecondOrder:
      if (dim < 3) return "rsoc cone needs dimension >= 3";
      break;
    case ConeKind::kExponential:
    case ConeKind::kDualExponential:
      if (dim != 3) return name + " cone needs dimension 3";
      break;
    default:
      break;
  }
  return {};
}

std::vector<std::string> Validate(const ConicProgram& program) {
  std::vector<std::string> out;
  const Index n = program.n();
  const Index n1 = program.n1();
  const Index m = program.m();

  if (program.u.size() != program.l.size()) {
    out.push_back("bound length mismatch: l has " +
                  std::to_string(program.l.size()) + ", u has " +
                  std::to_string(program.u.size()));
  }
  if (n1 > n) out.push_back("more bounded variables than variables");
  if (program.G.rows() != m) {
    out.push_back("G has " + std::to_string(program.G.rows()) +
                  " rows, expected " + std::to_string(m));
  }
  if (program.G.cols() != n) {
    out.push_back("G has " + std::to_string(program.G.cols()) +
                  " columns, expected " + std::to_string(n));
  }

  Index primal_dim = 0;
  for (std::size_t b = 0; b < program.primal_cones.size(); ++b) {
    const std::string bad = program.primal_cones[b].DimensionViolation();
    if (!bad.empty()) {
      out.push_back("primal cone " + std::to_string(b) + ": " + bad);
    }
    primal_dim += program.primal_cones[b].dim;
  }
  if (primal_dim != n - n1) out.push_back("primal cone dimension mismatch");
  Index dual_dim = 0;
  for (std::size_t b = 0; b < program.dual_cones.size(); ++b) {
    const std::string bad = program.dual_cones[b].DimensionViolation();
    if (!bad.empty()) {
      out.push_back("dual cone " + std::to_string(b) + ": " + bad);
    }
    dual_dim += program.dual_cones[b].dim;
  }
  if (dual_dim != m) out.push_back("dual cone dimension mismatch");

  for (std::size_t i = 0; i < program.c.size(); ++i) {
    if (!std::isfinite(program.c[i])) {
      out.push_back("non-finite objective entry at index " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < program.h.size(); ++i) {
    if (!std::isfinite(program.h[i])) {
      out.push_back("non-finite right-hand side at index " + std::to_string(i));
    }
  }
  for (double v : program.G.row_values()) {
    if (!std::isfinite(v)) {
      out.push_back("non-finite constraint matrix entry");
      break;
    }
  }
  const std::size_t nb = std::min(program.l.size(), program.u.size());
  for (std::size_t i = 0; i < nb; ++i) {
    const double lo = program.l[i];
    const double hi = program.u[i];
    if (std::isnan(lo) || std::isnan(hi)) {
      out.push_back("NaN bound at index " + std::to_string(i));
    } else if (lo == std::numeric_limits<double>::infinity() ||
               hi == -std::numeric_limits<double>::infinity()) {
      out.push_back("empty bound interval at index " + std::to_string(i));
    } else if (lo > hi) {
      out.push_back("bound inversion at index " + std::to_string(i));
    }
  }
  return out;
}

DualSlack ComputeDualSlack(const ConicProgram& program,
                           std::span<const double> y) {
  if (static_cast<Index>(y.size()) != program.m()) {
    throw std::invalid_argument("dual vector has length " +
                                std::to_string(y.size()) + ", expected " +
                                std::to_string(program.m()));
  }
  const Vector gty = SpmvT(program.G, y);
  DualSlack slack;
  const auto n1 = static_cast<std::size_t>(program.n1());
  slack.lambda1.resize(n1);
  slack.lambda2.resize(program.c.size() - n1);
  for (std::size_t j = 0; j < program.c.size(); ++j) {
    const double v = program.c[j] - gty[j];
    if (j < n1) {
      slack.lambda1[j] = v;
    } else {
      slack.lambda2[j - n1] = v;
    }
  }
  return slack;
}

double DualObjective(const ConicProgram& program, std::span<const double> y,
                     std::span<const double> lambda1) {
  double value = Dot(y, program.h);
  for (std::size_t i = 0; i < lambda1.size(); ++i) {
    const double pos = std::max(lambda1[i], 0.0);
    const double neg = std::max(-lambda1[i], 0.0);
    if (pos > 0.0) {
      if (!std::isfinite(program.l[i])) {
        return -std::numeric_limits<double>::infinity();
      }
      value += program.l[i] * pos;
    }
    if (neg > 0.0) {
      if (!std::isfinite(program.u[i])) {
        return -std::numeric_limits<double>::infinity();
      }
      value -= program.u[i] * neg;
    }
  }
  return value;
}

Solution MakeSolution(const ConicProgram& program, Vector x, Vector y) {
  if (static_cast<Index>(x.size()) != program.n()) {
    throw std::invalid_argument("primal vector has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(program.n()));
  }
  DualSlack slack = ComputeDualSlack(program, y);
  Solution sol;
  sol.lambda = std::move(slack.lambda1);
  sol.lambda.insert(sol.lambda.end(), slack.lambda2.begin(),
                    slack.lambda2.end());
  sol.primal_objective = Dot(program.c, x);
  sol.dual_objective =
      DualObjective(program, y, sol.lambda1(program.n1()));
  sol.x = std::move(x);
  sol.y = std::move(y);
  return sol;
}

}  // namespace conicpd
