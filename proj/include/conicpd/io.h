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

// Instance and report files.
//
// JSON instances:
//   {"n1", "n2", "m", "c", "h", "l", "u",
//    "primal_cones": [{"kind", "dim"}...], "dual_cones": [...],
//    "G": {"rows": [...], "cols": [...], "vals": [...]}}
// with G in row-major order and infinite bounds written as "inf" / "-inf".
//
// CBF subset (read only): VER, OBJSENSE MIN, VAR, CON, OBJACOORD, ACOORD,
// BCOORD with cones F, L+, L-, L=, Q, QR, EXP, EXP*. Scalar variable cones
// become box variables placed ahead of the cone variables; constraint rows
// A x + b in K map to G = A, h = -b, with L- rows negated and F rows
// dropped. EXP coordinates are reversed into (r, s, t) order.

#ifndef CONICPD_IO_H_
#define CONICPD_IO_H_

#include <istream>
#include <stdexcept>
#include <string>

#include "conicpd/model.h"
#include "conicpd/solver.h"

namespace conicpd {

class InstanceError : public std::runtime_error {
 public:
  explicit InstanceError(const std::string& what) : std::runtime_error(what) {}
};

// Canonical JSON text (two-space indent, trailing newline).
std::string InstanceToJson(const ConicProgram& program);
// Parses and validates. Throws InstanceError with the offending element.
ConicProgram InstanceFromJson(const std::string& text);

ConicProgram ReadCbf(std::istream& in);

// Dispatches on the extension: ".cbf" reads the CBF subset, anything else
// JSON. The result is validated.
ConicProgram ReadInstance(const std::string& path);
void WriteInstance(const ConicProgram& program, const std::string& path);

// Report JSON. The point is included when `include_solution` is set.
std::string ReportToJson(const SolveReport& report, bool include_solution);

}  // namespace conicpd

#endif  // CONICPD_IO_H_
