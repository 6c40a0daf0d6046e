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

// Euclidean projections onto boxes, the supported cones, and their images
// D*K under a positive diagonal map D. Membership of v in D*K means that
// D^{-1} v is in K.
//
// The rescaled second-order cone projection reduces to a monotone scalar
// equation in the projected head s; the rescaled exponential cone projection
// reduces to a root of a scalar function h(rho) on an interval on which the
// primal and dual multipliers stay positive. Both are solved by bisection.

#ifndef CONICPD_CONES_H_
#define CONICPD_CONES_H_

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "conicpd/model.h"
#include "conicpd/sparse_matrix.h"

namespace conicpd {

// Raised when a root finder cannot bracket or converge; never swallowed by the
// projection routines themselves.
class ProjectionError : public std::runtime_error {
 public:
  explicit ProjectionError(const std::string& what)
      : std::runtime_error(what) {}
};

using Triple = std::array<double, 3>;

// Componentwise clamp. Throws std::invalid_argument on length mismatch or
// l_i > u_i.
Vector ProjectBox(std::span<const double> v, std::span<const double> l,
                  std::span<const double> u);

// Projection onto the unscaled cone.
Vector ProjectCone(std::span<const double> v, const Cone& cone);
void ProjectConeInPlace(std::span<double> v, ConeKind kind);

// Projection onto the dual of `cone`. The dual of the zero cone is the whole
// space, so that case is the identity.
Vector ProjectDualCone(std::span<const double> v, const Cone& cone);
void ProjectDualConeInPlace(std::span<double> v, ConeKind kind);

// (a, b, z) -> ((a + b)/sqrt2, (a - b)/sqrt2, z). Symmetric and orthogonal,
// so it is its own inverse; it maps the rotated cone onto the second-order
// cone.
void RotateRsocCoordinates(std::span<double> v);

struct RescaledSocResult {
  double s = 0.0;
  Vector y;
  // Multiplier of the cone constraint: y = (I + 2 lambda Dhat^{-2})^{-1} x.
  // Zero when the input is already in the cone.
  double lambda = 0.0;
  // 1: polar cone (projection is the apex), 2: already inside, 3: t == 0
  // closed form, 4: root of the scalar equation.
  int which = 0;
  int iterations = 0;
};

// Projection of (t, x) onto D*K_soc, with dhat_i = d_{i+1} / d_1.
// Throws std::invalid_argument unless dhat has x.size() finite positive
// entries.
RescaledSocResult ProjectRescaledSoc(double t, std::span<const double> x,
                                     std::span<const double> dhat);

// The scalar equation whose root gives case 4 of the rescaled second-order
// cone projection, written in the multiplier lambda:
//   sum_i (x_i / dhat_i / (1 + 2 lambda / dhat_i^2))^2 - t^2 / (1 - 2 lambda)^2
double RescaledSocMultiplierEquation(double t, std::span<const double> x,
                                     std::span<const double> dhat,
                                     double lambda);

enum class ExpCase {
  kInCone = 1,
  kInPolar = 2,
  kNonPositive = 3,
  kRoot = 4,
};

// The Moreau pair v0 = primal + dual with primal in D*K_exp, dual in
// -D^{-1} K_exp^*, and <primal, dual> = 0.
struct ExpProjection {
  Triple primal{};
  Triple dual{};
  ExpCase which = ExpCase::kInCone;
  // Root and its bracket; only meaningful for kRoot.
  double rho = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;
};

// The scalar functions behind the root case of the rescaled exponential cone
// projection. Exposed for diagnostics and tests.
class RescaledExpRoot {
 public:
  RescaledExpRoot(const Triple& v0, const Triple& d);

  double PrimalScale(double rho) const;  // s_p(rho)
  double DualScale(double rho) const;    // r_d(rho)
  double Residual(double rho) const;     // h(rho)

  // a3 = r0 d_s / (s0 d_r) and a4 = 1 - s0 d_s / (r0 d_r).
  double A3() const;
  double A4() const;

  // Interval on which s_p, r_d > 0 and h changes sign. Infinite ends are
  // replaced by finite points found by doubling the step away from the finite
  // end until h has the sign of the corresponding limit. Requires r0 > 0 or
  // s0 > 0. Throws ProjectionError if no finite surrogate is found.
  std::pair<double, double> Bracket() const;

  Triple PrimalPoint(double rho) const;
  Triple DualPoint(double rho) const;

 private:
  double r0_, s0_, t0_;
  double dr_, ds_, dt_;
};

// Throws std::invalid_argument for non-positive or non-finite scaling and
// ProjectionError when the root finder fails.
ExpProjection ProjectRescaledExp(const Triple& v0, const Triple& d);

// Projection onto D*K_exp^*, computed as v0 + P_{D^{-1} K_exp}(-v0).
Triple ProjectRescaledDualExp(const Triple& v0, const Triple& d);

// Membership with additive slack `tol` on each defining inequality.
bool InExpCone(const Triple& v, double tol);
bool InDualExpCone(const Triple& v, double tol);
bool InCone(std::span<const double> v, const Cone& cone, double tol);
bool InDualCone(std::span<const double> v, const Cone& cone, double tol);

// Membership of v in D*K_exp and in -D^{-1} K_exp^*.
bool InRescaledExpCone(const Triple& v, const Triple& d, double tol);
bool InRescaledExpPolar(const Triple& v, const Triple& d, double tol);

// Projection of lambda1 onto the product of sets Lambda_i determined by which
// bounds are finite: {0} if both are infinite, R^- if only u_i is finite, R^+
// if only l_i is finite, R if both are finite.
Vector ProjectLambdaSet(std::span<const double> lambda1,
                        std::span<const double> l, std::span<const double> u);

// What to project a block onto, after any diagonal rescaling has been folded
// in. kFree leaves the block untouched.
enum class BlockTarget {
  kFree,
  kZero,
  kNonNeg,
  kSecondOrder,
  kRotatedSecondOrder,
  kExponential,
  kDualExponential,
};

struct BlockProjection {
  BlockTarget target = BlockTarget::kFree;
  Index offset = 0;
  Index dim = 0;
  // Second-order: dhat (dim - 1 entries). Rotated: dhat of the rotated
  // second-order cone. Exponential kinds: (d_r, d_s, d_t). Empty means unit
  // scaling.
  Vector scale;
};

BlockTarget TargetFor(ConeKind kind);

// Projects every block of `v` in place. Returns the number of blocks
// projected.
Index ApplyBlockProjections(std::span<double> v,
                            std::span<const BlockProjection> blocks);

}  // namespace conicpd

#endif  // CONICPD_CONES_H_
