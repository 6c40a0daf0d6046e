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

#include "conicpd/cones.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace conicpd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection stops once the midpoint no longer separates the endpoints or
// after this many halvings.
constexpr int kMaxBisection = 200;
// Doublings allowed when replacing an infinite bracket end.
constexpr int kMaxExpansion = 200;
// Relative slack on the membership tests that select the closed-form cases
// of the exponential cone projection.
constexpr double kMembershipRelTol = 1e-12;

void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length " +
                                std::to_string(a) + " vs " +
                                std::to_string(b));
  }
}

void CheckPositiveScaling(std::span<const double> d, const char* what) {
  for (double v : d) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) +
                                  " must be finite and strictly positive");
    }
  }
}

void ProjectSocInPlace(std::span<double> v) {
  const double t = v[0];
  const double nx = Norm2(v.subspan(1));
  if (nx <= t) return;
  if (nx <= -t) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  const double head = 0.5 * (t + nx);
  const double ratio = head / nx;
  v[0] = head;
  for (std::size_t i = 1; i < v.size(); ++i) v[i] *= ratio;
}

void ProjectRsocInPlace(std::span<double> v) {
  RotateRsocCoordinates(v);
  ProjectSocInPlace(v);
  RotateRsocCoordinates(v);
}

struct SocOutcome {
  int which = 0;
  double lambda = 0.0;
  int iterations = 0;
};

// In-place rescaled second-order cone projection of v = (t, x).
//
// Eliminating the multiplier through 2 lambda = 1 - t / s turns the
// multiplier equation into
//   g(s) = sum_i (x_i dhat_i / (s (1 + dhat_i^2) - t))^2 - 1 = 0,
// which is strictly decreasing on s > max(t, 0), positive at the left end
// whenever cases 1-3 do not apply, and non-positive at
// s = max(t, 0) + ||(Dhat + Dhat^{-1})^{-1} x||.
SocOutcome RescaledSocInPlace(std::span<double> v,
                              std::span<const double> dhat) {
  const double t = v[0];
  std::span<double> x = v.subspan(1);
  double dx2 = 0.0;
  double dinvx2 = 0.0;
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = dhat[i];
    dx2 += (d * x[i]) * (d * x[i]);
    dinvx2 += (x[i] / d) * (x[i] / d);
    const double q = x[i] * d / (1.0 + d * d);
    r2 += q * q;
  }
  SocOutcome out;
  if (t <= 0.0 && std::sqrt(dx2) <= -t) {
    std::fill(v.begin(), v.end(), 0.0);
    out.which = 1;
    return out;
  }
  if (std::sqrt(dinvx2) <= t) {
    out.which = 2;
    return out;
  }
  if (t == 0.0) {
    v[0] = std::sqrt(r2);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d2 = dhat[i] * dhat[i];
      x[i] = x[i] * d2 / (1.0 + d2);
    }
    out.which = 3;
    out.lambda = 0.5;
    return out;
  }

  auto g = [&](double s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = dhat[i];
      const double q = x[i] * d / (s * (1.0 + d * d) - t);
      sum += q * q;
    }
    return sum - 1.0;
  };
  double lo = std::max(t, 0.0);
  double hi = lo + std::sqrt(r2);
  int it = 0;
  for (; it < kMaxBisection; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double gm = g(mid);
    if (std::isnan(gm)) {
      throw ProjectionError("rescaled soc projection: NaN in root function");
    }
    if (gm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // The right end keeps the point inside the rescaled cone.
  const double s = hi;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d2 = dhat[i] * dhat[i];
    x[i] = x[i] * d2 * s / (s * (1.0 + d2) - t);
  }
  v[0] = s;
  out.which = 4;
  out.lambda = 0.5 * (1.0 - t / s);
  out.iterations = it;
  return out;
}

void RescaledRsocInPlace(std::span<double> v, std::span<const double> dhat) {
  RotateRsocCoordinates(v);
  RescaledSocInPlace(v, dhat);
  RotateRsocCoordinates(v);
}

double SafeNorm(const Triple& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

int Sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

Vector ProjectBox(std::span<const double> v, std::span<const double> l,
                  std::span<const double> u) {
  CheckSameLength(v.size(), l.size(), "box lower bound");
  CheckSameLength(v.size(), u.size(), "box upper bound");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (l[i] > u[i]) {
      throw std::invalid_argument("bound inversion at index " +
                                  std::to_string(i));
    }
    out[i] = std::min(std::max(v[i], l[i]), u[i]);
  }
  return out;
}

void RotateRsocCoordinates(std::span<double> v) {
  const double a = v[0];
  const double b = v[1];
  v[0] = (a + b) * (std::numbers::sqrt2 / 2.0);
  v[1] = (a - b) * (std::numbers::sqrt2 / 2.0);
}

void ProjectConeInPlace(std::span<double> v, ConeKind kind) {
  switch (kind) {
    case ConeKind::kZero:
      std::fill(v.begin(), v.end(), 0.0);
      return;
    case ConeKind::kNonNeg:
      for (double& e : v) e = std::max(e, 0.0);
      return;
    case ConeKind::kSecondOrder:
      ProjectSocInPlace(v);
      return;
    case ConeKind::kRotatedSecondOrder:
      ProjectRsocInPlace(v);
      return;
    case ConeKind::kExponential: {
      const ExpProjection p =
          ProjectRescaledExp({v[0], v[1], v[2]}, {1.0, 1.0, 1.0});
      std::copy(p.primal.begin(), p.primal.end(), v.begin());
      return;
    }
    case ConeKind::kDualExponential: {
      const Triple p =
          ProjectRescaledDualExp({v[0], v[1], v[2]}, {1.0, 1.0, 1.0});
      std::copy(p.begin(), p.end(), v.begin());
      return;
    }
  }
}

Vector ProjectCone(std::span<const double> v, const Cone& cone) {
  CheckSameLength(v.size(), static_cast<std::size_t>(cone.dim),
                  "cone projection");
  if (const std::string bad = cone.DimensionViolation(); !bad.empty()) {
    throw std::invalid_argument(bad);
  }
  Vector out(v.begin(), v.end());
  ProjectConeInPlace(out, cone.kind);
  return out;
}

void ProjectDualConeInPlace(std::span<double> v, ConeKind kind) {
  if (kind == ConeKind::kZero) return;
  ProjectConeInPlace(v, DualKind(kind));
}

Vector ProjectDualCone(std::span<const double> v, const Cone& cone) {
  CheckSameLength(v.size(), static_cast<std::size_t>(cone.dim),
                  "dual cone projection");
  Vector out(v.begin(), v.end());
  ProjectDualConeInPlace(out, cone.kind);
  return out;
}

RescaledSocResult ProjectRescaledSoc(double t, std::span<const double> x,
                                     std::span<const double> dhat) {
  CheckSameLength(x.size(), dhat.size(), "rescaled soc scaling");
  CheckPositiveScaling(dhat, "rescaled soc scaling");
  Vector v(x.size() + 1);
  v[0] = t;
  std::copy(x.begin(), x.end(), v.begin() + 1);
  const SocOutcome outcome = RescaledSocInPlace(v, dhat);
  RescaledSocResult result;
  result.s = v[0];
  result.y.assign(v.begin() + 1, v.end());
  result.lambda = outcome.lambda;
  result.which = outcome.which;
  result.iterations = outcome.iterations;
  return result;
}

double RescaledSocMultiplierEquation(double t, std::span<const double> x,
                                     std::span<const double> dhat,
                                     double lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dinv = 1.0 / dhat[i];
    const double q = dinv * x[i] / (1.0 + 2.0 * lambda * dinv * dinv);
    sum += q * q;
  }
  const double head = t / (1.0 - 2.0 * lambda);
  return sum - head * head;
}

namespace {

double Dot3(const Triple& a, const Triple& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Directions of the primal boundary ray D (rho, 1, e^rho) and the matching
// dual ray D^{-1} (1, 1 - rho, -e^{-rho}), which are orthogonal. Each is
// divided by a positive factor so that no exponential of |rho| appears.
std::pair<Triple, Triple> ExpRays(const Triple& d, double rho) {
  if (rho <= 0.0) {
    const double e = std::exp(rho);
    return {Triple{d[0] * rho, d[1], d[2] * e},
            Triple{e / d[0], (1.0 - rho) * e / d[1], -1.0 / d[2]}};
  }
  const double e = std::exp(-rho);
  return {Triple{d[0] * rho * e, d[1] * e, d[2]},
          Triple{1.0 / d[0], (1.0 - rho) / d[1], -e / d[2]}};
}

// det[v0, a(rho), b(rho)].
double Coplanarity(const Triple& v0, const Triple& d, double rho) {
  const auto [a, b] = ExpRays(d, rho);
  const Triple cross = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0]};
  return Dot3(v0, cross);
}

}  // namespace

RescaledExpRoot::RescaledExpRoot(const Triple& v0, const Triple& d)
    : r0_(v0[0]),
      s0_(v0[1]),
      t0_(v0[2]),
      dr_(d[0]),
      ds_(d[1]),
      dt_(d[2]) {}

// With tau = d_s / d_r:
//   s_p = (s0 tau - r0 + r0 rho) / (d_r (rho^2 - rho + tau^2))
//   r_d = d_s (tau r0 - rho s0) / (rho^2 - rho + tau^2)
double RescaledExpRoot::PrimalScale(double rho) const {
  const double tau = ds_ / dr_;
  const double den = rho * (rho - 1.0) + tau * tau;
  return (s0_ * tau - r0_ + r0_ * rho) / (dr_ * den);
}

double RescaledExpRoot::DualScale(double rho) const {
  const double tau = ds_ / dr_;
  const double den = rho * (rho - 1.0) + tau * tau;
  return ds_ * (tau * r0_ - rho * s0_) / den;
}

double RescaledExpRoot::Residual(double rho) const {
  const double sp = PrimalScale(rho);
  const double rd = DualScale(rho);
  // Either exponential may overflow; the other factor is then positive and
  // the sum keeps the right sign.
  const double up = sp == 0.0 ? 0.0 : dt_ * std::exp(rho) * sp;
  const double down = rd == 0.0 ? 0.0 : std::exp(-rho) * rd / dt_;
  return up - down - t0_;
}

double RescaledExpRoot::A3() const { return r0_ * ds_ / (s0_ * dr_); }
double RescaledExpRoot::A4() const { return 1.0 - s0_ * ds_ / (r0_ * dr_); }

std::pair<double, double> RescaledExpRoot::Bracket() const {
  if (r0_ > 0.0 && s0_ > 0.0) {
    const double a3 = A3();
    const double a4 = A4();
    return {std::min(a3, a4), std::max(a3, a4)};
  }
  if (s0_ > 0.0) {
    // (-inf, a3): h -> -inf as rho -> -inf.
    const double a3 = A3();
    double step = 1.0;
    for (int k = 0; k < kMaxExpansion; ++k, step *= 2.0) {
      const double lo = a3 - step;
      if (Residual(lo) < 0.0) return {lo, a3};
    }
    throw ProjectionError("rescaled exp projection: no lower bracket end");
  }
  if (r0_ > 0.0) {
    // (a4, +inf): h -> +inf as rho -> +inf.
    const double a4 = A4();
    double step = 1.0;
    for (int k = 0; k < kMaxExpansion; ++k, step *= 2.0) {
      const double hi = a4 + step;
      if (Residual(hi) > 0.0) return {a4, hi};
    }
    throw ProjectionError("rescaled exp projection: no upper bracket end");
  }
  throw ProjectionError("rescaled exp projection: bracket needs r0 > 0 or s0 > 0");
}

Triple RescaledExpRoot::PrimalPoint(double rho) const {
  const double sp = PrimalScale(rho);
  return {dr_ * rho * sp, ds_ * sp, sp == 0.0 ? 0.0 : dt_ * std::exp(rho) * sp};
}

Triple RescaledExpRoot::DualPoint(double rho) const {
  const double rd = DualScale(rho);
  return {rd / dr_, (1.0 - rho) * rd / ds_,
          rd == 0.0 ? 0.0 : -std::exp(-rho) * rd / dt_};
}

bool InExpCone(const Triple& v, double tol) {
  const double r = v[0];
  const double s = v[1];
  const double t = v[2];
  if (s > 0.0 && t >= s * std::exp(r / s) - tol) return true;
  return std::abs(s) <= tol && t >= -tol && r <= tol;
}

bool InDualExpCone(const Triple& v, double tol) {
  const double r = v[0];
  const double s = v[1];
  const double t = v[2];
  if (r < 0.0 && std::numbers::e * t >= -r * std::exp(s / r) - tol) {
    return true;
  }
  return std::abs(r) <= tol && s >= -tol && t >= -tol;
}

bool InRescaledExpCone(const Triple& v, const Triple& d, double tol) {
  const double r = v[0] / d[0];
  const double s = v[1] / d[1];
  if (s > 0.0 && v[2] >= d[2] * s * std::exp(r / s) - tol) return true;
  return std::abs(v[1]) <= tol && v[2] >= -tol && v[0] <= tol;
}

bool InRescaledExpPolar(const Triple& v, const Triple& d, double tol) {
  return InDualExpCone({-d[0] * v[0], -d[1] * v[1], -d[2] * v[2]}, tol);
}

ExpProjection ProjectRescaledExp(const Triple& v0, const Triple& d) {
  CheckPositiveScaling(d, "rescaled exp scaling");
  ExpProjection out;
  const double tol = kMembershipRelTol * SafeNorm(v0);
  if (InRescaledExpCone(v0, d, tol)) {
    out.which = ExpCase::kInCone;
    out.primal = v0;
    out.dual = {0.0, 0.0, 0.0};
    return out;
  }
  const Triple w = {-d[0] * v0[0], -d[1] * v0[1], -d[2] * v0[2]};
  if (InDualExpCone(w, kMembershipRelTol * SafeNorm(w))) {
    out.which = ExpCase::kInPolar;
    out.primal = {0.0, 0.0, 0.0};
    out.dual = v0;
    return out;
  }
  if (v0[0] <= 0.0 && v0[1] <= 0.0) {
    out.which = ExpCase::kNonPositive;
    out.primal = {v0[0], 0.0, std::max(v0[2], 0.0)};
    out.dual = {0.0, v0[1], std::min(v0[2], 0.0)};
    return out;
  }

  out.which = ExpCase::kRoot;
  const RescaledExpRoot root(v0, d);
  auto [lo, hi] = root.Bracket();
  out.lower = lo;
  out.upper = hi;
  // The root is where v0 lies in the plane of the two rays; the coplanarity
  // determinant has the sign of h times a factor of fixed sign on the
  // bracket, and stays finite where the closed forms of s_p and r_d divide
  // by zero (a3 == a4).
  double rho = lo;
  if (hi > lo) {
    double g_lo = Coplanarity(v0, d, lo);
    const double g_hi = Coplanarity(v0, d, hi);
    if (std::isnan(g_lo) || std::isnan(g_hi)) {
      throw ProjectionError("rescaled exp projection: NaN at bracket ends");
    }
    if (g_lo == 0.0) {
      rho = lo;
    } else if (g_hi == 0.0 || Sign(g_lo) == Sign(g_hi)) {
      // Same sign only within rounding of an end point; take the closer one.
      rho = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
    } else {
      int it = 0;
      const int sign_lo = Sign(g_lo);
      for (; it < kMaxBisection; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        const double gm = Coplanarity(v0, d, mid);
        if (std::isnan(gm)) throw ProjectionError("rescaled exp projection: NaN in h");
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (Sign(gm) == sign_lo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.iterations = it;
      rho = lo + 0.5 * (hi - lo);
    }
  }
  out.rho = rho;
  const auto [a, b] = ExpRays(d, rho);
  const double sp = std::max(0.0, Dot3(v0, a) / Dot3(a, a));
  const double rd = std::max(0.0, Dot3(v0, b) / Dot3(b, b));
  for (int i = 0; i < 3; ++i) {
    out.primal[i] = sp * a[i];
    out.dual[i] = rd * b[i];
  }
  return out;
}

Triple ProjectRescaledDualExp(const Triple& v0, const Triple& d) {
  CheckPositiveScaling(d, "rescaled dual exp scaling");
  const ExpProjection p = ProjectRescaledExp(
      {-v0[0], -v0[1], -v0[2]}, {1.0 / d[0], 1.0 / d[1], 1.0 / d[2]});
  return {v0[0] + p.primal[0], v0[1] + p.primal[1], v0[2] + p.primal[2]};
}

bool InCone(std::span<const double> v, const Cone& cone, double tol) {
  CheckSameLength(v.size(), static_cast<std::size_t>(cone.dim),
                  "cone membership");
  switch (cone.kind) {
    case ConeKind::kZero:
      return std::all_of(v.begin(), v.end(),
                         [tol](double e) { return std::abs(e) <= tol; });
    case ConeKind::kNonNeg:
      return std::all_of(v.begin(), v.end(),
                         [tol](double e) { return e >= -tol; });
    case ConeKind::kSecondOrder:
      return Norm2(v.subspan(1)) <= v[0] + tol;
    case ConeKind::kRotatedSecondOrder: {
      const double z = Norm2(v.subspan(2));
      return v[0] >= -tol && v[1] >= -tol && z * z <= 2.0 * v[0] * v[1] + tol;
    }
    case ConeKind::kExponential:
      return InExpCone({v[0], v[1], v[2]}, tol);
    case ConeKind::kDualExponential:
      return InDualExpCone({v[0], v[1], v[2]}, tol);
  }
  return false;
}

bool InDualCone(std::span<const double> v, const Cone& cone, double tol) {
  if (cone.kind == ConeKind::kZero) {
    CheckSameLength(v.size(), static_cast<std::size_t>(cone.dim),
                    "dual cone membership");
    return true;
  }
  return InCone(v, Cone{DualKind(cone.kind), cone.dim}, tol);
}

Vector ProjectLambdaSet(std::span<const double> lambda1,
                        std::span<const double> l, std::span<const double> u) {
  CheckSameLength(lambda1.size(), l.size(), "lambda set lower bound");
  CheckSameLength(lambda1.size(), u.size(), "lambda set upper bound");
  Vector out(lambda1.size());
  for (std::size_t i = 0; i < lambda1.size(); ++i) {
    const bool has_lower = std::isfinite(l[i]);
    const bool has_upper = std::isfinite(u[i]);
    if (has_lower && has_upper) {
      out[i] = lambda1[i];
    } else if (has_lower) {
      out[i] = std::max(lambda1[i], 0.0);
    } else if (has_upper) {
      out[i] = std::min(lambda1[i], 0.0);
    } else {
      out[i] = 0.0;
    }
  }
  return out;
}

BlockTarget TargetFor(ConeKind kind) {
  switch (kind) {
    case ConeKind::kZero:
      return BlockTarget::kZero;
    case ConeKind::kNonNeg:
      return BlockTarget::kNonNeg;
    case ConeKind::kSecondOrder:
      return BlockTarget::kSecondOrder;
    case ConeKind::kRotatedSecondOrder:
      return BlockTarget::kRotatedSecondOrder;
    case ConeKind::kExponential:
      return BlockTarget::kExponential;
    case ConeKind::kDualExponential:
      return BlockTarget::kDualExponential;
  }
  return BlockTarget::kFree;
}

Index ApplyBlockProjections(std::span<double> v,
                            std::span<const BlockProjection> blocks) {
  Index projected = 0;
  for (const BlockProjection& b : blocks) {
    std::span<double> part = v.subspan(static_cast<std::size_t>(b.offset),
                                       static_cast<std::size_t>(b.dim));
    const bool unit = b.scale.empty();
    switch (b.target) {
      case BlockTarget::kFree:
        continue;
      case BlockTarget::kZero:
        std::fill(part.begin(), part.end(), 0.0);
        break;
      case BlockTarget::kNonNeg:
        for (double& e : part) e = std::max(e, 0.0);
        break;
      case BlockTarget::kSecondOrder:
        if (unit) {
          ProjectSocInPlace(part);
        } else {
          RescaledSocInPlace(part, b.scale);
        }
        break;
      case BlockTarget::kRotatedSecondOrder:
        if (unit) {
          ProjectRsocInPlace(part);
        } else {
          RescaledRsocInPlace(part, b.scale);
        }
        break;
      case BlockTarget::kExponential: {
        const Triple d = unit ? Triple{1.0, 1.0, 1.0}
                              : Triple{b.scale[0], b.scale[1], b.scale[2]};
        const ExpProjection p = ProjectRescaledExp({part[0], part[1], part[2]}, d);
        std::copy(p.primal.begin(), p.primal.end(), part.begin());
        break;
      }
      case BlockTarget::kDualExponential: {
        const Triple d = unit ? Triple{1.0, 1.0, 1.0}
                              : Triple{b.scale[0], b.scale[1], b.scale[2]};
        const Triple p = ProjectRescaledDualExp({part[0], part[1], part[2]}, d);
        std::copy(p.begin(), p.end(), part.begin());
        break;
      }
    }
    ++projected;
  }
  return projected;
}

}  // namespace conicpd
