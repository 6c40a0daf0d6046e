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

#include "conicpd/generators.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "conicpd/rng.h"

namespace conicpd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream ids. Each random quantity has its own stream so that the sampling
// order of one never shifts another.
enum Stream : std::uint64_t {
  kMatrixMask = 1,
  kMatrixValue = 2,
  kRepair = 3,
  kBudget = 4,
  kCoefficients = 5,
  kZeroMask = 6,
  kLoadings = 7,
  kIdiosyncratic = 8,
  kPerturbation = 9,
  kReturns = 10,
  kNeutral = 11,
};

// (0, 1]; keeps sampled nonzeros strictly positive.
double PositiveUniform(RandomStream& rng) { return 1.0 - rng.Uniform(); }

void RequirePositive(Index v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

void RequireSparsity(double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::invalid_argument("sparsity must lie in (0, 1]");
  }
}

// Row-major symmetric square root through an eigendecomposition.
Vector SymmetricSqrt(const Vector& sigma, Index n) {
  Eigen::MatrixXd s(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) s(i, j) = sigma[i * n + j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd half =
      eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
  Vector out(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out[i * n + j] = 0.5 * (half(i, j) + half(j, i));
  }
  return out;
}

}  // namespace

FisherInstance GenerateFisher(const FisherSpec& spec) {
  RequirePositive(spec.m, "fisher m");
  RequirePositive(spec.n, "fisher n");
  RequireSparsity(spec.sparsity);
  const Index m = spec.m;
  const Index n = spec.n;
  FisherInstance inst;
  inst.m = m;
  inst.n = n;
  inst.utility.assign(static_cast<std::size_t>(m * n), 0.0);

  RandomStream mask(spec.seed, kMatrixMask);
  RandomStream value(spec.seed, kMatrixValue);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (mask.Uniform() < spec.sparsity) {
        inst.utility[i * n + j] = PositiveUniform(value);
      }
    }
  }
  RandomStream repair(spec.seed, kRepair);
  for (Index i = 0; i < m; ++i) {
    bool any = false;
    for (Index j = 0; j < n; ++j) any = any || inst.utility[i * n + j] != 0.0;
    if (!any) {
      const auto j = static_cast<Index>(repair.Below(static_cast<std::uint64_t>(n)));
      inst.utility[i * n + j] = PositiveUniform(repair);
    }
  }
  for (Index j = 0; j < n; ++j) {
    bool any = false;
    for (Index i = 0; i < m; ++i) any = any || inst.utility[i * n + j] != 0.0;
    if (!any) {
      const auto i = static_cast<Index>(repair.Below(static_cast<std::uint64_t>(m)));
      inst.utility[i * n + j] = PositiveUniform(repair);
    }
  }
  RandomStream budget(spec.seed, kBudget);
  inst.budget.resize(static_cast<std::size_t>(m));
  for (double& w : inst.budget) w = PositiveUniform(budget);
  inst.supply.assign(static_cast<std::size_t>(n), 0.25);

  const Index nx = m * n;
  const Index nvar = nx + 2 * m;
  auto p_index = [&](Index i) { return nx + 2 * i; };
  auto t_index = [&](Index i) { return nx + 2 * i + 1; };
  const Index rows = n + m + 3 * m;
  std::vector<Triplet> entries;
  Vector h(static_cast<std::size_t>(rows), 0.0);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) entries.push_back({j, i * n + j, 1.0});
    h[j] = inst.supply[j];
  }
  for (Index i = 0; i < m; ++i) {
    const Index row = n + i;
    for (Index j = 0; j < n; ++j) {
      const double uij = inst.utility[i * n + j];
      if (uij != 0.0) entries.push_back({row, i * n + j, uij});
    }
    entries.push_back({row, t_index(i), -1.0});
  }
  for (Index i = 0; i < m; ++i) {
    const Index row = n + m + 3 * i;
    entries.push_back({row, p_index(i), 1.0});
    h[row + 1] = -1.0;
    entries.push_back({row + 2, t_index(i), 1.0});
  }

  ConicProgram& prog = inst.program;
  prog.G = SparseMatrix::FromTriplets(rows, nvar, entries);
  prog.h = std::move(h);
  prog.c.assign(static_cast<std::size_t>(nvar), 0.0);
  for (Index i = 0; i < m; ++i) prog.c[p_index(i)] = -inst.budget[i];
  prog.l.assign(static_cast<std::size_t>(nvar), -kInf);
  std::fill(prog.l.begin(), prog.l.begin() + nx, 0.0);
  prog.u.assign(static_cast<std::size_t>(nvar), kInf);
  prog.dual_cones.push_back({ConeKind::kZero, n + m});
  for (Index i = 0; i < m; ++i) prog.dual_cones.push_back({ConeKind::kExponential, 3});

  inst.feasible_x.assign(static_cast<std::size_t>(nvar), 0.0);
  for (Index i = 0; i < m; ++i) {
    double t = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double xij = inst.supply[j] / static_cast<double>(m);
      inst.feasible_x[i * n + j] = xij;
      t += inst.utility[i * n + j] * xij;
    }
    inst.feasible_x[t_index(i)] = t;
    inst.feasible_x[p_index(i)] = std::log(t) - 1.0;
  }
  return inst;
}

LassoInstance GenerateLasso(const LassoSpec& spec) {
  RequirePositive(spec.m, "lasso m");
  RequirePositive(spec.n, "lasso n");
  RequireSparsity(spec.sparsity);
  const Index m = spec.m;
  const Index n = spec.n;
  LassoInstance inst;
  inst.m = m;
  inst.n = n;

  RandomStream mask(spec.seed, kMatrixMask);
  RandomStream value(spec.seed, kMatrixValue);
  std::vector<Triplet> a_entries;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (mask.Uniform() < spec.sparsity) {
        a_entries.push_back({i, j, PositiveUniform(value)});
      }
    }
  }
  if (a_entries.empty()) {
    RandomStream repair(spec.seed, kRepair);
    const auto i = static_cast<Index>(repair.Below(static_cast<std::uint64_t>(m)));
    const auto j = static_cast<Index>(repair.Below(static_cast<std::uint64_t>(n)));
    a_entries.push_back({i, j, PositiveUniform(repair)});
  }
  inst.a = SparseMatrix::FromTriplets(m, n, a_entries);

  RandomStream coef(spec.seed, kCoefficients);
  Vector x_true(static_cast<std::size_t>(n));
  for (double& v : x_true) v = coef.Normal();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  RandomStream zero(spec.seed, kZeroMask);
  const Index zeros = n / 2;
  for (Index k = 0; k < zeros; ++k) {
    const auto pick =
        k + static_cast<Index>(zero.Below(static_cast<std::uint64_t>(n - k)));
    std::swap(order[k], order[pick]);
    x_true[order[k]] = 0.0;
  }
  inst.b = Spmv(inst.a, x_true);
  for (double& v : inst.b) v += 1e-6;
  inst.lambda = NormInf(SpmvT(inst.a, inst.b));

  const Index nvar = 2 * n + 2 + m;
  const Index s_index = 2 * n;
  const Index d_index = 2 * n + 1;
  const Index y_start = 2 * n + 2;
  std::vector<Triplet> entries;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  entries.push_back({0, s_index, inv_sqrt2});
  entries.push_back({0, d_index, inv_sqrt2});
  for (Index i = 0; i < m; ++i) entries.push_back({1 + i, y_start + i, 1.0});
  for (const Triplet& t : inst.a.ToTriplets()) {
    entries.push_back({1 + t.row, t.col, -t.value});
    entries.push_back({1 + t.row, n + t.col, t.value});
  }
  ConicProgram& prog = inst.program;
  prog.G = SparseMatrix::FromTriplets(1 + m, nvar, entries);
  prog.h.assign(static_cast<std::size_t>(1 + m), 0.0);
  prog.h[0] = 1.0;
  for (Index i = 0; i < m; ++i) prog.h[1 + i] = -inst.b[i];
  prog.c.assign(static_cast<std::size_t>(nvar), 0.0);
  for (Index j = 0; j < 2 * n; ++j) prog.c[j] = inst.lambda;
  prog.c[s_index] = std::numbers::sqrt2;
  prog.c[d_index] = -std::numbers::sqrt2;
  prog.l.assign(static_cast<std::size_t>(2 * n), 0.0);
  prog.u.assign(static_cast<std::size_t>(2 * n), kInf);
  prog.primal_cones.push_back({ConeKind::kSecondOrder, m + 2});
  prog.dual_cones.push_back({ConeKind::kZero, 1 + m});

  inst.feasible_x.assign(static_cast<std::size_t>(nvar), 0.0);
  const double w = 1.0;
  const double r = 0.5 * Dot(inst.b, inst.b);
  inst.feasible_x[s_index] = (w + r) * inv_sqrt2;
  inst.feasible_x[d_index] = (w - r) * inv_sqrt2;
  for (Index i = 0; i < m; ++i) inst.feasible_x[y_start + i] = -inst.b[i];
  return inst;
}

Vector LassoCoefficients(const LassoInstance& instance,
                         std::span<const double> x) {
  Vector coef(static_cast<std::size_t>(instance.n));
  for (Index j = 0; j < instance.n; ++j) coef[j] = x[j] - x[instance.n + j];
  return coef;
}

double LassoObjective(const LassoInstance& instance, std::span<const double> x) {
  const Vector coef = LassoCoefficients(instance, x);
  Vector res = Spmv(instance.a, coef);
  double value = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const double e = res[i] - instance.b[i];
    value += e * e;
  }
  double l1 = 0.0;
  for (double v : coef) l1 += std::abs(v);
  return value + instance.lambda * l1;
}

MpoInstance GenerateMpo(const MpoSpec& spec) {
  RequirePositive(spec.periods, "mpo periods");
  if (spec.n < 2) throw std::invalid_argument("mpo n must be >= 2");
  const Index periods = spec.periods;
  const Index n = spec.n;
  constexpr Index kFactors = 5;
  MpoInstance inst;
  inst.periods = periods;
  inst.n = n;
  inst.gamma2 = spec.gamma2;
  inst.gamma3 = spec.gamma3;
  inst.w0.assign(static_cast<std::size_t>(n + 1), 1.0 / static_cast<double>(n));
  inst.w0[n] = 0.0;
  inst.w_bench.assign(static_cast<std::size_t>(n + 1), 0.0);
  inst.w_bench[n] = 1.0;
  const Vector& w_equal = inst.w0;

  RandomStream loadings(spec.seed, kLoadings);
  Vector factor(static_cast<std::size_t>(n * kFactors));
  for (double& v : factor) v = loadings.Normal();
  RandomStream idio(spec.seed, kIdiosyncratic);
  Vector diag(static_cast<std::size_t>(n));
  for (double& v : diag) v = idio.Uniform(0.01, 0.1);
  RandomStream perturb(spec.seed, kPerturbation);
  RandomStream returns(spec.seed, kReturns);
  RandomStream neutral(spec.seed, kNeutral);

  for (Index tau = 0; tau < periods; ++tau) {
    Vector f = factor;
    for (double& v : f) v += 0.1 * perturb.Normal();
    Vector sigma(static_cast<std::size_t>(n * n), 0.0);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        double s = 0.0;
        for (Index k = 0; k < kFactors; ++k) s += f[i * kFactors + k] * f[j * kFactors + k];
        if (i == j) s += diag[i];
        sigma[i * n + j] = 1e-4 * s;
      }
    }
    Vector half = SymmetricSqrt(sigma, n);
    // Keep the equal-weight portfolio strictly inside the weighted-u limit.
    double weighted = 0.0;
    for (Index i = 0; i < n; ++i) {
      weighted += half[i * n + i] * std::abs(w_equal[i] - inst.w_bench[i]);
    }
    if (weighted > 0.5 * spec.gamma3) {
      const double shrink = 0.5 * spec.gamma3 / weighted;
      for (double& v : half) v *= shrink;
      for (double& v : sigma) v *= shrink * shrink;
    }

    Vector r(static_cast<std::size_t>(n + 1), 0.0);
    for (Index i = 0; i < n; ++i) r[i] = returns.Uniform(-0.01, 0.03);

    // Neutral direction with Sigma w_equal projected out, normalized so the
    // row Sigma w^m has unit infinity norm.
    Vector a(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) a[i] += sigma[i * n + j] * w_equal[j];
    }
    Vector g(static_cast<std::size_t>(n));
    for (double& v : g) v = neutral.Normal();
    const double coef = Dot(g, a) / Dot(a, a);
    for (Index i = 0; i < n; ++i) g[i] -= coef * a[i];
    Vector row(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) row[i] += sigma[i * n + j] * g[j];
    }
    const double scale = NormInf(row);
    for (double& v : g) v /= scale;

    double risk2 = 0.0;
    for (Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (Index j = 0; j < n; ++j) s += half[i * n + j] * (w_equal[j] - inst.w_bench[j]);
      risk2 += s * s;
    }
    inst.sigma.push_back(std::move(sigma));
    inst.sigma_half.push_back(std::move(half));
    inst.returns.push_back(std::move(r));
    inst.neutral.push_back(std::move(g));
    inst.gamma1.push_back(std::sqrt(risk2));
  }

  const Index per_vars = 3 * n + 2;
  const Index per_rows = 4 * n + 5;
  const Index nvar = periods * per_vars;
  const Index rows = periods * per_rows;
  std::vector<Triplet> entries;
  Vector h(static_cast<std::size_t>(rows), 0.0);
  ConicProgram& prog = inst.program;
  prog.c.assign(static_cast<std::size_t>(nvar), 0.0);
  prog.l.assign(static_cast<std::size_t>(nvar), -kInf);
  prog.u.assign(static_cast<std::size_t>(nvar), kInf);
  for (Index tau = 0; tau < periods; ++tau) {
    const Index w = inst.WOffset(tau);
    const Index z = inst.ZOffset(tau);
    const Index u = inst.UOffset(tau);
    const Index base = tau * per_rows;
    const Vector& sigma = inst.sigma[tau];
    const Vector& half = inst.sigma_half[tau];
    for (Index k = 0; k <= n; ++k) {
      prog.c[w + k] = -inst.returns[tau][k];
      prog.l[w + k] = 0.0;
      prog.l[z + k] = -spec.gamma2;
      prog.u[z + k] = spec.gamma2;
    }
    // Zero block.
    for (Index k = 0; k <= n; ++k) {
      entries.push_back({base + k, z + k, 1.0});
      entries.push_back({base + k, w + k, -1.0});
      if (tau > 0) {
        entries.push_back({base + k, inst.WOffset(tau - 1) + k, 1.0});
      } else {
        h[base + k] = -inst.w0[k];
      }
    }
    for (Index k = 0; k <= n; ++k) entries.push_back({base + n + 1, z + k, 1.0});
    for (Index i = 0; i < n; ++i) {
      double coef = 0.0;
      for (Index j = 0; j < n; ++j) coef += inst.neutral[tau][j] * sigma[j * n + i];
      if (coef != 0.0) entries.push_back({base + n + 2, w + i, coef});
    }
    // NonNeg block.
    const Index nn = base + n + 3;
    for (Index i = 0; i < n; ++i) {
      entries.push_back({nn + i, u + i, 1.0});
      entries.push_back({nn + i, w + i, -1.0});
      h[nn + i] = -inst.w_bench[i];
      entries.push_back({nn + n + i, u + i, 1.0});
      entries.push_back({nn + n + i, w + i, 1.0});
      h[nn + n + i] = inst.w_bench[i];
      entries.push_back({nn + 2 * n, u + i, -half[i * n + i]});
    }
    h[nn + 2 * n] = -spec.gamma3;
    // Second-order block.
    const Index soc = nn + 2 * n + 1;
    h[soc] = -inst.gamma1[tau];
    for (Index i = 0; i < n; ++i) {
      double shift = 0.0;
      for (Index j = 0; j < n; ++j) {
        const double v = half[i * n + j];
        if (v != 0.0) entries.push_back({soc + 1 + i, w + j, v});
        shift += v * inst.w_bench[j];
      }
      h[soc + 1 + i] = shift;
    }
    prog.dual_cones.push_back({ConeKind::kZero, n + 3});
    prog.dual_cones.push_back({ConeKind::kNonNeg, 2 * n + 1});
    prog.dual_cones.push_back({ConeKind::kSecondOrder, n + 1});
  }
  prog.G = SparseMatrix::FromTriplets(rows, nvar, entries);
  prog.h = std::move(h);

  inst.feasible_x.assign(static_cast<std::size_t>(nvar), 0.0);
  for (Index tau = 0; tau < periods; ++tau) {
    for (Index k = 0; k <= n; ++k) inst.feasible_x[inst.WOffset(tau) + k] = w_equal[k];
    for (Index i = 0; i < n; ++i) {
      inst.feasible_x[inst.UOffset(tau) + i] = std::abs(w_equal[i] - inst.w_bench[i]);
    }
  }
  return inst;
}

double MpoMaxViolation(const MpoInstance& inst, std::span<const double> x) {
  const Index n = inst.n;
  double worst = 0.0;
  auto note = [&worst](double v) { worst = std::max(worst, v); };
  for (Index tau = 0; tau < inst.periods; ++tau) {
    const double* w = x.data() + inst.WOffset(tau);
    const double* u = x.data() + inst.UOffset(tau);
    const double* prev = tau == 0 ? inst.w0.data() : x.data() + inst.WOffset(tau - 1);
    const Vector& sigma = inst.sigma[tau];
    const Vector& half = inst.sigma_half[tau];
    double budget = 0.0;
    for (Index k = 0; k <= n; ++k) {
      budget += w[k] - prev[k];
      note(-w[k]);
      note(std::abs(w[k] - prev[k]) - inst.gamma2);
    }
    note(std::abs(budget));
    double neutrality = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        neutrality += inst.neutral[tau][i] * sigma[i * n + j] * w[j];
      }
    }
    note(std::abs(neutrality));
    double weighted = 0.0;
    double risk2 = 0.0;
    for (Index i = 0; i < n; ++i) {
      note(std::abs(w[i] - inst.w_bench[i]) - u[i]);
      weighted += half[i * n + i] * u[i];
      double s = 0.0;
      for (Index j = 0; j < n; ++j) s += half[i * n + j] * (w[j] - inst.w_bench[j]);
      risk2 += s * s;
    }
    note(weighted - inst.gamma3);
    note(std::sqrt(risk2) - inst.gamma1[tau]);
  }
  return worst;
}

}  // namespace conicpd
