// Copyright 2026 The qdf developers
//
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

#include "qdf/probabilistic.hpp"

#include <cmath>
#include <sstream>

namespace qdf {

namespace {

constexpr double kChildTol = 1e-8;  // validation slack for split children

// restore Hermiticity and the exact output partial trace of a Choi candidate
Matrix cleanup_choi(Matrix c, Index d) {
  c = (c + c.adjoint()).eval() / 2.0;
  const Matrix y = partial_trace(c, {d, d}, 1) - identity(d) / static_cast<double>(d);
  c -= kron(identity(d), y) / static_cast<double>(d);
  return c;
}

struct Peeler {
  double sv_tol;
  Index max_components;
  std::vector<ExtremeComponent> leaves;

  void recurse(const Matrix& choi, Index d, double weight, int depth) {
    if (static_cast<Index>(leaves.size()) >= max_components)
      throw InfeasibleError("decomposition budget exceeded");
    if (depth > 64)
      throw ValidationError("extreme_decompose: recursion depth exceeded");

    Channel leaf = Channel::from_choi(cleanup_choi(choi, d), kChildTol, kChildTol);
    ExtremalityVerdict verdict = extremality_test(leaf, sv_tol);
    if (verdict.is_extreme || verdict.m == 1) {
      ExtremeComponent comp{weight, std::move(leaf), verdict, false};
      comp.quasi_extreme =
          verdict.min_singular_value > sv_tol && verdict.min_singular_value <= 10 * sv_tol;
      leaves.push_back(std::move(comp));
      return;
    }

    // positive eigenpairs of the Choi matrix span the support
    const auto eig = sorted_eig_desc(leaf.choi().mat);
    const double cut = 1e-9 * std::max(eig.values(0), 0.0);
    Index m = 0;
    while (m < eig.values.size() && eig.values(m) > cut) ++m;
    const Matrix vp = eig.vectors.leftCols(m);
    const RealVector lam = eig.values.head(m);

    // canonical Kraus operators matching those eigenpairs
    std::vector<Matrix> ops;
    for (Index k = 0; k < m; ++k) {
      Matrix op(d, d);
      const double scale = std::sqrt(static_cast<double>(d) * lam(k));
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) op(i, j) = scale * vp(i * d + j, k);
      ops.push_back(std::move(op));
    }

    // dependence among the products from the smallest singular direction
    const Matrix stack = gram_stack(KrausSet(ops, kChildTol));
    Eigen::JacobiSVD<Matrix> svd(stack, Eigen::ComputeFullV);
    const Vector x = svd.matrixV().col(m * m - 1);
    Matrix xt(m, m);
    for (Index k = 0; k < m; ++k)
      for (Index j = 0; j < m; ++j) xt(j, k) = x(k * m + j);  // transposed reshape

    Matrix h = (xt + xt.adjoint()) / 2.0;
    if (max_abs(h) < 1e-8) h = ii * Matrix(xt - xt.adjoint()) / 2.0;
    h /= max_abs(h);

    // perturbation direction expressed on the support, and the distances to
    // the PSD boundary on both sides
    Matrix s(m, m);
    for (Index k = 0; k < m; ++k)
      for (Index j = 0; j < m; ++j) s(k, j) = h(k, j) * std::sqrt(lam(k) * lam(j));
    RealVector inv_sqrt(m);
    for (Index k = 0; k < m; ++k) inv_sqrt(k) = 1.0 / std::sqrt(lam(k));
    const Matrix n_mat =
        inv_sqrt.cast<cxd>().asDiagonal() * s * inv_sqrt.cast<cxd>().asDiagonal();
    const auto n_eig = sorted_eig_desc((n_mat + n_mat.adjoint()) / 2.0);
    const double mu_max = n_eig.values(0);
    const double mu_min = n_eig.values(n_eig.values.size() - 1);
    if (mu_max <= 1e-12 || -mu_min <= 1e-12)
      throw ValidationError("extreme_decompose: numerical degeneracy in the boundary step");

    const double t_plus = 1.0 / (-mu_min);
    const double t_minus = 1.0 / mu_max;
    const double split = t_minus / (t_plus + t_minus);

    const Matrix delta = vp * s * vp.adjoint();
    recurse(leaf.choi().mat + t_plus * delta, d, weight * split, depth + 1);
    recurse(leaf.choi().mat - t_minus * delta, d, weight * (1.0 - split), depth + 1);
  }
};

}  // namespace

std::vector<ExtremeComponent> extreme_decompose(const Channel& ch, double sv_tol,
                                                Index max_components) {
  const Index d = ch.dim();
  if (max_components <= 0) max_components = d * d * d * d;
  Peeler peeler{sv_tol, max_components, {}};
  peeler.recurse(ch.choi().mat, d, 1.0, 0);
  return std::move(peeler.leaves);
}

AverageRealization realize_on_average(const Channel& ch, const Initialization& init,
                                      double sv_tol) {
  const Index d = ch.dim();
  if (init.decomp.m != d)
    throw ValidationError("realize_on_average: subsystem dimension must equal d_S");

  auto comps = extreme_decompose(ch, sv_tol);
  AverageRealization out;
  out.eps_certified = init.epsilon;
  out.distribution.resize(static_cast<Index>(comps.size()));

  Matrix recon = Matrix::Zero(d * d, d * d);
  Matrix achieved_mix = Matrix::Zero(d * d, d * d);
  for (size_t j = 0; j < comps.size(); ++j) {
    out.distribution(static_cast<Index>(j)) = comps[j].weight;
    recon += comps[j].weight * comps[j].channel.choi().mat;
    if (comps[j].quasi_extreme) {
      std::ostringstream warn;
      warn << "component " << j << " is quasi-extreme (min singular value "
           << comps[j].verdict.min_singular_value << ")";
      out.warnings.push_back(warn.str());
    }
    DilationReport report = dilate_via_subsystem(comps[j].channel, init);
    achieved_mix += comps[j].weight *
                    channel_from_joint(report.w.mat, init.rho_e, d).choi().mat;
    out.dilations.push_back(std::move(report));
    out.component_channels.push_back(std::move(comps[j].channel));
  }

  out.reconstitution_residual = max_abs(Matrix(recon - ch.choi().mat));
  if (out.reconstitution_residual > 1e-8)
    throw ValidationError("realize_on_average: reconstitution residual above 1e-8");

  const Channel mixture = Channel::from_choi(cleanup_choi(achieved_mix, d) /
                                                 achieved_mix.trace().real(),
                                             kChildTol, kChildTol);
  out.avg_error_measured = channel_distance_1to1(mixture, ch).lower_bound;
  if (out.avg_error_measured > init.epsilon + 1e-8)
    throw ValidationError("realize_on_average: average error exceeds the certified bound");
  return out;
}

std::pair<Index, DilationReport> sample_realization(const AverageRealization& ar,
                                                    std::uint64_t seed) {
  Rng rng(seed);
  const double u = rng.uniform();
  double acc = 0.0;
  const Index n = ar.distribution.size();
  for (Index j = 0; j < n; ++j) {
    acc += ar.distribution(j);
    if (u < acc) return {j, ar.dilations[static_cast<size_t>(j)]};
  }
  return {n - 1, ar.dilations.back()};
}

}  // namespace qdf
