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

#include "qdf/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qdf {

namespace {

std::vector<Index> desc_order(const RealVector& v) {
  std::vector<Index> idx(v.size());
  std::iota(idx.begin(), idx.end(), Index(0));
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return v(a) > v(b); });
  return idx;
}

RealVector sorted_desc(const RealVector& v) {
  RealVector s = v;
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return s;
}

RealVector padded(const RealVector& v, Index n) {
  RealVector out = RealVector::Zero(n);
  out.head(v.size()) = v;
  return out;
}

// sorted descending on both sides; returns V with q = |V|^2 p
Matrix connect_sorted(const RealVector& p, const RealVector& q) {
  const Index n = p.size();
  if (n == 1) return Matrix::Identity(1, 1);
  if ((p - q).cwiseAbs().maxCoeff() < 1e-15) return identity(n);

  // smallest j with p_j >= q_0 >= p_{j+1}
  Index j = 0;
  while (j + 1 < n && p(j + 1) > q(0)) ++j;
  if (j + 1 == n) j = n - 2;

  const double denom = p(j) - p(j + 1);
  const double t = denom > 1e-15 ? std::clamp((q(0) - p(j + 1)) / denom, 0.0, 1.0) : 1.0;
  const double c = std::sqrt(t), s = std::sqrt(1.0 - t);

  Matrix rot = identity(n);
  rot(j, j) = c;
  rot(j, j + 1) = s;
  rot(j + 1, j) = -s;
  rot(j + 1, j + 1) = c;

  // cycle coordinate j to the front; the rotated coordinate j now carries
  // exactly q_0 and is never touched again
  Matrix perm = Matrix::Zero(n, n);
  perm(0, j) = 1.0;
  for (Index i = 1; i <= j; ++i) perm(i, i - 1) = 1.0;
  for (Index i = j + 1; i < n; ++i) perm(i, i) = 1.0;

  RealVector p_rest(n - 1);
  Index w = 0;
  for (Index i = 0; i < n; ++i) {
    if (i == j) continue;
    p_rest(w++) = (i == j + 1) ? p(j) + p(j + 1) - q(0) : p(i);
  }
  const Matrix tail = connect_sorted(p_rest, q.tail(n - 1));

  Matrix lift = Matrix::Zero(n, n);
  lift(0, 0) = 1.0;
  lift.bottomRightCorner(n - 1, n - 1) = tail;
  return lift * perm * rot;
}

}  // namespace

ProbabilityVector::ProbabilityVector(RealVector w) : weights(std::move(w)) {
  if (weights.size() == 0) throw ValidationError("ProbabilityVector: empty");
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) < -1e-12) throw ValidationError("ProbabilityVector: negative weight");
    if (weights(i) < 0.0) weights(i) = 0.0;
  }
  if (std::abs(weights.sum() - 1.0) > 1e-10)
    throw ValidationError("ProbabilityVector: weights do not sum to 1");
}

bool majorizes(const ProbabilityVector& p, const ProbabilityVector& q) {
  const Index n = std::max(p.size(), q.size());
  const RealVector ps = sorted_desc(padded(p.weights, n));
  const RealVector qs = sorted_desc(padded(q.weights, n));
  double dp = 0.0, dq = 0.0;
  for (Index k = 0; k < n; ++k) {
    dp += ps(k);
    dq += qs(k);
    if (dp - dq < -1e-12) return false;
  }
  return true;
}

Matrix unistochastic_connect(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (!majorizes(p, q))
    throw InfeasibleError("majorization violation: source spectrum does not majorize target");
  const Index n = std::max(p.size(), q.size());
  const RealVector pw = padded(p.weights, n);
  const RealVector qw = padded(q.weights, n);

  const auto p_idx = desc_order(pw);
  const auto q_idx = desc_order(qw);
  RealVector ps(n), qs(n);
  Matrix perm_p = Matrix::Zero(n, n), perm_q = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    ps(i) = pw(p_idx[i]);
    qs(i) = qw(q_idx[i]);
    perm_p(i, p_idx[i]) = 1.0;
    perm_q(i, q_idx[i]) = 1.0;
  }

  const Matrix v_sorted = connect_sorted(ps, qs);
  Matrix v = perm_q.transpose() * v_sorted * perm_p;

  RealVector achieved = RealVector::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) achieved(i) += std::norm(v(i, j)) * pw(j);
  if ((achieved - qw).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("unistochastic_connect: defining identity violated");
  return v;
}

StochasticUnitarySpec::StochasticUnitarySpec(std::vector<Matrix> us, ProbabilityVector w)
    : unitaries(std::move(us)), weights(std::move(w)) {
  if (unitaries.empty() || static_cast<Index>(unitaries.size()) != weights.size())
    throw ValidationError("StochasticUnitarySpec: size mismatch");
  const Index d = unitaries.front().rows();
  for (const Matrix& u : unitaries) {
    if (u.rows() != d || u.cols() != d ||
        max_abs(Matrix(u.adjoint() * u - identity(d))) > tol::hermitian)
      throw ValidationError("StochasticUnitarySpec: non-unitary element");
  }
  for (Index i = 0; i < weights.size(); ++i)
    if (weights.weights(i) <= 0.0)
      throw ValidationError("StochasticUnitarySpec: weights must be strictly positive");
}

Channel StochasticUnitarySpec::channel() const {
  return mixed_unitary_channel(unitaries, weights.weights);
}

ConvexCombinationSpec::ConvexCombinationSpec(std::vector<std::pair<double, Channel>> parts,
                                             double sv_tol) {
  if (parts.empty()) throw ValidationError("ConvexCombinationSpec: empty");
  double sum = 0.0;
  const Index d = parts.front().second.dim();
  for (auto& [w, ch] : parts) {
    if (w <= 0.0) throw ValidationError("ConvexCombinationSpec: weights must be positive");
    if (ch.dim() != d) throw ValidationError("ConvexCombinationSpec: dimension mismatch");
    sum += w;
    ExtremalityVerdict verdict = extremality_test(ch, sv_tol);
    if (!verdict.is_extreme)
      throw ValidationError("ConvexCombinationSpec: component is not extreme");
    components.push_back({w, std::move(ch), verdict});
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw ValidationError("ConvexCombinationSpec: weights do not sum to 1");
}

Channel ConvexCombinationSpec::combined() const {
  const Index d = dim();
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (const auto& c : components) choi += c.weight * c.channel.choi().mat;
  return Channel::from_choi(std::move(choi));
}

MixedInitialization mixed_subsystem_init(const DensityOperator& rho_e, Index m) {
  const Index d_e = rho_e.dim();
  if (m < 1 || m > d_e) throw ValidationError("mixed_subsystem_init: need 1 <= m <= d_E");
  const auto eig = sorted_eig_desc(rho_e.mat);

  RealVector p = eig.values.head(m).cwiseMax(0.0);
  p /= p.sum();

  MixedInitialization init{SubsystemDecomposition(d_e, m, 1, eig.vectors.adjoint()), p,
                           DensityOperator(identity(1)), 0.0, rho_e};
  Matrix block = Matrix::Zero(d_e, d_e);
  block.topLeftCorner(m, m).diagonal() = p.cast<cxd>();
  const Matrix rho_tilde = init.decomp.q.adjoint() * block * init.decomp.q;
  init.epsilon = tv_distance_herm(rho_e.mat, (rho_tilde + rho_tilde.adjoint()) / 2.0);
  return init;
}

DilationReport design_stochastic_unitary(const StochasticUnitarySpec& spec,
                                         const MixedInitialization& init) {
  const Index m = spec.size();
  const Index d_s = spec.dim();
  if (init.decomp.m != m)
    throw ValidationError("design_stochastic_unitary: subsystem dimension != unitary count");
  const ProbabilityVector p(init.subsystem_spectrum);
  if (!majorizes(p, spec.weights))
    throw InfeasibleError(
        "majorization violation: subsystem spectrum does not majorize the target weights");

  const Index f = init.decomp.f;
  const Index d_e = init.decomp.d_e;
  const Matrix v = unistochastic_connect(p, spec.weights);

  // V_E = (V (x) I_F) (+) I_R rotates the spectrum onto the weights, then
  // the conditional block applies U_j on the j-th subsystem coordinate
  Matrix v_e = identity(d_e);
  v_e.topLeftCorner(m * f, m * f) = kron(v, identity(f));

  Matrix cond = Matrix::Identity(d_e * d_s, d_e * d_s);
  Matrix top = Matrix::Zero(m * f * d_s, m * f * d_s);
  for (Index j = 0; j < m; ++j) {
    Matrix proj = Matrix::Zero(m, m);
    proj(j, j) = 1.0;
    top += kron(proj, kron(identity(f), spec.unitaries[j]));
  }
  cond.topLeftCorner(m * f * d_s, m * f * d_s) = top;

  const Matrix q_joint = kron(init.decomp.q, identity(d_s));
  Matrix w = q_joint.adjoint() * cond * kron(v_e, identity(d_s)) * q_joint;

  DilationReport report{UnitaryOperator(std::move(w)), init.rho_e, init.epsilon, 0.0,
                        DilationMethod::stochastic_unitary, ""};
  const Channel target = spec.channel();
  const Channel achieved = channel_from_joint(report.w.mat, init.rho_e, d_s);
  report.eps_measured = channel_distance_1to1(achieved, target).lower_bound;
  if (report.eps_measured > report.eps_certified + 1e-8)
    throw ValidationError("design_stochastic_unitary: measured error exceeds the bound");

  std::ostringstream diag;
  diag << "m=" << m << " f=" << f << " r=" << init.decomp.r << " eps=" << init.epsilon;
  report.diagnostics = diag.str();
  return report;
}

DilationReport block_convex_design(const ConvexCombinationSpec& spec,
                                   const DensityOperator& rho_e) {
  const Index d_s = spec.dim();
  const Index k_count = spec.count();
  const Index d_e = rho_e.dim();

  // (I) spectrum descending, weights sorted to match
  const auto eig = sorted_eig_desc(rho_e.mat);
  std::vector<const ConvexCombinationSpec::Component*> comps;
  for (const auto& c : spec.components) comps.push_back(&c);
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto* a, const auto* b) { return a->weight > b->weight; });
  RealVector q(k_count);
  for (Index k = 0; k < k_count; ++k) q(k) = comps[k]->weight;

  // (II) smallest dimension-feasible cofactor size whose leading eigenvalue
  // mass reaches the leading weight
  const Index f_max = d_e / (k_count * d_s);
  if (f_max < 1)
    throw InfeasibleError("method not viable: environment dimension below K*d_S");
  Index f = 0;
  double head = 0.0;
  for (Index n = 1; n <= f_max; ++n) {
    head += std::max(0.0, eig.values(n - 1));
    if (head >= q(0) - 1e-9) {
      f = n;
      break;
    }
  }
  if (f == 0)
    throw InfeasibleError(
        "method not viable: no feasible cofactor size covers the leading weight");

  // prefix dominance for every component
  double lam_sum = 0.0, q_sum = 0.0;
  for (Index k = 0; k < k_count; ++k) {
    for (Index l = k * f; l < (k + 1) * f; ++l) lam_sum += std::max(0.0, eig.values(l));
    q_sum += q(k);
    if (lam_sum < q_sum - 1e-9) {
      std::ostringstream msg;
      msg << "method not viable: eigenvalue prefix " << lam_sum << " below weight prefix "
          << q_sum << " at component " << (k + 1);
      throw InfeasibleError(msg.str());
    }
  }

  // (III) everything outside the first K*f eigenvectors must be kernel
  for (Index l = k_count * f; l < d_e; ++l) {
    if (eig.values(l) >= 1e-12) {
      std::ostringstream msg;
      msg << "insufficient kernel: eigenvalue " << eig.values(l) << " at position " << l
          << " lies outside the designated blocks";
      throw InfeasibleError(msg.str());
    }
  }
  const Index kernel_needed = (d_s - 1) * k_count * f;
  const Index kernel_have = d_e - k_count * f;
  if (kernel_have < kernel_needed) {
    std::ostringstream msg;
    msg << "insufficient kernel: need " << kernel_needed << " free dimensions, have "
        << kernel_have;
    throw InfeasibleError(msg.str());
  }

  // block weights carried by each group of f eigenvectors
  RealVector q_tilde(k_count);
  for (Index k = 0; k < k_count; ++k) {
    double s = 0.0;
    for (Index l = k * f; l < (k + 1) * f; ++l) s += std::max(0.0, eig.values(l));
    q_tilde(k) = s;
  }
  q_tilde /= q_tilde.sum();

  // adapted basis: block k rows = its f eigenvectors followed by kernel
  // vectors, remainder at the tail
  Matrix assembled(d_e, d_e);
  Index kernel_next = k_count * f;
  for (Index k = 0; k < k_count; ++k) {
    const Index base = k * d_s * f;
    for (Index i = 0; i < f; ++i) assembled.col(base + i) = eig.vectors.col(k * f + i);
    for (Index i = f; i < d_s * f; ++i)
      assembled.col(base + i) = eig.vectors.col(kernel_next++);
  }
  for (Index i = k_count * d_s * f; i < d_e; ++i)
    assembled.col(i) = eig.vectors.col(kernel_next++);
  const Matrix q_change = assembled.adjoint();

  // (IV) unistochastic mixing of the block weights, then the conditional
  // Stinespring blocks
  const Matrix v = unistochastic_connect(ProbabilityVector(q_tilde), ProbabilityVector(q));
  Matrix v_e = identity(d_e);
  for (Index i_f = 0; i_f < f; ++i_f)
    for (Index a = 0; a < k_count; ++a)
      for (Index b = 0; b < k_count; ++b) v_e(a * d_s * f + i_f, b * d_s * f + i_f) = v(a, b);

  Matrix cond = Matrix::Identity(d_e * d_s, d_e * d_s);
  for (Index k = 0; k < k_count; ++k) {
    std::vector<Matrix> ops = choi_to_kraus(comps[k]->channel.choi()).ops;
    while (static_cast<Index>(ops.size()) < d_s) ops.emplace_back(Matrix::Zero(d_s, d_s));
    const UnitaryOperator u_k = stinespring_complete(KrausSet(std::move(ops)));
    const Index base = k * d_s * f * d_s;
    cond.block(base, base, d_s * f * d_s, d_s * f * d_s) =
        embed_operator(u_k.mat, {d_s, f, d_s}, {0, 2});
  }

  const Matrix q_joint = kron(q_change, identity(d_s));
  Matrix w = q_joint.adjoint() * cond * kron(v_e, identity(d_s)) * q_joint;

  DilationReport report{UnitaryOperator(std::move(w)), rho_e, 0.0, 0.0,
                        DilationMethod::block_convex, ""};
  const Channel achieved = channel_from_joint(report.w.mat, rho_e, d_s);
  report.eps_measured = channel_distance_1to1(achieved, spec.combined()).lower_bound;
  if (report.eps_measured > 1e-8)
    throw ValidationError("block_convex_design: constructed dilation is not exact");

  std::ostringstream diag;
  diag << "K=" << k_count << " f=" << f << " d_E=" << d_e << " kernel=" << kernel_have;
  report.diagnostics = diag.str();
  return report;
}

}  // namespace qdf
