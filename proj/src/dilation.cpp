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

#include "qdf/dilation.hpp"

#include <cmath>
#include <sstream>

namespace qdf {

SubsystemDecomposition::SubsystemDecomposition(Index d_e_in, Index m_in, Index f_in,
                                               Matrix q_in)
    : d_e(d_e_in), m(m_in), f(f_in), r(d_e_in - m_in * f_in), q(std::move(q_in)) {
  if (m < 1 || f < 1 || r < 0)
    throw ValidationError("SubsystemDecomposition: need m, f >= 1 and m*f <= d_E");
  if (q.rows() != d_e || q.cols() != d_e)
    throw ValidationError("SubsystemDecomposition: Q must act on d_E");
  if (max_abs(Matrix(q.adjoint() * q - identity(d_e))) > tol::hermitian)
    throw ValidationError("SubsystemDecomposition: Q not unitary");
}

DensityOperator Initialization::reconstructed() const {
  const Index d_e = decomp.d_e;
  Matrix block = Matrix::Zero(d_e, d_e);
  block.topLeftCorner(decomp.m * decomp.f, decomp.m * decomp.f) =
      kron(Matrix(phi * phi.adjoint()), rho_f.mat);
  Matrix rho = decomp.q.adjoint() * block * decomp.q;
  return DensityOperator((rho + rho.adjoint()) / 2.0);
}

std::string to_string(DilationMethod m) {
  switch (m) {
    case DilationMethod::stinespring_pure: return "stinespring_pure";
    case DilationMethod::subsystem: return "subsystem";
    case DilationMethod::stochastic_unitary: return "stochastic_unitary";
    case DilationMethod::block_convex: return "block_convex";
    case DilationMethod::average: return "average";
  }
  return "unknown";
}

UnitaryOperator stinespring_complete(const KrausSet& ks) {
  const Index d = ks.dim();
  const Index m = ks.size();
  Matrix v(m * d, d);
  for (Index k = 0; k < m; ++k) v.block(k * d, 0, d, d) = ks.ops[k];
  // trace preservation makes the stacked operators an isometric embedding
  const Isometry embedding(std::move(v));
  return UnitaryOperator(complete_orthonormal(embedding.mat));
}

Initialization find_eps_pure_subsystem(const DensityOperator& rho_e, Index m, Index f) {
  const Index d_e = rho_e.dim();
  if (m < 1 || m > d_e)
    throw ValidationError("find_eps_pure_subsystem: need 1 <= m <= d_E");
  if (f == 0) f = d_e / m;
  if (f < 1 || m * f > d_e)
    throw ValidationError("find_eps_pure_subsystem: need 1 <= f and m*f <= d_E");

  const auto eig = sorted_eig_desc(rho_e.mat);
  // adapted basis = eigenvectors in descending order: block i_M of the
  // subsystem takes eigenvectors [i_M*f, (i_M+1)*f), remainder the tail
  const Matrix q = eig.vectors.adjoint();

  double head = 0.0;
  RealVector top(f);
  for (Index i = 0; i < f; ++i) {
    top(i) = std::max(0.0, eig.values(i));
    head += top(i);
  }
  Matrix rho_f = Matrix::Zero(f, f);
  rho_f.diagonal() = (top / head).cast<cxd>();

  Initialization init{SubsystemDecomposition(d_e, m, f, q), basis_ket(0, m),
                      DensityOperator(rho_f), 0.0, rho_e};
  init.epsilon = tv_distance(rho_e, init.reconstructed());
  return init;
}

Channel channel_from_joint(const Matrix& w, const DensityOperator& rho_env, Index d_sys) {
  const Index d_env = rho_env.dim();
  if (w.rows() != d_env * d_sys || w.cols() != w.rows())
    throw ValidationError("channel_from_joint: dimension mismatch");
  auto eig = sorted_eig_desc(rho_env.mat);
  RealVector p = eig.values.cwiseMax(0.0);
  p /= p.sum();

  std::vector<Matrix> ops;
  for (Index a = 0; a < d_env; ++a) {
    if (p(a) < 1e-14) continue;
    // W (|chi_a> (x) I_S), split over the output environment index
    Matrix wa = Matrix::Zero(d_env * d_sys, d_sys);
    for (Index ap = 0; ap < d_env; ++ap)
      wa += eig.vectors(ap, a) * w.middleCols(ap * d_sys, d_sys);
    for (Index b = 0; b < d_env; ++b)
      ops.push_back(std::sqrt(p(a)) * wa.middleRows(b * d_sys, d_sys));
  }
  return Channel::from_kraus(std::move(ops));
}

DilationReport dilate_via_subsystem(const Channel& target, const Initialization& init) {
  const Index d_s = target.dim();
  const Index m = init.decomp.m;
  const Index f = init.decomp.f;
  const Index r = init.decomp.r;
  const Index rank = kraus_rank(target);
  if (rank > m) {
    std::ostringstream msg;
    msg << "m-rank infeasible: target Kraus rank " << rank << " exceeds subsystem dimension "
        << m;
    throw InfeasibleError(msg.str());
  }

  // canonical Kraus set padded to m operators
  std::vector<Matrix> ops = choi_to_kraus(target.choi()).ops;
  while (static_cast<Index>(ops.size()) < m) ops.emplace_back(Matrix::Zero(d_s, d_s));
  const UnitaryOperator u_t0 = stinespring_complete(KrausSet(std::move(ops)));

  // rotate the subsystem so |phi> plays the reference role
  const Matrix reflect = basis_reflector(init.phi, 0);
  const Matrix u_t = u_t0.mat * kron(reflect, identity(d_s));

  // (U_T (x) I_F) (+) I_{R*S} in adapted coordinates, then back to physical
  const Index d_e = init.decomp.d_e;
  Matrix adapted = Matrix::Identity(d_e * d_s, d_e * d_s);
  adapted.topLeftCorner(m * f * d_s, m * f * d_s) =
      embed_operator(u_t, {m, f, d_s}, {0, 2});
  const Matrix q_joint = kron(init.decomp.q, identity(d_s));
  Matrix w = q_joint.adjoint() * adapted * q_joint;

  DilationReport report{UnitaryOperator(std::move(w)), init.rho_e, init.epsilon, 0.0,
                        DilationMethod::subsystem, ""};
  if (init.epsilon <= 1e-12 && r == 0 && f == 1)
    report.method = DilationMethod::stinespring_pure;

  const Channel achieved = channel_from_joint(report.w.mat, init.rho_e, d_s);
  report.eps_measured = channel_distance_1to1(achieved, target).lower_bound;
  if (report.eps_measured > report.eps_certified + 1e-8)
    throw ValidationError("dilate_via_subsystem: measured error exceeds certified bound");

  std::ostringstream diag;
  diag << "m=" << m << " f=" << f << " r=" << r << " rank=" << rank
       << " eps=" << init.epsilon;
  report.diagnostics = diag.str();
  return report;
}

double verify_dilation(const DilationReport& report, const Channel& target, int trials,
                       std::uint64_t seed) {
  const Index d_s = target.dim();
  const Index d_e = report.env_state.dim();
  if (report.w.dim() != d_e * d_s)
    throw ValidationError("verify_dilation: dimension mismatch");

  std::vector<Matrix> inputs;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t) + 1);
    const Vector psi = random_ket(d_s, rng);
    inputs.push_back(psi * psi.adjoint());
  }
  const Channel achieved = channel_from_joint(report.w.mat, report.env_state, d_s);
  inputs.push_back(channel_distance_1to1(achieved, target, 4, seed).argmax_state);

  std::vector<double> vals(inputs.size(), 0.0);
  parallel_for(static_cast<Index>(inputs.size()), [&](Index i) {
    // brute-force route: joint conjugation and explicit partial trace
    const Matrix joint =
        report.w.mat * kron(report.env_state.mat, inputs[i]) * report.w.mat.adjoint();
    const Matrix out = partial_trace(joint, {d_e, d_s}, 1);
    vals[i] = tv_distance_herm(out, apply_map(target.kraus(), inputs[i]));
  });
  double worst = 0.0;
  for (double v : vals) worst = std::max(worst, v);
  return worst;
}

}  // namespace qdf
