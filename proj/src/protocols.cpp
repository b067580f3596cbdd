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

#include "qdf/protocols.hpp"

#include <cmath>
#include <sstream>

namespace qdf {

namespace {

// unitary polar factor of m against its PSD modulus c (m = u * c), the
// kernel columns filled deterministically
Matrix polar_unitary(const Matrix& m, const Matrix& c) {
  const Index d = m.rows();
  const auto eig = sorted_eig_desc(c);
  Index support = 0;
  while (support < d && eig.values(support) > 1e-10) ++support;

  Matrix u_cols(d, support);
  for (Index k = 0; k < support; ++k)
    u_cols.col(k) = m * eig.vectors.col(k) / eig.values(k);
  const Matrix completed = complete_orthonormal(u_cols);

  Matrix u = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) u += completed.col(k) * eig.vectors.col(k).adjoint();
  return u;
}

Matrix hadamard2() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

// orthonormal basis of the column span (deterministic Gram-Schmidt)
Matrix orthonormal_range(const Matrix& m, double tol = 1e-10) {
  Matrix out(m.rows(), m.cols());
  Index have = 0;
  for (Index c = 0; c < m.cols(); ++c) {
    Vector v = m.col(c);
    for (int pass = 0; pass < 2; ++pass)
      v -= out.leftCols(have) * (out.leftCols(have).adjoint() * v).eval();
    const double n = v.norm();
    if (n > tol) out.col(have++) = v / n;
  }
  return out.leftCols(have);
}

// entangling sequence followed by the conditional gate on ancilla (x) system
Matrix rank2_joint_unitary(const RankTwoTarget& target, const AveragingSchedule& schedule) {
  const Index d = target.dim();
  const Index joint = 2 * d;
  Matrix u_avg = Matrix::Identity(joint, joint);
  if (target.theta > 1e-14) {
    Matrix cycle = Matrix::Identity(joint, joint);
    const double dt = target.theta / schedule.cycles;
    for (Index k = 0; k < schedule.sub_weights.size(); ++k) {
      const Matrix shape =
          schedule.rotations[k] * schedule.pi_s * schedule.rotations[k].adjoint();
      cycle = expm_herm(kron(pauli_x(), shape), dt * schedule.sub_weights(k)) * cycle;
    }
    for (int n = 0; n < schedule.cycles; ++n) u_avg = cycle * u_avg;
  }
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  // the sin branch of exp(-i theta X (x) P) carries a -i that the
  // conditional gate absorbs
  const Matrix u_cond = kron(p0, target.u0) + kron(p1, Matrix(ii * target.u1));
  return u_cond * u_avg;
}

Matrix rank2_ideal_unitary(const RankTwoTarget& target) {
  const Matrix theta_p = target.theta * target.p;
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const Matrix u_cond = kron(p0, target.u0) + kron(p1, Matrix(ii * target.u1));
  const Matrix entangler =
      kron(identity(2), mat_cos(theta_p)) - ii * kron(pauli_x(), mat_sin(theta_p));
  return u_cond * entangler;
}

}  // namespace

RankTwoTarget polar_extract(const Matrix& m0, const Matrix& m1, double tp_tol) {
  const Index d = m0.rows();
  if (m1.rows() != d || m0.cols() != d || m1.cols() != d)
    throw ValidationError("polar_extract: operators must be square with equal dimension");
  if (max_abs(Matrix(m0.adjoint() * m0 + m1.adjoint() * m1 - identity(d))) > tp_tol)
    throw ValidationError("polar_extract: pair is not trace-preserving");

  RankTwoTarget out;
  out.m0 = m0;
  out.m1 = m1;

  const Matrix c = mat_sqrt_psd(m0.adjoint() * m0);
  const Matrix theta_p = mat_arccos(c);
  out.theta = theta_p.trace().real();
  if (out.theta > 1e-12) {
    out.p = theta_p / out.theta;
  } else {
    out.theta = 0.0;
    out.p = Matrix::Zero(d, d);
    out.p(0, 0) = 1.0;
  }

  out.u0 = polar_unitary(m0, c);
  const Matrix s = mat_sin(theta_p);
  if (max_abs(s) < 1e-12) {
    out.u1 = identity(d);
    out.sin_branch_degenerate = true;
  } else {
    out.u1 = polar_unitary(m1, s);
  }

  if (max_abs(Matrix(out.u0 * c - m0)) > 1e-9 || max_abs(Matrix(out.u1 * s - m1)) > 1e-9)
    throw ValidationError("polar_extract: reconstruction residual above 1e-9");
  return out;
}

AveragingSchedule::AveragingSchedule(int n, RealVector lambdas, std::vector<Matrix> vs,
                                     Matrix pi)
    : cycles(n), sub_weights(std::move(lambdas)), rotations(std::move(vs)), pi_s(std::move(pi)) {
  if (cycles < 1) throw ValidationError("AveragingSchedule: need at least one cycle");
  if (sub_weights.size() != static_cast<Index>(rotations.size()) || rotations.empty())
    throw ValidationError("AveragingSchedule: weight/rotation size mismatch");
  if (sub_weights.minCoeff() < -1e-12 || std::abs(sub_weights.sum() - 1.0) > 1e-10)
    throw ValidationError("AveragingSchedule: sub-interval weights must be convex");
  const Index d = pi_s.rows();
  if (!is_hermitian(pi_s) || max_abs(Matrix(pi_s * pi_s - pi_s)) > 1e-10 ||
      std::abs(pi_s.trace().real() - 1.0) > 1e-10)
    throw ValidationError("AveragingSchedule: pi_s must be a rank-one projector");
  for (const Matrix& v : rotations)
    if (v.rows() != d || max_abs(Matrix(v.adjoint() * v - identity(d))) > tol::hermitian)
      throw ValidationError("AveragingSchedule: rotations must be unitary on the system");
}

Matrix AveragingSchedule::averaged_shape() const {
  Matrix p = Matrix::Zero(pi_s.rows(), pi_s.cols());
  for (Index k = 0; k < sub_weights.size(); ++k)
    p += sub_weights(k) * rotations[k] * pi_s * rotations[k].adjoint();
  return p;
}

AveragingSchedule schedule_for_target(const RankTwoTarget& target, int cycles) {
  const Index d = target.dim();
  const auto eig = sorted_eig_desc(target.p);
  std::vector<double> lams;
  std::vector<Matrix> rots;
  for (Index k = 0; k < d; ++k) {
    if (eig.values(k) <= 1e-12) continue;
    lams.push_back(eig.values(k));
    rots.push_back(basis_reflector(eig.vectors.col(k), 0));
  }
  RealVector lambdas(static_cast<Index>(lams.size()));
  for (size_t i = 0; i < lams.size(); ++i) lambdas(static_cast<Index>(i)) = lams[i];
  lambdas /= lambdas.sum();
  Matrix pi = Matrix::Zero(d, d);
  pi(0, 0) = 1.0;
  return AveragingSchedule(cycles, std::move(lambdas), std::move(rots), std::move(pi));
}

RankTwoSimResult simulate_rank2(const RankTwoTarget& target,
                                const AveragingSchedule& schedule,
                                const DensityOperator& ancilla) {
  if (ancilla.dim() != 2) throw ValidationError("simulate_rank2: ancilla must be a qubit");
  if (schedule.pi_s.rows() != target.dim() ||
      (target.theta > 1e-12 &&
       max_abs(Matrix(schedule.averaged_shape() - target.p)) > 1e-8))
    throw ValidationError("simulate_rank2: schedule does not average to the target shape");

  RankTwoSimResult out{channel_from_joint(rank2_joint_unitary(target, schedule), ancilla,
                                          target.dim()),
                       channel_from_joint(rank2_ideal_unitary(target), ancilla, target.dim()),
                       0.0};
  out.trotter_error = channel_distance_1to1(out.achieved, out.ideal).lower_bound;
  return out;
}

RankThreeSimResult simulate_rank3_nested(const Matrix& m0, const Matrix& m1,
                                         const Matrix& m2, int cycles_per_stage) {
  const Index d = m0.rows();
  if (max_abs(Matrix(m0.adjoint() * m0 + m1.adjoint() * m1 + m2.adjoint() * m2 -
                     identity(d))) > tol::eq)
    throw ValidationError("simulate_rank3_nested: triple is not trace-preserving");

  // intermediate modulus carrying the weight of both tail operators
  const Matrix mid = mat_sqrt_psd(m1.adjoint() * m1 + m2.adjoint() * m2);
  const RankTwoTarget stage1 = polar_extract(m0, mid, 1e-8);

  const auto eig = sorted_eig_desc(mid);
  Index support = 0;
  while (support < d && eig.values(support) > 1e-10) ++support;
  Matrix pinv = Matrix::Zero(d, d);
  Matrix proj = Matrix::Zero(d, d);
  for (Index k = 0; k < support; ++k) {
    pinv += eig.vectors.col(k) * eig.vectors.col(k).adjoint() / eig.values(k);
    proj += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  const bool pseudo_inverse_used = support < d;
  if (pseudo_inverse_used) {
    if (max_abs(Matrix(m1 * (identity(d) - proj))) > 1e-8 ||
        max_abs(Matrix(m2 * (identity(d) - proj))) > 1e-8)
      throw ValidationError("simulate_rank3_nested: tail operators leak outside the support");
  }

  // complete the lifted leading operator on ker(mid): an isometry from the
  // kernel into the orthocomplement of range(m1 * pinv) keeps the stage-2
  // pair trace preserving
  Matrix completion = Matrix::Zero(d, d);
  if (support < d) {
    const Matrix r1 = orthonormal_range(m1 * pinv);
    const Matrix full = complete_orthonormal(r1);
    const Matrix targets = full.rightCols(d - support);
    for (Index i = 0; i < d - support; ++i)
      completion += targets.col(i) * eig.vectors.col(support + i).adjoint();
  }
  const Matrix m0p = m1 * pinv + completion;
  const Matrix m1p = m2 * pinv;
  const double stage2_tp_residual =
      max_abs(Matrix(m0p.adjoint() * m0p + m1p.adjoint() * m1p - identity(d)));
  const RankTwoTarget stage2 = polar_extract(m0p, m1p, 1e-7);

  const Matrix w1 = rank2_joint_unitary(stage1, schedule_for_target(stage1, cycles_per_stage));
  const Matrix w2 = rank2_joint_unitary(stage2, schedule_for_target(stage2, cycles_per_stage));

  // ancilla 1 (x) ancilla 2 (x) system; stage 2 fires on ancilla-1 |1>
  const std::vector<Index> dims{2, 2, d};
  const Matrix w1_full = embed_operator(w1, dims, {0, 2});
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const Matrix w2_cond = kron(p0, identity(2 * d)) + kron(p1, w2);
  const Matrix w_total = w2_cond * w1_full;

  Matrix anc = Matrix::Zero(4, 4);
  anc(0, 0) = 1.0;  // both ancilla qubits in |0>
  return RankThreeSimResult{channel_from_joint(w_total, DensityOperator(anc), d),
                            stage2_tp_residual, pseudo_inverse_used};
}

NoisyAncillaResult noisy_ancilla_rank2(const RankTwoTarget& target, double w0, double w1,
                                       cxd q, const DensityOperator& rho_probe) {
  if (std::abs(w0 + w1 - 1.0) > 1e-10 || w0 < -1e-12 || w1 < -1e-12 ||
      std::norm(q) > w0 * w1 + 1e-12)
    throw ValidationError("noisy_ancilla_rank2: invalid ancilla state");
  if (rho_probe.dim() != target.dim())
    throw ValidationError("noisy_ancilla_rank2: probe dimension mismatch");

  Matrix rho_e(2, 2);
  rho_e << w0, q, std::conj(q), w1;
  NoisyAncillaResult out{
      channel_from_joint(rank2_ideal_unitary(target), DensityOperator(rho_e), target.dim()),
      Matrix(), Matrix(), 0.0};

  const Matrix cosm = mat_cos(target.theta * target.p);
  const Matrix sinm = mat_sin(target.theta * target.p);
  out.conditional_map_0 =
      w0 * cosm * rho_probe.mat * cosm + w1 * sinm * rho_probe.mat * sinm;
  out.conditional_map_1 =
      w0 * sinm * rho_probe.mat * sinm + w1 * cosm * rho_probe.mat * cosm;
  out.error_lower_bound = channel_distance_1to1(out.achieved, target.channel()).lower_bound;
  return out;
}

FbddConfig::FbddConfig(Matrix h_s_in, Matrix h_b_in, Matrix s0_in, Matrix b0_in, double t_in,
                       Matrix u_s_in, Vector psi_in)
    : d_s(s0_in.rows()), d_b(b0_in.rows()), h_s(std::move(h_s_in)), h_b(std::move(h_b_in)),
      s0(std::move(s0_in)), b0(std::move(b0_in)), t(t_in), u_s(std::move(u_s_in)),
      psi(std::move(psi_in)) {
  if (!is_hermitian(h_s) || !is_hermitian(h_b) || !is_hermitian(s0) || !is_hermitian(b0))
    throw ValidationError("FbddConfig: Hamiltonian factors must be Hermitian");
  if (h_s.rows() != d_s || h_b.rows() != d_b)
    throw ValidationError("FbddConfig: dimension mismatch");
  if (u_s.rows() != d_s || max_abs(Matrix(u_s.adjoint() * u_s - identity(d_s))) > tol::hermitian)
    throw ValidationError("FbddConfig: control unitary invalid");
  if (psi.size() != d_s || std::abs(psi.norm() - 1.0) > 1e-10)
    throw ValidationError("FbddConfig: psi must be a unit vector on the system");
}

namespace {

// free Hamiltonian in bath-major layout B (x) S
Matrix fbdd_hamiltonian(const FbddConfig& c) {
  return kron(identity(c.d_b), c.h_s) + kron(c.h_b, identity(c.d_s)) + kron(c.b0, c.s0);
}

}  // namespace

FbddCheck fbdd_check(const FbddConfig& config) {
  const Index d_s = config.d_s;
  const Index d_b = config.d_b;
  const Matrix u_sb = expm_herm(fbdd_hamiltonian(config), config.t);

  FbddCheck out;
  const Matrix id_part = (config.s0.trace() / static_cast<double>(d_s)) * identity(d_s);
  if (max_abs(Matrix(config.s0 - id_part)) < 1e-12) {
    // coupling acts trivially on the system
    out.x = Matrix::Zero(d_s, d_s);
    out.block_form_ok = true;
    out.mixing_ok = true;
    out.u_fb = identity(d_s);
    out.x_eigenvalues = RealVector::Zero(d_s);
    return out;
  }
  out.x = config.s0;

  // least-squares fit of every block to span{I, X}
  const double g11 = static_cast<double>(d_s);
  const cxd g12 = out.x.trace();
  const double g22 = out.x.squaredNorm();
  const cxd det = g11 * g22 - g12 * std::conj(g12);
  double worst = 0.0;
  for (Index i = 0; i < d_b; ++i) {
    for (Index j = 0; j < d_b; ++j) {
      const Matrix block = u_sb.block(i * d_s, j * d_s, d_s, d_s);
      const cxd b1 = block.trace();
      const cxd b2 = (out.x.adjoint() * block).trace();
      const cxd a = (g22 * b1 - g12 * b2) / det;
      const cxd b = (g11 * b2 - std::conj(g12) * b1) / det;
      worst = std::max(worst, max_abs(Matrix(block - a * identity(d_s) - b * out.x)));
    }
  }
  out.max_block_residual = worst;
  out.block_form_ok = worst <= 1e-8;

  const auto eig = sorted_eig_desc(out.x);
  out.x_eigenvalues = eig.values;
  out.mixing_ok = true;
  for (Index k = 0; k < d_s; ++k)
    if (std::abs(eig.values(k) + eig.values(d_s - 1 - k)) > 1e-9) out.mixing_ok = false;

  const double mod = std::abs(eig.values(0));
  bool constant_modulus = mod > 1e-12;
  for (Index k = 0; k < d_s; ++k)
    if (std::abs(std::abs(eig.values(k)) - mod) > 1e-9) constant_modulus = false;
  if (constant_modulus) out.u_fb = Matrix(out.x / mod);
  return out;
}

Matrix fbdd_pairing_unitary(const Matrix& x) {
  const auto eig = sorted_eig_desc(x);
  const Index d = x.rows();
  Matrix u = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k)
    u += eig.vectors.col(d - 1 - k) * eig.vectors.col(k).adjoint();
  return u;
}

FbddRun fbdd_run(const FbddConfig& config, const DensityOperator& rho_b,
                 bool override_checks) {
  if (rho_b.dim() != config.d_b) throw ValidationError("fbdd_run: bath dimension mismatch");
  const FbddCheck check = fbdd_check(config);
  if (!override_checks && (!check.block_form_ok || !check.mixing_ok || !check.u_fb)) {
    std::ostringstream msg;
    msg << "feedback decoupling refused: block_form_ok=" << check.block_form_ok
        << " mixing_ok=" << check.mixing_ok << " u_fb=" << (check.u_fb ? "yes" : "no");
    throw InfeasibleError(msg.str());
  }
  const Matrix u_fb = check.u_fb ? *check.u_fb : identity(config.d_s);

  const Index d_s = config.d_s, d_b = config.d_b;
  const std::vector<Index> dims{2, d_b, d_s};
  const Matrix u_sb = expm_herm(fbdd_hamiltonian(config), config.t);

  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const Index dbs = d_b * d_s;
  const Matrix u_c =
      kron(p0, identity(dbs)) + kron(p1, kron(identity(d_b), config.u_s));
  const Matrix u_free = kron(identity(2), u_sb);
  const Matrix u_had = kron(hadamard2(), identity(dbs));
  const Matrix u_c_fb =
      kron(p0, identity(dbs)) + kron(p1, kron(identity(d_b), u_fb));
  const Matrix w = u_c_fb * u_had * u_c.adjoint() * u_free * u_c;

  Vector phi(2);
  phi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Matrix rho0 =
      kron(Matrix(phi * phi.adjoint()), kron(rho_b.mat, Matrix(config.psi * config.psi.adjoint())));
  const Matrix rho_final = w * rho0 * w.adjoint();
  Matrix rho_s = partial_trace(rho_final, dims, 2);
  rho_s = (rho_s + rho_s.adjoint()) / 2.0;

  FbddRun out{DensityOperator(rho_s), 0.0, Matrix(), Matrix()};
  out.fidelity = (config.psi.adjoint() * rho_s * config.psi).value().real();
  const Matrix conj_u = kron(identity(d_b), config.u_s);
  out.a_plus = 0.5 * (u_sb + conj_u.adjoint() * u_sb * conj_u);
  out.a_minus = 0.5 * (u_sb - conj_u.adjoint() * u_sb * conj_u);
  return out;
}

SplitConfig split_build(Index d_s, const Matrix& pi_t) {
  if (pi_t.rows() != d_s || !is_hermitian(pi_t) ||
      max_abs(Matrix(pi_t * pi_t - pi_t)) > 1e-10)
    throw ValidationError("split_build: target must be an orthogonal projector");
  const Index d_t = static_cast<Index>(std::llround(pi_t.trace().real()));
  if (d_t < 1 || d_t > d_s) throw ValidationError("split_build: invalid projector rank");

  SplitConfig cfg;
  cfg.d_s = d_s;
  cfg.d_t = d_t;
  cfg.k = (d_s + d_t - 1) / d_t;
  cfg.pi_t = pi_t;

  // eigenvectors: target range first (eigenvalue 1), complement after
  const auto eig = sorted_eig_desc(pi_t);
  const Matrix range = eig.vectors.leftCols(d_t);
  const Matrix compl_basis = eig.vectors.rightCols(d_s - d_t);

  std::vector<Matrix> block_bases;
  block_bases.push_back(range);
  for (Index k = 1; k < cfg.k; ++k) {
    const Index start = (k - 1) * d_t;
    const Index count = std::min(d_t, (d_s - d_t) - start);
    block_bases.push_back(compl_basis.middleCols(start, count));
  }

  const Matrix range_full = complete_orthonormal(range);
  for (Index k = 0; k < cfg.k; ++k) {
    const Matrix& basis = block_bases[static_cast<size_t>(k)];
    cfg.blocks.push_back(basis * basis.adjoint());
    // unitary sending the block basis onto the leading target basis vectors
    const Matrix in_full = complete_orthonormal(basis);
    cfg.lifts.push_back(range_full * in_full.adjoint());
    cfg.loaders.push_back(k == 0 ? identity(cfg.k)
                                 : basis_reflector(basis_ket(k, cfg.k), 0));
  }
  return cfg;
}

Matrix split_closed_form(const SplitConfig& cfg, const Matrix& rho_s) {
  Matrix out = Matrix::Zero(cfg.d_s, cfg.d_s);
  for (Index k = 0; k < cfg.k; ++k)
    out += cfg.lifts[k] * cfg.blocks[k] * rho_s * cfg.blocks[k] * cfg.lifts[k].adjoint();
  return out;
}

DensityOperator split_run_with_ancilla(const SplitConfig& cfg, const DensityOperator& rho_s,
                                       const DensityOperator& rho_a) {
  if (rho_s.dim() != cfg.d_s || rho_a.dim() != cfg.k)
    throw ValidationError("split_run: dimension mismatch");
  Matrix u_cs = Matrix::Zero(cfg.k * cfg.d_s, cfg.k * cfg.d_s);
  Matrix u_ca = Matrix::Zero(cfg.k * cfg.d_s, cfg.k * cfg.d_s);
  for (Index k = 0; k < cfg.k; ++k) {
    u_cs += kron(cfg.loaders[k], cfg.blocks[k]);
    Matrix pk = Matrix::Zero(cfg.k, cfg.k);
    pk(k, k) = 1.0;
    u_ca += kron(pk, cfg.lifts[k]);
  }
  const Matrix w = u_ca * u_cs;
  const Matrix joint = w * kron(rho_a.mat, rho_s.mat) * w.adjoint();
  Matrix out = partial_trace(joint, {cfg.k, cfg.d_s}, 1);
  return DensityOperator((out + out.adjoint()) / 2.0);
}

DensityOperator split_run(const SplitConfig& cfg, const DensityOperator& rho_s) {
  Matrix anc = Matrix::Zero(cfg.k, cfg.k);
  anc(0, 0) = 1.0;
  return split_run_with_ancilla(cfg, rho_s, DensityOperator(anc));
}

}  // namespace qdf
