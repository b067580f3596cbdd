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

#pragma once

#include "qdf/dilation.hpp"

#include <optional>

namespace qdf {

// ---------------------------------------------------------------------------
// Rank-two channel construction with a single ancilla qubit: polar-decompose
// the Kraus pair, average a fixed rank-one entangling Hamiltonian into the
// required generator, then apply a conditional unitary.
// ---------------------------------------------------------------------------

/// Kraus pair in polar form: M0 = U0 cos(Theta), M1 = U1 sin(Theta) with
/// Theta = theta * P, P positive semidefinite with unit trace.
struct RankTwoTarget {
  Matrix m0, m1;
  Matrix u0, u1;  // unitary polar factors (completed on the kernels)
  Matrix p;       // trace-one PSD shape of the entangling generator
  double theta = 0.0;
  bool sin_branch_degenerate = false;  // M1 = 0: U1 fixed to the identity

  Index dim() const { return m0.rows(); }
  Channel channel() const { return Channel::from_kraus({m0, m1}); }
};

RankTwoTarget polar_extract(const Matrix& m0, const Matrix& m1, double tp_tol = tol::eq);

/// Piecewise rotation schedule averaging the rank-one entangler
/// |phi><phi| (x) X into P (x) X: P = sum_k lambda_k V_k Pi_S V_k^dag.
struct AveragingSchedule {
  int cycles = 1;
  RealVector sub_weights;
  std::vector<Matrix> rotations;
  Matrix pi_s;  // rank-one projector

  AveragingSchedule(int n, RealVector lambdas, std::vector<Matrix> vs, Matrix pi);
  /// The averaged generator sum_k lambda_k V_k Pi_S V_k^dag.
  Matrix averaged_shape() const;
};

/// Spectral schedule realizing the target's P exactly (commuting terms).
AveragingSchedule schedule_for_target(const RankTwoTarget& target, int cycles);

struct RankTwoSimResult {
  Channel achieved;
  Channel ideal;  // closed-form entangler followed by the conditional gate
  double trotter_error = 0.0;
};

/// Simulate the cycle sequence with exact sub-interval exponentials, apply
/// the conditional unitary, trace the ancilla.
RankTwoSimResult simulate_rank2(const RankTwoTarget& target,
                                const AveragingSchedule& schedule,
                                const DensityOperator& ancilla);

struct RankThreeSimResult {
  Channel achieved;
  double stage2_tp_residual = 0.0;
  bool pseudo_inverse_used = false;
};

/// Nested two-stage construction for a rank-three Kraus triple on two
/// ancilla qubits; the second stage runs conditionally on the first ancilla.
RankThreeSimResult simulate_rank3_nested(const Matrix& m0, const Matrix& m1,
                                         const Matrix& m2, int cycles_per_stage);

struct NoisyAncillaResult {
  Channel achieved;
  Matrix conditional_map_0;  // Kraus-sum action conditional on ancilla |0>
  Matrix conditional_map_1;  // ... on ancilla |1>, both applied to rho_probe
  double error_lower_bound = 0.0;
};

/// Ideal entangler and pure-case conditional gate driven by a mixed ancilla
/// diag(w0, w1) + offdiagonal q. `rho_probe` is the input the conditional
/// maps are reported for.
NoisyAncillaResult noisy_ancilla_rank2(const RankTwoTarget& target, double w0, double w1,
                                       cxd q, const DensityOperator& rho_probe);

// ---------------------------------------------------------------------------
// Feedback decoupling: cancel a fixed system-bath coupling at time T with an
// ancilla qubit and three fast conditional gates around the free evolution.
// ---------------------------------------------------------------------------

struct FbddConfig {
  Index d_s = 0, d_b = 0;
  Matrix h_s, h_b;   // free Hamiltonians
  Matrix s0, b0;     // coupling factors, H_SB = S0 (x) B0
  double t = 1.0;    // evolution time
  Matrix u_s;        // control unitary on S (swaps the +/- eigenspaces of X)
  Vector psi;        // initial pure system state

  FbddConfig(Matrix h_s_in, Matrix h_b_in, Matrix s0_in, Matrix b0_in, double t_in,
             Matrix u_s_in, Vector psi_in);
};

struct FbddCheck {
  bool block_form_ok = false;
  bool mixing_ok = false;
  Matrix x;                       // coupling shape the blocks decompose over
  std::optional<Matrix> u_fb;     // X / |x| when |x_k| is constant
  double max_block_residual = 0.0;
  RealVector x_eigenvalues;       // descending
};

/// Diagnostic pass: fit each bath-major block of exp(-i H0 T) to
/// span{I_S, X}, and test the spectral mixing condition x_k = -x_{d+1-k}.
FbddCheck fbdd_check(const FbddConfig& config);

/// Pairing unitary mapping each eigenvector of X to the partner of the
/// negated eigenvalue (sorted order).
Matrix fbdd_pairing_unitary(const Matrix& x);

struct FbddRun {
  DensityOperator rho_s_final;
  double fidelity = 0.0;
  Matrix a_plus, a_minus;  // conditional-branch propagators at time T
};

/// Execute the five-step protocol on ancilla (x) bath (x) system. Refuses
/// (InfeasibleError) when the diagnostic checks fail, unless `override_checks`.
FbddRun fbdd_run(const FbddConfig& config, const DensityOperator& rho_b,
                 bool override_checks = false);

// ---------------------------------------------------------------------------
// Splitting-subspace stabilization: map every input into a target subspace
// in one shot with a K-dimensional ancilla and two conditional gates.
// ---------------------------------------------------------------------------

struct SplitConfig {
  Index d_s = 0, d_t = 0, k = 0;
  Matrix pi_t;                  // target projector
  std::vector<Matrix> blocks;   // projectors Pi_k resolving the identity
  std::vector<Matrix> lifts;    // V_k with V_k Pi_k V_k^dag <= Pi_1
  std::vector<Matrix> loaders;  // U_k on the ancilla with U_k|0> = |k>
};

SplitConfig split_build(Index d_s, const Matrix& pi_t);

/// Two-gate simulation with the ancilla prepared in |0><0|.
DensityOperator split_run(const SplitConfig& cfg, const DensityOperator& rho_s);

/// Same simulation with an arbitrary ancilla state.
DensityOperator split_run_with_ancilla(const SplitConfig& cfg, const DensityOperator& rho_s,
                                       const DensityOperator& rho_a);

/// Closed-form output sum_k V_k Pi_k rho Pi_k V_k^dag.
Matrix split_closed_form(const SplitConfig& cfg, const Matrix& rho_s);

}  // namespace qdf
