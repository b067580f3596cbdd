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

#include "qdf/channel.hpp"

#include <optional>

namespace qdf {

/// Tensor-factor decomposition of an environment,
/// H_E = (H_M (x) H_F) (+) H_R with dim m*f + r = d_E. Q rotates the
/// physical basis into the adapted one: the first m*f adapted coordinates
/// enumerate H_M (x) H_F subsystem-major, the trailing r span H_R.
struct SubsystemDecomposition {
  Index d_e = 0;
  Index m = 0;
  Index f = 0;
  Index r = 0;
  Matrix q;  // unitary, physical -> adapted coordinates

  SubsystemDecomposition(Index d_e_in, Index m_in, Index f_in, Matrix q_in);
};

/// An environment state together with the decomposition that exhibits it as
/// epsilon-close to a state pure on the subsystem factor.
struct Initialization {
  SubsystemDecomposition decomp;
  Vector phi;              // unit vector in C^m
  DensityOperator rho_f;   // cofactor state
  double epsilon = 0.0;    // achieved TV distance to the pure initialization
  DensityOperator rho_e;   // the environment state this was built from

  /// The pure-subsystem reference state Q^dag (|phi><phi| (x) rho_F (+) 0_R) Q.
  DensityOperator reconstructed() const;
};

/// Same role as Initialization but with a mixed diagonal subsystem state,
/// used by the stochastic-unitary design.
struct MixedInitialization {
  SubsystemDecomposition decomp;
  RealVector subsystem_spectrum;  // diagonal of rho_M in the adapted basis
  DensityOperator rho_f;
  double epsilon = 0.0;
  DensityOperator rho_e;
};

enum class DilationMethod {
  stinespring_pure,
  subsystem,
  stochastic_unitary,
  block_convex,
  average,
};

std::string to_string(DilationMethod m);

struct DilationReport {
  UnitaryOperator w;          // joint unitary, environment factor first
  DensityOperator env_state;  // environment state used by the dilation
  double eps_certified = 0.0;
  double eps_measured = 0.0;
  DilationMethod method = DilationMethod::subsystem;
  std::string diagnostics;
};

/// Complete the isometry stacking the Kraus operators into a unitary on
/// H_A (x) H_S whose block-column at ancilla reference index 0 is {M_k}:
/// U (|0> (x) |psi>) = sum_k |k> (x) M_k |psi>. The free columns are filled
/// deterministically from canonical basis vectors in index order.
UnitaryOperator stinespring_complete(const KrausSet& ks);

/// Best epsilon-pure initialization from truncating to the span of the top
/// f eigenvectors of rho_E (f defaults to floor(d_E / m)); the remaining
/// subsystem blocks take the next eigenvectors in descending order.
Initialization find_eps_pure_subsystem(const DensityOperator& rho_e, Index m, Index f = 0);

/// Generalized dilation: lift the Stinespring unitary of the target through
/// the virtual-subsystem decomposition, W = Q^dag-conjugated
/// (U_T (x) I_F) (+) I_{R*S}. The certified error is the initialization
/// epsilon; the measured error is a verified 1->1 lower bound.
DilationReport dilate_via_subsystem(const Channel& target, const Initialization& init);

/// Brute-force check of a dilation report: max over random pure inputs (plus
/// the 1->1 search candidate) of the TV distance between the partial-trace
/// simulation and the target output.
double verify_dilation(const DilationReport& report, const Channel& target,
                       int trials = 20, std::uint64_t seed = 0);

/// Effective channel of a joint unitary acting on rho_env (x) rho, traced
/// over the leading environment factor.
Channel channel_from_joint(const Matrix& w, const DensityOperator& rho_env, Index d_sys);

}  // namespace qdf
