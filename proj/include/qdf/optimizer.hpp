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

namespace qdf {

/// Trace-orthonormal Hermitian basis on dimension n (scaled identity,
/// off-diagonal symmetric/antisymmetric pairs, diagonal ladder), n^2 items.
std::vector<Matrix> gell_mann_basis(Index n);

/// Steering problem: drive the joint unitary on E (x) S so the channel seen
/// by S matches a target, measured through reference-and-output state
/// components. Environment factor first throughout.
struct ControlProblem {
  Index d_s = 0, d_e = 0;
  Matrix h0;                     // drift on d_e * d_s
  std::vector<Matrix> controls;  // Hermitian generators on d_e * d_s
  double t = 1.0;
  int n_steps = 1;
  DensityOperator rho_e;
  std::vector<Matrix> basis;  // Hermitian basis on d_s^2 (defaults internally)
  double u_max = 0.0;         // optional amplitude bound (0 disables it)

  ControlProblem(Index d_s_in, Index d_e_in, Matrix h0_in, std::vector<Matrix> controls_in,
                 double t_in, int n_steps_in, DensityOperator rho_e_in, double u_max_in = 0.0);
};

/// Lift a generator on ancilla (x) system to the full A (x) B (x) S space,
/// acting trivially on the uncontrollable bath factor.
Matrix control_on_ancilla(const Matrix& h_as, Index d_a, Index d_b, Index d_s);

struct ControlPulse {
  Eigen::MatrixXd values;  // n_steps x n_controls
  double dt = 0.0;
};

ControlPulse zero_pulse(const ControlProblem& prob);

/// Components of the reference-entangled target state in the problem basis.
RealVector target_components(const Channel& target, const std::vector<Matrix>& basis);

/// Ordered product of exact step exponentials of h0 + sum_l u_l[k] H_l.
UnitaryOperator propagate(const ControlProblem& prob, const ControlPulse& pulse);

/// Quadratic component mismatch between the steered reference state and the
/// target components; zero exactly when the realized channel is the target.
double cost(const ControlProblem& prob, const ControlPulse& pulse, const RealVector& c_target);

/// Central finite-difference gradient of the cost, reusing cached step
/// propagators so each coordinate costs one exponential.
Eigen::MatrixXd cost_gradient(const ControlProblem& prob, const ControlPulse& pulse,
                              const RealVector& c_target, double grad_eps = 1e-6);

struct OptimizeOptions {
  int max_iters = 500;
  std::uint64_t seed = 0;
  int restarts = 4;
  double grad_eps = 1e-6;
  double target_cost = 1e-10;
};

struct OptimizeResult {
  ControlPulse pulse;
  std::vector<double> cost_trace;  // accepted iterations, non-increasing
  double final_cost = 0.0;
  int restart_index = 0;
};

/// Multi-restart gradient descent with backtracking line search. Restart 0
/// starts from the zero pulse, later restarts from seeded random pulses;
/// deterministic given the seed.
OptimizeResult optimize(const ControlProblem& prob, const RealVector& c_target,
                        const OptimizeOptions& opts = {});

}  // namespace qdf
