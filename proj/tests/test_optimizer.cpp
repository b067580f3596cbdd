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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdf/dilation.hpp"
#include "qdf/optimizer.hpp"

using namespace qdf;

namespace {

DensityOperator pure_env(Index d) {
  Matrix m = Matrix::Zero(d, d);
  m(0, 0) = 1.0;
  return DensityOperator(m);
}

// qubit system + qubit environment with the full traceless control set
ControlProblem two_qubit_problem(int n_steps) {
  auto basis = gell_mann_basis(4);
  std::vector<Matrix> controls(basis.begin() + 1, basis.end());
  return ControlProblem(2, 2, Matrix(Matrix::Zero(4, 4)), std::move(controls), 1.0, n_steps,
                        pure_env(2));
}

// independent oracle: squared Hilbert-Schmidt distance of the steered
// reference states
double choi_cost_oracle(const ControlProblem& prob, const ControlPulse& pulse,
                        const Channel& target) {
  const Index d = prob.d_s;
  const Matrix u = propagate(prob, pulse).mat;
  const Channel realized = channel_from_joint(u, prob.rho_e, d);

  Vector omega = Vector::Zero(d * d);
  for (Index a = 0; a < d; ++a) omega(a * d + a) = 1.0;
  const Matrix phi = omega * omega.adjoint() / static_cast<double>(d);
  Matrix delta = Matrix::Zero(d * d, d * d);
  for (const Matrix& m : realized.kraus().ops) {
    const Matrix l = kron(identity(d), m);
    delta += l * phi * l.adjoint();
  }
  for (const Matrix& m : target.kraus().ops) {
    const Matrix l = kron(identity(d), m);
    delta -= l * phi * l.adjoint();
  }
  return delta.squaredNorm();
}

}  // namespace

TEST_CASE("basis is trace-orthonormal and complete") {
  for (Index n : {Index(2), Index(4)}) {
    const auto basis = gell_mann_basis(n);
    REQUIRE(static_cast<Index>(basis.size()) == n * n);
    for (const auto& b : basis) CHECK(is_hermitian(b));
  }
}

TEST_CASE("target components") {
  const auto basis = gell_mann_basis(4);

  // identity channel: components reconstruct the entangled reference
  const RealVector c_id = target_components(identity_channel(2), basis);
  Matrix recon = Matrix::Zero(4, 4);
  for (size_t i = 0; i < basis.size(); ++i) recon += c_id(static_cast<Index>(i)) * basis[i];
  Vector omega = Vector::Zero(4);
  omega(0) = omega(3) = 1.0;
  CHECK(max_abs(Matrix(recon - omega * omega.adjoint() / 2.0)) < 1e-12);

  // completely depolarizing: only the identity direction survives
  const RealVector c_dep = target_components(depolarizing_channel(1.0), basis);
  CHECK(c_dep(0) == doctest::Approx(0.5).epsilon(1e-12));  // tr(I/sqrt(4) * I/4) = 1/2
  for (Index i = 1; i < c_dep.size(); ++i) CHECK(std::abs(c_dep(i)) < 1e-12);

  // random channel: reconstruction is exact
  Rng rng(3);
  Channel r = random_channel(2, 2, rng);
  const RealVector c = target_components(r, basis);
  Matrix state = Matrix::Zero(4, 4);
  for (const Matrix& m : r.kraus().ops) {
    const Matrix l = kron(identity(2), m);
    state += l * (omega * omega.adjoint() / 2.0) * l.adjoint();
  }
  Matrix back = Matrix::Zero(4, 4);
  for (size_t i = 0; i < basis.size(); ++i) back += c(static_cast<Index>(i)) * basis[i];
  CHECK(max_abs(Matrix(back - state)) <= 1e-10);
}

TEST_CASE("propagation") {
  auto prob = two_qubit_problem(8);
  const ControlPulse zero = zero_pulse(prob);
  CHECK(max_abs(Matrix(propagate(prob, zero).mat - identity(4))) < 1e-12);

  // a drift alone: ordered product equals the single exponential
  Rng rng(5);
  ControlProblem drift(2, 2, random_hermitian(4, rng), {Matrix(Matrix::Zero(4, 4))}, 1.0, 16,
                       pure_env(2));
  const ControlPulse z2{Eigen::MatrixXd::Zero(16, 1), 1.0 / 16};
  CHECK(max_abs(Matrix(propagate(drift, z2).mat - expm_herm(drift.h0, 1.0))) < 1e-10);

  // constant pulse: single exponential of the total Hamiltonian
  auto prob2 = two_qubit_problem(16);
  ControlPulse constant = zero_pulse(prob2);
  constant.values.setConstant(0.37);
  Matrix total = Matrix::Zero(4, 4);
  for (const auto& h : prob2.controls) total += 0.37 * h;
  CHECK(max_abs(Matrix(propagate(prob2, constant).mat - expm_herm(total, 1.0))) < 1e-10);
}

TEST_CASE("cost agrees with the Choi-difference oracle") {
  auto prob = two_qubit_problem(6);
  Rng rng(7);
  Channel target = random_channel(2, 2, rng);
  const RealVector c_target = target_components(target, prob.basis);

  ControlPulse pulse = zero_pulse(prob);
  for (Index k = 0; k < pulse.values.rows(); ++k)
    for (Index l = 0; l < pulse.values.cols(); ++l) pulse.values(k, l) = rng.normal();

  const double direct = cost(prob, pulse, c_target);
  CHECK(direct > 0.0);  // generic pulse misses a generic target
  CHECK(direct == doctest::Approx(choi_cost_oracle(prob, pulse, target)).epsilon(1e-12));

  // zero cost at a constructed optimum: the target realized by the pulse
  Channel achieved = channel_from_joint(propagate(prob, pulse).mat, prob.rho_e, 2);
  const RealVector c_self = target_components(achieved, prob.basis);
  CHECK(cost(prob, pulse, c_self) <= 1e-18);

  // identity target at zero pulse with no drift
  const RealVector c_id = target_components(identity_channel(2), prob.basis);
  CHECK(cost(prob, zero_pulse(prob), c_id) <= 1e-18);
}

TEST_CASE("cached gradient matches direct finite differences") {
  auto prob = two_qubit_problem(5);
  Rng rng(11);
  Channel target = random_channel(2, 2, rng);
  const RealVector c_target = target_components(target, prob.basis);

  ControlPulse pulse = zero_pulse(prob);
  for (Index k = 0; k < pulse.values.rows(); ++k)
    for (Index l = 0; l < pulse.values.cols(); ++l) pulse.values(k, l) = rng.normal() * 0.5;

  const Eigen::MatrixXd grad = cost_gradient(prob, pulse, c_target, 1e-6);
  for (int probe = 0; probe < 10; ++probe) {
    const Index k = static_cast<Index>(rng.next_u64() % pulse.values.rows());
    const Index l = static_cast<Index>(rng.next_u64() % pulse.values.cols());
    ControlPulse up = pulse, dn = pulse;
    up.values(k, l) += 1e-6;
    dn.values(k, l) -= 1e-6;
    const double fd = (cost(prob, up, c_target) - cost(prob, dn, c_target)) / 2e-6;
    const double scale = std::max({std::abs(fd), std::abs(grad(k, l)), 1e-8});
    CHECK(std::abs(fd - grad(k, l)) / scale <= 1e-5);
  }
}

TEST_CASE("descent converges on a reachable rank-2 target") {
  auto prob = two_qubit_problem(16);
  Rng rng(13);
  Channel target = random_channel(2, 2, rng);
  const RealVector c_target = target_components(target, prob.basis);

  OptimizeOptions opts;
  opts.max_iters = 400;
  opts.restarts = 6;
  opts.seed = 1;
  opts.target_cost = 1e-6;
  const auto result = optimize(prob, c_target, opts);
  CHECK(result.final_cost <= 1e-4);

  // monotone non-increasing accepted trace
  for (size_t i = 1; i < result.cost_trace.size(); ++i)
    CHECK(result.cost_trace[i] <= result.cost_trace[i - 1] + 1e-15);

  // determinism
  const auto again = optimize(prob, c_target, opts);
  CHECK(again.final_cost == result.final_cost);
}

TEST_CASE("grid refinement converges quadratically for a smooth pulse") {
  // midpoint sampling of a continuous control against a noncommuting drift:
  // halving dt should shrink the discretization error by about 4
  Rng rng(17);
  const Matrix h0 = random_hermitian(4, rng);
  std::vector<Matrix> ctrl{random_hermitian(4, rng)};

  auto run = [&](int n) {
    ControlProblem prob(2, 2, h0, ctrl, 1.0, n, pure_env(2));
    ControlPulse pulse = zero_pulse(prob);
    const double dt = 1.0 / n;
    for (Index k = 0; k < n; ++k) pulse.values(k, 0) = std::sin(4.0 * (k + 0.5) * dt);
    return propagate(prob, pulse).mat;
  };
  const Matrix fine = run(512);
  const double e8 = max_abs(Matrix(run(8) - fine));
  const double e16 = max_abs(Matrix(run(16) - fine));
  CHECK(e8 / e16 >= 3.5);
}

TEST_CASE("bath-trivial controls and amplitude bounds") {
  Rng rng(23);
  // generator on ancilla (x) system lifted over a 3-dim bath
  const Matrix h_as = random_hermitian(4, rng);
  const Matrix lifted = control_on_ancilla(h_as, 2, 3, 2);
  CHECK(lifted.rows() == 12);
  CHECK(is_hermitian(lifted));
  // tracing the bath away recovers 3 copies of the generator
  CHECK(max_abs(Matrix(partial_trace(lifted, {2, 3, 2}, std::vector<int>{0, 2}) -
                       3.0 * h_as)) < 1e-12);

  auto basis = gell_mann_basis(4);
  std::vector<Matrix> controls(basis.begin() + 1, basis.end());
  Matrix env = Matrix::Zero(2, 2);
  env(0, 0) = 1.0;
  ControlProblem bounded(2, 2, Matrix(Matrix::Zero(4, 4)), controls, 1.0, 8,
                         DensityOperator(env), 0.5);
  ControlPulse hot = zero_pulse(bounded);
  hot.values.setConstant(0.9);
  CHECK_THROWS_AS(propagate(bounded, hot), ValidationError);

  // the optimizer respects the box
  Channel target = random_channel(2, 2, rng);
  OptimizeOptions opts;
  opts.max_iters = 60;
  opts.restarts = 2;
  opts.target_cost = 1e-6;
  const auto result = optimize(bounded, target_components(target, bounded.basis), opts);
  CHECK(result.pulse.values.cwiseAbs().maxCoeff() <= 0.5 + 1e-12);
}
