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

#include "qdf/optimizer.hpp"

#include <cmath>

namespace qdf {

std::vector<Matrix> gell_mann_basis(Index n) {
  std::vector<Matrix> basis;
  basis.push_back(identity(n) / std::sqrt(static_cast<double>(n)));
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      Matrix sym = Matrix::Zero(n, n);
      sym(j, k) = sym(k, j) = 1.0 / std::sqrt(2.0);
      basis.push_back(sym);
      Matrix asym = Matrix::Zero(n, n);
      asym(j, k) = -ii / std::sqrt(2.0);
      asym(k, j) = ii / std::sqrt(2.0);
      basis.push_back(asym);
    }
  }
  for (Index l = 1; l < n; ++l) {
    Matrix diag = Matrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Index m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(diag);
  }
  return basis;
}

Matrix control_on_ancilla(const Matrix& h_as, Index d_a, Index d_b, Index d_s) {
  return embed_operator(h_as, {d_a, d_b, d_s}, {0, 2});
}

ControlProblem::ControlProblem(Index d_s_in, Index d_e_in, Matrix h0_in,
                               std::vector<Matrix> controls_in, double t_in, int n_steps_in,
                               DensityOperator rho_e_in, double u_max_in)
    : d_s(d_s_in), d_e(d_e_in), h0(std::move(h0_in)), controls(std::move(controls_in)),
      t(t_in), n_steps(n_steps_in), rho_e(std::move(rho_e_in)),
      basis(gell_mann_basis(d_s_in * d_s_in)), u_max(u_max_in) {
  if (u_max < 0.0) throw ValidationError("ControlProblem: negative amplitude bound");
  const Index joint = d_e * d_s;
  if (h0.rows() != joint || !is_hermitian(h0))
    throw ValidationError("ControlProblem: drift must be Hermitian on d_E * d_S");
  for (const Matrix& h : controls)
    if (h.rows() != joint || !is_hermitian(h))
      throw ValidationError("ControlProblem: control generators must be Hermitian");
  if (rho_e.dim() != d_e) throw ValidationError("ControlProblem: environment dimension");
  if (t <= 0 || n_steps < 1 || n_steps > 10000)
    throw ValidationError("ControlProblem: invalid horizon or grid");
  // trace orthonormality of the component basis
  for (size_t a = 0; a < basis.size(); ++a)
    for (size_t b = a; b < basis.size(); ++b) {
      const double expect = a == b ? 1.0 : 0.0;
      if (std::abs((basis[a].adjoint() * basis[b]).trace().real() - expect) > 1e-10)
        throw ValidationError("ControlProblem: basis not trace-orthonormal");
    }
}

ControlPulse zero_pulse(const ControlProblem& prob) {
  return ControlPulse{
      Eigen::MatrixXd::Zero(prob.n_steps, static_cast<Index>(prob.controls.size())),
      prob.t / prob.n_steps};
}

namespace {

// maximally entangled reference (x) output state on S' (x) S
Matrix entangled_reference(Index d) {
  Vector omega = Vector::Zero(d * d);
  for (Index a = 0; a < d; ++a) omega(a * d + a) = 1.0;
  return Matrix(omega * omega.adjoint() / static_cast<double>(d));
}

struct CostEngine {
  const ControlProblem& prob;
  RealVector c_target;
  Matrix rho0;               // initial state on S' (x) E (x) S
  std::vector<Index> dims;   // {d_s, d_e, d_s}

  CostEngine(const ControlProblem& p, RealVector c)
      : prob(p), c_target(std::move(c)), dims{p.d_s, p.d_e, p.d_s} {
    const Matrix phi = entangled_reference(prob.d_s);
    // phi lives on (S', S); bring the environment into the middle slot
    rho0 = permute_factors(kron(phi, prob.rho_e.mat), {prob.d_s, prob.d_s, prob.d_e},
                           {0, 2, 1});
  }

  Matrix step_hamiltonian(const ControlPulse& pulse, Index k) const {
    Matrix h = prob.h0;
    for (size_t l = 0; l < prob.controls.size(); ++l)
      h += pulse.values(k, static_cast<Index>(l)) * prob.controls[l];
    return h;
  }

  double cost_of_unitary(const Matrix& u) const {
    const Matrix u_full = embed_operator(u, dims, {1, 2});
    const Matrix steered =
        partial_trace(u_full * rho0 * u_full.adjoint(), dims, std::vector<int>{0, 2});
    double acc = 0.0;
    for (size_t i = 0; i < prob.basis.size(); ++i) {
      const cxd c = (prob.basis[i] * steered).trace();
      acc += std::norm(c - cxd(c_target(static_cast<Index>(i))));
    }
    return acc;
  }

  std::vector<Matrix> step_unitaries(const ControlPulse& pulse) const {
    std::vector<Matrix> steps(prob.n_steps);
    for (Index k = 0; k < prob.n_steps; ++k)
      steps[k] = expm_herm(step_hamiltonian(pulse, k), pulse.dt);
    return steps;
  }

  double cost_of_pulse(const ControlPulse& pulse) const {
    Matrix u = identity(prob.d_e * prob.d_s);
    for (const Matrix& s : step_unitaries(pulse)) u = s * u;
    return cost_of_unitary(u);
  }

  // gradient with cached prefix/suffix products: one fresh exponential per
  // perturbed coordinate
  Eigen::MatrixXd gradient(const ControlPulse& pulse, double eps) const {
    const Index n = prob.n_steps;
    const Index nc = static_cast<Index>(prob.controls.size());
    const auto steps = step_unitaries(pulse);
    std::vector<Matrix> prefix(n + 1), suffix(n + 1);
    prefix[0] = identity(prob.d_e * prob.d_s);
    for (Index k = 0; k < n; ++k) prefix[k + 1] = steps[k] * prefix[k];
    suffix[n] = identity(prob.d_e * prob.d_s);
    for (Index k = n - 1; k >= 0; --k) suffix[k] = suffix[k + 1] * steps[k];

    Eigen::MatrixXd grad(n, nc);
    parallel_for(n, [&](Index k) {
      ControlPulse local = pulse;
      for (Index l = 0; l < nc; ++l) {
        double vals[2];
        for (int sgn = 0; sgn < 2; ++sgn) {
          local.values(k, l) = pulse.values(k, l) + (sgn == 0 ? eps : -eps);
          const Matrix step = expm_herm(step_hamiltonian(local, k), pulse.dt);
          vals[sgn] = cost_of_unitary(suffix[k + 1] * step * prefix[k]);
        }
        local.values(k, l) = pulse.values(k, l);
        grad(k, l) = (vals[0] - vals[1]) / (2.0 * eps);
      }
    });
    return grad;
  }
};

}  // namespace

RealVector target_components(const Channel& target, const std::vector<Matrix>& basis) {
  const Index d = target.dim();
  Matrix state = Matrix::Zero(d * d, d * d);
  const Matrix phi = entangled_reference(d);
  for (const Matrix& m : target.kraus().ops) {
    const Matrix lifted = kron(identity(d), m);
    state += lifted * phi * lifted.adjoint();
  }
  RealVector c(static_cast<Index>(basis.size()));
  Matrix recon = Matrix::Zero(d * d, d * d);
  for (size_t i = 0; i < basis.size(); ++i) {
    c(static_cast<Index>(i)) = (basis[i] * state).trace().real();
    recon += c(static_cast<Index>(i)) * basis[i];
  }
  if (max_abs(Matrix(recon - state)) > 1e-10)
    throw ValidationError("target_components: basis incomplete for the reference state");
  return c;
}

UnitaryOperator propagate(const ControlProblem& prob, const ControlPulse& pulse) {
  if (pulse.values.rows() != prob.n_steps ||
      pulse.values.cols() != static_cast<Index>(prob.controls.size()))
    throw ValidationError("propagate: pulse grid mismatch");
  if (!pulse.values.allFinite())
    throw ValidationError("propagate: non-finite pulse amplitudes");
  if (prob.u_max > 0.0 && pulse.values.cwiseAbs().maxCoeff() > prob.u_max)
    throw ValidationError("propagate: pulse exceeds the configured amplitude bound");
  CostEngine engine(prob, RealVector::Zero(static_cast<Index>(prob.basis.size())));
  Matrix u = identity(prob.d_e * prob.d_s);
  for (const Matrix& s : engine.step_unitaries(pulse)) u = s * u;
  return UnitaryOperator(std::move(u), 1e-9);
}

double cost(const ControlProblem& prob, const ControlPulse& pulse, const RealVector& c_target) {
  CostEngine engine(prob, c_target);
  return engine.cost_of_pulse(pulse);
}

Eigen::MatrixXd cost_gradient(const ControlProblem& prob, const ControlPulse& pulse,
                              const RealVector& c_target, double grad_eps) {
  CostEngine engine(prob, c_target);
  return engine.gradient(pulse, grad_eps);
}

namespace {

OptimizeResult run_descent(const CostEngine& engine, ControlPulse pulse,
                           const OptimizeOptions& opts) {
  OptimizeResult out{pulse, {}, 0.0, 0};
  double current = engine.cost_of_pulse(pulse);
  out.cost_trace.push_back(current);
  double step = 1.0;
  for (int it = 0; it < opts.max_iters && current > opts.target_cost; ++it) {
    const Eigen::MatrixXd grad = engine.gradient(pulse, opts.grad_eps);
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 < 1e-24) break;

    step = std::min(step * 2.0, 1e3);
    bool accepted = false;
    for (int shrink = 0; shrink < 40; ++shrink) {
      ControlPulse trial = pulse;
      trial.values -= step * grad;
      if (engine.prob.u_max > 0.0)
        trial.values = trial.values.cwiseMax(-engine.prob.u_max).cwiseMin(engine.prob.u_max);
      const double trial_cost = engine.cost_of_pulse(trial);
      if (trial_cost <= current - 1e-4 * step * gnorm2) {
        pulse = std::move(trial);
        current = trial_cost;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    out.cost_trace.push_back(current);
  }
  out.pulse = std::move(pulse);
  out.final_cost = current;
  return out;
}

}  // namespace

OptimizeResult optimize(const ControlProblem& prob, const RealVector& c_target,
                        const OptimizeOptions& opts) {
  CostEngine engine(prob, c_target);
  const Index nc = static_cast<Index>(prob.controls.size());

  // restarts in index order with early exit; the per-step gradient work is
  // what runs in parallel
  std::vector<OptimizeResult> results;
  for (int r = 0; r < opts.restarts; ++r) {
    ControlPulse p = zero_pulse(prob);
    if (r > 0) {
      Rng rng(opts.seed + static_cast<std::uint64_t>(r));
      const double amp = prob.u_max > 0.0 ? std::min(prob.u_max, 1.0) : 1.0;
      for (Index k = 0; k < prob.n_steps; ++k)
        for (Index l = 0; l < nc; ++l) p.values(k, l) = amp * (2.0 * rng.uniform() - 1.0);
    }
    OptimizeResult res = run_descent(engine, std::move(p), opts);
    res.restart_index = r;
    const bool done = res.final_cost <= opts.target_cost;
    results.push_back(std::move(res));
    if (done) break;
  }

  size_t best = 0;
  for (size_t r = 1; r < results.size(); ++r)
    if (results[r].final_cost < results[best].final_cost) best = r;
  return std::move(results[best]);
}

}  // namespace qdf
