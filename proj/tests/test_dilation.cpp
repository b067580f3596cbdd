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

using namespace qdf;

namespace {

// independent oracle: trace out the ancilla of U (rho_A (x) rho) U^dag
Matrix dilation_output(const Matrix& u, const Matrix& rho_env, const Matrix& rho) {
  const Index d_s = rho.rows();
  const Index d_e = rho_env.rows();
  const Matrix joint = u * kron(rho_env, rho) * u.adjoint();
  return partial_trace(joint, {d_e, d_s}, 1);
}

}  // namespace

TEST_CASE("stinespring completion") {
  // identity channel, single Kraus operator: U is the identity
  const UnitaryOperator u_id = stinespring_complete(identity_channel(2).kraus());
  CHECK(max_abs(Matrix(u_id.mat - identity(2))) < 1e-12);

  // replacement channel: 4x4 unitary verified against the brute-force oracle
  Channel rep = replacement_channel(2, 0);
  const UnitaryOperator u_rep = stinespring_complete(rep.kraus());
  REQUIRE(u_rep.dim() == 4);
  Matrix anc0 = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    DensityOperator rho = random_density(2, rng);
    const Matrix out = dilation_output(u_rep.mat, anc0, rho.mat);
    CHECK(max_abs(Matrix(out - apply_map(rep.kraus(), rho.mat))) < 1e-10);
  }

  // amplitude damping: first block-column carries the Kraus pair
  Channel ad = amplitude_damping_channel(0.36);
  const UnitaryOperator u_ad = stinespring_complete(ad.kraus());
  CHECK(max_abs(Matrix(u_ad.mat.block(0, 0, 2, 2) - ad.kraus().ops[0])) < 1e-12);
  CHECK(max_abs(Matrix(u_ad.mat.block(2, 0, 2, 2) - ad.kraus().ops[1])) < 1e-12);
  for (int t = 0; t < 20; ++t) {
    DensityOperator rho = random_density(2, rng);
    const Matrix out = dilation_output(u_ad.mat, anc0, rho.mat);
    CHECK(max_abs(Matrix(out - apply_map(ad.kraus(), rho.mat))) < 1e-10);
  }
}

TEST_CASE("stinespring completion is unitary with exact blocks") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const Index d = 2 + static_cast<Index>(rng.next_u64() % 2);
    const Index m = 1 + static_cast<Index>(rng.next_u64() % (d * d));
    Channel ch = random_channel(d, m, rng);
    const UnitaryOperator u = stinespring_complete(ch.kraus());
    CHECK(max_abs(Matrix(u.mat.adjoint() * u.mat - identity(m * d))) <= 1e-10);
    for (Index k = 0; k < m; ++k)
      CHECK(max_abs(Matrix(u.mat.block(k * d, 0, d, d) - ch.kraus().ops[k])) <= 1e-12);
  }
}

TEST_CASE("eps-pure subsystem search") {
  Rng rng(11);

  // pure environment: exact initialization at every subsystem dimension
  Vector psi = random_ket(6, rng);
  DensityOperator pure((psi * psi.adjoint()));
  for (Index m : {Index(1), Index(2), Index(3), Index(6)}) {
    const auto init = find_eps_pure_subsystem(pure, m);
    CHECK(init.decomp.f == 6 / m);
    CHECK(init.epsilon < 1e-10);
  }

  // diag(0.97, 0.03): truncation keeps the top eigenvector
  Matrix d2 = Matrix::Zero(2, 2);
  d2.diagonal() << 0.97, 0.03;
  const auto init2 = find_eps_pure_subsystem(DensityOperator(d2), 2);
  CHECK(init2.decomp.f == 1);
  CHECK(init2.epsilon == doctest::Approx(0.03).epsilon(1e-10));
  CHECK(max_abs(Matrix(init2.reconstructed().mat -
                       basis_ket(0, 2) * basis_ket(0, 2).adjoint())) < 1e-12);

  // maximally mixed on 4 dims, m = 2: epsilon = 1/2
  const auto init4 = find_eps_pure_subsystem(DensityOperator(Matrix(identity(4) / 4.0)), 2);
  CHECK(init4.decomp.f == 2);
  CHECK(init4.epsilon == doctest::Approx(0.5).epsilon(1e-10));

  CHECK_THROWS_AS(find_eps_pure_subsystem(pure, 7), ValidationError);
}

TEST_CASE("reported epsilon equals the truncated tail mass") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const Index d_e = 4 + static_cast<Index>(rng.next_u64() % 5);
    const Index m = 2 + static_cast<Index>(rng.next_u64() % 3);
    if (m > d_e) continue;
    DensityOperator rho = random_density(d_e, rng);
    const auto init = find_eps_pure_subsystem(rho, m);
    // independent eigenvalue-sum computation of 1 - Tr(Pi_1 rho)
    const auto eig = sorted_eig_desc(rho.mat);
    double head = 0.0;
    for (Index i = 0; i < init.decomp.f; ++i) head += eig.values(i);
    CHECK(init.epsilon == doctest::Approx(1.0 - head).epsilon(1e-10));
  }
}

TEST_CASE("subsystem dilation recovers standard Stinespring") {
  Rng rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    Channel target = random_channel(2, 1 + static_cast<Index>(rng.next_u64() % 4), rng);
    Vector chi = random_ket(4, rng);
    const auto init = find_eps_pure_subsystem(DensityOperator((chi * chi.adjoint())), 4);
    const auto report = dilate_via_subsystem(target, init);
    CHECK(report.eps_certified < 1e-10);
    CHECK(report.eps_measured <= 1e-10);
    CHECK(verify_dilation(report, target, 20, 1) <= 1e-10);
    CHECK(report.method == DilationMethod::stinespring_pure);
  }
}

TEST_CASE("subsystem dilation with mixed environment obeys the contraction bound") {
  Matrix env = Matrix::Zero(4, 4);
  env.diagonal() << 0.97, 0.03, 0.0, 0.0;
  const auto init = find_eps_pure_subsystem(DensityOperator(env), 2, 1);
  CHECK(init.decomp.f == 1);
  CHECK(init.decomp.r == 2);
  CHECK(init.epsilon == doctest::Approx(0.03).epsilon(1e-10));

  Channel target = amplitude_damping_channel(0.36);
  const auto report = dilate_via_subsystem(target, init);
  CHECK(report.eps_measured <= 0.03 + 1e-8);
  CHECK(verify_dilation(report, target, 30, 2) <= 0.03 + 1e-8);
}

TEST_CASE("extreme target with m = d_S and pure subsystem is exact") {
  Rng rng(19);
  Vector chi = random_ket(2, rng);
  const auto init = find_eps_pure_subsystem(DensityOperator((chi * chi.adjoint())), 2);
  Channel target = amplitude_damping_channel(0.5);  // extreme, rank 2
  const auto report = dilate_via_subsystem(target, init);
  CHECK(report.eps_measured <= 1e-10);
  CHECK(verify_dilation(report, target, 20, 3) <= 1e-10);
}

TEST_CASE("rank above subsystem dimension is infeasible") {
  Rng rng(23);
  Vector chi = random_ket(2, rng);
  const auto init = find_eps_pure_subsystem(DensityOperator((chi * chi.adjoint())), 2);
  CHECK_THROWS_AS(dilate_via_subsystem(depolarizing_channel(0.5), init), InfeasibleError);
}

TEST_CASE("verify_dilation flags a wrong dilation") {
  Channel target = replacement_channel(2, 0);
  DensityOperator env(Matrix(basis_ket(0, 2) * basis_ket(0, 2).adjoint()));
  DilationReport wrong{UnitaryOperator(identity(4)), env, 1.0, 1.0,
                       DilationMethod::subsystem, "identity joint unitary"};
  CHECK(verify_dilation(wrong, target, 20, 4) > 0.99);
}

TEST_CASE("contraction bound over randomized cases") {
  Rng rng(29);
  int cases = 0;
  bool nonvacuous = false;
  while (cases < 50) {
    const Index d_s = 2 + static_cast<Index>(rng.next_u64() % 2);
    const Index m = 2 + static_cast<Index>(rng.next_u64() % (d_s * d_s - 1));
    const Index d_e = m + static_cast<Index>(rng.next_u64() % 4);

    // spectrum concentrated on the top eigenvector so epsilon stays small
    RealVector lam(d_e);
    const double eps_target = 0.1 * rng.uniform();
    lam(0) = 1.0 - eps_target;
    double rest = 0.0;
    for (Index i = 1; i < d_e; ++i) {
      lam(i) = rng.uniform();
      rest += lam(i);
    }
    for (Index i = 1; i < d_e; ++i) lam(i) *= rest > 0 ? eps_target / rest : 0.0;
    Matrix basis = random_unitary(d_e, rng);
    Matrix rho = basis * lam.cast<cxd>().asDiagonal() * basis.adjoint();
    DensityOperator rho_e((rho + rho.adjoint()) / 2.0);

    const auto init = find_eps_pure_subsystem(rho_e, m, 1);
    if (init.epsilon > 0.1) continue;
    const Index rank = 1 + static_cast<Index>(rng.next_u64() % m);
    Channel target = random_channel(d_s, rank, rng);

    const auto report = dilate_via_subsystem(target, init);
    const double measured = verify_dilation(report, target, 10, cases);
    CHECK(measured <= init.epsilon + 1e-8);
    if (measured >= 0.5 * init.epsilon && init.epsilon > 1e-6) nonvacuous = true;
    ++cases;
  }
  CHECK(nonvacuous);
}

TEST_CASE("completion accepts redundant operator-sum representations") {
  // five operators for a rank-2 channel: still an isometric stack
  Channel ad = amplitude_damping_channel(0.3);
  Rng rng(31);
  const Matrix u = random_unitary(5, rng);
  std::vector<Matrix> redundant(5, Matrix::Zero(2, 2));
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 2; ++j) redundant[i] += u(i, j) * ad.kraus().ops[j];
  const UnitaryOperator w = stinespring_complete(KrausSet(redundant));
  CHECK(w.dim() == 10);

  Matrix anc = Matrix::Zero(5, 5);
  anc(0, 0) = 1.0;
  for (int t = 0; t < 10; ++t) {
    DensityOperator rho = random_density(2, rng);
    const Matrix joint = w.mat * kron(anc, rho.mat) * w.mat.adjoint();
    const Matrix out = partial_trace(joint, {5, 2}, 1);
    CHECK(max_abs(Matrix(out - apply_map(ad.kraus(), rho.mat))) < 1e-10);
  }
}

TEST_CASE("dilation with a nontrivial cofactor and remainder") {
  // d_E = 7, m = 2, f = 3, r = 1: the subsystem block really carries a
  // cofactor tensor factor
  Rng rng(37);
  RealVector lam(7);
  lam << 0.5, 0.3, 0.15, 0.03, 0.015, 0.005, 0.0;
  const Matrix basis = random_unitary(7, rng);
  Matrix rho = basis * lam.cast<cxd>().asDiagonal() * basis.adjoint();
  DensityOperator rho_e((rho + rho.adjoint()) / 2.0);

  const auto init = find_eps_pure_subsystem(rho_e, 2, 3);
  CHECK(init.decomp.f == 3);
  CHECK(init.decomp.r == 1);
  CHECK(init.epsilon == doctest::Approx(1.0 - 0.95).epsilon(1e-10));

  Channel target = amplitude_damping_channel(0.42);
  const auto report = dilate_via_subsystem(target, init);
  CHECK(report.eps_measured <= init.epsilon + 1e-8);
  CHECK(verify_dilation(report, target, 30, 11) <= init.epsilon + 1e-8);

  // exact variant: environment supported entirely on the subsystem block
  RealVector lam2(7);
  lam2 << 0.5, 0.3, 0.2, 0.0, 0.0, 0.0, 0.0;
  Matrix rho2 = basis * lam2.cast<cxd>().asDiagonal() * basis.adjoint();
  const auto init2 =
      find_eps_pure_subsystem(DensityOperator((rho2 + rho2.adjoint()) / 2.0), 2, 3);
  CHECK(init2.epsilon <= 1e-10);
  const auto report2 = dilate_via_subsystem(target, init2);
  CHECK(verify_dilation(report2, target, 30, 12) <= 1e-10);
}
