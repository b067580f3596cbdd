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

#include "qdf/core.hpp"

using namespace qdf;

TEST_CASE("kron basics") {
  CHECK(max_abs(Matrix(kron(identity(2), identity(2)) - identity(4))) == 0.0);

  Matrix zz = kron(pauli_z(), identity(2));
  Matrix expect = Matrix::Zero(4, 4);
  expect.diagonal() << 1, 1, -1, -1;
  CHECK(max_abs(Matrix(zz - expect)) == 0.0);

  Rng rng(7);
  Matrix a = random_hermitian(2, rng), b = random_hermitian(2, rng);
  Vector x = random_ket(2, rng), y = random_ket(2, rng);
  Vector lhs = kron(a, b) * kron(x, y);
  Vector rhs = kron(Matrix(a * x), Matrix(b * y));
  CHECK(max_abs(Matrix(lhs - rhs)) < 1e-12);
}

TEST_CASE("kron mixed-product identity") {
  Rng rng(11);
  for (Index d : {Index(2), Index(3)}) {
    for (int rep = 0; rep < 10; ++rep) {
      Matrix a = random_hermitian(d, rng), b = random_hermitian(d, rng);
      Matrix c = random_hermitian(d, rng), e = random_hermitian(d, rng);
      Matrix lhs = kron(a, b) * kron(c, e);
      Matrix rhs = kron(Matrix(a * c), Matrix(b * e));
      CHECK(max_abs(Matrix(lhs - rhs)) < 1e-12);
    }
  }
}

TEST_CASE("partial trace") {
  Rng rng(3);
  DensityOperator rho_e = random_density(3, rng);
  DensityOperator rho_s = random_density(2, rng);

  // product state, environment first
  Matrix joint = kron(rho_e.mat, rho_s.mat);
  CHECK(max_abs(Matrix(partial_trace(joint, {3, 2}, 1) - rho_s.mat)) < 1e-12);
  CHECK(max_abs(Matrix(partial_trace(joint, {3, 2}, 0) - rho_e.mat)) < 1e-12);

  // two-qubit maximally entangled projector reduces to I/2 on either side
  Vector omega = Vector::Zero(4);
  omega(0) = omega(3) = 1.0 / std::sqrt(2.0);
  Matrix phi = omega * omega.adjoint();
  CHECK(max_abs(Matrix(partial_trace(phi, {2, 2}, 0) - identity(2) / 2.0)) < 1e-12);
  CHECK(max_abs(Matrix(partial_trace(phi, {2, 2}, 1) - identity(2) / 2.0)) < 1e-12);

  CHECK(max_abs(Matrix(partial_trace(identity(4) / 4.0, {2, 2}, 1) - identity(2) / 2.0)) <
        1e-12);

  // CompositeSpace overload matches the raw-dims form
  CompositeSpace space({3, 2});
  CHECK(space.dim() == 6);
  CHECK(max_abs(Matrix(partial_trace(joint, space, 1) - partial_trace(joint, {3, 2}, 1))) ==
        0.0);
}

TEST_CASE("partial trace linearity and trace preservation") {
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    Matrix a = random_hermitian(6, rng);
    Matrix b = random_hermitian(6, rng);
    const double alpha = rng.normal();
    Matrix lhs = partial_trace(alpha * a + b, {2, 3}, 0);
    Matrix rhs = alpha * partial_trace(a, {2, 3}, 0) + partial_trace(b, {2, 3}, 0);
    CHECK(max_abs(Matrix(lhs - rhs)) < 1e-12);
    CHECK(std::abs(partial_trace(a, {2, 3}, 1).trace() - a.trace()) < 1e-12);
  }
}

TEST_CASE("embed and permute agree with kron") {
  Rng rng(5);
  Matrix a = random_hermitian(2, rng);
  Matrix b = random_hermitian(3, rng);

  CHECK(max_abs(Matrix(embed_operator(a, {2, 3}, {0}) - kron(a, identity(3)))) < 1e-14);
  CHECK(max_abs(Matrix(embed_operator(b, {2, 3}, {1}) - kron(identity(2), b))) < 1e-14);

  // acting on factors (0, 2) of a 3-factor space
  Matrix ab = kron(a, b);
  Matrix direct = embed_operator(ab, {2, 4, 3}, {0, 2});
  Matrix via_perm = permute_factors(kron(ab, identity(4)), {2, 3, 4}, {0, 2, 1});
  CHECK(max_abs(Matrix(direct - via_perm)) < 1e-14);

  // permutation round trip
  Matrix m = random_hermitian(24, rng);
  Matrix p = permute_factors(m, {2, 3, 4}, {2, 0, 1});
  Matrix back = permute_factors(p, {4, 2, 3}, {1, 2, 0});
  CHECK(max_abs(Matrix(back - m)) < 1e-14);
}

TEST_CASE("tv distance") {
  Rng rng(23);
  DensityOperator rho = random_density(3, rng);
  CHECK(tv_distance(rho, rho) == 0.0);

  DensityOperator zero(Matrix(basis_ket(0, 2) * basis_ket(0, 2).adjoint()));
  DensityOperator one(Matrix(basis_ket(1, 2) * basis_ket(1, 2).adjoint()));
  CHECK(tv_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));

  DensityOperator mixed(Matrix(identity(2) / 2.0));
  CHECK(tv_distance(zero, mixed) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tv distance is a metric") {
  Rng rng(29);
  for (int rep = 0; rep < 50; ++rep) {
    DensityOperator a = random_density(3, rng);
    DensityOperator b = random_density(3, rng);
    DensityOperator c = random_density(3, rng);
    CHECK(tv_distance(a, b) == tv_distance(b, a));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    CHECK(tv_distance(a, b) >= 0.0);
  }
}

TEST_CASE("hermitian matrix functions") {
  CHECK(max_abs(Matrix(mat_cos(Matrix::Zero(3, 3)) - identity(3))) < 1e-14);

  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << 0.3, 1.1;
  CHECK(max_abs(Matrix(mat_arccos(mat_cos(a)) - a)) < 1e-12);

  // exp(-i pi X/2) = -i X
  Matrix e = expm_herm(pauli_x(), M_PI / 2.0);
  CHECK(max_abs(Matrix(e - (-ii) * pauli_x())) < 1e-12);

  Rng rng(31);
  DensityOperator p = random_density(4, rng);
  Matrix s = mat_sqrt_psd(p.mat);
  CHECK(max_abs(Matrix(s * s - p.mat)) < 1e-9);
}

TEST_CASE("wrappers reject invalid inputs") {
  Matrix bad = Matrix::Zero(2, 2);
  bad << 1.0, 0.5, 0.0, 0.0;  // not Hermitian
  CHECK_THROWS_AS(DensityOperator{bad}, ValidationError);

  Matrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;  // negative eigenvalue, trace one
  CHECK_THROWS_AS(DensityOperator{neg}, ValidationError);

  Matrix not_norm = 0.6 * identity(2);  // trace != 1
  CHECK_THROWS_AS(DensityOperator{not_norm}, ValidationError);

  CHECK_THROWS_AS(UnitaryOperator{Matrix(2.0 * identity(2))}, ValidationError);
  CHECK_THROWS_AS(Isometry{Matrix(2.0 * identity(2))}, ValidationError);
  CHECK_THROWS_AS(CompositeSpace({2, 0}), ValidationError);

  // within tolerance passes
  Matrix nearly = identity(2) / 2.0;
  nearly(0, 1) = cxd(1e-12, 0);
  nearly(1, 0) = cxd(1e-12, 0);
  CHECK_NOTHROW(DensityOperator{nearly});
}

TEST_CASE("orthonormal completion and reflectors") {
  Rng rng(37);
  Matrix v(4, 2);
  Matrix u = random_unitary(4, rng);
  v = u.leftCols(2);
  Matrix full = complete_orthonormal(v);
  CHECK(max_abs(Matrix(full.adjoint() * full - identity(4))) < 1e-12);
  CHECK(max_abs(Matrix(full.leftCols(2) - v)) == 0.0);

  Vector x = random_ket(5, rng);
  Matrix r = basis_reflector(x, 0);
  CHECK(max_abs(Matrix(r.adjoint() * r - identity(5))) < 1e-12);
  Vector mapped = r * x;
  CHECK(std::abs(std::abs(mapped(0)) - 1.0) < 1e-12);
  for (Index k = 1; k < 5; ++k) CHECK(std::abs(mapped(k)) < 1e-12);
}

TEST_CASE("random sources are deterministic per seed") {
  Rng a(42), b(42), c(43);
  for (int k = 0; k < 16; ++k) {
    const double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  CHECK(a.uniform() != c.uniform());

  Rng r1(5), r2(5);
  CHECK(max_abs(Matrix(random_unitary(3, r1) - random_unitary(3, r2))) == 0.0);
  Matrix u = random_unitary(3, r1);
  CHECK(max_abs(Matrix(u.adjoint() * u - identity(3))) < 1e-12);
}
