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

#include "qdf/channel.hpp"

using namespace qdf;

namespace {

Matrix max_entangled_choi(Index d) {
  Vector w(d * d);
  w.setZero();
  for (Index i = 0; i < d; ++i) w(i * d + i) = 1.0;
  return Matrix(w * w.adjoint() / static_cast<double>(d));
}

}  // namespace

TEST_CASE("kraus to choi") {
  // identity channel: the maximally entangled projector itself
  Channel id = identity_channel(2);
  CHECK(max_abs(Matrix(id.choi().mat - max_entangled_choi(2))) < 1e-14);
  CHECK(std::abs(id.choi().mat.trace() - cxd(1.0)) < 1e-14);
  CHECK(kraus_rank(id) == 1);

  // completely depolarizing qubit map -> I/4
  Channel dep = depolarizing_channel(1.0);
  CHECK(max_abs(Matrix(dep.choi().mat - identity(4) / 4.0)) < 1e-12);

  Rng rng(2);
  Channel u = unitary_channel(random_unitary(3, rng));
  CHECK(kraus_rank(u) == 1);
}

TEST_CASE("choi to kraus") {
  // maximally entangled Choi -> single Kraus proportional to identity
  Channel id = Channel::from_choi(max_entangled_choi(2));
  REQUIRE(id.kraus().size() == 1);
  const Matrix& m = id.kraus().ops.front();
  CHECK(max_abs(Matrix(m - m(0, 0) * identity(2))) < 1e-12);
  CHECK(std::abs(std::abs(m(0, 0)) - 1.0) < 1e-12);

  // I/4 -> four trace-orthogonal operators realizing rho -> I/2
  Channel dep = Channel::from_choi(Matrix(identity(4) / 4.0));
  REQUIRE(dep.kraus().size() == 4);
  Rng rng(3);
  DensityOperator rho = random_density(2, rng);
  CHECK(max_abs(Matrix(apply_channel(dep, rho).mat - identity(2) / 2.0)) < 1e-12);
  CHECK(max_abs(Matrix(kraus_to_choi(dep.kraus()).mat - identity(4) / 4.0)) < 1e-12);

  // amplitude damping round trip recovers the channel (up to OSR freedom)
  Channel ad = amplitude_damping_channel(0.36);
  Channel back = Channel::from_choi(ad.choi().mat);
  REQUIRE(back.kraus().size() == 2);
  CHECK(max_abs(Matrix(back.choi().mat - ad.choi().mat)) < 1e-9);
}

TEST_CASE("round trip preserves the channel") {
  Rng rng(11);
  int count = 0;
  for (Index d : {Index(2), Index(3)}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Index m = 1 + static_cast<Index>(rng.next_u64() % (d * d));
      Channel ch = random_channel(d, m, rng);
      Channel back = Channel::from_choi(ch.choi().mat);
      CHECK(max_abs(Matrix(back.choi().mat - ch.choi().mat)) < 1e-9);
      CHECK(kraus_rank(ch) <= d * d);
      ++count;
    }
  }
  CHECK(count == 100);
}

TEST_CASE("kraus rank") {
  CHECK(kraus_rank(depolarizing_channel(0.5)) == 4);
  for (double g : {0.1, 0.36, 0.9}) CHECK(kraus_rank(amplitude_damping_channel(g)) == 2);
  Rng rng(13);
  for (int rep = 0; rep < 10; ++rep)
    CHECK(kraus_rank(unitary_channel(random_unitary(3, rng))) == 1);
}

TEST_CASE("extremality") {
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    auto v = extremality_test(unitary_channel(random_unitary(2, rng)));
    CHECK(v.is_extreme);
    CHECK(v.m == 1);
  }

  auto dep = extremality_test(depolarizing_channel(0.5));
  CHECK_FALSE(dep.is_extreme);
  CHECK(dep.m == 4);

  auto ad = extremality_test(amplitude_damping_channel(0.5));
  CHECK(ad.is_extreme);
  CHECK(ad.m == 2);
  CHECK(ad.gram_rank == 4);
}

TEST_CASE("extremality invariant under OSR remixing") {
  Rng rng(19);
  for (int rep = 0; rep < 50; ++rep) {
    const Index d = 2;
    const Index m = 2;
    Channel ch = random_channel(d, m, rng);
    const auto before = extremality_test(ch);

    // remix the Kraus operators by a random unitary, rebuild through Choi
    Matrix u = random_unitary(m, rng);
    std::vector<Matrix> remixed(m, Matrix::Zero(d, d));
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) remixed[i] += u(i, j) * ch.kraus().ops[j];
    Channel rechanneled = Channel::from_choi(Channel::from_kraus(remixed).choi().mat);
    const auto after = extremality_test(rechanneled);
    CHECK(before.is_extreme == after.is_extreme);
  }
}

TEST_CASE("apply channel") {
  Rng rng(23);
  DensityOperator rho = random_density(2, rng);
  CHECK(max_abs(Matrix(apply_channel(identity_channel(2), rho).mat - rho.mat)) < 1e-14);

  DensityOperator out = apply_channel(replacement_channel(2, 0), rho);
  CHECK(max_abs(Matrix(out.mat - basis_ket(0, 2) * basis_ket(0, 2).adjoint())) < 1e-12);

  const double p = 0.3;
  DensityOperator ground(Matrix(basis_ket(0, 2) * basis_ket(0, 2).adjoint()));
  Matrix expect = Matrix::Zero(2, 2);
  expect.diagonal() << 1.0 - p / 2.0, p / 2.0;
  CHECK(max_abs(Matrix(apply_channel(depolarizing_channel(p), ground).mat - expect)) <
        1e-12);
}

TEST_CASE("channel distance 1->1") {
  Channel id = identity_channel(2);
  CHECK(channel_distance_1to1(id, id).lower_bound < 1e-12);

  // bit flip with p = 1/2 against identity: attained 0.5 at |0>
  Matrix k0 = std::sqrt(0.5) * identity(2);
  Matrix k1 = std::sqrt(0.5) * pauli_x();
  Channel flip = Channel::from_kraus({k0, k1});
  const auto d = channel_distance_1to1(id, flip);
  CHECK(d.lower_bound >= 0.5 - 1e-9);
  CHECK(d.lower_bound <= 0.5 + 1e-6);

  const auto r = channel_distance_1to1(id, replacement_channel(2, 0));
  CHECK(r.lower_bound == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("1->1 maximum is attained on pure states") {
  Rng rng(29);
  Channel a = random_channel(2, 2, rng);
  Channel b = random_channel(2, 3, rng);
  const auto d = channel_distance_1to1(a, b, 4, 1);
  for (int rep = 0; rep < 20; ++rep) {
    DensityOperator rho = random_density(2, rng);
    const double interior = tv_distance(apply_channel(a, rho), apply_channel(b, rho));
    CHECK(interior <= d.lower_bound + 1e-9);
  }
  // deterministic given seed
  const auto d2 = channel_distance_1to1(a, b, 4, 1);
  CHECK(d.lower_bound == d2.lower_bound);
}

TEST_CASE("channel validation errors") {
  // not trace preserving
  CHECK_THROWS_AS(Channel::from_kraus({Matrix(0.5 * identity(2))}), ValidationError);
  // Choi trace wrong
  CHECK_THROWS_AS(Channel::from_choi(Matrix(0.98 * max_entangled_choi(2))),
                  ValidationError);
  // dimension mismatch
  Rng rng(31);
  DensityOperator rho3 = random_density(3, rng);
  CHECK_THROWS_AS(apply_channel(identity_channel(2), rho3), ValidationError);
}
