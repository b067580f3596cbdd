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

#include "qdf/io.hpp"

#include <fstream>

using namespace qdf;
using io::json;

#ifndef QDF_FIXTURE_DIR
#define QDF_FIXTURE_DIR "tests/fixtures"
#endif

namespace {
std::string fixture(const std::string& name) {
  return std::string(QDF_FIXTURE_DIR) + "/" + name;
}
}  // namespace

TEST_CASE("canonical dump is parse stable") {
  Rng rng(3);
  Channel ch = random_channel(2, 2, rng);
  const json emitted = io::channel_to_json(ch);
  const std::string text = io::canonical_dump(emitted);

  const json parsed = json::parse(text);
  CHECK(io::canonical_dump(parsed) == text);

  // a full emit -> parse -> emit cycle through the typed object
  const Channel back = io::channel_from_json(parsed);
  CHECK(io::canonical_dump(io::channel_to_json(back)) == text);
}

TEST_CASE("parse typed fixtures") {
  const Channel id = io::load_channel(fixture("identity.json"));
  CHECK(id.dim() == 2);
  CHECK(id.kraus().size() == 1);
  CHECK(max_abs(Matrix(id.kraus().ops[0] - identity(2))) == 0.0);

  const Channel ad = io::load_channel(fixture("amplitude_damping_036.json"));
  CHECK(kraus_rank(ad) == 2);

  const DensityOperator env = io::load_state(fixture("dephasing_env.json"));
  CHECK(env.mat(0, 0).real() == doctest::Approx(0.9));

  const auto spec = io::load_stochastic_spec(fixture("dephasing_spec.json"));
  CHECK(spec.size() == 2);

  const auto split = io::load_split_config(fixture("split_42.json"));
  CHECK(split.d_s == 4);
  CHECK(split.ancilla_eps == doctest::Approx(0.05));

  const auto fbdd = io::load_fbdd_config(fixture("fbdd_sigma_z.json"));
  CHECK(fbdd.config.d_b == 4);
  // u_s derived from the coupling when absent
  CHECK(max_abs(Matrix(fbdd.config.u_s - pauli_x())) < 1e-12);

  const auto prob = io::load_problem(fixture("problem_2q.json"));
  CHECK(prob.controls.size() == 15);
}

TEST_CASE("invariant violations are reported") {
  // Choi with trace 0.98
  Vector omega = Vector::Zero(4);
  omega(0) = omega(3) = 1.0;
  const Matrix bad_choi = 0.98 * (omega * omega.adjoint() / 2.0);
  const json j{{"dim", 2}, {"kind", "choi"}, {"mat", io::matrix_to_json(bad_choi)}};
  CHECK_THROWS_AS(io::channel_from_json(j), ValidationError);

  // non trace-preserving Kraus file
  const json k{{"dim", 2},
               {"kind", "kraus"},
               {"ops", json::array({io::matrix_to_json(Matrix(0.5 * identity(2)))})}};
  CHECK_THROWS_WITH_AS(io::channel_from_json(k), doctest::Contains("not trace-preserving"),
                       ValidationError);

  // malformed scalar
  CHECK_THROWS_AS(io::matrix_from_json(json::parse("[[1,2],[3,4]]")), ValidationError);
  CHECK_THROWS_AS(io::load_json_file(fixture("no_such_file.json")), ValidationError);
}

TEST_CASE("unitary files") {
  Rng rng(11);
  const UnitaryOperator u(random_unitary(3, rng));
  const json j = io::unitary_to_json(u);
  CHECK(j.at("kind") == "unitary");
  CHECK(max_abs(Matrix(io::unitary_from_json(j).mat - u.mat)) == 0.0);
  CHECK_THROWS_AS(io::unitary_from_json(json{{"kind", "unitary"},
                                             {"mat", io::matrix_to_json(Matrix(2.0 * identity(2)))}}),
                  ValidationError);
}

TEST_CASE("matrix round trip") {
  Rng rng(5);
  const Matrix m = random_unitary(3, rng);
  CHECK(max_abs(Matrix(io::matrix_from_json(io::matrix_to_json(m)) - m)) == 0.0);
  const Vector v = random_ket(4, rng);
  CHECK(max_abs(Matrix(io::vector_from_json(io::vector_to_json(v)) - v)) == 0.0);
}

TEST_CASE("atomic writes produce readable files") {
  const std::string path = "io_test_scratch.json";
  io::write_file_atomic(path, io::canonical_dump(json{{"x", 1.5}}));
  const json back = io::load_json_file(path);
  CHECK(back.at("x").get<double>() == 1.5);
  std::remove(path.c_str());
}
