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

#include "qdf/majorization.hpp"
#include "qdf/optimizer.hpp"
#include "qdf/protocols.hpp"

#include <json.hpp>

namespace qdf::io {

using json = nlohmann::json;

// Canonical emission: sorted keys, no whitespace, floats printed with 17
// significant digits so parse/emit round trips are byte stable.
std::string canonical_dump(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

json load_json_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

// file schemas ("kind" selects the payload)
json channel_to_json(const Channel& ch);          // kind: kraus
json choi_to_json(const Channel& ch);             // kind: choi
json state_to_json(const DensityOperator& rho);   // kind: state
json unitary_to_json(const UnitaryOperator& u);   // kind: unitary

Channel channel_from_json(const json& j);         // accepts kraus or choi
DensityOperator state_from_json(const json& j);
UnitaryOperator unitary_from_json(const json& j);

Channel load_channel(const std::string& path);
DensityOperator load_state(const std::string& path);

StochasticUnitarySpec load_stochastic_spec(const std::string& path);
ConvexCombinationSpec load_convex_spec(const std::string& path);
ControlProblem load_problem(const std::string& path);

struct SplitFile {
  Index d_s;
  Matrix pi_t;
  DensityOperator rho_s;
  double ancilla_eps = 0.0;
};
SplitFile load_split_config(const std::string& path);

struct FbddFile {
  FbddConfig config;
  DensityOperator rho_b;
};
FbddFile load_fbdd_config(const std::string& path);

struct RankFile {
  Matrix m0, m1;
  std::optional<Matrix> m2;
  double w0 = 1.0, w1 = 0.0;
  cxd q{0.0, 0.0};
};
RankFile load_rank_config(const std::string& path);

}  // namespace qdf::io
