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

#include "qdf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qdf::io {

namespace {

void dump_rec(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_rec(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_rec(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

json require(const json& j, const char* key) {
  if (!j.contains(key))
    throw ValidationError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string kind_of(const json& j) { return require(j, "kind").get<std::string>(); }

cxd scalar_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ValidationError("complex scalar must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json scalar_to_json(cxd z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string canonical_dump(const json& j) {
  std::string out;
  dump_rec(j, out);
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a nonempty array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j[i].size()) != cols)
      throw ValidationError("matrix rows have inconsistent lengths");
    for (Index k = 0; k < cols; ++k) m(i, k) = scalar_from_json(j[i][k]);
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i)));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("vector must be a nonempty array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = scalar_from_json(j[i]);
  return v;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("parse error in " + path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ValidationError("cannot move report into place: " + path);
}

json channel_to_json(const Channel& ch) {
  json ops = json::array();
  for (const Matrix& m : ch.kraus().ops) ops.push_back(matrix_to_json(m));
  return json{{"dim", ch.dim()}, {"kind", "kraus"}, {"ops", std::move(ops)}};
}

json choi_to_json(const Channel& ch) {
  return json{{"dim", ch.dim()}, {"kind", "choi"}, {"mat", matrix_to_json(ch.choi().mat)}};
}

json state_to_json(const DensityOperator& rho) {
  return json{{"dim", rho.dim()}, {"kind", "state"}, {"mat", matrix_to_json(rho.mat)}};
}

json unitary_to_json(const UnitaryOperator& u) {
  return json{{"dim", u.dim()}, {"kind", "unitary"}, {"mat", matrix_to_json(u.mat)}};
}

Channel channel_from_json(const json& j) {
  const std::string kind = kind_of(j);
  const Index dim = require(j, "dim").get<Index>();
  if (kind == "kraus") {
    std::vector<Matrix> ops;
    for (const json& op : require(j, "ops")) ops.push_back(matrix_from_json(op));
    Channel ch = Channel::from_kraus(std::move(ops));
    if (ch.dim() != dim) throw ValidationError("channel dimension does not match header");
    return ch;
  }
  if (kind == "choi") {
    Channel ch = Channel::from_choi(matrix_from_json(require(j, "mat")));
    if (ch.dim() != dim) throw ValidationError("channel dimension does not match header");
    return ch;
  }
  throw ValidationError("expected a kraus or choi file, got kind \"" + kind + "\"");
}

DensityOperator state_from_json(const json& j) {
  if (kind_of(j) != "state") throw ValidationError("expected a state file");
  DensityOperator rho(matrix_from_json(require(j, "mat")));
  if (rho.dim() != require(j, "dim").get<Index>())
    throw ValidationError("state dimension does not match header");
  return rho;
}

UnitaryOperator unitary_from_json(const json& j) {
  if (kind_of(j) != "unitary") throw ValidationError("expected a unitary file");
  return UnitaryOperator(matrix_from_json(require(j, "mat")));
}

Channel load_channel(const std::string& path) { return channel_from_json(load_json_file(path)); }

DensityOperator load_state(const std::string& path) {
  return state_from_json(load_json_file(path));
}

StochasticUnitarySpec load_stochastic_spec(const std::string& path) {
  const json j = load_json_file(path);
  if (kind_of(j) != "stochastic-spec") throw ValidationError("expected a stochastic-spec file");
  std::vector<Matrix> us;
  for (const json& u : require(j, "unitaries")) us.push_back(matrix_from_json(u));
  const json w = require(j, "weights");
  RealVector weights(static_cast<Index>(w.size()));
  for (Index i = 0; i < weights.size(); ++i) weights(i) = w[i].get<double>();
  return StochasticUnitarySpec(std::move(us), ProbabilityVector(weights));
}

ConvexCombinationSpec load_convex_spec(const std::string& path) {
  const json j = load_json_file(path);
  if (kind_of(j) != "convex-spec") throw ValidationError("expected a convex-spec file");
  std::vector<std::pair<double, Channel>> parts;
  for (const json& comp : require(j, "components")) {
    std::vector<Matrix> ops;
    for (const json& op : require(comp, "kraus")) ops.push_back(matrix_from_json(op));
    parts.emplace_back(require(comp, "weight").get<double>(),
                       Channel::from_kraus(std::move(ops)));
  }
  return ConvexCombinationSpec(std::move(parts));
}

ControlProblem load_problem(const std::string& path) {
  const json j = load_json_file(path);
  if (kind_of(j) != "problem") throw ValidationError("expected a problem file");
  std::vector<Matrix> controls;
  for (const json& c : require(j, "controls")) controls.push_back(matrix_from_json(c));
  return ControlProblem(require(j, "d_s").get<Index>(), require(j, "d_e").get<Index>(),
                        matrix_from_json(require(j, "h0")), std::move(controls),
                        require(j, "t").get<double>(), require(j, "n_steps").get<int>(),
                        DensityOperator(matrix_from_json(require(j, "env"))));
}

SplitFile load_split_config(const std::string& path) {
  const json j = load_json_file(path);
  if (kind_of(j) != "split-config") throw ValidationError("expected a split-config file");
  SplitFile out{require(j, "d_s").get<Index>(), matrix_from_json(require(j, "pi_t")),
                DensityOperator(matrix_from_json(require(j, "rho_s"))), 0.0};
  if (j.contains("ancilla_eps")) out.ancilla_eps = j.at("ancilla_eps").get<double>();
  return out;
}

FbddFile load_fbdd_config(const std::string& path) {
  const json j = load_json_file(path);
  if (kind_of(j) != "fbdd-config") throw ValidationError("expected an fbdd-config file");
  const Matrix s0 = matrix_from_json(require(j, "s0"));
  Matrix u_s;
  if (j.contains("u_s")) {
    u_s = matrix_from_json(j.at("u_s"));
  } else {
    const Matrix id_part = (s0.trace() / static_cast<double>(s0.rows())) * identity(s0.rows());
    u_s = max_abs(Matrix(s0 - id_part)) < 1e-12 ? identity(s0.rows())
                                                : fbdd_pairing_unitary(s0);
  }
  FbddConfig config(matrix_from_json(require(j, "h_s")), matrix_from_json(require(j, "h_b")),
                    s0, matrix_from_json(require(j, "b0")), require(j, "t").get<double>(),
                    std::move(u_s), vector_from_json(require(j, "psi")));
  return FbddFile{std::move(config),
                  DensityOperator(matrix_from_json(require(j, "rho_b")))};
}

RankFile load_rank_config(const std::string& path) {
  const json j = load_json_file(path);
  if (kind_of(j) != "lv-config") throw ValidationError("expected an lv-config file");
  RankFile out{matrix_from_json(require(j, "m0")), matrix_from_json(require(j, "m1")),
               std::nullopt, 1.0, 0.0, cxd(0.0, 0.0)};
  if (j.contains("m2")) out.m2 = matrix_from_json(j.at("m2"));
  if (j.contains("w0")) out.w0 = j.at("w0").get<double>();
  if (j.contains("w1")) out.w1 = j.at("w1").get<double>();
  if (j.contains("q")) out.q = scalar_from_json(j.at("q"));
  return out;
}

}  // namespace qdf::io
