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

#include "qdf/channel.hpp"

#include <algorithm>
#include <cmath>

namespace qdf {

namespace {

// row-major vec, matching the Choi composite index i*d + j
Vector vec_rowmajor(const Matrix& m) {
  Vector v(m.size());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

// phase fix: rotate so the largest-magnitude entry (lowest index on ties)
// is real and positive
Vector canonical_phase(Vector v) {
  Index best = 0;
  double mag = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > mag + 1e-12) {
      mag = a;
      best = i;
    }
  }
  if (mag > 1e-14) v *= std::conj(v(best)) / std::abs(v(best));
  return v;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

KrausSet::KrausSet(std::vector<Matrix> o, double tp_tol) : ops(std::move(o)) {
  if (ops.empty()) throw ValidationError("KrausSet: empty operator list");
  const Index d = ops.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& m : ops) {
    if (m.rows() != d || m.cols() != d)
      throw ValidationError("KrausSet: operators must be square with equal dimension");
    if (!m.allFinite()) throw ValidationError("KrausSet: non-finite entries");
    sum += m.adjoint() * m;
  }
  const double residual = max_abs(Matrix(sum - identity(d)));
  if (residual > tp_tol)
    throw ValidationError("KrausSet: not trace-preserving, residual " +
                          std::to_string(residual));
}

ChoiMatrix::ChoiMatrix(Index d_in, Matrix m, double psd_tol, double tp_tol)
    : d(d_in), mat(std::move(m)) {
  if (d <= 0 || mat.rows() != d * d || mat.cols() != d * d)
    throw ValidationError("ChoiMatrix: matrix must be d^2 x d^2");
  if (!is_hermitian(mat, 10 * tol::hermitian))
    throw ValidationError("ChoiMatrix: not Hermitian");
  if (std::abs(mat.trace() - cxd(1.0)) > tp_tol)
    throw ValidationError("ChoiMatrix: trace not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((mat + mat.adjoint()) / 2.0);
  if (solver.eigenvalues().minCoeff() < -psd_tol)
    throw ValidationError("ChoiMatrix: not positive semidefinite");
  // trace over the output factor must leave the maximally mixed reference
  const Matrix ref = partial_trace(mat, {d, d}, 1);
  if (max_abs(Matrix(ref - identity(d) / static_cast<double>(d))) > tp_tol)
    throw ValidationError("ChoiMatrix: output partial trace is not I/d");
}

Channel Channel::from_kraus(std::vector<Matrix> ops, double tp_tol) {
  KrausSet ks(std::move(ops), tp_tol);
  ChoiMatrix c = kraus_to_choi(ks);
  return Channel(std::move(ks), std::move(c));
}

Channel Channel::from_choi(Matrix choi, double tp_tol, double psd_tol) {
  const Index d = static_cast<Index>(std::llround(std::sqrt(double(choi.rows()))));
  ChoiMatrix c(d, std::move(choi), psd_tol, tp_tol);
  KrausSet ks = choi_to_kraus(c, 1e-9, std::max(10.0 * tp_tol, tol::eq));
  return Channel(std::move(ks), std::move(c));
}

ChoiMatrix kraus_to_choi(const KrausSet& ks) {
  const Index d = ks.dim();
  Matrix c = Matrix::Zero(d * d, d * d);
  for (const Matrix& m : ks.ops) {
    const Vector w = vec_rowmajor(m);
    c += w * w.adjoint();
  }
  c /= static_cast<double>(d);
  return ChoiMatrix(d, (c + c.adjoint()) / 2.0);
}

KrausSet choi_to_kraus(const ChoiMatrix& c, double rel_tol, double tp_tol) {
  const Index d = c.d;
  const auto eig = sorted_eig_desc(c.mat);
  const double top = eig.values(0);
  const double cut = rel_tol * std::max(top, 0.0);
  if (eig.values(eig.values.size() - 1) < -std::max(cut, 1e-12))
    throw ValidationError("choi_to_kraus: negative eigenvalue below tolerance");

  // eigenpairs above threshold, descending; exact ties ordered by the
  // lexicographic comparison of the phase-fixed eigenvectors
  std::vector<std::pair<double, Vector>> pairs;
  for (Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) <= cut) continue;
    pairs.emplace_back(eig.values(k), canonical_phase(eig.vectors.col(k)));
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return lex_less(a.second, b.second);
  });

  std::vector<Matrix> ops;
  ops.reserve(pairs.size());
  for (const auto& [lambda, v] : pairs) {
    Matrix m(d, d);
    const double scale = std::sqrt(static_cast<double>(d) * lambda);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) m(i, j) = scale * v(i * d + j);
    ops.push_back(std::move(m));
  }
  if (ops.empty()) throw ValidationError("choi_to_kraus: Choi matrix numerically zero");
  return KrausSet(std::move(ops), tp_tol);
}

Index kraus_rank(const Channel& ch, double rel_tol) {
  const auto eig = sorted_eig_desc(ch.choi().mat);
  const double cut = rel_tol * std::max(eig.values(0), 0.0);
  Index rank = 0;
  for (Index k = 0; k < eig.values.size(); ++k)
    if (eig.values(k) > cut) ++rank;
  return rank;
}

Matrix gram_stack(const KrausSet& ks) {
  const Index d = ks.dim();
  const Index m = ks.size();
  Matrix stack(d * d, m * m);
  for (Index k = 0; k < m; ++k)
    for (Index j = 0; j < m; ++j)
      stack.col(k * m + j) = vec_rowmajor(ks.ops[k].adjoint() * ks.ops[j]);
  return stack;
}

ExtremalityVerdict extremality_test(const Channel& ch, double sv_tol) {
  ExtremalityVerdict verdict;
  const KrausSet canonical = choi_to_kraus(ch.choi());
  verdict.m = canonical.size();
  const Index d = ch.dim();
  if (verdict.m > d) {
    // more products than the operator space can keep independent
    verdict.is_extreme = false;
    return verdict;
  }
  const Matrix stack = gram_stack(canonical);
  Eigen::JacobiSVD<Matrix> svd(stack);
  const auto& sv = svd.singularValues();
  // m^2 <= d^2 here, so all m^2 singular values are computed
  verdict.min_singular_value = sv(sv.size() - 1);
  for (Index k = 0; k < sv.size(); ++k)
    if (sv(k) > sv_tol) ++verdict.gram_rank;
  verdict.is_extreme = verdict.min_singular_value > sv_tol;
  return verdict;
}

Matrix apply_map(const KrausSet& ks, const Matrix& x) {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& m : ks.ops) out += m * x * m.adjoint();
  return out;
}

DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho) {
  if (rho.dim() != ch.dim()) throw ValidationError("apply_channel: dimension mismatch");
  Matrix out = apply_map(ch.kraus(), rho.mat);
  return DensityOperator((out + out.adjoint()) / 2.0);
}

namespace {

double tv_of_state(const KrausSet& a, const KrausSet& b, const Matrix& rho) {
  return tv_distance_herm(apply_map(a, rho), apply_map(b, rho));
}

// one alternating-ascent pass: the subgradient of the trace norm at the
// current output difference picks the next input as a top eigenvector
std::pair<double, Vector> ascend(const KrausSet& a, const KrausSet& b, Vector psi,
                                 int max_iters = 120) {
  const Index d = a.dim();
  double best = tv_of_state(a, b, psi * psi.adjoint());
  for (int it = 0; it < max_iters; ++it) {
    const Matrix x = apply_map(a, psi * psi.adjoint()) - apply_map(b, psi * psi.adjoint());
    const auto eig = sorted_eig_desc(x, 1e-8);
    Matrix sign_x = Matrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
      const double s = eig.values(k) >= 0 ? 1.0 : -1.0;
      sign_x += s * eig.vectors.col(k) * eig.vectors.col(k).adjoint();
    }
    Matrix g = Matrix::Zero(d, d);
    for (const Matrix& m : a.ops) g += m.adjoint() * sign_x * m;
    for (const Matrix& m : b.ops) g -= m.adjoint() * sign_x * m;
    const auto geig = sorted_eig_desc((g + g.adjoint()) / 2.0, 1e-8);
    Vector next = geig.vectors.col(0);
    const double val = tv_of_state(a, b, next * next.adjoint());
    if (val <= best + 1e-12) break;
    best = val;
    psi = next;
  }
  return {best, psi};
}

}  // namespace

Distance1to1 channel_distance_1to1(const Channel& a, const Channel& b, int restarts,
                                   std::uint64_t seed) {
  if (a.dim() != b.dim())
    throw ValidationError("channel_distance_1to1: dimension mismatch");
  const Index d = a.dim();
  const KrausSet& ka = a.kraus();
  const KrausSet& kb = b.kraus();

  std::vector<Vector> starts;
  for (Index k = 0; k < d; ++k) starts.push_back(basis_ket(k, d));
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed + static_cast<std::uint64_t>(r) + 1);
    starts.push_back(random_ket(d, rng));
  }

  if (d == 2) {
    // difference map on the matrix-unit basis; the grid sweep is then a
    // cheap closed-form evaluation per direction
    Matrix delta[2][2];
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) {
        Matrix e = Matrix::Zero(2, 2);
        e(i, j) = 1.0;
        delta[i][j] = apply_map(ka, e) - apply_map(kb, e);
      }
    double best = -1.0;
    double best_th = 0.0, best_ph = 0.0;
    const double deg = M_PI / 180.0;
    for (int it = 0; it <= 180; ++it) {
      const double th = it * deg;
      const double c = std::cos(th / 2), s = std::sin(th / 2);
      for (int ip = 0; ip < 360; ++ip) {
        const double ph = ip * deg;
        const cxd off = c * s * std::exp(-ii * cxd(ph));
        const Matrix diff = c * c * delta[0][0] + s * s * delta[1][1] + off * delta[0][1] +
                            std::conj(off) * delta[1][0];
        const double val =
            std::sqrt(std::pow(diff(0, 0).real(), 2) + std::norm(diff(0, 1)));
        if (val > best) {
          best = val;
          best_th = th;
          best_ph = ph;
        }
        if (it == 0) break;  // pole: phase redundant
      }
    }
    Vector grid_psi(2);
    grid_psi << std::cos(best_th / 2), std::exp(ii * cxd(best_ph)) * std::sin(best_th / 2);
    starts.push_back(grid_psi);
  }

  std::vector<std::pair<double, Vector>> results(starts.size());
  parallel_for(static_cast<Index>(starts.size()),
               [&](Index i) { results[i] = ascend(ka, kb, starts[i]); });

  Index best_i = 0;
  for (Index i = 1; i < static_cast<Index>(results.size()); ++i)
    if (results[i].first > results[best_i].first) best_i = i;

  Distance1to1 out;
  out.lower_bound = results[best_i].first;
  const Vector& psi = results[best_i].second;
  out.argmax_state = psi * psi.adjoint();
  return out;
}

Channel identity_channel(Index d) { return Channel::from_kraus({identity(d)}); }

Channel unitary_channel(const Matrix& u) { return Channel::from_kraus({u}); }

Channel depolarizing_channel(double p) {
  if (p < 0.0 || p > 4.0 / 3.0)
    throw ValidationError("depolarizing_channel: p out of range");
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * identity(2));
  ops.push_back(std::sqrt(p / 4.0) * pauli_x());
  ops.push_back(std::sqrt(p / 4.0) * pauli_y());
  ops.push_back(std::sqrt(p / 4.0) * pauli_z());
  return Channel::from_kraus(std::move(ops));
}

Channel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw ValidationError("amplitude_damping_channel: gamma out of range");
  Matrix m0(2, 2), m1(2, 2);
  m0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  m1 << 0, std::sqrt(gamma), 0, 0;
  return Channel::from_kraus({m0, m1});
}

Channel replacement_channel(Index d, Index k) {
  std::vector<Matrix> ops;
  for (Index j = 0; j < d; ++j) {
    Matrix m = Matrix::Zero(d, d);
    m(k, j) = 1.0;
    ops.push_back(std::move(m));
  }
  return Channel::from_kraus(std::move(ops));
}

Channel mixed_unitary_channel(const std::vector<Matrix>& us, const RealVector& weights) {
  if (static_cast<Index>(us.size()) != weights.size() || us.empty())
    throw ValidationError("mixed_unitary_channel: size mismatch");
  std::vector<Matrix> ops;
  for (size_t j = 0; j < us.size(); ++j) {
    if (weights(static_cast<Index>(j)) < 0)
      throw ValidationError("mixed_unitary_channel: negative weight");
    ops.push_back(std::sqrt(weights(static_cast<Index>(j))) * us[j]);
  }
  return Channel::from_kraus(std::move(ops));
}

Channel random_channel(Index d, Index m, Rng& rng) {
  if (m < 1 || m > d * d) throw ValidationError("random_channel: rank out of range");
  Matrix g(m * d, d);
  for (Index i = 0; i < m * d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix v = qr.householderQ() * Matrix::Identity(m * d, d);
  std::vector<Matrix> ops;
  for (Index k = 0; k < m; ++k) ops.push_back(v.block(k * d, 0, d, d));
  return Channel::from_kraus(std::move(ops));
}

}  // namespace qdf
