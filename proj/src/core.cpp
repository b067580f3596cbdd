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

#include "qdf/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace qdf {

namespace {

Index product(const std::vector<Index>& dims) {
  Index n = 1;
  for (Index d : dims) n *= d;
  return n;
}

// Row-major strides; factor 0 is the most significant index.
std::vector<Index> strides_of(const std::vector<Index>& dims) {
  std::vector<Index> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

}  // namespace

Matrix kron(std::initializer_list<Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const Matrix& f : factors) out = kron(out, f);
  return out;
}

Vector basis_ket(Index k, Index d) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -ii, ii, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix partial_trace(const Matrix& op, const std::vector<Index>& dims, int keep) {
  return partial_trace(op, dims, std::vector<int>{keep});
}

Matrix partial_trace(const Matrix& op, const std::vector<Index>& dims,
                     const std::vector<int>& keep) {
  const Index total = product(dims);
  if (op.rows() != total || op.cols() != total)
    throw ValidationError("partial_trace: operator does not match factor dimensions");
  for (int k : keep)
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw ValidationError("partial_trace: invalid factor index");

  std::vector<int> traced;
  for (int f = 0; f < static_cast<int>(dims.size()); ++f)
    if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);

  const auto strides = strides_of(dims);
  std::vector<Index> keep_dims, traced_dims;
  for (int f : keep) keep_dims.push_back(dims[f]);
  for (int f : traced) traced_dims.push_back(dims[f]);
  const Index dk = product(keep_dims);
  const Index dt = product(traced_dims);

  // offset of a multi-index of the given factors within the full space
  auto offset = [&](const std::vector<int>& facs, const std::vector<Index>& fdims, Index flat) {
    Index off = 0;
    for (int k = static_cast<int>(facs.size()) - 1; k >= 0; --k) {
      off += (flat % fdims[k]) * strides[facs[k]];
      flat /= fdims[k];
    }
    return off;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (Index t = 0; t < dt; ++t) {
    const Index to = offset(traced, traced_dims, t);
    for (Index r = 0; r < dk; ++r) {
      const Index ro = offset(keep, keep_dims, r) + to;
      for (Index c = 0; c < dk; ++c) out(r, c) += op(ro, offset(keep, keep_dims, c) + to);
    }
  }
  return out;
}

Matrix embed_operator(const Matrix& op, const std::vector<Index>& dims,
                      const std::vector<int>& facs) {
  std::vector<Index> op_dims;
  for (int f : facs) {
    if (f < 0 || f >= static_cast<int>(dims.size()))
      throw ValidationError("embed_operator: invalid factor index");
    op_dims.push_back(dims[f]);
  }
  const Index dop = product(op_dims);
  if (op.rows() != dop || op.cols() != dop)
    throw ValidationError("embed_operator: operator does not match selected factors");

  std::vector<int> rest;
  for (int f = 0; f < static_cast<int>(dims.size()); ++f)
    if (std::find(facs.begin(), facs.end(), f) == facs.end()) rest.push_back(f);
  std::vector<Index> rest_dims;
  for (int f : rest) rest_dims.push_back(dims[f]);
  const Index dr = product(rest_dims);

  const auto strides = strides_of(dims);
  auto offset = [&](const std::vector<int>& fs, const std::vector<Index>& fdims, Index flat) {
    Index off = 0;
    for (int k = static_cast<int>(fs.size()) - 1; k >= 0; --k) {
      off += (flat % fdims[k]) * strides[fs[k]];
      flat /= fdims[k];
    }
    return off;
  };

  const Index total = product(dims);
  Matrix out = Matrix::Zero(total, total);
  for (Index a = 0; a < dop; ++a) {
    const Index ra = offset(facs, op_dims, a);
    for (Index b = 0; b < dop; ++b) {
      const cxd val = op(a, b);
      if (val == cxd(0.0, 0.0)) continue;
      const Index cb = offset(facs, op_dims, b);
      for (Index r = 0; r < dr; ++r) {
        const Index ro = offset(rest, rest_dims, r);
        out(ra + ro, cb + ro) = val;
      }
    }
  }
  return out;
}

Matrix permute_factors(const Matrix& op, const std::vector<Index>& dims,
                       const std::vector<int>& perm) {
  if (perm.size() != dims.size())
    throw ValidationError("permute_factors: permutation size mismatch");
  const Index total = product(dims);
  if (op.rows() != total || op.cols() != total)
    throw ValidationError("permute_factors: operator does not match factor dimensions");

  std::vector<Index> new_dims(dims.size());
  for (size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims[perm[i]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);

  // map old flat index -> new flat index
  std::vector<Index> map(total);
  std::vector<Index> digits(dims.size());
  for (Index idx = 0; idx < total; ++idx) {
    Index rem = idx;
    for (size_t k = 0; k < dims.size(); ++k) {
      digits[k] = rem / old_strides[k];
      rem %= old_strides[k];
    }
    Index out = 0;
    for (size_t k = 0; k < dims.size(); ++k) out += digits[perm[k]] * new_strides[k];
    map[idx] = out;
  }

  Matrix out(total, total);
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c) out(map[r], map[c]) = op(r, c);
  return out;
}

EigenDecomposition sorted_eig_desc(const Matrix& h, double herm_tol) {
  if (!is_hermitian(h, herm_tol)) throw ValidationError("sorted_eig_desc: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((h + h.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw ValidationError("sorted_eig_desc: eigensolver failed");
  const Index n = h.rows();
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // solver returns ascending order; reverse for descending
  for (Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Matrix hermitian_function(const Matrix& p, const std::function<double(double)>& f,
                          double herm_tol) {
  const auto eig = sorted_eig_desc(p, herm_tol);
  RealVector fv(eig.values.size());
  for (Index k = 0; k < fv.size(); ++k) fv(k) = f(eig.values(k));
  return eig.vectors * fv.cast<cxd>().asDiagonal() * eig.vectors.adjoint();
}

Matrix mat_sqrt_psd(const Matrix& p, double herm_tol) {
  return hermitian_function(
      p, [](double x) { return std::sqrt(std::max(0.0, x)); }, herm_tol);
}

Matrix mat_cos(const Matrix& h, double herm_tol) {
  return hermitian_function(h, [](double x) { return std::cos(x); }, herm_tol);
}

Matrix mat_sin(const Matrix& h, double herm_tol) {
  return hermitian_function(h, [](double x) { return std::sin(x); }, herm_tol);
}

Matrix mat_arccos(const Matrix& p, double herm_tol) {
  const auto eig = sorted_eig_desc(p, herm_tol);
  for (Index k = 0; k < eig.values.size(); ++k) {
    const double x = eig.values(k);
    if (x < -1e-10 || x > 1.0 + 1e-10)
      throw ValidationError("mat_arccos: eigenvalue outside [0, 1] beyond clamp tolerance");
  }
  RealVector fv(eig.values.size());
  for (Index k = 0; k < fv.size(); ++k)
    fv(k) = std::acos(std::clamp(eig.values(k), 0.0, 1.0));
  return eig.vectors * fv.cast<cxd>().asDiagonal() * eig.vectors.adjoint();
}

Matrix expm_herm(const Matrix& h, double t, double herm_tol) {
  const auto eig = sorted_eig_desc(h, herm_tol);
  Vector phases(eig.values.size());
  for (Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(-ii * cxd(t * eig.values(k)));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

double tv_distance_herm(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("tv_distance: dimension mismatch");
  Matrix diff = (a - b + (a - b).adjoint()) / 2.0;
  // orient the difference so swapping the arguments runs identical
  // arithmetic; the absolute spectrum is unaffected
  for (Index i = 0; i < diff.size(); ++i) {
    const cxd v = diff.data()[i];
    if (v != cxd(0.0, 0.0)) {
      if (v.real() < 0.0 || (v.real() == 0.0 && v.imag() < 0.0)) diff = -diff;
      break;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

DensityOperator::DensityOperator(Matrix m, double herm_tol, double psd_tol) : mat(std::move(m)) {
  check_finite(mat, "DensityOperator");
  if (mat.rows() != mat.cols() || mat.rows() == 0)
    throw ValidationError("DensityOperator: matrix must be square and nonempty");
  if (!is_hermitian(mat, herm_tol)) throw ValidationError("DensityOperator: not Hermitian");
  if (std::abs(mat.trace() - cxd(1.0)) > 1e-10)
    throw ValidationError("DensityOperator: trace not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((mat + mat.adjoint()) / 2.0);
  if (solver.eigenvalues().minCoeff() < -psd_tol)
    throw ValidationError("DensityOperator: negative eigenvalue");
}

double tv_distance(const DensityOperator& a, const DensityOperator& b) {
  return tv_distance_herm(a.mat, b.mat);
}

UnitaryOperator::UnitaryOperator(Matrix m, double u_tol) : mat(std::move(m)) {
  check_finite(mat, "UnitaryOperator");
  if (mat.rows() != mat.cols() || mat.rows() == 0)
    throw ValidationError("UnitaryOperator: matrix must be square and nonempty");
  if (max_abs(Matrix(mat.adjoint() * mat - identity(mat.rows()))) > u_tol)
    throw ValidationError("UnitaryOperator: not unitary");
}

Isometry::Isometry(Matrix m, double iso_tol) : mat(std::move(m)) {
  check_finite(mat, "Isometry");
  if (mat.rows() < mat.cols() || mat.cols() == 0)
    throw ValidationError("Isometry: requires dim_out >= dim_in >= 1");
  if (max_abs(Matrix(mat.adjoint() * mat - identity(mat.cols()))) > iso_tol)
    throw ValidationError("Isometry: columns not orthonormal");
}

Matrix complete_orthonormal(const Matrix& cols, double skip_tol) {
  const Index n = cols.rows();
  Matrix out(n, n);
  Index have = cols.cols();
  if (have > n) throw ValidationError("complete_orthonormal: too many columns");
  out.leftCols(have) = cols;
  for (Index cand = 0; cand < n && have < n; ++cand) {
    Vector v = basis_ket(cand, n);
    // orthogonalize twice for stability
    for (int pass = 0; pass < 2; ++pass)
      v -= out.leftCols(have) * (out.leftCols(have).adjoint() * v).eval();
    const double norm = v.norm();
    if (norm < skip_tol) continue;
    out.col(have++) = v / norm;
  }
  if (have < n) throw ValidationError("complete_orthonormal: completion failed");
  return out;
}

Matrix basis_reflector(const Vector& v, Index k) {
  const Index n = v.size();
  if (k < 0 || k >= n) throw ValidationError("basis_reflector: index out of range");
  Vector u = v / v.norm();
  // rotate the global phase so <e_k|u> is real and nonnegative
  if (std::abs(u(k)) > 1e-14) u *= std::conj(u(k)) / std::abs(u(k));
  Vector w = u - basis_ket(k, n);
  const double wn = w.norm();
  if (wn < 1e-14) return identity(n);
  w /= wn;
  return identity(n) - 2.0 * (w * w.adjoint());
}

// splitmix64 step; stable across platforms unlike std:: distributions
std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Matrix random_hermitian(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.cnormal();
  return (g + g.adjoint()) / 2.0;
}

Matrix random_unitary(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * identity(n);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const cxd d = r(k, k);
    q.col(k) *= std::abs(d) > 1e-300 ? d / std::abs(d) : cxd(1.0);
  }
  return q;
}

Vector random_ket(Index n, Rng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.cnormal();
  return v / v.norm();
}

DensityOperator random_density(Index n, Rng& rng, Index rank) {
  if (rank <= 0 || rank > n) rank = n;
  Matrix g(n, rank);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = rng.cnormal();
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOperator((rho + rho.adjoint()) / 2.0);
}

int max_threads() {
  if (const char* env = std::getenv("QDF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(Index n, const std::function<void(Index)>& fn) {
  const int threads = std::min<Index>(max_threads(), n);
  if (threads <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (Index i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qdf
