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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdf {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using cxd = std::complex<double>;
using Matrix = DenseMatrix<cxd>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cxd ii{0.0, 1.0};

// Centralized tolerance defaults. Every check takes an explicit tolerance
// argument defaulting to one of these.
namespace tol {
inline constexpr double hermitian = 1e-10;  // Hermiticity / unitarity, max-abs
inline constexpr double psd = 1e-10;        // eigenvalue floor
inline constexpr double eq = 1e-9;          // operator equality
}  // namespace tol

/// Input violates a structural invariant (not Hermitian, not trace one, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction is mathematically infeasible for the given resources
/// (majorization violation, method not viable, ...). Distinct from
/// ValidationError so callers can map it to a dedicated exit code.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Expression-friendly free functions
// ---------------------------------------------------------------------------

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tolerance = tol::hermitian) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint().eval()) <= tolerance;
}

/// Kronecker product, row-major composite index convention:
/// (a (x) b)[i*rows_b + k, j*cols_b + l] = a[i,j] * b[k,l].
template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
  return out;
}

Matrix kron(std::initializer_list<Matrix> factors);

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

/// Basis column vector |k> in dimension d.
Vector basis_ket(Index k, Index d);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// ---------------------------------------------------------------------------
// Composite spaces
//
// Convention used throughout: environment-like factors come FIRST in every
// composite space, the system factor comes LAST. Joint unitaries then carry
// their ancilla block structure in the leading index.
// ---------------------------------------------------------------------------

struct CompositeSpace {
  std::vector<Index> factors;

  explicit CompositeSpace(std::vector<Index> f) : factors(std::move(f)) {
    for (Index d : factors)
      if (d <= 0) throw ValidationError("CompositeSpace: factors must be positive");
  }

  Index dim() const {
    Index n = 1;
    for (Index d : factors) n *= d;
    return n;
  }
};

/// Partial trace keeping exactly the factor `keep` of the composite space.
Matrix partial_trace(const Matrix& op, const std::vector<Index>& dims, int keep);

/// Partial trace keeping the (sorted, distinct) factors in `keep`.
Matrix partial_trace(const Matrix& op, const std::vector<Index>& dims,
                     const std::vector<int>& keep);

inline Matrix partial_trace(const Matrix& op, const CompositeSpace& space, int keep) {
  return partial_trace(op, space.factors, keep);
}

/// Lift `op`, acting on the ordered factor subset `facs`, to the full
/// composite space (identity on the remaining factors).
Matrix embed_operator(const Matrix& op, const std::vector<Index>& dims,
                      const std::vector<int>& facs);

/// Reorder tensor factors: entry `perm[i]` names the old factor placed at
/// new position i.
Matrix permute_factors(const Matrix& op, const std::vector<Index>& dims,
                       const std::vector<int>& perm);

// ---------------------------------------------------------------------------
// Hermitian spectral calculus
// ---------------------------------------------------------------------------

struct EigenDecomposition {
  RealVector values;  // descending
  Matrix vectors;     // columns match `values`
};

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order (ties keep the solver's order, so results are
/// deterministic for identical inputs).
EigenDecomposition sorted_eig_desc(const Matrix& h, double herm_tol = tol::hermitian);

/// f(P) = V f(Lambda) V^dag for Hermitian P.
Matrix hermitian_function(const Matrix& p, const std::function<double(double)>& f,
                          double herm_tol = tol::hermitian);

Matrix mat_sqrt_psd(const Matrix& p, double herm_tol = tol::hermitian);
Matrix mat_cos(const Matrix& h, double herm_tol = tol::hermitian);
Matrix mat_sin(const Matrix& h, double herm_tol = tol::hermitian);

/// Principal-branch arccos of a PSD matrix with spectrum in [0, 1+1e-10];
/// eigenvalues are clamped to [0, 1], anything further out is an error.
Matrix mat_arccos(const Matrix& p, double herm_tol = tol::hermitian);

/// exp(-i t H) for Hermitian H.
Matrix expm_herm(const Matrix& h, double t = 1.0, double herm_tol = tol::hermitian);

/// Total-variation distance (1/2)||a - b||_1 of Hermitian operators.
double tv_distance_herm(const Matrix& a, const Matrix& b);

// ---------------------------------------------------------------------------
// Validated operator wrappers
// ---------------------------------------------------------------------------

struct DensityOperator {
  Matrix mat;

  explicit DensityOperator(Matrix m, double herm_tol = tol::hermitian,
                           double psd_tol = tol::psd);
  Index dim() const { return mat.rows(); }
};

double tv_distance(const DensityOperator& a, const DensityOperator& b);

struct UnitaryOperator {
  Matrix mat;

  explicit UnitaryOperator(Matrix m, double u_tol = tol::hermitian);
  Index dim() const { return mat.rows(); }
};

struct Isometry {
  Matrix mat;

  explicit Isometry(Matrix m, double iso_tol = tol::hermitian);
  Index dim_in() const { return mat.cols(); }
  Index dim_out() const { return mat.rows(); }
};

// ---------------------------------------------------------------------------
// Deterministic orthonormal completions
// ---------------------------------------------------------------------------

/// Extend k orthonormal columns to a full unitary by orthogonalizing the
/// canonical basis vectors in index order (candidates with residual norm
/// below `skip_tol` after orthogonalization are skipped).
Matrix complete_orthonormal(const Matrix& cols, double skip_tol = 1e-8);

/// Householder reflector R with R|v> = |e_k> (up to the global phase of v);
/// fixes the orthogonal complement of span{v, e_k}.
Matrix basis_reflector(const Vector& v, Index k);

// ---------------------------------------------------------------------------
// Deterministic random sources (seeded, platform independent)
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  /// Uniform double in [0, 1).
  double uniform();
  /// Standard normal via Box-Muller (no libstdc++ distribution dependence).
  double normal();
  cxd cnormal() { double re = normal(); double im = normal(); return {re, im}; }
  std::uint64_t next_u64();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Matrix random_hermitian(Index n, Rng& rng);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase-fixed R).
Matrix random_unitary(Index n, Rng& rng);
Vector random_ket(Index n, Rng& rng);
/// Random full-rank density operator, or rank-limited when rank > 0.
DensityOperator random_density(Index n, Rng& rng, Index rank = 0);

/// Thread cap read from QDF_THREADS (defaults to hardware concurrency).
int max_threads();

/// Run fn(i) for i in [0, n) on up to max_threads() threads. Results must be
/// written to index-addressed storage so the reduction stays deterministic.
void parallel_for(Index n, const std::function<void(Index)>& fn);

}  // namespace qdf
