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

#include "qdf/core.hpp"

namespace qdf {

/// Operator-sum representation {M_j}. Trace preservation
/// sum_j M_j^dag M_j = I is enforced at construction.
struct KrausSet {
  std::vector<Matrix> ops;

  explicit KrausSet(std::vector<Matrix> o, double tp_tol = tol::eq);
  Index dim() const { return ops.front().rows(); }
  Index size() const { return static_cast<Index>(ops.size()); }
};

/// Choi state of a channel, normalized to trace one. Composite index
/// convention: i*d + j addresses |i>_out (x) |j>_ref.
struct ChoiMatrix {
  Index d;
  Matrix mat;

  ChoiMatrix(Index d_in, Matrix m, double psd_tol = tol::psd, double tp_tol = tol::eq);
};

/// A CPTP map held in both representations (built eagerly so instances are
/// immutable and safe to share across threads).
class Channel {
 public:
  static Channel from_kraus(std::vector<Matrix> ops, double tp_tol = tol::eq);
  static Channel from_choi(Matrix choi, double tp_tol = tol::eq, double psd_tol = tol::psd);

  Index dim() const { return kraus_.dim(); }
  const KrausSet& kraus() const { return kraus_; }
  const ChoiMatrix& choi() const { return choi_; }

 private:
  Channel(KrausSet k, ChoiMatrix c) : kraus_(std::move(k)), choi_(std::move(c)) {}
  KrausSet kraus_;
  ChoiMatrix choi_;
};

ChoiMatrix kraus_to_choi(const KrausSet& ks);

/// Canonical Kraus set from the Choi eigendecomposition: eigenvalues
/// descending, eigenvector phases fixed, entries kept above `rel_tol` times
/// the top eigenvalue. Throws on eigenvalues below the negative tolerance.
KrausSet choi_to_kraus(const ChoiMatrix& c, double rel_tol = 1e-9, double tp_tol = tol::eq);

/// Rank of the Choi matrix at relative eigenvalue threshold 1e-9.
Index kraus_rank(const Channel& ch, double rel_tol = 1e-9);

struct ExtremalityVerdict {
  bool is_extreme = false;
  Index gram_rank = 0;
  Index m = 0;  // Kraus rank of the canonical set
  double min_singular_value = 0.0;
};

/// Columns are the row-major flattened products M_k^dag M_j (column k*m + j).
Matrix gram_stack(const KrausSet& ks);

/// Extremality via linear independence of {M_k^dag M_j} for the canonical
/// Kraus set: extreme iff the smallest of the m^2 singular values of the
/// product stack exceeds `sv_tol`. Ranks above the system dimension are
/// rejected by dimension count without the stack computation.
ExtremalityVerdict extremality_test(const Channel& ch, double sv_tol = 1e-7);

Matrix apply_map(const KrausSet& ks, const Matrix& x);
DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho);

struct Distance1to1 {
  double lower_bound = 0.0;
  Matrix argmax_state;  // pure state attaining the bound
};

/// Certified lower bound on (1/2)||a - b||_{1->1}, maximized over explored
/// pure inputs. Multi-start alternating ascent; for qubit channels the Bloch
/// sphere is additionally swept on a 1-degree grid, which pins the bound to
/// within 1e-3 of the true value.
Distance1to1 channel_distance_1to1(const Channel& a, const Channel& b, int restarts = 8,
                                   std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Standard channels
// ---------------------------------------------------------------------------

Channel identity_channel(Index d);
Channel unitary_channel(const Matrix& u);
/// Qubit depolarizing map rho -> (1-p) rho + p I/2.
Channel depolarizing_channel(double p);
Channel amplitude_damping_channel(double gamma);
/// All-to-one map rho -> |k><k| on dimension d.
Channel replacement_channel(Index d, Index k = 0);
Channel mixed_unitary_channel(const std::vector<Matrix>& us, const RealVector& weights);
/// Random channel of Kraus rank (at most, generically exactly) m from a
/// Haar-random Stinespring isometry.
Channel random_channel(Index d, Index m, Rng& rng);

}  // namespace qdf
