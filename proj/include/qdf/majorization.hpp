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

#include "qdf/dilation.hpp"

namespace qdf {

struct ProbabilityVector {
  RealVector weights;

  explicit ProbabilityVector(RealVector w);
  Index size() const { return weights.size(); }
};

/// p majorizes q: every prefix sum of the descending-sorted p dominates the
/// corresponding prefix of q (slack -1e-12). Shorter vectors are zero-padded.
bool majorizes(const ProbabilityVector& p, const ProbabilityVector& q);

/// Unitary V with q_i = sum_j |V_ij|^2 p_j (in the given coordinate orders),
/// built as a chain of at most n-1 real Givens rotations plus the sorting
/// permutations. Requires p to majorize q.
Matrix unistochastic_connect(const ProbabilityVector& p, const ProbabilityVector& q);

/// Target of the form sum_j q_j U_j rho U_j^dag with strictly positive
/// weights.
struct StochasticUnitarySpec {
  std::vector<Matrix> unitaries;
  ProbabilityVector weights;

  StochasticUnitarySpec(std::vector<Matrix> us, ProbabilityVector w);
  Index dim() const { return unitaries.front().rows(); }
  Index size() const { return static_cast<Index>(unitaries.size()); }
  Channel channel() const;
};

/// Weighted convex combination of channels, each certified extreme at
/// construction.
struct ConvexCombinationSpec {
  struct Component {
    double weight;
    Channel channel;
    ExtremalityVerdict verdict;
  };
  std::vector<Component> components;

  ConvexCombinationSpec(std::vector<std::pair<double, Channel>> parts,
                        double sv_tol = 1e-7);
  Index dim() const { return components.front().channel.dim(); }
  Index count() const { return static_cast<Index>(components.size()); }
  Channel combined() const;
};

/// Mixed-subsystem initialization with cofactor dimension 1: the top-m
/// eigenvectors of rho_E host a diagonal subsystem state, everything else
/// is the remainder. epsilon is the truncated tail mass.
MixedInitialization mixed_subsystem_init(const DensityOperator& rho_e, Index m);

/// Conditional-unitary design for stochastic-unitary targets: rotate the
/// subsystem spectrum onto the target weights with the unistochastic
/// connector, then apply U_j conditionally on the subsystem state. Exact
/// when the initialization is (epsilon = 0).
DilationReport design_stochastic_unitary(const StochasticUnitarySpec& spec,
                                         const MixedInitialization& init);

/// Block-convex construction for a convex combination of extreme channels:
/// sort the environment spectrum, find the cofactor size f whose prefix
/// sums dominate the weight prefixes, place one Stinespring block per
/// component on eigenvector + kernel coordinates, and mix the block weights
/// unistochastically. Throws InfeasibleError ("method not viable" /
/// "insufficient kernel") when the spectrum cannot support the combination.
DilationReport block_convex_design(const ConvexCombinationSpec& spec,
                                   const DensityOperator& rho_e);

}  // namespace qdf
