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

struct ExtremeComponent {
  double weight = 0.0;
  Channel channel;
  ExtremalityVerdict verdict;
  bool quasi_extreme = false;  // min singular value within 10x of the threshold
};

/// Decompose a channel into a convex combination of extreme channels by
/// peeling: while a leaf fails the extremality test, a Hermitian dependence
/// among its Kraus products is lifted to a trace-preserving Choi direction
/// and followed to the positive-semidefinite boundary on both sides,
/// splitting the leaf in two. Component count is capped at max_components
/// (default d_S^4).
std::vector<ExtremeComponent> extreme_decompose(const Channel& ch, double sv_tol = 1e-7,
                                                Index max_components = 0);

struct AverageRealization {
  RealVector distribution;  // sampling weights pi
  std::vector<DilationReport> dilations;
  std::vector<Channel> component_channels;
  double reconstitution_residual = 0.0;  // max-abs Choi residual of the mixture
  double avg_error_measured = 0.0;       // verified 1->1 bound of mixture vs target
  double eps_certified = 0.0;
  std::vector<std::string> warnings;
};

/// Realize an arbitrary channel as a classically sampled family of
/// extreme-channel dilations sharing one d_S-dimensional subsystem
/// initialization. The certified average error is the initialization
/// epsilon.
AverageRealization realize_on_average(const Channel& ch, const Initialization& init,
                                      double sv_tol = 1e-7);

/// Deterministic-given-seed categorical draw from the realization.
std::pair<Index, DilationReport> sample_realization(const AverageRealization& ar,
                                                    std::uint64_t seed);

}  // namespace qdf
