// Copyright 2026 The ncbase Authors
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

// Noncommutative base norms. For a base specification (cone, f1) and a
// selfadjoint x at level n,
//
//     ||x||_n = min { ||f1^(n)(y + z)|| : x = y - z, y, z in the cone },
//
// and a general x is measured through its selfadjoint dilation at level 2n.

#pragma once

#include <vector>

#include "ncbase/cones.hpp"
#include "ncbase/random.hpp"
#include "ncbase/report.hpp"

namespace ncbase {

struct NormResult {
  double value = 0.0;
  /// x = y - z with y, z in the cone (for the dilation when computed via tilde).
  Mat y, z;
  /// Dominating matrix W with f1(y + z) + W = value * I.
  Mat w;
  double gap = 0.0;
  conic::Status status = conic::Status::Inaccurate;
  int iterations = 0;
};

NormResult nc_base_norm_sa(const BaseSpec& b, const Mat& x);
NormResult nc_base_norm(const BaseSpec& b, const Mat& x);

/// The norm of a selfadjoint phi in M_n(S^*) seen from the order side:
/// max <<phi, X>> over X in M_n(S) with W (x) 1 +- X >= 0 for some state-like
/// W (W >= 0, Tr W = 1). This is the conic dual of nc_base_norm_sa over the
/// DualCP cone; `phi` is given by its representer.
NormResult dual_order_unit_norm(const BaseSpec& b, const Mat& phi);

struct BaseDecomposition {
  Mat alpha;  // n x n PSD
  Mat k;      // base element: f1^(n)(k) = I
};

/// x = alpha^* k alpha with alpha = f1^(n)(x)^{1/2}. Throws if x is not in the cone.
BaseDecomposition base_decompose(const BaseSpec& b, const Mat& x, double tol = 1e-7);

/// Linear maps between two base specifications of the same kind, as a
/// coefficient matrix U of size dim(S_Y) x dim(S_X):
///   Inherited  u(b_r) = sum_s U(s, r) b'_s  (u : S_X -> S_Y)
///   DualCP     u(delta_r)(b'_s) = U(s, r), delta_r the dual basis of S_X^*;
///              equivalently u(phi) = phi o T with T(b'_s) = sum_r U(s, r) b_r.
struct MorphismReport {
  Verdict completely_positive = Verdict::Indeterminate;
  double cp_margin = 0.0;
  double f1_residual = 0.0;
  bool pass = false;
};

MorphismReport is_base_morphism(const BaseSpec& src, const BaseSpec& dst, const Mat& u,
                                double tol = 1e-7);

/// U for the channel rho -> sum_j K_j rho K_j^* acting on densities, between
/// DualCP spaces over src (d_X) and dst (d_Y); K_j is d_Y x d_X.
Mat channel_coefficients(const OperatorSystem& src, const OperatorSystem& dst,
                         const std::vector<Mat>& kraus);

/// max ||phi^(k)(x)|| over sampled x in the unit ball of M_k(S): singular-vector
/// ascent from random starts, then up to `polish_iterations` exact alternating
/// steps (each an SDP over the unit ball). A lower bound on the cb norm.
double cb_lower_bound(const DualElement& phi, int k, int restarts, Rng& rng, int polish_iterations = 0);

struct DualityOptions {
  std::vector<int> levels{1, 2};
  int samples = 50;
  double tol = 1e-5;
  int cb_restarts = 50;
  /// Exact alternating steps at k = n.
  int cb_polish = 10;
  bool cb_bound = true;
};

/// nc_base_norm_sa versus dual_order_unit_norm on random selfadjoint
/// functionals, plus the sampled cb-norm lower bound.
Report verify_duality(const OperatorSystem& sys, const DualityOptions& opt, Rng& rng);

struct MbosOptions {
  std::vector<int> levels{1, 2};
  int samples = 10;
  double tol = 1e-7;
  /// Cap on t relative to ||x|| f1(1), which always suffices; a large cap
  /// ruins the scaling of the program.
  double t_max_factor = 10.0;
};

/// The dominance problem min{t : K in cone, f1(K) = t I, K - x in cone, t <= t_max}.
/// Returns +inf when no t <= t_max works.
double dominance_scale(const BaseSpec& b, const Mat& x, double t_max);

/// Checks the matrix base ordered space conditions: strict positivity of f1,
/// domination of sampled x by multiples of base elements, and definiteness of
/// the nc base norm against the ambient norm.
Report mbos_validate(const BaseSpec& b, const MbosOptions& opt, Rng& rng);

}  // namespace ncbase
