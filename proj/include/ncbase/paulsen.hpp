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

// The Paulsen system S_V = {[[lambda I, x], [y^*, mu I]] : x, y in V} of an
// operator space V in M_{d1 x d2}, with the base function
// tau([[lambda I, x], [y^*, mu I]]) = (lambda + mu) / 2.
//
// Level-n elements are ambient matrices in the usual level-outer layout. The
// corner form regroups them as [[lambda (x) I_d1, X], [Y^*, mu (x) I_d2]] with
// X in M_n(V) of size n d1 x n d2 (level outer as well).

#pragma once

#include <vector>

#include "ncbase/cones.hpp"
#include "ncbase/random.hpp"
#include "ncbase/report.hpp"

namespace ncbase {

class OperatorSpaceRep {
 public:
  /// Throws std::invalid_argument on shape mismatch or linear dependence.
  static OperatorSpaceRep make(int rows, int cols, std::vector<Mat> basis, Field field);

  Field field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Mat>& basis() const { return basis_; }

 private:
  OperatorSpaceRep(int r, int c, std::vector<Mat> b, Field f)
      : field_(f), rows_(r), cols_(c), basis_(std::move(b)) {}
  Field field_;
  int rows_, cols_;
  std::vector<Mat> basis_;
};

/// `dim` Gaussian d1 x d2 matrices.
OperatorSpaceRep random_operator_space(Rng& rng, int d1, int d2, int dim, Field field);

struct PaulsenSystem {
  OperatorSpaceRep v;
  OperatorSystem sys;
  /// Inherited cone with f1 = tau.
  BaseSpec base;
};

PaulsenSystem build_paulsen(const OperatorSpaceRep& v, int max_level = 4);

/// The level-n element [[lambda I, x], [y^*, mu I]]; x, y are n d1 x n d2.
Mat paulsen_element(const PaulsenSystem& ps, const Mat& lambda, const Mat& mu, const Mat& x, const Mat& y);
/// [[lambda I, x], [x^*, mu I]].
Mat paulsen_element(const PaulsenSystem& ps, const Mat& lambda, const Mat& mu, const Mat& x);

/// Level-outer to corner form and back (a permutation similarity).
Mat to_corner_form(const PaulsenSystem& ps, const Mat& p);
Mat from_corner_form(const PaulsenSystem& ps, const Mat& c);

struct PaulsenParts {
  Mat lambda, mu;  // n x n
  Mat x, y;        // n d1 x n d2; the 2-1 corner is y^*
};

/// Splits a level-n element. Throws std::invalid_argument if a diagonal block
/// is not a scalar multiple of the identity or a corner leaves V.
PaulsenParts paulsen_parts(const PaulsenSystem& ps, const Mat& p, double tol = 1e-8);

struct PositivityCheck {
  bool ambient_psd = false;
  /// No probe pair violated |<x zeta, eta>|^2 <= <lambda eta, eta> <mu zeta, zeta>.
  bool bilinear_holds = false;
  bool agree = false;
  int probes = 0;
  double worst_violation = 0.0;
  /// For n = 1: positivity implies ||x|| <= sqrt(lambda mu).
  bool norm_bound_consistent = true;
};

/// Compares the ambient PSD test of [[lambda I, x], [x^*, mu I]] with the
/// bilinear-form criterion over structured probes (extremal singular pairs,
/// kernel directions) and `random_pairs` random pairs.
PositivityCheck positivity_formula_check(const PaulsenSystem& ps, const Mat& lambda, const Mat& mu,
                                         const Mat& x, Rng& rng, int random_pairs = 500,
                                         double tol = 1e-9);

struct PaulsenDecomposition {
  Mat lambda_sqrt, mu_sqrt;  // n x n PSD
  Mat z;                     // n d1 x n d2, ||z|| <= 1
  /// (lambda^{1/2} (+) mu^{1/2}) [[I, z], [z^*, I]] (lambda^{1/2} (+) mu^{1/2}) in level layout.
  Mat reconstruct(const PaulsenSystem& ps) const;
};

/// Throws std::invalid_argument if p is not a positive element of M_n(S_V).
PaulsenDecomposition positive_decompose(const PaulsenSystem& ps, const Mat& p, double tol = 1e-7);

/// The candidate [[lambda I, x], [x^*, (2 - lambda) I]] at level 1.
Mat k1_candidate(const PaulsenSystem& ps, double lambda, const Mat& x);
/// 0 <= lambda <= 2 and ||x||^2 <= lambda (2 - lambda), within tol.
bool k1_membership(const PaulsenSystem& ps, double lambda, const Mat& x, double tol = 1e-7);

/// A base element of M_n(S_V) built from random positive data, sometimes
/// with singular diagonal blocks or a corner of norm one.
Mat random_base_element(const PaulsenSystem& ps, int n, Rng& rng);

struct WitnessResult {
  double norm = 0.0;
  Mat element;
  int restarts_used = 0;
};

/// Searches the level-n base for an element of large spectral norm by
/// alternating between a linear SDP over the base and the top eigenvector.
/// Stops early once `target` is reached.
WitnessResult search_norm_witness(const PaulsenSystem& ps, int n, int restarts, double target, Rng& rng);

struct EquivalenceOptions {
  std::vector<int> levels{1, 2};
  int samples = 50;
  double tol = 1e-5;
  double base_norm_tol = 1e-6;
  int witness_restarts = 100;
  double witness_tol = 1e-3;
};

/// (1/2) ||u||_tau <= ||u|| <= 4 ||u||_tau on sampled u, sampled base elements
/// of norm at most 4, and a level-2 base element of norm near 4.
Report verify_equivalence(const PaulsenSystem& ps, const EquivalenceOptions& opt, Rng& rng);

}  // namespace ncbase
