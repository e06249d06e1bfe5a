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

// Scalar-level base norm spaces with a polytope base K = conv(k_1..k_m) in
// R^dim, and their complex extensions.

#pragma once

#include <functional>
#include <vector>

#include "ncbase/matcore.hpp"
#include "ncbase/opsys.hpp"
#include "ncbase/random.hpp"
#include "ncbase/report.hpp"

namespace ncbase {

class ClassicalBaseSpace {
 public:
  /// Solves for f1 with f1(k_i) = 1 and checks the points span R^dim.
  /// Throws std::invalid_argument if either fails.
  static ClassicalBaseSpace make(std::vector<RVec> base_points);
  /// As above, but checks a given f1 instead of solving for it.
  static ClassicalBaseSpace make(std::vector<RVec> base_points, const RVec& f1);
  /// The standard simplex conv(e_1..e_n), f1 = (1, ..., 1).
  static ClassicalBaseSpace simplex(int n);

  int dim() const { return static_cast<int>(f1_.size()); }
  const std::vector<RVec>& base_points() const { return points_; }
  const RVec& f1() const { return f1_; }

 private:
  ClassicalBaseSpace(std::vector<RVec> p, RVec f) : points_(std::move(p)), f1_(std::move(f)) {}
  std::vector<RVec> points_;
  RVec f1_;
};

struct ComplexPoint {
  RVec re, im;
};

/// min sum(c+ + c-) over u = sum c+_i k_i - sum c-_i k_i, c+- >= 0.
double minkowski_gauge(const ClassicalBaseSpace& sp, const RVec& u);

/// min sum r_i over u = sum t_i k_i with t_i complex and |t_i| <= r_i.
double extended_base_norm(const ClassicalBaseSpace& sp, const ComplexPoint& u);

/// sup over theta of norm(cos(theta) x + sin(theta) y).
double taylor_norm(const RVec& x, const RVec& y, const std::function<double(const RVec&)>& norm);

/// The order unit norm on functionals, max_i |v(k_i)|; the real norm dual to
/// minkowski_gauge.
double functional_norm(const ClassicalBaseSpace& sp, const RVec& v);

bool abs_conv_hull_membership(const ClassicalBaseSpace& sp, const ComplexPoint& u, double tol = 1e-7);

/// min ||u - sum w_i p_i||_1 over convex weights w.
double hull_residual(const std::vector<RVec>& points, const RVec& u);

/// Points of the list not in the convex hull of the others.
std::vector<RVec> extreme_points(const std::vector<RVec>& points, double tol = 1e-9);

/// Re-derives the base as the slice f1 = 1 of the generated cone and checks it
/// is the original hull.
Report cone_closure_idempotence(const ClassicalBaseSpace& sp, Rng& rng, int samples = 50,
                                double tol = 1e-7);

struct TaylorOptions {
  int pairs = 500;
  /// Points u for which the supremum over v is searched.
  int sup_points = 50;
  double tol = 1e-7;
  double sup_fraction = 0.98;
};

/// |<u, v>| <= ||u||_ext ||v||_T on random pairs, the sampled supremum of
/// |<u, v>| / ||v||_T against ||u||_ext, and agreement with the gauge on real u.
Report verify_taylor_duality(const ClassicalBaseSpace& sp, const TaylorOptions& opt, Rng& rng);

/// c(x, y) = [[x, y], [-y, x]] for x, y in M_n(S) as ambient matrices.
Mat complexify_pair(const OperatorSystem& sys, const Mat& x, const Mat& y);

struct ComplexifyOptions {
  std::vector<int> levels{1, 2};
  int samples = 50;
  double tol = 1e-7;
};

/// For a real system S and its complex span S_c: ||x + iy|| over S_c equals
/// ||c(x, y)|| over S, and x + iy is a base element iff c(x, y) is. Checked for
/// both cone kinds (Inherited with the normalized trace, and DualCP).
Report complexify_check(const OperatorSystem& sys, const ComplexifyOptions& opt, Rng& rng);

}  // namespace ncbase
