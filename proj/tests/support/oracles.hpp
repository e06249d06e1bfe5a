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

// Reference values computed without the library's solver or eigen routines.
// Each oracle uses a different algorithm from the code it checks.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <vector>

#include "ncbase/matcore.hpp"

namespace oracle {

using ncbase::cplx;
using ncbase::Mat;

/// Eigenvalues through the general (non-Hermitian) complex eigensolver.
inline std::vector<double> eigenvalues(const Mat& h) {
  Eigen::ComplexEigenSolver<Mat> es(h, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < h.rows(); ++i) out.push_back(es.eigenvalues()(i).real());
  return out;
}

inline double trace_norm(const Mat& h) {
  double s = 0.0;
  for (double v : eigenvalues(h)) s += std::abs(v);
  return s;
}

inline double min_eigenvalue(const Mat& h) {
  double m = INFINITY;
  for (double v : eigenvalues(h)) m = std::min(m, v);
  return m;
}

/// Largest singular value as the square root of the top eigenvalue of a^* a,
/// by power iteration.
inline double spectral_norm(const Mat& a) {
  const Mat g = a.adjoint() * a;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(g.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 0.01 * double(i);
  double lam = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXcd w = g * v;
    const double nw = w.norm();
    if (nw == 0) return 0.0;
    const double next = std::real(v.dot(w)) / v.squaredNorm();
    v = w / nw;
    if (std::abs(next - lam) <= 1e-15 * std::max(1.0, next)) {
      lam = next;
      break;
    }
    lam = next;
  }
  return std::sqrt(std::max(0.0, lam));
}

/// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.
inline std::pair<double, double> eig2(const Mat& h) {
  const double a = h(0, 0).real(), d = h(1, 1).real();
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
  return {0.5 * (a + d) - r, 0.5 * (a + d) + r};
}

/// Choi matrix sum_ij E_ij (x) phi(E_ij) of a map given on all of M_d.
template <class Map>
Mat choi(int d, int n, Map phi) {
  Mat c = Mat::Zero(d * n, d * n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat e = Mat::Zero(d, d);
      e(i, j) = 1.0;
      c.block(i * n, j * n, n, n) = phi(e);
    }
  return c;
}

inline double l1(const Eigen::VectorXd& v) { return v.cwiseAbs().sum(); }

}  // namespace oracle
