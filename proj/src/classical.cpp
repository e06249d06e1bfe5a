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

#include "ncbase/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ncbase/cones.hpp"
#include "ncbase/conic.hpp"
#include "ncbase/ncnorm.hpp"

namespace ncbase {

namespace {

constexpr double kSolverTol = 1e-10;

RMat point_matrix(const std::vector<RVec>& points) {
  RMat p(points.front().size(), points.size());
  for (std::size_t i = 0; i < points.size(); ++i) p.col(i) = points[i];
  return p;
}

void check_points(const std::vector<RVec>& points) {
  if (points.empty()) throw std::invalid_argument("base space: no base points");
  for (const RVec& p : points) {
    if (p.size() != points.front().size() || p.size() == 0) {
      throw std::invalid_argument("base space: base points must share a positive dimension");
    }
  }
  const RMat p = point_matrix(points);
  Eigen::ColPivHouseholderQR<RMat> qr(p);
  qr.setThreshold(1e-10);
  if (qr.rank() != p.rows()) {
    throw std::invalid_argument("base space: base points do not span R^" + std::to_string(p.rows()));
  }
}

void check_dim(const ClassicalBaseSpace& sp, const RVec& u, const char* who) {
  if (u.size() != sp.dim()) {
    throw std::invalid_argument(std::string(who) + ": expected a vector of length " + std::to_string(sp.dim()));
  }
}

double solved(const conic::Solution& s, const char* who) {
  if (s.status == conic::Status::Optimal ||
      (s.status == conic::Status::Inaccurate && std::max(s.gap, s.primal_residual) <= 1e-7)) {
    return s.primal_objective;
  }
  throw NumericalError(std::string(who) + ": solver returned " + conic::to_string(s.status));
}

// Euclidean projection onto {v : |p_i^T v| <= 1 for every column p_i}, by
// Dykstra's alternating projections.
Eigen::VectorXcd project_unit_values(const RMat& pts, const Eigen::VectorXcd& v0) {
  const Eigen::Index m = pts.cols();
  Eigen::VectorXcd v = v0;
  std::vector<Eigen::VectorXcd> inc(m, Eigen::VectorXcd::Zero(v0.size()));
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::VectorXcd y = v + inc[i];
      const Eigen::VectorXcd p = pts.col(i).cast<cplx>();
      const cplx w = (p.transpose() * y)(0);
      Eigen::VectorXcd next = y;
      if (std::abs(w) > 1.0) next -= p * ((w - w / std::abs(w)) / p.squaredNorm());
      inc[i] = y - next;
      moved = std::max(moved, (next - v).norm());
      v = next;
    }
    if (moved < 1e-12) break;
  }
  return v;
}

}  // namespace

ClassicalBaseSpace ClassicalBaseSpace::make(std::vector<RVec> base_points) {
  check_points(base_points);
  const RMat p = point_matrix(base_points);
  const RVec ones = RVec::Ones(p.cols());
  RVec f = p.transpose().completeOrthogonalDecomposition().solve(ones);
  if ((p.transpose() * f - ones).lpNorm<Eigen::Infinity>() > 1e-10) {
    throw std::invalid_argument("base space: no linear functional equals 1 on every base point");
  }
  return ClassicalBaseSpace(std::move(base_points), std::move(f));
}

ClassicalBaseSpace ClassicalBaseSpace::make(std::vector<RVec> base_points, const RVec& f1) {
  check_points(base_points);
  if (f1.size() != base_points.front().size()) {
    throw std::invalid_argument("base space: f1 has the wrong length");
  }
  for (std::size_t i = 0; i < base_points.size(); ++i) {
    if (std::abs(f1.dot(base_points[i]) - 1.0) > 1e-10) {
      throw std::invalid_argument("base space: f1 is not 1 on base point " + std::to_string(i));
    }
  }
  return ClassicalBaseSpace(std::move(base_points), f1);
}

ClassicalBaseSpace ClassicalBaseSpace::simplex(int n) {
  std::vector<RVec> pts;
  for (int i = 0; i < n; ++i) pts.push_back(RVec::Unit(n, i));
  return make(std::move(pts));
}

double minkowski_gauge(const ClassicalBaseSpace& sp, const RVec& u) {
  check_dim(sp, u, "minkowski_gauge");
  const int m = static_cast<int>(sp.base_points().size());
  conic::Problem p;
  const int c = p.add_nonneg(2 * m);
  for (int j = 0; j < sp.dim(); ++j) {
    conic::LinearForm row;
    for (int i = 0; i < m; ++i) {
      const double v = sp.base_points()[i](j);
      if (v == 0.0) continue;
      row.add_scalar(c, i, v);
      row.add_scalar(c, m + i, -v);
    }
    p.add_equality(std::move(row), u(j));
  }
  conic::LinearForm obj;
  for (int i = 0; i < 2 * m; ++i) obj.add_scalar(c, i, 1.0);
  p.set_objective(std::move(obj));
  return std::max(0.0, solved(conic::solve(p, kSolverTol), "minkowski_gauge"));
}

double extended_base_norm(const ClassicalBaseSpace& sp, const ComplexPoint& u) {
  check_dim(sp, u.re, "extended_base_norm");
  check_dim(sp, u.im, "extended_base_norm");
  const int m = static_cast<int>(sp.base_points().size());
  // Per point a 2x2 block [[p, q], [q, s]] >= 0: Re t = (p - s)/2, Im t = q,
  // and r = (p + s)/2 >= |t|.
  conic::Problem p;
  std::vector<int> blocks;
  for (int i = 0; i < m; ++i) blocks.push_back(p.add_psd(2));
  RMat re_coef(2, 2), im_coef(2, 2), r_coef(2, 2);
  re_coef << 0.5, 0, 0, -0.5;
  im_coef << 0, 0.5, 0.5, 0;
  r_coef << 0.5, 0, 0, 0.5;
  for (int part = 0; part < 2; ++part) {
    const RVec& target = part == 0 ? u.re : u.im;
    for (int j = 0; j < sp.dim(); ++j) {
      conic::LinearForm row;
      for (int i = 0; i < m; ++i) {
        const double v = sp.base_points()[i](j);
        if (v != 0.0) row.add_psd(blocks[i], v * (part == 0 ? re_coef : im_coef));
      }
      p.add_equality(std::move(row), target(j));
    }
  }
  conic::LinearForm obj;
  for (int b : blocks) obj.add_psd(b, r_coef);
  p.set_objective(std::move(obj));
  return std::max(0.0, solved(conic::solve(p, kSolverTol), "extended_base_norm"));
}

double taylor_norm(const RVec& x, const RVec& y, const std::function<double(const RVec&)>& norm) {
  auto f = [&](double t) { return norm(std::cos(t) * x + std::sin(t) * y); };
  constexpr int kGrid = 720;
  const double h = 2.0 * std::numbers::pi / kGrid;
  int best = 0;
  double best_val = -1.0;
  for (int j = 0; j < kGrid; ++j) {
    const double v = f(j * h);
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  // Golden-section refinement around the best grid point.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = (best - 1) * h, b = (best + 1) * h;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-8) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max({best_val, fc, fd});
}

double functional_norm(const ClassicalBaseSpace& sp, const RVec& v) {
  check_dim(sp, v, "functional_norm");
  double m = 0.0;
  for (const RVec& k : sp.base_points()) m = std::max(m, std::abs(v.dot(k)));
  return m;
}

bool abs_conv_hull_membership(const ClassicalBaseSpace& sp, const ComplexPoint& u, double tol) {
  return extended_base_norm(sp, u) <= 1.0 + tol;
}

double hull_residual(const std::vector<RVec>& points, const RVec& u) {
  if (points.empty()) return std::numeric_limits<double>::infinity();
  const int m = static_cast<int>(points.size()), n = static_cast<int>(u.size());
  conic::Problem p;
  const int w = p.add_nonneg(m);
  const int e = p.add_nonneg(2 * n);
  for (int j = 0; j < n; ++j) {
    conic::LinearForm row;
    for (int i = 0; i < m; ++i)
      if (points[i](j) != 0.0) row.add_scalar(w, i, points[i](j));
    row.add_scalar(e, j, 1.0);
    row.add_scalar(e, n + j, -1.0);
    p.add_equality(std::move(row), u(j));
  }
  conic::LinearForm sum;
  for (int i = 0; i < m; ++i) sum.add_scalar(w, i, 1.0);
  p.add_equality(std::move(sum), 1.0);
  conic::LinearForm obj;
  for (int j = 0; j < 2 * n; ++j) obj.add_scalar(e, j, 1.0);
  p.set_objective(std::move(obj));
  return std::max(0.0, solved(conic::solve(p, kSolverTol), "hull_residual"));
}

std::vector<RVec> extreme_points(const std::vector<RVec>& points, double tol) {
  std::vector<RVec> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<RVec> others;
    for (std::size_t j = 0; j < points.size(); ++j) {
      // Duplicates: keep only the first copy as a candidate.
      if (j == i) continue;
      if (j > i && (points[j] - points[i]).norm() <= tol) continue;
      others.push_back(points[j]);
    }
    bool duplicate_of_earlier = false;
    for (std::size_t j = 0; j < i; ++j)
      if ((points[j] - points[i]).norm() <= tol) duplicate_of_earlier = true;
    if (duplicate_of_earlier) continue;
    if (hull_residual(others, points[i]) > tol) out.push_back(points[i]);
  }
  return out;
}

Report cone_closure_idempotence(const ClassicalBaseSpace& sp, Rng& rng, int samples, double tol) {
  Report rep;
  const std::vector<RVec> ext = extreme_points(sp.base_points(), tol);
  rep.check_ge("extreme_points", static_cast<double>(ext.size()), 1.0, 0.0);

  double orig = 0.0;
  for (const RVec& k : sp.base_points()) orig = std::max(orig, hull_residual(ext, k));
  rep.check_le("base_points_in_rederived_hull", orig, 0.0, tol);

  // Sampled cone elements, sliced back to f1 = 1, including limits of
  // sequences that push weight onto a single generator.
  double slice = 0.0;
  for (int s = 0; s < samples; ++s) {
    RVec c = RVec::Zero(sp.dim());
    const double decay = std::pow(10.0, -uniform(rng, 0.0, 8.0));
    const int lead = static_cast<int>(uniform(rng, 0.0, double(sp.base_points().size()))) %
                     static_cast<int>(sp.base_points().size());
    for (std::size_t i = 0; i < sp.base_points().size(); ++i) {
      const double w = static_cast<int>(i) == lead ? 1.0 : decay * uniform(rng);
      c += w * sp.base_points()[i];
    }
    const double f = sp.f1().dot(c);
    slice = std::max(slice, hull_residual(ext, c / f));
  }
  rep.check_le("cone_slice_in_rederived_hull", slice, 0.0, tol);

  double gen = 0.0;
  for (const RVec& k : ext) gen = std::max(gen, hull_residual(sp.base_points(), k));
  rep.check_le("rederived_points_in_original_hull", gen, 0.0, tol);
  return rep;
}

Report verify_taylor_duality(const ClassicalBaseSpace& sp, const TaylorOptions& opt, Rng& rng) {
  const int n = sp.dim();
  auto oracle = [&](const RVec& w) { return functional_norm(sp, w); };
  auto random_point = [&] {
    ComplexPoint u{RVec(n), RVec(n)};
    for (int j = 0; j < n; ++j) {
      u.re(j) = gaussian(rng);
      u.im(j) = gaussian(rng);
    }
    return u;
  };
  // |<u, v>| for the complex bilinear pairing.
  auto pair = [](const ComplexPoint& u, const ComplexPoint& v) {
    return std::abs(cplx(u.re.dot(v.re) - u.im.dot(v.im), u.re.dot(v.im) + u.im.dot(v.re)));
  };
  auto ratio = [&](const ComplexPoint& u, const ComplexPoint& v) {
    const double t = taylor_norm(v.re, v.im, oracle);
    return t > 0 ? pair(u, v) / t : 0.0;
  };

  Report rep;
  double violation = 0.0;
  for (int i = 0; i < opt.pairs; ++i) {
    const ComplexPoint u = random_point(), v = random_point();
    const double bound = extended_base_norm(sp, u) * taylor_norm(v.re, v.im, oracle);
    violation = std::max(violation, (pair(u, v) - bound) / (1.0 + bound));
  }
  rep.check_le("pairing_bound_violation", violation, 0.0, opt.tol);

  // The supremum over v: random search, then projected ascent. Candidates
  // include v with v(k_i) unimodular, the shape of the extremal functionals.
  double worst = std::numeric_limits<double>::infinity();
  const RMat pts = point_matrix(sp.base_points());
  const auto solver = pts.transpose().completeOrthogonalDecomposition();
  for (int i = 0; i < opt.sup_points; ++i) {
    const ComplexPoint u = random_point();
    const double target = extended_base_norm(sp, u);
    double best = 0.0;
    ComplexPoint best_v;
    for (int c = 0; c < 200; ++c) {
      ComplexPoint v;
      if (c % 2 == 0) {
        v = random_point();
      } else {
        RVec ph_re(pts.cols()), ph_im(pts.cols());
        for (Eigen::Index k = 0; k < pts.cols(); ++k) {
          const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
          ph_re(k) = std::cos(t);
          ph_im(k) = std::sin(t);
        }
        v = {solver.solve(ph_re), solver.solve(ph_im)};
      }
      const double r = ratio(u, v);
      if (r > best) {
        best = r;
        best_v = v;
      }
    }
    // Projected ascent of Re <u, v> over {v : |v(k_i)| <= 1}, which has the
    // same supremum since the set is invariant under phases.
    Eigen::VectorXcd v = best_v.re.cast<cplx>() + cplx(0, 1) * best_v.im.cast<cplx>();
    v /= best > 0 ? taylor_norm(best_v.re, best_v.im, oracle) : 1.0;
    const Eigen::VectorXcd grad = u.re.cast<cplx>() - cplx(0, 1) * u.im.cast<cplx>();
    const double eta = 0.5 / std::max(grad.norm(), 1e-12);
    for (int it = 0; it < 300; ++it) {
      v = project_unit_values(pts, v + eta * grad);
      const ComplexPoint cand{v.real(), v.imag()};
      const double r = ratio(u, cand);
      if (r > best) best = r;
    }
    worst = std::min(worst, target > 0 ? best / target : 1.0);
  }
  rep.check_ge("sampled_sup_fraction", worst, opt.sup_fraction, 0.0);

  double real_diff = 0.0;
  for (int i = 0; i < std::max(1, opt.pairs / 10); ++i) {
    ComplexPoint u = random_point();
    u.im.setZero();
    const double g = minkowski_gauge(sp, u.re);
    real_diff = std::max(real_diff, std::abs(extended_base_norm(sp, u) - g) / (1.0 + g));
  }
  rep.check_le("real_points_gauge_diff", real_diff, 0.0, opt.tol);
  return rep;
}

Mat complexify_pair(const OperatorSystem& sys, const Mat& x, const Mat& y) {
  const int n = sys.level_of(x);
  if (sys.level_of(y) != n) throw std::invalid_argument("complexify_pair: levels differ");
  const int nd = n * sys.ambient_dim();
  Mat c(2 * nd, 2 * nd);
  c << x, y, -y, x;
  return c;
}

Report complexify_check(const OperatorSystem& sys, const ComplexifyOptions& opt, Rng& rng) {
  if (sys.field() != Field::Real) {
    throw std::invalid_argument("complexify_check: the system must be real");
  }
  const int top = *std::max_element(opt.levels.begin(), opt.levels.end());
  const OperatorSystem sc = OperatorSystem::make(sys.basis(), Field::Complex);
  const cplx i(0, 1);
  Report rep;
  for (ConeKind kind : {ConeKind::Inherited, ConeKind::DualCP}) {
    // Norms of general elements go through the dilation at level 4n.
    const int cap = 4 * top;
    const BaseSpec b = kind == ConeKind::Inherited ? BaseSpec::inherited_trace(sys, cap)
                                                   : BaseSpec::dual_cp(sys, cap);
    const BaseSpec bc = kind == ConeKind::Inherited ? BaseSpec::inherited_trace(sc, cap)
                                                    : BaseSpec::dual_cp(sc, cap);
    for (int n : opt.levels) {
      double norm_diff = 0.0;
      int mismatches = 0, members = 0;
      for (int s = 0; s < opt.samples; ++s) {
        const Mat x = random_element(rng, sys, n), y = random_element(rng, sys, n);
        const double zn = nc_base_norm(bc, Mat(x + i * y)).value;
        const double cn = nc_base_norm(b, complexify_pair(sys, x, y)).value;
        norm_diff = std::max(norm_diff, std::abs(zn - cn) / (1.0 + zn));

        // A selfadjoint z = x + iy near the cone boundary, normalized so
        // f1(z) = I when z is in the cone.
        Mat z = 0.5 * (x + x.adjoint()) + 0.5 * i * (y - y.adjoint());
        const double delta = (s % 2 == 0 ? 1.0 : -1.0) * std::pow(10.0, uniform(rng, -5.0, -1.0));
        const MemberResult m = bc.provider().is_member(z, 1e-12);
        if (m.status != conic::Status::Optimal) continue;
        z += (m.margin + delta) * Mat::Identity(z.rows(), z.cols());
        const Mat a = bc.f1(z);
        const HermMat ah = HermMat::symmetrized(a);
        if (min_eigenvalue(ah) <= 1e-8) continue;
        z = bc.provider().compress(pinv_sqrt(ah).mat(), z);
        const Mat zr = z.real().cast<cplx>(), zi = z.imag().cast<cplx>();
        const bool in_c = bc.in_base(z, opt.tol);
        const bool in_r = b.in_base(complexify_pair(sys, zr, zi), opt.tol);
        if (in_c != in_r) ++mismatches;
        if (in_c) ++members;
      }
      const std::string pre = std::string(to_string(kind)) + "/level" + std::to_string(n) + "/";
      rep.check_le(pre + "norm_rel_diff", norm_diff, 0.0, opt.tol);
      rep.check_le(pre + "base_correspondence_mismatches", mismatches, 0.0, 0.0);
      rep.check_ge(pre + "base_members_sampled", members, 1.0, 0.0);
    }
  }
  return rep;
}

}  // namespace ncbase
