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

#include "ncbase/ncnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncbase {

namespace {

constexpr double kSolverTol = 1e-9;
// An Inaccurate solve is still usable when every residual is this small.
constexpr double kUsableResidual = 1e-6;

void require_solution(const conic::Solution& s, const char* who) {
  if (s.status == conic::Status::Optimal) return;
  if (s.status == conic::Status::Inaccurate &&
      std::max({s.gap, s.primal_residual, s.dual_residual}) <= kUsableResidual) {
    return;
  }
  throw NumericalError(std::string(who) + ": solver returned " + conic::to_string(s.status) +
                       " (gap " + std::to_string(s.gap) + ", primal residual " +
                       std::to_string(s.primal_residual) + ")");
}

int level_for(const BaseSpec& b, const Mat& x) { return b.provider().level_of(x); }

}  // namespace

NormResult nc_base_norm_sa(const BaseSpec& b, const Mat& x) {
  const ConeProvider& cone = b.provider();
  cone.check_selfadjoint(x, "nc_base_norm_sa");
  const int n = level_for(b, x);
  const Field field = b.system().field();

  conic::Problem p;
  const auto y = cone.encode_membership(p, n);
  const auto z = cone.encode_membership(p, n);
  const auto w = conic::HermVar::create(p, n, field);
  const int lam = p.add_free(1);

  add_coord_equalities(p, b.system(), {{&y, 1.0}, {&z, -1.0}}, b.system().herm_coords(x));
  HermRows rows(n, field);
  rows.add_f1(b, y);
  rows.add_f1(b, z);
  rows.add_var(w);
  rows.add_scalar(lam, 0, Mat::Identity(n, n), -1.0);
  rows.commit(p, Mat::Zero(n, n));

  conic::LinearForm obj;
  obj.add_scalar(lam, 0, 1.0);
  p.set_objective(std::move(obj));

  const conic::Solution s = conic::solve(p, kSolverTol);
  require_solution(s, "nc_base_norm_sa");
  NormResult r;
  r.value = std::max(0.0, s.primal_objective);
  r.y = cone.fragment_value(y, s);
  r.z = cone.fragment_value(z, s);
  r.w = w.value(s);
  r.gap = s.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  return r;
}

NormResult nc_base_norm(const BaseSpec& b, const Mat& x) {
  b.system().level_of(x);
  return nc_base_norm_sa(b, tilde(x).mat());
}

NormResult dual_order_unit_norm(const BaseSpec& b, const Mat& phi) {
  if (b.provider().kind() != ConeKind::DualCP) {
    throw std::invalid_argument("dual_order_unit_norm: base specification must use the DualCP cone");
  }
  b.provider().check_selfadjoint(phi, "dual_order_unit_norm");
  const OperatorSystem& sys = b.system();
  const int n = level_for(b, phi), d = sys.ambient_dim(), nd = n * d;
  const Field field = sys.field();
  const cplx i(0, 1);

  conic::Problem p;
  const ConeProvider inherited(ConeKind::Inherited, sys, b.provider().max_level());
  const auto p1 = inherited.encode_membership(p, n);
  const auto p2 = conic::HermVar::create(p, nd, field);
  const auto w = conic::HermVar::create(p, n, field);

  // P1 + P2 = 2 W (x) 1, entry by entry.
  for (int r = 0; r < nd; ++r) {
    for (int c = r; c < nd; ++c) {
      for (int part = 0; part < (field == Field::Complex && c > r ? 2 : 1); ++part) {
        const Mat e = part == 0 ? elementary(nd, nd, r, c) : Mat(-i * elementary(nd, nd, r, c));
        conic::LinearForm form;
        p1.var.add_to(form, e);
        p2.add_to(form, e);
        if (r % d == c % d) {
          const Mat ew = part == 0 ? elementary(n, n, r / d, c / d) : Mat(-i * elementary(n, n, r / d, c / d));
          w.add_to(form, ew, -2.0);
        }
        p.add_equality(std::move(form), 0.0);
      }
    }
  }
  conic::LinearForm tr;
  w.add_to(tr, Mat::Identity(n, n));
  p.add_equality(std::move(tr), 1.0);

  conic::LinearForm obj;
  p1.add_functional(obj, phi, -0.5);
  p2.add_to(obj, phi.conjugate(), 0.5);
  p.set_objective(std::move(obj));

  const conic::Solution s = conic::solve(p, kSolverTol);
  require_solution(s, "dual_order_unit_norm");
  NormResult r;
  r.value = std::max(0.0, -s.primal_objective);
  const Mat a = p1.var.value(s), c = p2.value(s);
  r.y = 0.5 * (a - c);  // the maximizing X
  r.w = w.value(s);
  r.gap = s.gap;
  r.status = s.status;
  r.iterations = s.iterations;
  return r;
}

BaseDecomposition base_decompose(const BaseSpec& b, const Mat& x, double tol) {
  const ConeProvider& cone = b.provider();
  cone.check_selfadjoint(x, "base_decompose");
  const int n = level_for(b, x);
  if (cone.kind() == ConeKind::Inherited) {
    if (min_eigenvalue(HermMat::symmetrized(x)) < -tol * std::max(1.0, spectral_norm(x))) {
      throw std::invalid_argument("base_decompose: element is not positive");
    }
  } else {
    const MemberResult m = cone.is_member(0.5 * (x + x.adjoint()), tol);
    if (m.verdict != Verdict::Yes) {
      throw std::invalid_argument(std::string("base_decompose: element is not in the cone (") +
                                  to_string(m.verdict) + ")");
    }
  }
  const HermMat a = HermMat::symmetrized(b.f1(x));
  BaseDecomposition out;
  out.alpha = psd_sqrt(a).mat();
  const Mat m = restricted_inv_sqrt(a).mat();
  const Mat e = support_projection(a).mat();
  const Mat eperp = Mat::Identity(n, n) - e;
  Mat k = cone.compress(m, x) + cone.compress(eperp, b.reference_point(n));
  out.k = 0.5 * (k + k.adjoint());
  return out;
}

MorphismReport is_base_morphism(const BaseSpec& src, const BaseSpec& dst, const Mat& u, double tol) {
  if (src.provider().kind() != dst.provider().kind()) {
    throw std::invalid_argument("is_base_morphism: source and target cones must be of the same kind");
  }
  const OperatorSystem& sx = src.system();
  const OperatorSystem& sy = dst.system();
  if (u.rows() != sy.dim() || u.cols() != sx.dim()) {
    throw std::invalid_argument("is_base_morphism: coefficient matrix must be " + std::to_string(sy.dim()) +
                                "x" + std::to_string(sx.dim()));
  }
  MorphismReport rep;
  // The CP test runs on a map into a matrix algebra: u itself for Inherited,
  // the Heisenberg-picture map T for DualCP.
  const bool inherited = src.provider().kind() == ConeKind::Inherited;
  const OperatorSystem& from = inherited ? sx : sy;
  const OperatorSystem& into = inherited ? sy : sx;
  std::vector<Mat> values;
  for (int r = 0; r < from.dim(); ++r) {
    Vec c = inherited ? Vec(u.col(r)) : Vec(u.row(r).transpose());
    values.push_back(into.combine(c));
  }
  const DualElement map(from, values);
  if (!map.is_selfadjoint(1e-9)) {
    rep.completely_positive = Verdict::No;
  } else {
    const ConeProvider cp(ConeKind::DualCP, from, std::max(4, map.level()));
    const Mat rep_h = 0.5 * (map.representer() + map.representer().adjoint());
    const MemberResult m = cp.is_member(rep_h, tol);
    rep.completely_positive = m.verdict;
    rep.cp_margin = m.margin;
  }

  if (inherited) {
    double res = 0.0;
    for (int r = 0; r < sx.dim(); ++r) {
      const cplx lhs = dst.f1(values[r])(0, 0);
      const cplx rhs = src.f1(sx.basis()[r])(0, 0);
      res = std::max(res, std::abs(lhs - rhs));
    }
    rep.f1_residual = res;
  } else {
    const Mat t1 = map.apply(Mat::Identity(sy.ambient_dim(), sy.ambient_dim()));
    rep.f1_residual = spectral_norm(t1 - Mat::Identity(t1.rows(), t1.cols()));
  }
  rep.pass = rep.completely_positive == Verdict::Yes && rep.f1_residual <= tol;
  return rep;
}

Mat channel_coefficients(const OperatorSystem& src, const OperatorSystem& dst,
                         const std::vector<Mat>& kraus) {
  const int dx = src.ambient_dim(), dy = dst.ambient_dim();
  for (const Mat& k : kraus) {
    if (k.rows() != dy || k.cols() != dx) {
      throw std::invalid_argument("channel_coefficients: Kraus operators must be " + std::to_string(dy) +
                                  "x" + std::to_string(dx));
    }
  }
  Mat u(dst.dim(), src.dim());
  for (int s = 0; s < dst.dim(); ++s) {
    Mat t = Mat::Zero(dx, dx);
    for (const Mat& k : kraus) t += k.adjoint() * dst.basis()[s] * k;
    if (src.span_residual(t) > 1e-9 * std::max(1.0, t.norm())) {
      throw std::invalid_argument("channel_coefficients: the adjoint map does not land in the source system");
    }
    u.row(s) = src.coords(t).transpose();
  }
  return u;
}

namespace {

// argmax of Re Tr(g^* x) over the unit ball of M_k(S). Solved through the dual
// program min ||h||_1 over h with the same M_k(S) coordinates as g; the
// maximizer is read off the multipliers of the coordinate rows.
Mat unit_ball_argmax(const OperatorSystem& sys, int k, const Mat& g) {
  const int d = sys.ambient_dim(), kd = k * d;
  const Field field = sys.field();
  const cplx i(0, 1);
  conic::Problem p;
  const auto z = conic::HermVar::create(p, 2 * kd, field);
  std::vector<Mat> dirs;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (const Mat& e : sys.orthonormal_basis()) {
        for (int part = 0; part < (field == Field::Complex ? 2 : 1); ++part) {
          const Mat f = kron(elementary(k, k, a, b), part == 0 ? e : Mat(i * e));
          Mat pad = Mat::Zero(2 * kd, 2 * kd);
          pad.topRightCorner(kd, kd) = f.conjugate();
          conic::LinearForm row;
          z.add_to(row, pad);
          p.add_equality(std::move(row), real_inner(f, g));
          dirs.push_back(f);
        }
      }
  conic::LinearForm obj;
  z.add_to(obj, Mat::Identity(2 * kd, 2 * kd), 0.5);
  p.set_objective(std::move(obj));
  const conic::Solution s = conic::solve(p, kSolverTol);
  if (s.status != conic::Status::Optimal && s.status != conic::Status::Inaccurate) return Mat();
  Mat x = Mat::Zero(kd, kd);
  for (std::size_t q = 0; q < dirs.size(); ++q) x += s.multipliers(q) * dirs[q];
  const double nx = spectral_norm(x);
  if (nx > 1.0) x /= nx;
  if (real_inner(g, x) < 0) x = -x;
  return x;
}

// Gradient of Re u^* phi^(k)(x) v in x, an element of M_k(S).
Mat ascent_direction(const DualElement& phi, int k, const Vec& u, const Vec& v) {
  const int n = phi.level(), d = phi.system().ambient_dim();
  const Mat& rep = phi.representer();
  Mat g = Mat::Zero(k * d, k * d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          const cplx coef = u(i * n + a) * std::conj(v(j * n + c));
          if (coef != 0.0) g.block(i * d, j * d, d, d) += coef * block_of(rep, d, a, c);
        }
  return g;
}

}  // namespace

double cb_lower_bound(const DualElement& phi, int k, int restarts, Rng& rng, int polish_iterations) {
  const OperatorSystem& sys = phi.system();
  auto top_pair = [&](const Mat& x, Vec& u, Vec& v) {
    const Mat m = phi.amplify(x);
    if (sys.field() == Field::Real) {
      // Keep the singular vectors real so the ascent stays inside M_k(S).
      Eigen::JacobiSVD<RMat> svd(m.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
      u = svd.matrixU().col(0).cast<cplx>();
      v = svd.matrixV().col(0).cast<cplx>();
      return svd.singularValues()(0);
    }
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = svd.matrixU().col(0);
    v = svd.matrixV().col(0);
    return svd.singularValues()(0);
  };
  auto value = [&](const Mat& x) { return spectral_norm(phi.amplify(x)); };
  auto normalize = [](const Mat& x) {
    const double s = spectral_norm(x);
    return s > 0 ? Mat(x / s) : x;
  };

  double best = 0.0;
  Mat best_x;
  for (int restart = 0; restart < restarts; ++restart) {
    Mat x = normalize(random_element(rng, sys, k));
    double val = value(x);
    for (int it = 0; it < 40; ++it) {
      Vec u, v;
      top_pair(x, u, v);
      const Mat g = ascent_direction(phi, k, u, v);
      const double gn = g.norm();
      if (gn == 0) break;
      double best_step = val;
      Mat step_x = x;
      for (double eta : {2.0, 1.0, 0.3, 0.1, 0.03, 0.01}) {
        const Mat cand = normalize(x + eta * g / gn);
        const double cv = value(cand);
        if (cv > best_step) {
          best_step = cv;
          step_x = cand;
        }
      }
      if (best_step <= val * (1.0 + 1e-12)) break;
      val = best_step;
      x = step_x;
    }
    if (val > best) {
      best = val;
      best_x = x;
    }
  }

  // Alternate exactly: top singular pair for fixed x, then the best x for the
  // fixed pair. Each step cannot decrease the value.
  for (int it = 0; it < polish_iterations && best_x.size() > 0; ++it) {
    Vec u, v;
    top_pair(best_x, u, v);
    const Mat x = unit_ball_argmax(sys, k, ascent_direction(phi, k, u, v));
    if (x.size() == 0) break;
    const double val = value(x);
    if (val <= best * (1.0 + 1e-10)) {
      best = std::max(best, val);
      break;
    }
    best = val;
    best_x = x;
  }
  return best;
}

Report verify_duality(const OperatorSystem& sys, const DualityOptions& opt, Rng& rng) {
  const int top = *std::max_element(opt.levels.begin(), opt.levels.end());
  const BaseSpec b = BaseSpec::dual_cp(sys, std::max(4, top));
  Report rep;
  for (int n : opt.levels) {
    double worst = 0.0, excess = -std::numeric_limits<double>::infinity();
    int failures = 0;
    for (int i = 0; i < opt.samples; ++i) {
      const Mat r = random_selfadjoint(rng, sys, n);
      try {
        const double a = nc_base_norm_sa(b, r).value;
        const double c = dual_order_unit_norm(b, r).value;
        worst = std::max(worst, std::abs(a - c) / (1.0 + a));
        if (opt.cb_bound) {
          const DualElement phi = DualElement::from_representer(sys, r);
          for (int k = 1; k <= n; ++k) {
            const double lb = cb_lower_bound(phi, k, opt.cb_restarts, rng, k == n ? opt.cb_polish : 0);
            excess = std::max(excess, (lb - a) / (1.0 + a));
          }
        }
      } catch (const NumericalError&) {
        ++failures;
      }
    }
    const std::string pre = "level" + std::to_string(n) + "/";
    rep.check_le(pre + "sa_vs_dual_order_unit_rel_diff", worst, 0.0, opt.tol);
    if (opt.cb_bound) rep.check_le(pre + "cb_lower_bound_excess", excess, 0.0, opt.tol);
    rep.check_le(pre + "solver_failures", failures, 0.0, 0.0);
  }
  return rep;
}

double dominance_scale(const BaseSpec& b, const Mat& x, double t_max) {
  const ConeProvider& cone = b.provider();
  cone.check_selfadjoint(x, "dominance_scale");
  const int n = level_for(b, x);
  conic::Problem p;
  const auto k = cone.encode_membership(p, n);
  const auto gap = cone.encode_membership(p, n);
  const int ts = p.add_nonneg(2);  // t and the slack of t <= t_max
  add_coord_equalities(p, b.system(), {{&k, 1.0}, {&gap, -1.0}}, b.system().herm_coords(x));
  HermRows rows(n, b.system().field());
  rows.add_f1(b, k);
  rows.add_scalar(ts, 0, Mat::Identity(n, n), -1.0);
  rows.commit(p, Mat::Zero(n, n));
  conic::LinearForm cap;
  cap.add_scalar(ts, 0, 1.0);
  cap.add_scalar(ts, 1, 1.0);
  p.add_equality(std::move(cap), t_max);
  conic::LinearForm obj;
  obj.add_scalar(ts, 0, 1.0);
  p.set_objective(std::move(obj));
  const conic::Solution s = conic::solve(p, kSolverTol);
  if (s.status == conic::Status::PrimalInfeasible) return std::numeric_limits<double>::infinity();
  require_solution(s, "dominance_scale");
  return s.primal_objective;
}

Report mbos_validate(const BaseSpec& b, const MbosOptions& opt, Rng& rng) {
  Report rep;
  const OperatorSystem& sys = b.system();
  try {
    rep.check_ge("strict_positivity_margin", b.strict_positivity_margin(), opt.tol, 0.0);
  } catch (const NumericalError&) {
    rep.add({"strict_positivity_margin", CheckStatus::Indeterminate, 0.0, opt.tol, 0.0});
  }

  try {
    const int d = sys.ambient_dim();
    const double t = dominance_scale(b, Mat::Identity(d, d), opt.t_max_factor * std::max(1.0, b.f1_unit()));
    rep.check_le("unit_dominance_scale", std::abs(t - b.f1_unit()), 0.0, 1e-6);
  } catch (const NumericalError&) {
    rep.add({"unit_dominance_scale", CheckStatus::Indeterminate, 0.0, 0.0, 1e-6});
  }

  for (int n : opt.levels) {
    int not_dominated = 0, failures = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.samples; ++i) {
      const Mat x = random_selfadjoint(rng, sys, n);
      const double amb = spectral_norm(x);
      try {
        const double t = dominance_scale(b, x, opt.t_max_factor * amb * std::max(1.0, b.f1_unit()));
        if (!std::isfinite(t)) ++not_dominated;
        const double nc = nc_base_norm_sa(b, x).value;
        min_ratio = std::min(min_ratio, nc / amb);
      } catch (const NumericalError&) {
        ++failures;
      }
    }
    const std::string pre = "level" + std::to_string(n) + "/";
    rep.check_le(pre + "not_dominated", not_dominated, 0.0, 0.0);
    rep.check_ge(pre + "definiteness_min_ratio", min_ratio, opt.tol, 0.0);
    rep.check_le(pre + "solver_failures", failures, 0.0, 0.0);
  }
  return rep;
}

}  // namespace ncbase
