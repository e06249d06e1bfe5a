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

#include "ncbase/conic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace ncbase::conic {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

int svec_size(int k) { return k * (k + 1) / 2; }

// Lower triangle, column major, off-diagonals scaled by sqrt(2) so that
// svec(A) . svec(B) = <A, B>.
RVec svec(const RMat& m) {
  const int k = static_cast<int>(m.rows());
  RVec v(svec_size(k));
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    v(idx++) = m(j, j);
    for (int i = j + 1; i < k; ++i) v(idx++) = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  }
  return v;
}

template <class V>
RMat smat(const V& v, int k) {
  RMat m(k, k);
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    m(j, j) = v(idx++);
    for (int i = j + 1; i < k; ++i) {
      m(i, j) = m(j, i) = v(idx++) / kSqrt2;
    }
  }
  return m;
}

RMat sym(const RMat& m) { return 0.5 * (m + m.transpose()); }

// Largest step alpha with v + alpha * dv >= 0 for diagonal v > 0 and symmetric dv
// (expressed in the NT-scaled frame).
double max_step_scaled(const RVec& v, const RMat& dv) {
  const RVec s = v.cwiseSqrt().cwiseInverse();
  RMat t = s.asDiagonal() * dv * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<RMat> es(sym(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_vec(const RVec& x, const RVec& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0) a = std::min(a, -x(i) / dx(i));
  return a;
}

struct PsdScaling {
  RMat g, ginv, w;
  RVec v;
};

// Nesterov-Todd scaling point W with W Z W = X, factored as W = G G^T with
// G^{-1} X G^{-T} = G^T Z G = diag(v).
bool nt_scaling(const RMat& x, const RMat& z, PsdScaling& out) {
  Eigen::LLT<RMat> llt(x);
  if (llt.info() != Eigen::Success) return false;
  const RMat l = llt.matrixL();
  const RMat r = l.transpose() * z * l;
  Eigen::SelfAdjointEigenSolver<RMat> es(sym(r));
  if (es.info() != Eigen::Success) return false;
  const RVec d = es.eigenvalues();
  if (d.minCoeff() <= 0) return false;
  const RMat& q = es.eigenvectors();
  const RVec d4 = d.array().pow(0.25);
  out.v = d.cwiseSqrt();
  out.g = l * q * d4.cwiseInverse().asDiagonal();
  const RMat linv = l.triangularView<Eigen::Lower>().solve(RMat::Identity(x.rows(), x.rows()));
  out.ginv = d4.asDiagonal() * q.transpose() * linv;
  out.w = sym(out.g * out.g.transpose());
  return true;
}

struct Layout {
  std::vector<int> psd_blocks, nonneg_blocks, free_blocks;
  std::vector<int> offset;  // column offset of each block in the flat vector
  std::vector<int> width;
  int n = 0;
};

Layout make_layout(const Problem& p) {
  Layout lay;
  const auto& blocks = p.blocks();
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    lay.offset.push_back(lay.n);
    const int w = blocks[b].kind == BlockKind::Psd ? svec_size(blocks[b].size) : blocks[b].size;
    lay.width.push_back(w);
    lay.n += w;
    switch (blocks[b].kind) {
      case BlockKind::Psd: lay.psd_blocks.push_back(b); break;
      case BlockKind::Nonneg: lay.nonneg_blocks.push_back(b); break;
      case BlockKind::Free: lay.free_blocks.push_back(b); break;
    }
  }
  return lay;
}

RVec flatten(const LinearForm& f, const Problem& p, const Layout& lay) {
  RVec row = RVec::Zero(lay.n);
  for (const auto& [b, c] : f.psd) row.segment(lay.offset[b], lay.width[b]) += svec(sym(c));
  for (const auto& [b, i, c] : f.scalar) row(lay.offset[b] + i) += c;
  (void)p;
  return row;
}

// Gathers columns of the flat matrix that belong to blocks of one kind.
RMat gather_cols(const RMat& a, const Layout& lay, const std::vector<int>& blocks) {
  int w = 0;
  for (int b : blocks) w += lay.width[b];
  RMat out(a.rows(), w);
  int at = 0;
  for (int b : blocks) {
    out.middleCols(at, lay.width[b]) = a.middleCols(lay.offset[b], lay.width[b]);
    at += lay.width[b];
  }
  return out;
}

RVec gather(const RVec& v, const Layout& lay, const std::vector<int>& blocks) {
  return gather_cols(v.transpose(), lay, blocks).transpose();
}

class Engine {
 public:
  Engine(const Problem& p, const Options& opt) : p_(p), opt_(opt), lay_(make_layout(p)) {}

  Solution run();

 private:
  struct Iterate {
    std::vector<RMat> x, z;  // PSD blocks
    RVec xl, zl, xf, y;
  };
  struct Direction {
    std::vector<RMat> dx, dz;
    RVec dxl, dzl, dxf, dy;
  };

  bool presolve(Solution& early);
  void initial_point(Iterate& it) const;
  RVec apply_a(const Iterate& it) const;
  void apply_at(const RVec& y, std::vector<RMat>& psd, RVec& l, RVec& f) const;
  bool build_schur();
  bool solve_kkt(const RVec& r1, const RVec& r2, RVec& dy, RVec& dxf) const;
  void direction(const Iterate& it, const std::vector<RMat>& rhs_psd, const RVec& rhs_l,
                 Direction& d) const;
  Solution finish(const Iterate& it, Status status) const;

  const Problem& p_;
  Options opt_;
  Layout lay_;

  // Reduced (independent, row-normalized) constraint data.
  std::vector<int> kept_rows_;
  RVec row_scale_;
  std::vector<RMat> a_psd_;  // per PSD block: m x svec(k)
  std::vector<std::vector<int>> active_rows_;  // rows touching each PSD block
  RMat a_l_, a_f_;
  RVec b_;
  std::vector<RMat> c_psd_;
  RVec c_l_, c_f_;
  std::vector<int> psd_size_;
  int m_ = 0;
  double norm_b_ = 0, norm_c_ = 0;

  // Per-iteration state.
  std::vector<PsdScaling> scal_;
  RVec wl_, vl_;
  RVec rd_l_, rd_f_;
  std::vector<RMat> rd_psd_;
  RVec rp_;
  Eigen::LLT<RMat> m_llt_;
  Eigen::LDLT<RMat> m_ldlt_;
  bool use_ldlt_ = false;
  RMat minv_af_;
  Eigen::LDLT<RMat> s_ldlt_;
};

bool Engine::presolve(Solution& early) {
  const auto& rows = p_.equalities();
  const int m0 = static_cast<int>(rows.size());
  RMat a(m0, lay_.n);
  RVec b(m0);
  for (int i = 0; i < m0; ++i) {
    a.row(i) = flatten(rows[i].first, p_, lay_).transpose();
    b(i) = rows[i].second;
  }
  RVec scale = RVec::Ones(m0);
  std::vector<int> nonzero;
  for (int i = 0; i < m0; ++i) {
    const double nr = a.row(i).norm();
    if (nr == 0) {
      if (std::abs(b(i)) > 1e-12) {
        early.status = Status::PrimalInfeasible;
        early.multipliers = RVec::Zero(m0);
        early.multipliers(i) = 1.0 / b(i);
        return false;
      }
      continue;
    }
    scale(i) = nr;
    a.row(i) /= nr;
    b(i) /= nr;
    nonzero.push_back(i);
  }

  // Remove linearly dependent rows by a rank-revealing QR of A^T.
  RMat at(lay_.n, nonzero.size());
  for (size_t j = 0; j < nonzero.size(); ++j) at.col(j) = a.row(nonzero[j]).transpose();
  std::vector<int> kept;
  if (!nonzero.empty()) {
    Eigen::ColPivHouseholderQR<RMat> qr(at);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    const auto& perm = qr.colsPermutation().indices();
    for (int j = 0; j < rank; ++j) kept.push_back(nonzero[perm(j)]);
    std::sort(kept.begin(), kept.end());
    if (rank < static_cast<int>(nonzero.size())) {
      RMat ak(lay_.n, kept.size());
      RVec bk(kept.size());
      for (size_t j = 0; j < kept.size(); ++j) {
        ak.col(j) = a.row(kept[j]).transpose();
        bk(j) = b(kept[j]);
      }
      Eigen::ColPivHouseholderQR<RMat> qk(ak);
      for (int i : nonzero) {
        if (std::binary_search(kept.begin(), kept.end(), i)) continue;
        const RVec w = qk.solve(a.row(i).transpose());
        const double mismatch = b(i) - w.dot(bk);
        if (std::abs(mismatch) > 1e-8 * (1.0 + std::abs(b(i)))) {
          // y = e_i - sum_j w_j e_{kept_j} has A^T y = 0 and b^T y = mismatch.
          RVec ray = RVec::Zero(m0);
          ray(i) = 1.0 / scale(i);
          for (size_t j = 0; j < kept.size(); ++j) ray(kept[j]) -= w(j) / scale(kept[j]);
          early.status = Status::PrimalInfeasible;
          early.multipliers = ray / mismatch;
          return false;
        }
      }
    }
  }

  kept_rows_ = kept;
  m_ = static_cast<int>(kept.size());
  row_scale_ = scale;
  RMat ar(m_, lay_.n);
  b_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    ar.row(i) = a.row(kept[i]);
    b_(i) = b(kept[i]);
  }
  for (int blk : lay_.psd_blocks) {
    a_psd_.push_back(ar.middleCols(lay_.offset[blk], lay_.width[blk]));
    std::vector<int> act;
    for (int i = 0; i < m_; ++i)
      if (a_psd_.back().row(i).squaredNorm() > 0) act.push_back(i);
    active_rows_.push_back(std::move(act));
    psd_size_.push_back(p_.blocks()[blk].size);
  }
  a_l_ = gather_cols(ar, lay_, lay_.nonneg_blocks);
  a_f_ = gather_cols(ar, lay_, lay_.free_blocks);

  const RVec c = flatten(p_.objective(), p_, lay_);
  for (size_t j = 0; j < lay_.psd_blocks.size(); ++j) {
    const int blk = lay_.psd_blocks[j];
    c_psd_.push_back(smat(c.segment(lay_.offset[blk], lay_.width[blk]), psd_size_[j]));
  }
  c_l_ = gather(c, lay_, lay_.nonneg_blocks);
  c_f_ = gather(c, lay_, lay_.free_blocks);
  norm_b_ = b_.norm();
  norm_c_ = c.norm();
  return true;
}

void Engine::initial_point(Iterate& it) const {
  const double bmax = b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0;
  for (size_t j = 0; j < psd_size_.size(); ++j) {
    const int k = psd_size_[j];
    const double xi = std::max({10.0, std::sqrt(double(k)), k * (1.0 + bmax) / 2.0});
    const double eta = std::max({10.0, std::sqrt(double(k)), c_psd_[j].norm()});
    it.x.push_back(xi * RMat::Identity(k, k));
    it.z.push_back(eta * RMat::Identity(k, k));
  }
  const double xi = std::max(10.0, (1.0 + bmax) / 2.0);
  const double eta = std::max(10.0, c_l_.size() ? c_l_.cwiseAbs().maxCoeff() : 0.0);
  it.xl = RVec::Constant(a_l_.cols(), xi);
  it.zl = RVec::Constant(a_l_.cols(), eta);
  it.xf = RVec::Zero(a_f_.cols());
  it.y = RVec::Zero(m_);
}

RVec Engine::apply_a(const Iterate& it) const {
  RVec r = a_l_ * it.xl + a_f_ * it.xf;
  for (size_t j = 0; j < a_psd_.size(); ++j) r += a_psd_[j] * svec(it.x[j]);
  return r;
}

void Engine::apply_at(const RVec& y, std::vector<RMat>& psd, RVec& l, RVec& f) const {
  psd.resize(a_psd_.size());
  for (size_t j = 0; j < a_psd_.size(); ++j) psd[j] = smat(a_psd_[j].transpose() * y, psd_size_[j]);
  l = a_l_.transpose() * y;
  f = a_f_.transpose() * y;
}

bool Engine::build_schur() {
  RMat mm = RMat::Zero(m_, m_);
  for (size_t j = 0; j < a_psd_.size(); ++j) {
    const auto& act = active_rows_[j];
    if (act.empty()) continue;
    const int k = psd_size_[j];
    const RMat& w = scal_[j].w;
    RMat a_act(act.size(), a_psd_[j].cols());
    RMat b_act(act.size(), a_psd_[j].cols());
    for (size_t r = 0; r < act.size(); ++r) {
      a_act.row(r) = a_psd_[j].row(act[r]);
      const RMat ai = smat(a_act.row(r).transpose(), k);
      b_act.row(r) = svec(w * ai * w).transpose();
    }
    const RMat block = a_act * b_act.transpose();
    for (size_t r = 0; r < act.size(); ++r)
      for (size_t s = 0; s < act.size(); ++s) mm(act[r], act[s]) += block(r, s);
  }
  if (a_l_.cols() > 0) mm += a_l_ * wl_.asDiagonal() * a_l_.transpose();
  mm = sym(mm);
  const double reg = 1e-15 * std::max(1.0, mm.diagonal().cwiseAbs().maxCoeff());
  mm.diagonal().array() += reg;

  use_ldlt_ = false;
  m_llt_.compute(mm);
  if (m_llt_.info() != Eigen::Success) {
    use_ldlt_ = true;
    m_ldlt_.compute(mm);
    if (m_ldlt_.info() != Eigen::Success) return false;
  }
  if (a_f_.cols() > 0) {
    minv_af_ = use_ldlt_ ? RMat(m_ldlt_.solve(a_f_)) : RMat(m_llt_.solve(a_f_));
    RMat s = sym(a_f_.transpose() * minv_af_);
    s.diagonal().array() += 1e-14 * std::max(1.0, s.diagonal().cwiseAbs().maxCoeff());
    s_ldlt_.compute(s);
    if (s_ldlt_.info() != Eigen::Success) return false;
  }
  return true;
}

// Solves [[M, A_f], [A_f^T, 0]] [dy; dxf] = [r1; r2].
bool Engine::solve_kkt(const RVec& r1, const RVec& r2, RVec& dy, RVec& dxf) const {
  const RVec u = use_ldlt_ ? RVec(m_ldlt_.solve(r1)) : RVec(m_llt_.solve(r1));
  if (a_f_.cols() == 0) {
    dy = u;
    dxf = RVec(0);
    return true;
  }
  // A_f^T (u - M^{-1} A_f dxf) = r2  =>  S dxf = A_f^T u - r2
  dxf = s_ldlt_.solve(a_f_.transpose() * u - r2);
  dy = u - minv_af_ * dxf;
  return dy.allFinite() && dxf.allFinite();
}

void Engine::direction(const Iterate& it, const std::vector<RMat>& rhs_psd, const RVec& rhs_l,
                       Direction& d) const {
  const size_t nb = a_psd_.size();
  std::vector<RMat> rc(nb);
  RVec r1 = rp_;
  for (size_t j = 0; j < nb; ++j) {
    const PsdScaling& s = scal_[j];
    const int k = psd_size_[j];
    RMat t(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) t(a, b) = 2.0 * rhs_psd[j](a, b) / (s.v(a) + s.v(b));
    rc[j] = sym(s.g * t * s.g.transpose());
    r1 -= a_psd_[j] * svec(rc[j] - s.w * rd_psd_[j] * s.w);
  }
  const RVec gl = wl_.cwiseSqrt();
  RVec rcl(rhs_l.size());
  for (Eigen::Index i = 0; i < rhs_l.size(); ++i) rcl(i) = gl(i) * rhs_l(i) / vl_(i);
  if (a_l_.cols() > 0) r1 -= a_l_ * (rcl - wl_.cwiseProduct(rd_l_));

  solve_kkt(r1, rd_f_, d.dy, d.dxf);

  std::vector<RMat> aty;
  RVec atl, atf;
  apply_at(d.dy, aty, atl, atf);
  d.dz.resize(nb);
  d.dx.resize(nb);
  for (size_t j = 0; j < nb; ++j) {
    d.dz[j] = sym(rd_psd_[j] - aty[j]);
    d.dx[j] = sym(rc[j] - scal_[j].w * d.dz[j] * scal_[j].w);
  }
  d.dzl = rd_l_ - atl;
  d.dxl = rcl - wl_.cwiseProduct(d.dzl);
  (void)it;
}

Solution Engine::finish(const Iterate& it, Status status) const {
  Solution s;
  s.status = status;
  const auto& blocks = p_.blocks();
  s.primal.resize(blocks.size());
  s.dual_slack.resize(blocks.size());
  size_t pj = 0;
  int lo = 0, fo = 0;
  for (size_t b = 0; b < blocks.size(); ++b) {
    switch (blocks[b].kind) {
      case BlockKind::Psd:
        s.primal[b] = it.x[pj];
        s.dual_slack[b] = it.z[pj];
        ++pj;
        break;
      case BlockKind::Nonneg:
        s.primal[b] = it.xl.segment(lo, blocks[b].size);
        s.dual_slack[b] = it.zl.segment(lo, blocks[b].size);
        lo += blocks[b].size;
        break;
      case BlockKind::Free:
        s.primal[b] = it.xf.segment(fo, blocks[b].size);
        s.dual_slack[b] = RMat::Zero(blocks[b].size, 1);
        fo += blocks[b].size;
        break;
    }
  }
  s.multipliers = RVec::Zero(p_.equalities().size());
  for (int i = 0; i < m_; ++i) s.multipliers(kept_rows_[i]) = it.y(i) / row_scale_(kept_rows_[i]);
  return s;
}

Solution Engine::run() {
  Solution early;
  if (!presolve(early)) {
    early.primal.assign(p_.blocks().size(), RMat());
    early.dual_slack.assign(p_.blocks().size(), RMat());
    return early;
  }

  Iterate it;
  initial_point(it);
  const size_t nb = a_psd_.size();
  double nu = static_cast<double>(a_l_.cols());
  for (int k : psd_size_) nu += k;

  Iterate best = it;
  double best_err = std::numeric_limits<double>::infinity();
  double best_pobj = 0, best_dobj = 0, best_gap = 0, best_pinf = 0, best_dinf = 0;
  int stalls = 0;
  int iter = 0;
  Status status = Status::Inaccurate;

  auto record = [&](Solution s) {
    s.primal_objective = best_pobj;
    s.dual_objective = best_dobj;
    s.gap = best_gap;
    s.primal_residual = best_pinf;
    s.dual_residual = best_dinf;
    s.iterations = iter;
    return s;
  };

  for (iter = 0; iter <= opt_.max_iterations; ++iter) {
    // Residuals and objectives.
    rp_ = b_ - apply_a(it);
    std::vector<RMat> aty;
    RVec atl, atf;
    apply_at(it.y, aty, atl, atf);
    rd_psd_.assign(nb, RMat());
    double rd_sq = 0, pobj = 0, compl_ = 0;
    for (size_t j = 0; j < nb; ++j) {
      rd_psd_[j] = sym(c_psd_[j] - aty[j] - it.z[j]);
      rd_sq += rd_psd_[j].squaredNorm();
      pobj += (c_psd_[j].array() * it.x[j].array()).sum();
      compl_ += (it.x[j].array() * it.z[j].array()).sum();
    }
    rd_l_ = c_l_ - atl - it.zl;
    rd_f_ = c_f_ - atf;
    rd_sq += rd_l_.squaredNorm() + rd_f_.squaredNorm();
    pobj += c_l_.dot(it.xl) + c_f_.dot(it.xf);
    compl_ += it.xl.dot(it.zl);
    const double dobj = b_.dot(it.y);
    const double pinf = rp_.norm() / (1.0 + norm_b_);
    const double dinf = std::sqrt(rd_sq) / (1.0 + norm_c_);
    const double gap = std::max(std::abs(pobj - dobj), compl_) / (1.0 + std::abs(pobj));
    const double err = std::max({gap, pinf, dinf});
    if (std::isfinite(err) && err < best_err) {
      best_err = err;
      best = it;
      best_pobj = pobj;
      best_dobj = dobj;
      best_gap = gap;
      best_pinf = pinf;
      best_dinf = dinf;
    }
    if (gap <= opt_.tol && pinf <= opt_.tol && dinf <= opt_.tol) {
      status = Status::Optimal;
      break;
    }

    // Infeasibility certificates.
    if (iter > 3 && dobj > 0) {
      double ray_sq = atf.squaredNorm() + (atl + it.zl).squaredNorm();
      for (size_t j = 0; j < nb; ++j) ray_sq += (aty[j] + it.z[j]).squaredNorm();
      if (std::sqrt(ray_sq) / dobj < 1e-8 && dobj > 1e6 * (1.0 + norm_c_)) {
        Solution s = finish(it, Status::PrimalInfeasible);
        s.multipliers /= dobj;
        return record(s);
      }
    }
    if (iter > 3 && pobj < 0) {
      const RVec ax = apply_a(it);
      if (ax.norm() / -pobj < 1e-8 && -pobj > 1e6 * (1.0 + norm_b_)) {
        Solution s = finish(it, Status::DualInfeasible);
        for (auto& blk : s.primal) blk /= -pobj;
        return record(s);
      }
    }
    if (iter == opt_.max_iterations) break;

    // Scaling.
    scal_.assign(nb, PsdScaling{});
    bool ok = true;
    for (size_t j = 0; j < nb && ok; ++j) ok = nt_scaling(it.x[j], it.z[j], scal_[j]);
    if (!ok) break;
    wl_ = it.xl.cwiseQuotient(it.zl);
    vl_ = it.xl.cwiseProduct(it.zl).cwiseSqrt();
    if (!build_schur()) break;
    const double mu = compl_ / std::max(nu, 1.0);

    // Predictor.
    std::vector<RMat> rhs(nb);
    for (size_t j = 0; j < nb; ++j) rhs[j] = RMat(RVec(-scal_[j].v.cwiseAbs2()).asDiagonal());
    RVec rhs_l = -vl_.cwiseAbs2();
    Direction pred;
    direction(it, rhs, rhs_l, pred);

    std::vector<RMat> dxs(nb), dzs(nb);
    double ap = 1.0, ad = 1.0;
    for (size_t j = 0; j < nb; ++j) {
      dxs[j] = sym(scal_[j].ginv * pred.dx[j] * scal_[j].ginv.transpose());
      dzs[j] = sym(scal_[j].g.transpose() * pred.dz[j] * scal_[j].g);
      ap = std::min(ap, max_step_scaled(scal_[j].v, dxs[j]));
      ad = std::min(ad, max_step_scaled(scal_[j].v, dzs[j]));
    }
    ap = std::min(ap, max_step_vec(it.xl, pred.dxl));
    ad = std::min(ad, max_step_vec(it.zl, pred.dzl));

    double mu_aff = 0;
    for (size_t j = 0; j < nb; ++j)
      mu_aff += ((it.x[j] + ap * pred.dx[j]).array() * (it.z[j] + ad * pred.dz[j]).array()).sum();
    mu_aff += (it.xl + ap * pred.dxl).dot(it.zl + ad * pred.dzl);
    mu_aff /= std::max(nu, 1.0);
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, expon);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    for (size_t j = 0; j < nb; ++j) {
      RMat r = RMat(RVec(-scal_[j].v.cwiseAbs2()).asDiagonal());
      r.diagonal().array() += sigma * mu;
      r -= 0.5 * (dxs[j] * dzs[j] + dzs[j] * dxs[j]);
      rhs[j] = r;
    }
    rhs_l = RVec::Constant(vl_.size(), sigma * mu) - vl_.cwiseAbs2() - pred.dxl.cwiseProduct(pred.dzl);
    Direction dir;
    direction(it, rhs, rhs_l, dir);

    double mp = std::numeric_limits<double>::infinity(), md = mp;
    for (size_t j = 0; j < nb; ++j) {
      mp = std::min(mp, max_step_scaled(scal_[j].v, sym(scal_[j].ginv * dir.dx[j] * scal_[j].ginv.transpose())));
      md = std::min(md, max_step_scaled(scal_[j].v, sym(scal_[j].g.transpose() * dir.dz[j] * scal_[j].g)));
    }
    mp = std::min(mp, max_step_vec(it.xl, dir.dxl));
    md = std::min(md, max_step_vec(it.zl, dir.dzl));
    const double gamma = 0.9 + 0.09 * std::min({ap, ad, 1.0});
    const double alpha_p = std::min(1.0, gamma * mp);
    const double alpha_d = std::min(1.0, gamma * md);
    if (!std::isfinite(alpha_p) || !std::isfinite(alpha_d)) break;

    for (size_t j = 0; j < nb; ++j) {
      it.x[j] = sym(it.x[j] + alpha_p * dir.dx[j]);
      it.z[j] = sym(it.z[j] + alpha_d * dir.dz[j]);
    }
    it.xl += alpha_p * dir.dxl;
    it.xf += alpha_p * dir.dxf;
    it.zl += alpha_d * dir.dzl;
    it.y += alpha_d * dir.dy;

    if (std::max(alpha_p, alpha_d) < 1e-8) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }
  }

  return record(finish(status == Status::Optimal ? it : best, status));
}

}  // namespace

int Problem::add_psd(int size) {
  if (size <= 0) throw std::invalid_argument("Problem::add_psd: size must be positive");
  blocks_.push_back({BlockKind::Psd, size});
  return static_cast<int>(blocks_.size()) - 1;
}

int Problem::add_nonneg(int count) {
  if (count <= 0) throw std::invalid_argument("Problem::add_nonneg: count must be positive");
  blocks_.push_back({BlockKind::Nonneg, count});
  return static_cast<int>(blocks_.size()) - 1;
}

int Problem::add_free(int count) {
  if (count <= 0) throw std::invalid_argument("Problem::add_free: count must be positive");
  blocks_.push_back({BlockKind::Free, count});
  return static_cast<int>(blocks_.size()) - 1;
}

void Problem::check_form(const LinearForm& form) const {
  for (const auto& [b, c] : form.psd) {
    if (b < 0 || b >= static_cast<int>(blocks_.size()) || blocks_[b].kind != BlockKind::Psd ||
        c.rows() != blocks_[b].size || c.cols() != blocks_[b].size) {
      throw std::invalid_argument("LinearForm: PSD term inconsistent with block " + std::to_string(b));
    }
  }
  for (const auto& [b, i, c] : form.scalar) {
    if (b < 0 || b >= static_cast<int>(blocks_.size()) || blocks_[b].kind == BlockKind::Psd ||
        i < 0 || i >= blocks_[b].size) {
      throw std::invalid_argument("LinearForm: scalar term inconsistent with block " + std::to_string(b));
    }
  }
}

void Problem::add_equality(LinearForm form, double rhs) {
  check_form(form);
  rows_.emplace_back(std::move(form), rhs);
}

nlohmann::json Problem::dump() const {
  using nlohmann::json;
  json j;
  json blocks = json::array();
  for (const auto& b : blocks_) {
    const char* kind = b.kind == BlockKind::Psd ? "psd" : b.kind == BlockKind::Nonneg ? "nonneg" : "free";
    blocks.push_back({{"kind", kind}, {"size", b.size}});
  }
  auto form_json = [](const LinearForm& f) {
    json terms = json::array();
    for (const auto& [b, c] : f.psd) {
      json entries = json::array();
      for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index k = 0; k < c.cols(); ++k)
          if (c(i, k) != 0.0) entries.push_back({i, k, c(i, k)});
      terms.push_back({{"block", b}, {"entries", entries}});
    }
    for (const auto& [b, i, c] : f.scalar) terms.push_back({{"block", b}, {"entry", i}, {"coef", c}});
    return terms;
  };
  json rows = json::array();
  for (const auto& [f, rhs] : rows_) rows.push_back({{"terms", form_json(f)}, {"rhs", rhs}});
  j["blocks"] = blocks;
  j["equalities"] = rows;
  j["objective"] = form_json(objective_);
  return j;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::PrimalInfeasible: return "primal_infeasible";
    case Status::DualInfeasible: return "dual_infeasible";
    case Status::Inaccurate: return "inaccurate";
  }
  return "unknown";
}

Solution solve(const Problem& p, double tol) {
  Options o;
  o.tol = tol;
  return solve(p, o);
}

namespace {
std::atomic<double> g_tol_override{0.0};
}

void set_tolerance_override(double tol) {
  if (tol != 0.0 && !(tol >= 1e-10 && tol <= 1e-4)) {
    throw std::invalid_argument("conic: tolerance override must lie in [1e-10, 1e-4]");
  }
  g_tol_override = tol;
}

double tolerance_override() { return g_tol_override; }

Solution solve(const Problem& p, const Options& options) {
  Options o = options;
  if (const double t = g_tol_override; t > 0) o.tol = t;
  if (!(o.tol >= 1e-10 && o.tol <= 1e-4)) {
    throw std::invalid_argument("conic::solve: tolerance must lie in [1e-10, 1e-4]");
  }
  Engine e(p, o);
  return e.run();
}

RMat complex_embed(const HermMat& h) {
  const Eigen::Index k = h.size();
  RMat out(2 * k, 2 * k);
  out.topLeftCorner(k, k) = h.mat().real();
  out.topRightCorner(k, k) = -h.mat().imag();
  out.bottomLeftCorner(k, k) = h.mat().imag();
  out.bottomRightCorner(k, k) = h.mat().real();
  return out;
}

HermVar HermVar::create(Problem& p, int size, Field field) {
  HermVar v;
  v.size_ = size;
  v.field_ = field;
  v.block_ = p.add_psd(field == Field::Real ? size : 2 * size);
  return v;
}

RMat HermVar::coefficient(const Mat& f) const {
  if (f.rows() != size_ || f.cols() != size_) {
    throw std::invalid_argument("HermVar: coefficient size mismatch");
  }
  if (field_ == Field::Real) return sym(f.real());
  const RMat pr = f.real();
  const RMat qr = -f.imag();
  const int k = size_;
  RMat c(2 * k, 2 * k);
  c.topLeftCorner(k, k) = 0.5 * pr;
  c.bottomRightCorner(k, k) = 0.5 * pr;
  c.bottomLeftCorner(k, k) = 0.5 * qr;
  c.topRightCorner(k, k) = -0.5 * qr;
  return sym(c);
}

void HermVar::add_to(LinearForm& form, const Mat& f, double scale) const {
  form.add_psd(block_, scale * coefficient(f));
}

Mat HermVar::value(const Solution& s) const {
  const RMat& z = s.primal.at(block_);
  if (field_ == Field::Real) return z.cast<cplx>();
  const int k = size_;
  Mat h(k, k);
  h.real() = 0.5 * (z.topLeftCorner(k, k) + z.bottomRightCorner(k, k));
  h.imag() = 0.5 * (z.bottomLeftCorner(k, k) - z.topRightCorner(k, k));
  return 0.5 * (h + h.adjoint());
}

}  // namespace ncbase::conic
