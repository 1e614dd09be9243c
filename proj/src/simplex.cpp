// Copyright 2026 the drtsp authors
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

#include "drtsp/lp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace drtsp::lp {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-8;
constexpr int kRefactorInterval = 64;
constexpr int kStallLimit = 600;

// Variable status codes shared with WarmBasis.
enum VStat : signed char { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeZero = 3 };

// Sparse LU of the basis (Gilbert-Peierls left-looking, partial pivoting)
// plus product-form eta updates accumulated between refactorizations.
class BasisFactor {
 public:
  // cols[k] lists (row, value) of the k-th basis column.
  void factorize(const std::vector<const std::vector<std::pair<int, double>>*>& cols,
                 int m) {
    m_ = m;
    lcol_.assign(m, {});
    ucol_.assign(m, {});
    diag_.assign(m, 0.0);
    prow_.assign(m, -1);
    pinv_.assign(m, -1);
    etas_.clear();
    std::vector<double> w(m, 0.0);
    std::vector<int> nz;
    std::vector<int> topo, stack, stack_pos;
    std::vector<signed char> mark(m, 0);
    nz.reserve(64);
    for (int k = 0; k < m_; ++k) {
      nz.clear();
      for (auto [r, v] : *cols[k]) {
        if (w[r] == 0.0) nz.push_back(r);
        w[r] += v;
      }
      // Reach: pivots whose L columns touch the right-hand side pattern.
      topo.clear();
      for (int r : nz) {
        int j = pinv_[r];
        if (j < 0 || mark[j]) continue;
        stack.assign(1, j);
        stack_pos.assign(1, 0);
        mark[j] = 1;
        while (!stack.empty()) {
          int cur = stack.back();
          bool descended = false;
          for (int& p = stack_pos.back(); p < static_cast<int>(lcol_[cur].size());) {
            int rr = lcol_[cur][p].first;
            ++p;
            int jj = pinv_[rr];
            if (jj >= 0 && !mark[jj]) {
              mark[jj] = 1;
              stack.push_back(jj);
              stack_pos.push_back(0);
              descended = true;
              break;
            }
          }
          if (!descended) {
            topo.push_back(cur);
            stack.pop_back();
            stack_pos.pop_back();
          }
        }
      }
      // topo is in reverse topological order; process ascending dependencies.
      std::sort(topo.begin(), topo.end());
      for (int j : topo) {
        mark[j] = 0;
        double t = w[prow_[j]];
        if (t == 0.0) continue;
        for (auto [r, lv] : lcol_[j]) {
          if (w[r] == 0.0) nz.push_back(r);
          w[r] -= t * lv;
        }
      }
      // Pivot: largest magnitude among rows without an assigned pivot.
      int prow = -1;
      double pmax = 0.0;
      for (int r : nz) {
        if (pinv_[r] >= 0) continue;
        double a = std::fabs(w[r]);
        if (a > pmax) {
          pmax = a;
          prow = r;
        }
      }
      if (prow < 0 || pmax < 1e-12) {
        for (int r : nz) w[r] = 0.0;
        throw SolverError("singular basis in LU factorization");
      }
      double piv = w[prow];
      diag_[k] = piv;
      prow_[k] = prow;
      pinv_[prow] = k;
      for (int r : nz) {
        double v = w[r];
        w[r] = 0.0;
        if (r == prow || v == 0.0) continue;
        if (pinv_[r] >= 0 && pinv_[r] < k)
          ucol_[k].emplace_back(pinv_[r], v);
        else if (pinv_[r] < 0 && std::fabs(v) > 1e-15)
          lcol_[k].emplace_back(r, v / piv);
      }
    }
  }

  // z := B^{-1} z; z is dense, indexed by row on input, by basis position
  // on output (scratch must have size m).
  void ftran(std::vector<double>& z, std::vector<double>& scratch) const {
    for (int k = 0; k < m_; ++k) {
      double t = z[prow_[k]];
      if (t == 0.0) continue;
      for (auto [r, lv] : lcol_[k]) z[r] -= t * lv;
    }
    for (int k = 0; k < m_; ++k) scratch[k] = z[prow_[k]];
    for (int k = m_ - 1; k >= 0; --k) {
      double t = scratch[k] / diag_[k];
      scratch[k] = t;
      if (t == 0.0) continue;
      for (auto [i, uv] : ucol_[k]) scratch[i] -= t * uv;
    }
    z.swap(scratch);
    for (const Eta& e : etas_) {
      double t = z[e.pos] / e.dpos;
      if (t != 0.0)
        for (auto [i, di] : e.col) z[i] -= di * t;
      z[e.pos] = t;
    }
  }

  // z := B^{-T} z; z indexed by basis position on input, by row on output.
  void btran(std::vector<double>& z, std::vector<double>& scratch) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = z[it->pos];
      for (auto [i, di] : it->col) s -= di * z[i];
      z[it->pos] = s / it->dpos;
    }
    for (int k = 0; k < m_; ++k) {
      double s = z[k];
      for (auto [i, uv] : ucol_[k]) s -= uv * z[i];
      z[k] = s / diag_[k];
    }
    for (int k = m_ - 1; k >= 0; --k) {
      double s = z[k];
      for (auto [r, lv] : lcol_[k]) s -= lv * z[pinv_[r]];
      z[k] = s;
    }
    for (int k = 0; k < m_; ++k) scratch[prow_[k]] = z[k];
    z.swap(scratch);
  }

  // Record B := B * E after the variable at basis position `pos` is
  // replaced; d = B^{-1} a_entering (basis-position space).
  void append_eta(int pos, const std::vector<double>& d) {
    Eta e;
    e.pos = pos;
    e.dpos = d[pos];
    for (int i = 0; i < m_; ++i)
      if (i != pos && std::fabs(d[i]) > 1e-13) e.col.emplace_back(i, d[i]);
    etas_.push_back(std::move(e));
  }

  int num_etas() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int pos = 0;
    double dpos = 1.0;
    std::vector<std::pair<int, double>> col;
  };
  int m_ = 0;
  std::vector<std::vector<std::pair<int, double>>> lcol_, ucol_;
  std::vector<double> diag_;
  std::vector<int> prow_, pinv_;
  std::vector<Eta> etas_;
};

class SimplexSolver {
 public:
  SimplexSolver(const LinearModel& model, const std::vector<double>& lb,
                const std::vector<double>& ub)
      : model_(model), n_(model.num_cols()), m_(model.num_rows()) {
    nvar_ = n_ + m_;
    sign_ = model.obj_sense() == ObjSense::Minimize ? 1.0 : -1.0;
    cols_.resize(nvar_);
    lo_.resize(nvar_);
    hi_.resize(nvar_);
    cost_.assign(nvar_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lb[j];
      hi_[j] = ub[j];
      cost_[j] = sign_ * model.obj(j);
    }
    for (int i = 0; i < m_; ++i) {
      const auto& row = model.row(i);
      for (auto [j, v] : row.coef) cols_[j].emplace_back(i, v);
      int s = n_ + i;
      cols_[s].emplace_back(i, 1.0);
      switch (row.sense) {
        case RowSense::LE: lo_[s] = 0.0; hi_[s] = kInf; break;
        case RowSense::GE: lo_[s] = -kInf; hi_[s] = 0.0; break;
        case RowSense::EQ: lo_[s] = 0.0; hi_[s] = 0.0; break;
      }
      rhs_.push_back(row.rhs);
    }
    for (int j = 0; j < nvar_; ++j)
      if (lo_[j] > hi_[j] + kFeasTol) contradictory_bounds_ = true;
  }

  LpSolution solve(WarmBasis* warm) {
    LpSolution sol;
    if (contradictory_bounds_) {
      sol.status = SolveStatus::Infeasible;
      sol.x.assign(n_, 0.0);
      sol.row_dual.assign(m_, 0.0);
      sol.reduced_cost.assign(n_, 0.0);
      return sol;
    }
    init_basis(warm);
    bool retried = false;
    for (;;) {
      try {
        refactorize();
        break;
      } catch (const SolverError&) {
        if (retried) throw;
        retried = true;
        reset_logical_basis();
      }
    }
    SolveStatus status = iterate();
    sol.status = status;
    sol.iterations = iterations_;
    sol.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) sol.x[j] = value_of(j);
    sol.row_dual.assign(m_, 0.0);
    sol.reduced_cost.assign(n_, 0.0);
    if (status == SolveStatus::Optimal) {
      std::vector<double> y(m_, 0.0);
      for (int k = 0; k < m_; ++k) y[k] = cost_[basic_[k]];
      factor_.btran(y, scratch_);
      for (int i = 0; i < m_; ++i) sol.row_dual[i] = sign_ * y[i];
      for (int j = 0; j < n_; ++j) {
        double d = cost_[j];
        for (auto [i, v] : cols_[j]) d -= y[i] * v;
        sol.reduced_cost[j] = vstat_[j] == kBasic ? 0.0 : sign_ * d;
      }
      double obj = 0.0;
      for (int j = 0; j < n_; ++j) obj += model_.obj(j) * sol.x[j];
      sol.objective = obj;
    }
    if (warm) {
      warm->basic = basic_;
      warm->vstat = vstat_;
      warm->valid = true;
    }
    return sol;
  }

 private:
  double value_of(int j) const {
    if (vstat_[j] == kBasic) return xb_[pos_in_basis_[j]];
    if (vstat_[j] == kAtLower) return lo_[j];
    if (vstat_[j] == kAtUpper) return hi_[j];
    return 0.0;
  }

  void reset_logical_basis() {
    basic_.resize(m_);
    vstat_.assign(nvar_, kAtLower);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) vstat_[j] = kAtLower;
      else if (std::isfinite(hi_[j])) vstat_[j] = kAtUpper;
      else vstat_[j] = kFreeZero;
    }
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      vstat_[n_ + i] = kBasic;
    }
  }

  void init_basis(const WarmBasis* warm) {
    if (warm && warm->valid && static_cast<int>(warm->basic.size()) == m_ &&
        static_cast<int>(warm->vstat.size()) == nvar_) {
      basic_ = warm->basic;
      vstat_ = warm->vstat;
      // Nonbasic variables pinned at a bound that no longer exists move to
      // the other bound or to free-at-zero.
      for (int j = 0; j < nvar_; ++j) {
        if (vstat_[j] == kAtLower && !std::isfinite(lo_[j]))
          vstat_[j] = std::isfinite(hi_[j]) ? kAtUpper : kFreeZero;
        else if (vstat_[j] == kAtUpper && !std::isfinite(hi_[j]))
          vstat_[j] = std::isfinite(lo_[j]) ? kAtLower : kFreeZero;
      }
    } else {
      reset_logical_basis();
    }
    pos_in_basis_.assign(nvar_, -1);
    for (int i = 0; i < m_; ++i) pos_in_basis_[basic_[i]] = i;
    scratch_.assign(m_, 0.0);
    work_.assign(m_, 0.0);
  }

  void refactorize() {
    std::vector<const std::vector<std::pair<int, double>>*> bc(m_);
    for (int i = 0; i < m_; ++i) bc[i] = &cols_[basic_[i]];
    factor_.factorize(bc, m_);
    compute_basic_values();
  }

  void compute_basic_values() {
    std::vector<double> b = rhs_;
    for (int j = 0; j < nvar_; ++j) {
      if (vstat_[j] == kBasic) continue;
      double v = value_of(j);
      if (v == 0.0) continue;
      for (auto [i, a] : cols_[j]) b[i] -= a * v;
    }
    factor_.ftran(b, scratch_);
    xb_ = b;
  }

  double infeasibility() const {
    double s = 0.0;
    for (int k = 0; k < m_; ++k) {
      int j = basic_[k];
      if (xb_[k] < lo_[j] - kFeasTol) s += lo_[j] - xb_[k];
      else if (xb_[k] > hi_[j] + kFeasTol) s += xb_[k] - hi_[j];
    }
    return s;
  }

  // One phase of simplex iterations. phase1 prices the infeasibility sum.
  // Returns Optimal when no improving column exists.
  SolveStatus iterate() {
    long max_iter = 2000000L + 500L * (m_ + n_);
    bool bland = false;
    int stall = 0;
    double last_metric = std::numeric_limits<double>::max();
    std::vector<double> y(m_), d(m_);
    for (;; ++iterations_) {
      if (iterations_ > max_iter)
        throw SolverError("simplex iteration limit exceeded");
      if (factor_.num_etas() >= kRefactorInterval) refactorize();
      double infeas = infeasibility();
      bool phase1 = infeas > kFeasTol;
      // Pricing vector.
      y.assign(m_, 0.0);
      if (phase1) {
        for (int k = 0; k < m_; ++k) {
          int j = basic_[k];
          if (xb_[k] < lo_[j] - kFeasTol) y[k] = -1.0;
          else if (xb_[k] > hi_[j] + kFeasTol) y[k] = 1.0;
        }
      } else {
        for (int k = 0; k < m_; ++k) y[k] = cost_[basic_[k]];
      }
      factor_.btran(y, scratch_);
      // Entering column.
      int q = -1;
      double best = bland ? 0.0 : kOptTol;
      int dir = 0;
      for (int j = 0; j < nvar_; ++j) {
        signed char st = vstat_[j];
        if (st == kBasic) continue;
        if (lo_[j] == hi_[j] && st != kFreeZero) continue;  // fixed
        double dj = phase1 ? 0.0 : cost_[j];
        for (auto [i, v] : cols_[j]) dj -= y[i] * v;
        int cand_dir = 0;
        double viol = 0.0;
        if (st == kAtLower && dj < -kOptTol) { cand_dir = +1; viol = -dj; }
        else if (st == kAtUpper && dj > kOptTol) { cand_dir = -1; viol = dj; }
        else if (st == kFreeZero && std::fabs(dj) > kOptTol) {
          cand_dir = dj < 0 ? +1 : -1;
          viol = std::fabs(dj);
        }
        if (cand_dir == 0) continue;
        if (bland) { q = j; dir = cand_dir; break; }
        if (viol > best) { best = viol; q = j; dir = cand_dir; }
      }
      if (q < 0) {
        if (phase1) return SolveStatus::Infeasible;
        return SolveStatus::Optimal;
      }
      // Direction d = B^{-1} a_q.
      d.assign(m_, 0.0);
      for (auto [i, v] : cols_[q]) d[i] = v;
      factor_.ftran(d, scratch_);
      // Ratio test: entering moves by t*dir; basic k moves by -dir*d[k]*t.
      double tmax = kInf;
      int leave = -1;       // basis position
      double leave_to = 0;  // bound the leaving variable lands on
      // Entering variable's own opposite bound.
      double own = dir > 0 ? hi_[q] - value_of(q) : value_of(q) - lo_[q];
      if (std::isfinite(own)) tmax = own;
      for (int k = 0; k < m_; ++k) {
        double delta = -dir * d[k];
        if (std::fabs(delta) < kPivotTol) continue;
        int j = basic_[k];
        double t = kInf, to = 0.0;
        bool below = xb_[k] < lo_[j] - kFeasTol;
        bool above = xb_[k] > hi_[j] + kFeasTol;
        if (delta > 0) {
          // increasing: blocks at ub (or at lb if below, regaining
          // feasibility); a variable already above ub moving further up
          // does not block, it only sheds infeasibility elsewhere.
          if (below) { t = (lo_[j] - xb_[k]) / delta; to = lo_[j]; }
          else if (above) continue;
          else if (std::isfinite(hi_[j])) { t = (hi_[j] - xb_[k]) / delta; to = hi_[j]; }
        } else {
          if (above) { t = (hi_[j] - xb_[k]) / delta; to = hi_[j]; }
          else if (below) continue;
          else if (std::isfinite(lo_[j])) { t = (lo_[j] - xb_[k]) / delta; to = lo_[j]; }
        }
        if (t == kInf) continue;
        if (t < -1e-12) t = 0.0;
        if (t < tmax - 1e-12 || (bland && t <= tmax + 1e-12 &&
                                 (leave < 0 || basic_[k] < basic_[leave]))) {
          tmax = t;
          leave = k;
          leave_to = to;
        }
      }
      if (tmax == kInf) {
        if (phase1) throw SolverError("phase-1 direction unbounded");
        return SolveStatus::Unbounded;
      }
      // Apply the step.
      double step = tmax * dir;
      for (int k = 0; k < m_; ++k)
        if (d[k] != 0.0) xb_[k] -= d[k] * step;
      if (leave < 0) {
        // Bound flip: entering stays nonbasic at the other bound.
        vstat_[q] = dir > 0 ? kAtUpper : kAtLower;
      } else {
        int out = basic_[leave];
        double enter_val = value_of(q) + step;
        vstat_[out] = std::fabs(leave_to - lo_[out]) < std::fabs(leave_to - hi_[out])
                          ? kAtLower
                          : kAtUpper;
        if (!std::isfinite(leave_to)) vstat_[out] = kFreeZero;
        pos_in_basis_[out] = -1;
        basic_[leave] = q;
        pos_in_basis_[q] = leave;
        vstat_[q] = kBasic;
        xb_[leave] = enter_val;
        factor_.append_eta(leave, d);
      }
      // Stall detection drives the Bland fallback (termination guarantee).
      double metric = phase1 ? infeas : objective_metric();
      if (metric < last_metric - 1e-12) {
        stall = 0;
        bland = false;
      } else if (++stall > kStallLimit) {
        bland = true;
      }
      last_metric = metric;
    }
  }

  double objective_metric() const {
    double s = 0.0;
    for (int k = 0; k < m_; ++k) s += cost_[basic_[k]] * xb_[k];
    for (int j = 0; j < nvar_; ++j)
      if (vstat_[j] != kBasic) s += cost_[j] * value_of(j);
    return s;
  }

  const LinearModel& model_;
  int n_, m_, nvar_;
  double sign_ = 1.0;
  bool contradictory_bounds_ = false;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lo_, hi_, cost_, rhs_;
  std::vector<int> basic_, pos_in_basis_;
  std::vector<signed char> vstat_;
  std::vector<double> xb_, scratch_, work_;
  BasisFactor factor_;
  long iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearModel& model, const std::vector<double>& lb,
                    const std::vector<double>& ub, WarmBasis* warm) {
  SimplexSolver solver(model, lb, ub);
  return solver.solve(warm);
}

LpSolution solve_lp(const LinearModel& model) {
  std::vector<double> lb(model.num_cols()), ub(model.num_cols());
  for (int j = 0; j < model.num_cols(); ++j) {
    lb[j] = model.lb(j);
    ub[j] = model.ub(j);
  }
  return solve_lp(model, lb, ub, nullptr);
}

}  // namespace drtsp::lp
