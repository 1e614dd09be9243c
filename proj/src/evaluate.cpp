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

#include "drtsp/reform/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "drtsp/lp/linear_model.hpp"
#include "drtsp/lp/simplex.hpp"
#include "drtsp/parallel.hpp"

namespace drtsp {
namespace {

using lp::kInf;
using lp::LinearModel;
using lp::RowSense;
using lp::SolveStatus;

Vec q_objective(const DrtspInstance& inst, const Vec& xi_q) {
  Vec o = inst.q;
  for (int t = 0; t < inst.n2; ++t)
    for (int s = 0; s < inst.m1; ++s) o[t] += inst.Q[t][s] * xi_q[s];
  return o;
}

Vec matvec(const Mat& m, const Vec& v) {
  Vec r(m.size(), 0.0);
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) r[i] += m[i][j] * v[j];
  return r;
}

// Adds free recourse variables y with the given objective and the rows
// W y >= rhs; returns the index of the first y column.
int add_recourse_block(LinearModel& m, const DrtspInstance& inst,
                       const Vec& obj, const Vec& rhs) {
  int y0 = m.num_cols();
  for (int t = 0; t < inst.n2; ++t) m.add_col(-kInf, kInf, obj[t], "y");
  for (int i = 0; i < inst.l; ++i) {
    std::vector<std::pair<int, double>> coef;
    for (int t = 0; t < inst.n2; ++t)
      if (inst.W[i][t] != 0.0) coef.emplace_back(y0 + t, inst.W[i][t]);
    m.add_row(std::move(coef), RowSense::GE, rhs[i]);
  }
  return y0;
}

// u_t >= +-(Q'y)_t for the listed scenario coordinates; u enters the
// objective with weight `w`. dir>0 adds only the positive side, dir<0 only
// the negative side, 0 both.
void add_qnorm_aux(LinearModel& m, const DrtspInstance& inst, int y0,
                   const std::vector<int>& coords, double w,
                   const std::vector<int>& dirs) {
  for (size_t k = 0; k < coords.size(); ++k) {
    int t = coords[k];
    int u = m.add_col(0.0, kInf, w, "u");
    std::vector<std::pair<int, double>> qcol;
    for (int s = 0; s < inst.n2; ++s)
      if (inst.Q[s][t] != 0.0) qcol.emplace_back(y0 + s, inst.Q[s][t]);
    int dir = dirs.empty() ? 0 : dirs[k];
    if (dir >= 0) {  // u - (Q'y)_t >= 0
      auto coef = qcol;
      for (auto& [j, v] : coef) v = -v;
      coef.emplace_back(u, 1.0);
      m.add_row(std::move(coef), RowSense::GE, 0.0);
    }
    if (dir <= 0) {  // u + (Q'y)_t >= 0
      auto coef = qcol;
      coef.emplace_back(u, 1.0);
      m.add_row(std::move(coef), RowSense::GE, 0.0);
    }
  }
}

double solve_sample_lp(LinearModel& m, Vec* y_out, int y0, int n2) {
  auto sol = lp::solve_lp(m);
  if (sol.status == SolveStatus::Unbounded)
    throw SufficientlyExpensiveViolation(
        "per-sample recourse program unbounded below");
  if (sol.status == SolveStatus::Infeasible)
    throw SufficientlyExpensiveViolation(
        "per-sample recourse program infeasible");
  if (y_out) y_out->assign(sol.x.begin() + y0, sol.x.begin() + y0 + n2);
  return sol.objective;
}

ZxResult reduce_samples(int n, const std::function<double(int, Vec&)>& fn) {
  ZxResult r;
  r.per_sample.assign(n, 0.0);
  r.y.assign(n, {});
  for_each_index(n, [&](int j) { r.per_sample[j] = fn(j, r.y[j]); });
  r.value =
      std::accumulate(r.per_sample.begin(), r.per_sample.end(), 0.0) / n;
  return r;
}

bool block_moves(const SupportKind& s, double theta) {
  return theta > 0.0 && s.kind != SupportKind::Singleton;
}

std::vector<int> all_coords(int m) {
  std::vector<int> v(m);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Mat abs_matrix(const Mat& m) {
  Mat a = m;
  for (auto& row : a)
    for (double& v : row) v = std::fabs(v);
  return a;
}

Mat neg_part(const Mat& m) {  // entrywise (-T)_+
  Mat a = m;
  for (auto& row : a)
    for (double& v : row) v = std::max(-v, 0.0);
  return a;
}

Vec row_sums(const Mat& m) {
  Vec r(m.size(), 0.0);
  for (size_t i = 0; i < m.size(); ++i)
    for (double v : m[i]) r[i] += v;
  return r;
}

}  // namespace

std::pair<double, Vec> evaluate_recourse(const DrtspInstance& inst,
                                         const Vec& x, const Vec& xi_q,
                                         const Vec& xi_T) {
  Vec obj = q_objective(inst, xi_q);
  Vec rhs = rhs_at(inst.hmap, x);
  Vec tterm = matvec(technology_at(inst.Tmap, x), xi_T);
  for (int i = 0; i < inst.l; ++i) rhs[i] -= tterm[i];
  LinearModel m;
  int y0 = add_recourse_block(m, inst, obj, rhs);
  Vec y;
  double v = solve_sample_lp(m, &y, y0, inst.n2);
  return {v, y};
}

std::pair<double, Vec> evaluate_recourse_dual(const DrtspInstance& inst,
                                              const Vec& x, const Vec& xi_q,
                                              const Vec& xi_T) {
  Vec rhs = rhs_at(inst.hmap, x);
  Vec tterm = matvec(technology_at(inst.Tmap, x), xi_T);
  LinearModel m;
  m.set_obj_sense(lp::ObjSense::Maximize);
  for (int i = 0; i < inst.l; ++i)
    m.add_col(0.0, kInf, rhs[i] - tterm[i], "pi");
  Vec beq = q_objective(inst, xi_q);
  for (int t = 0; t < inst.n2; ++t) {
    std::vector<std::pair<int, double>> coef;
    for (int i = 0; i < inst.l; ++i)
      if (inst.W[i][t] != 0.0) coef.emplace_back(i, inst.W[i][t]);
    m.add_row(std::move(coef), RowSense::EQ, beq[t]);
  }
  auto sol = lp::solve_lp(m);
  if (sol.status == SolveStatus::Infeasible)
    throw SufficientlyExpensiveViolation("recourse dual infeasible");
  if (sol.status == SolveStatus::Unbounded)
    throw SufficientlyExpensiveViolation(
        "recourse dual unbounded (primal infeasible)");
  return {sol.objective, sol.x};
}

ZxResult saa_value(const DrtspInstance& inst, const Vec& x,
                   const AmbiguitySet& amb) {
  ZxResult r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
    auto [v, yj] = evaluate_recourse(inst, x, amb.samples_q[j],
                                     amb.samples_T[j]);
    y = std::move(yj);
    return v;
  });
  r.mode = amb.theta == 0.0 ? ZxResult::Mode::Exact : ZxResult::Mode::UpperBound;
  if (amb.theta != 0.0)
    r.notes.push_back("positive radius: sampling average is a lower proxy, "
                      "not the worst case");
  return r;
}

ZxResult zx_general_linf(const DrtspInstance& inst, const Vec& x,
                         const AmbiguitySet& amb) {
  if (!amb.p.is_inf)
    throw RegimeMismatch("zx_general_linf requires the L-inf distance");
  if (amb.support_q.kind == SupportKind::Binary ||
      amb.support_T.kind == SupportKind::Binary)
    throw RegimeMismatch(
        "zx_general_linf requires continuous (or singleton) supports");
  const bool q_moves = block_moves(amb.support_q, amb.theta);
  const bool t_moves = block_moves(amb.support_T, amb.theta);
  Mat T = technology_at(inst.Tmap, x);
  Vec h = rhs_at(inst.hmap, x);
  Vec slack = t_moves ? row_sums(abs_matrix(T)) : Vec(inst.l, 0.0);
  ZxResult r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
    Vec rhs = h;
    Vec tterm = matvec(T, amb.samples_T[j]);
    for (int i = 0; i < inst.l; ++i)
      rhs[i] += amb.theta * slack[i] - tterm[i];
    LinearModel m;
    int y0 = add_recourse_block(m, inst, q_objective(inst, amb.samples_q[j]),
                                rhs);
    if (q_moves)
      add_qnorm_aux(m, inst, y0, all_coords(inst.m1), amb.theta, {});
    return solve_sample_lp(m, &y, y0, inst.n2);
  });
  bool exact = !t_moves || column_uniform_signs(inst.Tmap);
  r.mode = exact ? ZxResult::Mode::Exact : ZxResult::Mode::UpperBound;
  if (!exact)
    r.notes.push_back("non-uniform column signs: entrywise |T(x)| expansion "
                      "overestimates the L1 dual norm");
  return r;
}

ZxResult zx_objective_only(const DrtspInstance& inst, const Vec& x,
                           const AmbiguitySet& amb) {
  if (amb.support_T.kind != SupportKind::Singleton)
    throw RegimeMismatch(
        "zx_objective_only requires a singleton constraint block");
  if (amb.support_q.kind == SupportKind::Binary)
    throw RegimeMismatch(
        "zx_objective_only requires a continuous objective block");
  const bool q_moves = block_moves(amb.support_q, amb.theta);
  Vec h = rhs_at(inst.hmap, x);
  Vec tterm = matvec(technology_at(inst.Tmap, x), amb.support_T.fixed);
  Vec rhs(inst.l);
  for (int i = 0; i < inst.l; ++i) rhs[i] = h[i] - tterm[i];
  ZxResult r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
    LinearModel m;
    int y0 = add_recourse_block(m, inst, q_objective(inst, amb.samples_q[j]),
                                rhs);
    if (q_moves && amb.p.is_inf) {
      // p* = 1: sum of coordinate magnitudes.
      add_qnorm_aux(m, inst, y0, all_coords(inst.m1), amb.theta, {});
    } else if (q_moves && amb.p.value == 1.0) {
      // p* = inf: single epigraph variable over every coordinate.
      int u = m.add_col(0.0, kInf, amb.theta, "u");
      for (int t = 0; t < inst.m1; ++t) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<std::pair<int, double>> coef{{u, 1.0}};
          for (int s = 0; s < inst.n2; ++s)
            if (inst.Q[s][t] != 0.0)
              coef.emplace_back(y0 + s, -sgn * inst.Q[s][t]);
          m.add_row(std::move(coef), RowSense::GE, 0.0);
        }
      }
    } else if (q_moves) {
      // General p: epigraph w >= ||Q'y||_{p*} by supporting hyperplanes.
      int w = m.add_col(0.0, kInf, amb.theta, "w");
      // Seed with the coordinate directions (valid since ||e_t||_p = 1).
      for (int t = 0; t < inst.m1; ++t) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<std::pair<int, double>> coef{{w, 1.0}};
          for (int s = 0; s < inst.n2; ++s)
            if (inst.Q[s][t] != 0.0)
              coef.emplace_back(y0 + s, -sgn * inst.Q[s][t]);
          m.add_row(std::move(coef), RowSense::GE, 0.0);
        }
      }
      double pv = amb.p.value;
      double pstar = pv / (pv - 1.0);
      for (int it = 0; it < 200; ++it) {
        auto sol = lp::solve_lp(m);
        if (sol.status != SolveStatus::Optimal)
          return solve_sample_lp(m, &y, y0, inst.n2);  // surfaces the error
        Vec v(inst.m1, 0.0);
        for (int t = 0; t < inst.m1; ++t)
          for (int s = 0; s < inst.n2; ++s)
            v[t] += inst.Q[s][t] * sol.x[y0 + s];
        double norm = dual_norm(v, amb.p);
        double wv = sol.x[w];
        if (norm <= wv + 1e-7 * (1.0 + norm)) {
          y.assign(sol.x.begin() + y0, sol.x.begin() + y0 + inst.n2);
          return sol.objective;
        }
        // Cut direction s with ||s||_p = 1 and s.v = ||v||_{p*}.
        std::vector<std::pair<int, double>> coef{{w, 1.0}};
        for (int s = 0; s < inst.n2; ++s) {
          double c = 0.0;
          for (int t = 0; t < inst.m1; ++t) {
            if (v[t] == 0.0) continue;
            double st = (v[t] > 0 ? 1.0 : -1.0) *
                        std::pow(std::fabs(v[t]) / norm, pstar - 1.0);
            c += st * inst.Q[s][t];
          }
          if (c != 0.0) coef.emplace_back(y0 + s, -c);
        }
        m.add_row(std::move(coef), RowSense::GE, 0.0);
      }
      throw lp::SolverError("cutting-plane loop did not converge in 200 cuts");
    }
    return solve_sample_lp(m, &y, y0, inst.n2);
  });
  r.mode = ZxResult::Mode::Exact;
  return r;
}

ZxResult zx_constraint_only_l1(const DrtspInstance& inst, const Vec& x,
                               const AmbiguitySet& amb) {
  if (amb.p.is_inf || amb.p.value != 1.0)
    throw RegimeMismatch("zx_constraint_only_l1 requires the L1 distance");
  if (amb.support_q.kind != SupportKind::Singleton)
    throw RegimeMismatch(
        "zx_constraint_only_l1 requires a singleton objective block");
  if (amb.support_T.kind == SupportKind::Binary)
    throw RegimeMismatch(
        "zx_constraint_only_l1 requires a continuous constraint block");
  const bool t_moves = block_moves(amb.support_T, amb.theta);
  Mat T = technology_at(inst.Tmap, x);
  Vec h = rhs_at(inst.hmap, x);
  Vec obj = q_objective(inst, amb.support_q.fixed);
  // Sweep directions (i, r): r=+1 shifts coordinate i down by theta, r=-1 up.
  // Uniform-sign columns only need the tightening direction.
  std::vector<std::pair<int, int>> sweeps;
  if (t_moves) {
    for (int i = 0; i < inst.m2; ++i) {
      bool any_pos = false, any_neg = false, mixed = false;
      for (int row = 0; row < inst.l; ++row) {
        switch (inst.Tmap.sign_pattern[row][i]) {
          case SignKind::NonNeg: any_pos = true; break;
          case SignKind::NonPos: any_neg = true; break;
          case SignKind::Mixed: mixed = true; break;
        }
      }
      bool uniform = !mixed && !(any_pos && any_neg);
      if (!uniform || any_pos || !any_neg) sweeps.emplace_back(i, +1);
      if (!uniform || any_neg || !any_pos) sweeps.emplace_back(i, -1);
    }
  }
  ZxResult r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
    double best = -kInf;
    Vec best_y;
    auto eval_at = [&](const Vec& xi) {
      Vec rhs = h;
      Vec tterm = matvec(T, xi);
      for (int i = 0; i < inst.l; ++i) rhs[i] -= tterm[i];
      LinearModel m;
      int y0 = add_recourse_block(m, inst, obj, rhs);
      Vec yv;
      double v = solve_sample_lp(m, &yv, y0, inst.n2);
      if (v > best + 1e-12) {
        best = v;
        best_y = std::move(yv);
      }
    };
    if (sweeps.empty()) eval_at(amb.samples_T[j]);
    for (auto [i, rr] : sweeps) {
      Vec xi = amb.samples_T[j];
      xi[i] -= rr * amb.theta;
      eval_at(xi);
    }
    y = std::move(best_y);
    return best;
  });
  r.mode = ZxResult::Mode::Exact;
  return r;
}

ZxResult zx_piecewise_max(const PiecewiseMaxRecourse& pwm, const Vec& x,
                          const AmbiguitySet& amb) {
  const bool binary = amb.support_T.kind == SupportKind::Binary;
  if (binary && amb.p.is_inf)
    throw RegimeMismatch(
        "binary piecewise-max needs a finite exponent (the Hamming budget "
        "floor(theta^p) is undefined at p = inf)");
  if (!binary && amb.support_T.kind == SupportKind::Singleton &&
      amb.theta > 0.0)
    throw RegimeMismatch("piecewise-max scenario block must vary or be free");
  long budget = binary ? hamming_budget(amb.theta, amb.p.value) : 0;
  ZxResult r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
    (void)y;
    const Vec& z = amb.samples_T[j];
    double best = -kInf;
    for (const auto& piece : pwm.pieces) {
      Vec a = rhs_at(piece.a, x);
      double d = piece.d_base;
      for (size_t k = 0; k < piece.d_coeffs.size(); ++k)
        d += piece.d_coeffs[k] * x[k];
      double base = d;
      for (int t = 0; t < pwm.tau; ++t) base += a[t] * z[t];
      double v;
      if (!binary) {
        v = base + amb.theta * dual_norm(a, amb.p);
      } else {
        // Best <=budget flips: flipping t in C0 gains a_t, in C1 gains -a_t.
        Vec gains(pwm.tau);
        for (int t = 0; t < pwm.tau; ++t)
          gains[t] = z[t] < 0.5 ? a[t] : -a[t];
        std::sort(gains.begin(), gains.end(), std::greater<double>());
        v = base;
        for (long k = 0; k < std::min<long>(budget, pwm.tau); ++k)
          if (gains[k] > 0.0) v += gains[k];
      }
      best = std::max(best, v);
    }
    return best;
  });
  r.mode = ZxResult::Mode::Exact;
  return r;
}

namespace {

// Enumerates subsets of {0..m-1} of size <= budget, invoking fn on each
// (including the empty set).
void for_each_flip_set(int m, long budget,
                       const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    fn(cur);
    if (static_cast<long>(cur.size()) >= budget) return;
    for (int i = start; i < m; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

ZxResult zx_binary_general_linf(const DrtspInstance& inst, const Vec& x,
                                const AmbiguitySet& amb) {
  if (!amb.p.is_inf)
    throw RegimeMismatch("zx_binary_general_linf requires the L-inf distance");
  const bool q_bin = amb.support_q.kind == SupportKind::Binary;
  const bool t_bin = amb.support_T.kind == SupportKind::Binary;
  if (q_bin == t_bin)
    throw RegimeMismatch(
        "zx_binary_general_linf requires exactly one binary block");
  Mat T = technology_at(inst.Tmap, x);
  Vec h = rhs_at(inst.hmap, x);
  const bool full_flip = amb.theta >= 1.0;
  bool exact = true;
  std::vector<std::string> notes;
  ZxResult r;
  if (t_bin) {
    const bool q_moves = block_moves(amb.support_q, amb.theta);
    Vec rhs_flip = h;
    if (full_flip) {
      Vec worst = row_sums(neg_part(T));  // -(-T)_+ e moved to the rhs
      for (int i = 0; i < inst.l; ++i) rhs_flip[i] += worst[i];
    }
    r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
      Vec rhs;
      if (full_flip) {
        rhs = rhs_flip;
      } else {
        rhs = h;
        Vec tterm = matvec(T, amb.samples_T[j]);
        for (int i = 0; i < inst.l; ++i) rhs[i] -= tterm[i];
      }
      LinearModel m;
      int y0 = add_recourse_block(
          m, inst, q_objective(inst, amb.samples_q[j]), rhs);
      if (q_moves)
        add_qnorm_aux(m, inst, y0, all_coords(inst.m1), amb.theta, {});
      return solve_sample_lp(m, &y, y0, inst.n2);
    });
    if (full_flip && !column_uniform_signs(inst.Tmap)) {
      exact = false;
      notes.push_back("non-uniform column signs: worst binary corner "
                      "overestimated entrywise");
    }
  } else {
    const bool t_moves = block_moves(amb.support_T, amb.theta);
    Vec slack =
        t_moves ? row_sums(abs_matrix(T)) : Vec(inst.l, 0.0);
    r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
      Vec rhs = h;
      Vec tterm = matvec(T, amb.samples_T[j]);
      for (int i = 0; i < inst.l; ++i)
        rhs[i] += amb.theta * slack[i] - tterm[i];
      LinearModel m;
      int y0 = add_recourse_block(
          m, inst, q_objective(inst, amb.samples_q[j]), rhs);
      if (full_flip) {
        // One full flip allowed per coordinate: penalty ((Q'y)_t)_+ on
        // zero coordinates of the sample, ((-Q'y)_t)_+ on one coordinates.
        std::vector<int> coords = all_coords(inst.m1);
        std::vector<int> dirs(inst.m1);
        for (int t = 0; t < inst.m1; ++t)
          dirs[t] = amb.samples_q[j][t] < 0.5 ? +1 : -1;
        add_qnorm_aux(m, inst, y0, coords, 1.0, dirs);
      }
      return solve_sample_lp(m, &y, y0, inst.n2);
    });
    if (t_moves && !column_uniform_signs(inst.Tmap)) {
      exact = false;
      notes.push_back("non-uniform column signs on the constraint slack");
    }
    if (full_flip && !binary_q_polytope_integral(inst)) {
      exact = false;
      notes.push_back("dual scenario polytope not verified integral: "
                      "relaxed binary flips give an upper bound");
    }
  }
  r.mode = exact ? ZxResult::Mode::Exact : ZxResult::Mode::UpperBound;
  r.notes.insert(r.notes.end(), notes.begin(), notes.end());
  return r;
}

ZxResult zx_binary_objective(const DrtspInstance& inst, const Vec& x,
                             const AmbiguitySet& amb) {
  if (amb.p.is_inf)
    throw RegimeMismatch("zx_binary_objective requires a finite exponent");
  if (amb.support_q.kind != SupportKind::Binary ||
      amb.support_T.kind != SupportKind::Singleton)
    throw RegimeMismatch(
        "zx_binary_objective requires a binary objective block and a "
        "singleton constraint block");
  const long budget = hamming_budget(amb.theta, amb.p.value);
  Vec h = rhs_at(inst.hmap, x);
  Vec tterm = matvec(technology_at(inst.Tmap, x), amb.support_T.fixed);
  Vec rhs(inst.l);
  for (int i = 0; i < inst.l; ++i) rhs[i] = h[i] - tterm[i];
  ZxResult r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
    LinearModel m;
    int y0 = add_recourse_block(m, inst, q_objective(inst, amb.samples_q[j]),
                                rhs);
    int lam = m.add_col(0.0, kInf, static_cast<double>(budget), "lambda");
    for (int t = 0; t < inst.m1; ++t) {
      int sig = m.add_col(0.0, kInf, 1.0, "sigma");
      double sgn = amb.samples_q[j][t] < 0.5 ? 1.0 : -1.0;
      // lambda + sigma_t >= sgn * (Q'y)_t
      std::vector<std::pair<int, double>> coef{{lam, 1.0}, {sig, 1.0}};
      for (int s = 0; s < inst.n2; ++s)
        if (inst.Q[s][t] != 0.0)
          coef.emplace_back(y0 + s, -sgn * inst.Q[s][t]);
      m.add_row(std::move(coef), RowSense::GE, 0.0);
    }
    return solve_sample_lp(m, &y, y0, inst.n2);
  });
  bool exact = budget == 0 || budget_polytope_integral(inst, amb, budget);
  r.mode = exact ? ZxResult::Mode::Exact : ZxResult::Mode::UpperBound;
  if (!exact)
    r.notes.push_back(
        "budget polytope not verified integral: value is an upper bound");
  return r;
}

ZxResult zx_binary_constraint(const DrtspInstance& inst, const Vec& x,
                              const AmbiguitySet& amb) {
  if (amb.p.is_inf)
    throw RegimeMismatch("zx_binary_constraint requires a finite exponent");
  if (amb.support_T.kind != SupportKind::Binary ||
      amb.support_q.kind != SupportKind::Singleton)
    throw RegimeMismatch(
        "zx_binary_constraint requires a binary constraint block and a "
        "singleton objective block");
  Mat T = technology_at(inst.Tmap, x);
  Vec h = rhs_at(inst.hmap, x);
  Vec obj = q_objective(inst, amb.support_q.fixed);
  auto recourse_at = [&](const Vec& xi, Vec* y) {
    Vec rhs = h;
    Vec tterm = matvec(T, xi);
    for (int i = 0; i < inst.l; ++i) rhs[i] -= tterm[i];
    LinearModel m;
    int y0 = add_recourse_block(m, inst, obj, rhs);
    return solve_sample_lp(m, y, y0, inst.n2);
  };
  const double step = std::pow(2.0, 1.0 / amb.p.value);
  ZxResult r;
  bool exact = true;
  std::vector<std::string> notes;
  if (amb.theta < 1.0) {
    // No flip fits in the ball: plain sampling average.
    r = reduce_samples(amb.num_samples(),
                       [&](int j, Vec& y) {
                         return recourse_at(amb.samples_T[j], &y);
                       });
  } else if (amb.theta < step) {
    // Exactly one flip fits: Hamming-1 neighborhood sweep.
    r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
      double best = recourse_at(amb.samples_T[j], &y);
      for (int i = 0; i < inst.m2; ++i) {
        Vec xi = amb.samples_T[j];
        xi[i] = xi[i] < 0.5 ? 1.0 : 0.0;
        Vec yv;
        double v = recourse_at(xi, &yv);
        if (v > best + 1e-12) {
          best = v;
          y = std::move(yv);
        }
      }
      return best;
    });
  } else {
    long budget = hamming_budget(amb.theta, amb.p.value);
    if (hamming_ball_size(inst.m2, budget, 4097) <= 4096) {
      r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
        double best = -kInf;
        Vec besty;
        for_each_flip_set(inst.m2, budget, [&](const std::vector<int>& flips) {
          Vec xi = amb.samples_T[j];
          for (int i : flips) xi[i] = xi[i] < 0.5 ? 1.0 : 0.0;
          Vec yv;
          double v = recourse_at(xi, &yv);
          if (v > best + 1e-12) {
            best = v;
            besty = std::move(yv);
          }
        });
        y = std::move(besty);
        return best;
      });
    } else {
      // Enumeration too large: bound by allowing every corner at once.
      Vec rhs = h;
      Vec worst = row_sums(neg_part(T));
      for (int i = 0; i < inst.l; ++i) rhs[i] += worst[i];
      r = reduce_samples(amb.num_samples(), [&](int j, Vec& y) {
        (void)j;
        LinearModel m;
        int y0 = add_recourse_block(m, inst, obj, rhs);
        return solve_sample_lp(m, &y, y0, inst.n2);
      });
      exact = false;
      notes.push_back("Hamming-budget enumeration exceeds the guard: "
                      "full-corner relaxation upper bound");
    }
  }
  r.mode = exact ? ZxResult::Mode::Exact : ZxResult::Mode::UpperBound;
  r.notes.insert(r.notes.end(), notes.begin(), notes.end());
  return r;
}

ZxResult evaluate_zx(const DrtspInstance& inst, const Vec& x,
                     const AmbiguitySet& amb, const Regime& regime) {
  AmbiguitySet relaxed = amb;
  auto relax_binary = [&](SupportKind& s) {
    if (s.kind == SupportKind::Binary) s.kind = SupportKind::FreeContinuous;
  };
  ZxResult r;
  switch (regime.kind) {
    case RegimeKind::SaaOnly:
      r = saa_value(inst, x, amb);
      break;
    case RegimeKind::GeneralLinf:
      if (!relaxed.p.is_inf) relaxed.p = PNorm::inf();
      relax_binary(relaxed.support_q);
      relax_binary(relaxed.support_T);
      r = zx_general_linf(inst, x, relaxed);
      break;
    case RegimeKind::ObjectiveOnly:
      r = zx_objective_only(inst, x, amb);
      break;
    case RegimeKind::ConstraintOnlyL1:
      r = zx_constraint_only_l1(inst, x, amb);
      break;
    case RegimeKind::BinaryGeneralLinf:
      if (!relaxed.p.is_inf) relaxed.p = PNorm::inf();
      r = zx_binary_general_linf(inst, x, relaxed);
      break;
    case RegimeKind::BinaryObjective:
      r = zx_binary_objective(inst, x, amb);
      break;
    case RegimeKind::BinaryConstraint:
      r = zx_binary_constraint(inst, x, amb);
      break;
    case RegimeKind::PiecewiseMax:
    case RegimeKind::BinaryPiecewiseMax:
      throw RegimeMismatch(
          "piecewise-max recourse uses zx_piecewise_max directly");
  }
  r.mode = regime.exact ? r.mode : ZxResult::Mode::UpperBound;
  return r;
}

}  // namespace drtsp
