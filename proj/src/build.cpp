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

#include "drtsp/reform/build.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "drtsp/lp/simplex.hpp"

namespace drtsp {
namespace {

using lp::kInf;
using lp::LinearModel;
using lp::RowSense;
using lp::SolveStatus;

// value(x) = c0 + cx . x
struct AffEntry {
  double c0 = 0.0;
  Vec cx;
};
using AffMat = std::vector<std::vector<AffEntry>>;

AffEntry entry_of(const DrtspInstance& inst, int i, int j, double sgn) {
  AffEntry e;
  e.c0 = sgn * inst.Tmap.base[i][j];
  e.cx.assign(inst.n1, 0.0);
  for (int k = 0; k < inst.n1; ++k)
    e.cx[k] = sgn * inst.Tmap.coeffs[k][i][j];
  return e;
}

// Largest possible |T_ij(x)| over the first-stage box; used when a Mixed
// entry forbids an affine absolute value.
double mixed_bound(const DrtspInstance& inst, int i, int j) {
  double hi = inst.Tmap.base[i][j], lo = hi;
  for (int k = 0; k < inst.n1; ++k) {
    double c = inst.Tmap.coeffs[k][i][j];
    if (c == 0.0) continue;
    double l = inst.first_stage.lb[k], u = inst.first_stage.ub[k];
    if (!std::isfinite(l) || !std::isfinite(u))
      throw RegimeMismatch(
          "mixed-sign entry with unbounded first-stage box cannot be "
          "magnitude-bounded");
    hi += std::max(c * l, c * u);
    lo += std::min(c * l, c * u);
  }
  return std::max(std::fabs(hi), std::fabs(lo));
}

AffMat affine_abs_T(const DrtspInstance& inst) {
  AffMat a(inst.l, std::vector<AffEntry>(inst.m2));
  for (int i = 0; i < inst.l; ++i)
    for (int j = 0; j < inst.m2; ++j) {
      switch (inst.Tmap.sign_pattern[i][j]) {
        case SignKind::NonNeg: a[i][j] = entry_of(inst, i, j, +1.0); break;
        case SignKind::NonPos: a[i][j] = entry_of(inst, i, j, -1.0); break;
        case SignKind::Mixed:
          a[i][j].c0 = mixed_bound(inst, i, j);
          a[i][j].cx.assign(inst.n1, 0.0);
          break;
      }
    }
  return a;
}

AffMat affine_negpart_T(const DrtspInstance& inst) {
  AffMat a(inst.l, std::vector<AffEntry>(inst.m2));
  for (int i = 0; i < inst.l; ++i)
    for (int j = 0; j < inst.m2; ++j) {
      switch (inst.Tmap.sign_pattern[i][j]) {
        case SignKind::NonNeg:
          a[i][j].cx.assign(inst.n1, 0.0);
          break;
        case SignKind::NonPos: a[i][j] = entry_of(inst, i, j, -1.0); break;
        case SignKind::Mixed:
          a[i][j].c0 = mixed_bound(inst, i, j);
          a[i][j].cx.assign(inst.n1, 0.0);
          break;
      }
    }
  return a;
}

struct Builder {
  const DrtspInstance& inst;
  const AmbiguitySet& amb;
  DeterministicEquivalent de;
  int N;

  explicit Builder(const DrtspInstance& i, const AmbiguitySet& a)
      : inst(i), amb(a), N(a.num_samples()) {}

  void add_first_stage() {
    for (int k = 0; k < inst.n1; ++k)
      de.x_vars.push_back(de.model.add_col(
          inst.first_stage.lb[k], inst.first_stage.ub[k], inst.c[k], "x",
          inst.first_stage.binary[k]));
    for (size_t r = 0; r < inst.first_stage.A.size(); ++r) {
      std::vector<std::pair<int, double>> coef;
      for (int k = 0; k < inst.n1; ++k)
        if (inst.first_stage.A[r][k] != 0.0)
          coef.emplace_back(de.x_vars[k], inst.first_stage.A[r][k]);
      de.model.add_row(std::move(coef), RowSense::GE, inst.first_stage.b[r]);
    }
  }

  std::vector<int> add_y(const Vec& qobj, double scale) {
    std::vector<int> y;
    for (int t = 0; t < inst.n2; ++t)
      y.push_back(de.model.add_col(-kInf, kInf, scale * qobj[t], "y"));
    de.y_blocks.push_back(y);
    return y;
  }

  // T(x) zeta + W y - sum of mult*(S e)(x) >= h(x), all x-coupled.
  void add_coupled_rows(
      const std::vector<int>& y, const Vec& zeta,
      const std::vector<std::pair<const AffMat*, double>>& slacks) {
    for (int i = 0; i < inst.l; ++i) {
      Vec xcoef(inst.n1, 0.0);
      double rhs = inst.hmap.base[i];
      if (!inst.hmap.H.empty())
        for (int k = 0; k < inst.n1; ++k) xcoef[k] -= inst.hmap.H[i][k];
      for (int j = 0; j < inst.m2; ++j) {
        if (zeta[j] != 0.0) {
          rhs -= inst.Tmap.base[i][j] * zeta[j];
          for (int k = 0; k < inst.n1; ++k)
            xcoef[k] += inst.Tmap.coeffs[k][i][j] * zeta[j];
        }
      }
      for (auto [mat, mult] : slacks) {
        if (mult == 0.0) continue;
        for (int j = 0; j < inst.m2; ++j) {
          const AffEntry& e = (*mat)[i][j];
          rhs += mult * e.c0;
          for (int k = 0; k < inst.n1; ++k) xcoef[k] -= mult * e.cx[k];
        }
      }
      std::vector<std::pair<int, double>> coef;
      for (int k = 0; k < inst.n1; ++k)
        if (xcoef[k] != 0.0) coef.emplace_back(de.x_vars[k], xcoef[k]);
      for (int t = 0; t < inst.n2; ++t)
        if (inst.W[i][t] != 0.0) coef.emplace_back(y[t], inst.W[i][t]);
      de.model.add_row(std::move(coef), RowSense::GE, rhs);
    }
  }

  // u_t >= +-(Q'y)_t auxiliaries with objective weight w; dir constrains
  // only one side when nonzero.
  void add_qnorm_aux(const std::vector<int>& y, double w,
                     const std::vector<int>& dirs, const char* tag) {
    for (int t = 0; t < inst.m1; ++t) {
      int u = de.model.add_col(0.0, kInf, w, tag);
      de.named[tag].push_back(u);
      int dir = dirs.empty() ? 0 : dirs[t];
      for (double sgn : {1.0, -1.0}) {
        if (dir > 0 && sgn < 0) continue;
        if (dir < 0 && sgn > 0) continue;
        std::vector<std::pair<int, double>> coef{{u, 1.0}};
        for (int s = 0; s < inst.n2; ++s)
          if (inst.Q[s][t] != 0.0)
            coef.emplace_back(y[s], -sgn * inst.Q[s][t]);
        de.model.add_row(std::move(coef), RowSense::GE, 0.0);
      }
    }
  }

  int add_eta() {
    int e = de.model.add_col(-kInf, kInf, 1.0 / N, "eta");
    de.eta.push_back(e);
    return e;
  }

  // eta >= qobj . y
  void add_eta_row(int eta, const std::vector<int>& y, const Vec& qobj) {
    std::vector<std::pair<int, double>> coef{{eta, 1.0}};
    for (int t = 0; t < inst.n2; ++t)
      if (qobj[t] != 0.0) coef.emplace_back(y[t], -qobj[t]);
    de.model.add_row(std::move(coef), RowSense::GE, 0.0);
  }

  Vec qobj_at(const Vec& xi_q) const {
    Vec o = inst.q;
    for (int t = 0; t < inst.n2; ++t)
      for (int s = 0; s < inst.m1; ++s) o[t] += inst.Q[t][s] * xi_q[s];
    return o;
  }
};

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

DeterministicEquivalent build_deterministic(const DrtspInstance& inst,
                                            const AmbiguitySet& amb,
                                            const Regime& regime) {
  Builder b(inst, amb);
  b.de.regime = regime;
  b.add_first_stage();
  const int N = b.N;
  const double theta = amb.theta;
  const bool q_moves =
      theta > 0.0 && amb.support_q.kind != SupportKind::Singleton;
  const bool t_moves =
      theta > 0.0 && amb.support_T.kind != SupportKind::Singleton;
  AffMat absT, negT;

  switch (regime.kind) {
    case RegimeKind::SaaOnly: {
      for (int j = 0; j < N; ++j) {
        auto y = b.add_y(b.qobj_at(amb.samples_q[j]), 1.0 / N);
        b.add_coupled_rows(y, amb.samples_T[j], {});
      }
      break;
    }
    case RegimeKind::GeneralLinf: {
      if (t_moves) absT = affine_abs_T(inst);
      for (int j = 0; j < N; ++j) {
        auto y = b.add_y(b.qobj_at(amb.samples_q[j]), 1.0 / N);
        b.add_coupled_rows(y, amb.samples_T[j],
                           t_moves ? std::vector<std::pair<const AffMat*,
                                                           double>>{{&absT,
                                                                     theta}}
                                   : std::vector<std::pair<const AffMat*,
                                                           double>>{});
        if (q_moves) b.add_qnorm_aux(y, theta / N, {}, "u");
      }
      break;
    }
    case RegimeKind::ObjectiveOnly: {
      if (amb.support_T.kind != SupportKind::Singleton)
        throw RegimeMismatch(
            "objective-uncertainty build needs a singleton constraint block");
      const Vec& zt = amb.support_T.fixed;
      for (int j = 0; j < N; ++j) {
        auto y = b.add_y(b.qobj_at(amb.samples_q[j]), 1.0 / N);
        b.add_coupled_rows(y, zt, {});
        if (!q_moves) continue;
        if (amb.p.is_inf) {
          b.add_qnorm_aux(y, theta / N, {}, "u");
        } else if (amb.p.value == 1.0) {
          int u = b.de.model.add_col(0.0, kInf, theta / N, "u");
          b.de.named["u"].push_back(u);
          for (int t = 0; t < inst.m1; ++t)
            for (double sgn : {1.0, -1.0}) {
              std::vector<std::pair<int, double>> coef{{u, 1.0}};
              for (int s = 0; s < inst.n2; ++s)
                if (inst.Q[s][t] != 0.0)
                  coef.emplace_back(y[s], -sgn * inst.Q[s][t]);
              b.de.model.add_row(std::move(coef), RowSense::GE, 0.0);
            }
        } else {
          int w = b.de.model.add_col(0.0, kInf, theta / N, "w");
          b.de.w_vars.push_back(w);
          b.de.w_sample_block.push_back(
              static_cast<int>(b.de.y_blocks.size()) - 1);
          // Coordinate-direction seed cuts keep the relaxation bounded.
          for (int t = 0; t < inst.m1; ++t)
            for (double sgn : {1.0, -1.0}) {
              std::vector<std::pair<int, double>> coef{{w, 1.0}};
              for (int s = 0; s < inst.n2; ++s)
                if (inst.Q[s][t] != 0.0)
                  coef.emplace_back(y[s], -sgn * inst.Q[s][t]);
              b.de.model.add_row(std::move(coef), RowSense::GE, 0.0);
            }
        }
      }
      break;
    }
    case RegimeKind::ConstraintOnlyL1: {
      if (amb.support_q.kind != SupportKind::Singleton)
        throw RegimeMismatch(
            "constraint-uncertainty build needs a singleton objective block");
      Vec qobj = b.qobj_at(amb.support_q.fixed);
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
      for (int j = 0; j < N; ++j) {
        int eta = b.add_eta();
        if (sweeps.empty()) {
          auto y = b.add_y(qobj, 0.0);
          b.add_coupled_rows(y, amb.samples_T[j], {});
          b.add_eta_row(eta, y, qobj);
        }
        for (auto [i, rr] : sweeps) {
          Vec xi = amb.samples_T[j];
          xi[i] -= rr * theta;
          auto y = b.add_y(qobj, 0.0);
          b.add_coupled_rows(y, xi, {});
          b.add_eta_row(eta, y, qobj);
        }
      }
      break;
    }
    case RegimeKind::BinaryGeneralLinf: {
      const bool t_bin = amb.support_T.kind == SupportKind::Binary;
      const bool q_bin = amb.support_q.kind == SupportKind::Binary;
      if (t_bin == q_bin)
        throw RegimeMismatch(
            "binary L-inf build needs exactly one binary block");
      const bool full_flip = theta >= 1.0;
      if (t_bin) {
        if (full_flip) negT = affine_negpart_T(inst);
        for (int j = 0; j < N; ++j) {
          auto y = b.add_y(b.qobj_at(amb.samples_q[j]), 1.0 / N);
          if (full_flip)
            b.add_coupled_rows(y, Vec(inst.m2, 0.0), {{&negT, 1.0}});
          else
            b.add_coupled_rows(y, amb.samples_T[j], {});
          if (q_moves) b.add_qnorm_aux(y, theta / N, {}, "u");
        }
      } else {
        if (t_moves) absT = affine_abs_T(inst);
        for (int j = 0; j < N; ++j) {
          auto y = b.add_y(b.qobj_at(amb.samples_q[j]), 1.0 / N);
          b.add_coupled_rows(
              y, amb.samples_T[j],
              t_moves ? std::vector<std::pair<const AffMat*, double>>{{&absT,
                                                                       theta}}
                      : std::vector<std::pair<const AffMat*, double>>{});
          if (full_flip) {
            std::vector<int> dirs(inst.m1);
            for (int t = 0; t < inst.m1; ++t)
              dirs[t] = amb.samples_q[j][t] < 0.5 ? +1 : -1;
            b.add_qnorm_aux(y, 1.0 / N, dirs, "u");
          }
        }
      }
      break;
    }
    case RegimeKind::BinaryObjective: {
      if (amb.support_q.kind != SupportKind::Binary ||
          amb.support_T.kind != SupportKind::Singleton)
        throw RegimeMismatch(
            "binary-objective build needs a binary objective block and a "
            "singleton constraint block");
      if (amb.p.is_inf)
        throw RegimeMismatch("binary-objective build needs a finite exponent");
      long budget = hamming_budget(theta, amb.p.value);
      for (int j = 0; j < N; ++j) {
        auto y = b.add_y(b.qobj_at(amb.samples_q[j]), 1.0 / N);
        b.add_coupled_rows(y, amb.support_T.fixed, {});
        int lam = b.de.model.add_col(0.0, kInf,
                                     static_cast<double>(budget) / N, "lambda");
        b.de.named["lambda"].push_back(lam);
        for (int t = 0; t < inst.m1; ++t) {
          int sig = b.de.model.add_col(0.0, kInf, 1.0 / N, "sigma");
          b.de.named["sigma"].push_back(sig);
          double sgn = amb.samples_q[j][t] < 0.5 ? 1.0 : -1.0;
          std::vector<std::pair<int, double>> coef{{lam, 1.0}, {sig, 1.0}};
          for (int s = 0; s < inst.n2; ++s)
            if (inst.Q[s][t] != 0.0)
              coef.emplace_back(y[s], -sgn * inst.Q[s][t]);
          b.de.model.add_row(std::move(coef), RowSense::GE, 0.0);
        }
      }
      break;
    }
    case RegimeKind::BinaryConstraint: {
      if (amb.support_T.kind != SupportKind::Binary ||
          amb.support_q.kind != SupportKind::Singleton)
        throw RegimeMismatch(
            "binary-constraint build needs a binary constraint block and a "
            "singleton objective block");
      if (amb.p.is_inf)
        throw RegimeMismatch("binary-constraint build needs a finite exponent");
      Vec qobj = b.qobj_at(amb.support_q.fixed);
      const double step = std::pow(2.0, 1.0 / amb.p.value);
      if (theta < 1.0) {
        for (int j = 0; j < N; ++j) {
          auto y = b.add_y(qobj, 1.0 / N);
          b.add_coupled_rows(y, amb.samples_T[j], {});
        }
      } else if (theta < step) {
        for (int j = 0; j < N; ++j) {
          int eta = b.add_eta();
          for (int i = -1; i < inst.m2; ++i) {
            Vec xi = amb.samples_T[j];
            if (i >= 0) xi[i] = xi[i] < 0.5 ? 1.0 : 0.0;
            auto y = b.add_y(qobj, 0.0);
            b.add_coupled_rows(y, xi, {});
            b.add_eta_row(eta, y, qobj);
          }
        }
      } else {
        long budget = hamming_budget(theta, amb.p.value);
        if (hamming_ball_size(inst.m2, budget, 4097) <= 4096) {
          for (int j = 0; j < N; ++j) {
            int eta = b.add_eta();
            for_each_flip_set(
                inst.m2, budget, [&](const std::vector<int>& flips) {
                  Vec xi = amb.samples_T[j];
                  for (int i : flips) xi[i] = xi[i] < 0.5 ? 1.0 : 0.0;
                  auto y = b.add_y(qobj, 0.0);
                  b.add_coupled_rows(y, xi, {});
                  b.add_eta_row(eta, y, qobj);
                });
          }
        } else {
          negT = affine_negpart_T(inst);
          for (int j = 0; j < N; ++j) {
            auto y = b.add_y(qobj, 1.0 / N);
            b.add_coupled_rows(y, Vec(inst.m2, 0.0), {{&negT, 1.0}});
          }
        }
      }
      break;
    }
    case RegimeKind::PiecewiseMax:
    case RegimeKind::BinaryPiecewiseMax:
      throw RegimeMismatch(
          "piecewise-max recourse uses the dedicated build overload");
  }
  return std::move(b.de);
}

DeterministicEquivalent build_deterministic(const PiecewiseMaxRecourse& pwm,
                                            const Vec& c,
                                            const FirstStage& fs,
                                            const AmbiguitySet& amb,
                                            const Regime& regime) {
  if (regime.kind != RegimeKind::PiecewiseMax &&
      regime.kind != RegimeKind::BinaryPiecewiseMax)
    throw RegimeMismatch("piecewise-max build expects a piecewise-max regime");
  const bool binary = regime.kind == RegimeKind::BinaryPiecewiseMax;
  if (binary && amb.p.is_inf)
    throw RegimeMismatch("binary piecewise-max needs a finite exponent");
  DeterministicEquivalent de;
  de.regime = regime;
  const int n1 = static_cast<int>(c.size());
  const int N = amb.num_samples();
  for (int k = 0; k < n1; ++k)
    de.x_vars.push_back(
        de.model.add_col(fs.lb[k], fs.ub[k], c[k], "x", fs.binary[k]));
  for (size_t r = 0; r < fs.A.size(); ++r) {
    std::vector<std::pair<int, double>> coef;
    for (int k = 0; k < n1; ++k)
      if (fs.A[r][k] != 0.0) coef.emplace_back(de.x_vars[k], fs.A[r][k]);
    de.model.add_row(std::move(coef), RowSense::GE, fs.b[r]);
  }
  long budget = binary ? hamming_budget(amb.theta, amb.p.value) : 0;
  for (const auto& piece : pwm.pieces) {
    if (amb.theta > 0.0 && !piece.a.H.empty())
      for (const auto& row : piece.a.H)
        for (double v : row)
          if (v != 0.0)
            throw RegimeMismatch(
                "piecewise-max build needs scenario coefficients independent "
                "of x when theta > 0");
  }
  for (int j = 0; j < N; ++j) {
    int eta = de.model.add_col(-kInf, kInf, 1.0 / N, "eta");
    de.eta.push_back(eta);
    const Vec& z = amb.samples_T[j];
    for (const auto& piece : pwm.pieces) {
      const Vec& a = piece.a.base;
      double base = piece.d_base;
      for (int t = 0; t < pwm.tau; ++t) base += a[t] * z[t];
      if (!binary) {
        // eta - d_coeffs.x >= a.z + d_base + theta*||a||_{p*}
        std::vector<std::pair<int, double>> coef{{eta, 1.0}};
        for (int k = 0; k < n1; ++k)
          if (!piece.d_coeffs.empty() && piece.d_coeffs[k] != 0.0)
            coef.emplace_back(de.x_vars[k], -piece.d_coeffs[k]);
        de.model.add_row(std::move(coef), RowSense::GE,
                         base + amb.theta * dual_norm(a, amb.p));
      } else {
        int lam = de.model.add_col(0.0, kInf, 0.0, "lambda");
        de.named["lambda"].push_back(lam);
        std::vector<int> sigs;
        std::vector<std::pair<int, double>> coef{{eta, 1.0},
                                                 {lam, -double(budget)}};
        for (int t = 0; t < pwm.tau; ++t) {
          int sig = de.model.add_col(0.0, kInf, 0.0, "sigma");
          de.named["sigma"].push_back(sig);
          coef.emplace_back(sig, -1.0);
          double gain = z[t] < 0.5 ? a[t] : -a[t];
          de.model.add_row({{lam, 1.0}, {sig, 1.0}}, RowSense::GE, gain);
        }
        for (int k = 0; k < n1; ++k)
          if (!piece.d_coeffs.empty() && piece.d_coeffs[k] != 0.0)
            coef.emplace_back(de.x_vars[k], -piece.d_coeffs[k]);
        de.model.add_row(std::move(coef), RowSense::GE, base);
      }
    }
  }
  return de;
}

lp::LpSolution solve_deterministic(DeterministicEquivalent& de,
                                   const DrtspInstance& inst,
                                   const AmbiguitySet& amb) {
  auto solve_once = [&]() {
    return de.model.has_binaries() ? lp::solve_milp(de.model)
                                   : lp::solve_lp(de.model);
  };
  auto sol = solve_once();
  if (de.w_vars.empty() || sol.status != SolveStatus::Optimal) return sol;
  double pv = amb.p.value;
  double pstar = pv / (pv - 1.0);
  for (int round = 0; round < 200; ++round) {
    bool violated = false;
    for (size_t k = 0; k < de.w_vars.size(); ++k) {
      const auto& y = de.y_blocks[de.w_sample_block[k]];
      Vec v(inst.m1, 0.0);
      for (int t = 0; t < inst.m1; ++t)
        for (int s = 0; s < inst.n2; ++s)
          v[t] += inst.Q[s][t] * sol.x[y[s]];
      double norm = dual_norm(v, amb.p);
      if (norm <= sol.x[de.w_vars[k]] + 1e-7 * (1.0 + norm)) continue;
      violated = true;
      std::vector<std::pair<int, double>> coef{{de.w_vars[k], 1.0}};
      for (int s = 0; s < inst.n2; ++s) {
        double cc = 0.0;
        for (int t = 0; t < inst.m1; ++t) {
          if (v[t] == 0.0) continue;
          double st = (v[t] > 0 ? 1.0 : -1.0) *
                      std::pow(std::fabs(v[t]) / norm, pstar - 1.0);
          cc += st * inst.Q[s][t];
        }
        if (cc != 0.0) coef.emplace_back(y[s], -cc);
      }
      de.model.add_row(std::move(coef), RowSense::GE, 0.0);
    }
    if (!violated) return sol;
    sol = solve_once();
    if (sol.status != SolveStatus::Optimal) return sol;
  }
  throw lp::SolverError("supporting-hyperplane loop did not converge");
}

DrtspSolveResult solve_drtsp(const DrtspInstance& inst,
                             const AmbiguitySet& amb) {
  return solve_drtsp(inst, amb, classify_regime(inst, amb));
}

DrtspSolveResult solve_drtsp(const DrtspInstance& inst, const AmbiguitySet& amb,
                             const Regime& regime) {
  DrtspSolveResult res;
  res.regime = regime;
  // The monolithic deterministic equivalent grows with the sample count; for
  // a pure-binary first stage of modest width it is cheaper (and kinder to
  // the dense simplex) to enumerate the candidate first stages and evaluate
  // each through the per-sample reformulation, which decomposes.
  {
    bool pure_binary = inst.n1 > 0 && inst.n1 <= 12;
    for (int k = 0; k < inst.n1 && pure_binary; ++k)
      pure_binary = inst.first_stage.binary[k];
    long rows = static_cast<long>(amb.num_samples()) * inst.l;
    long cols = inst.n1 + static_cast<long>(amb.num_samples()) * inst.n2;
    if (pure_binary && rows * cols > 2'000'000) {
      res.status = SolveStatus::Infeasible;
      std::vector<int> free_idx;
      Vec x(inst.n1, 0.0);
      for (int k = 0; k < inst.n1; ++k) {
        if (inst.first_stage.lb[k] >= 0.5)
          x[k] = 1.0;
        else if (inst.first_stage.ub[k] >= 0.5)
          free_idx.push_back(k);
      }
      double best = kInf;
      for (long bm = 0; bm < (1L << free_idx.size()); ++bm) {
        for (size_t i = 0; i < free_idx.size(); ++i)
          x[free_idx[i]] = (bm >> i) & 1 ? 1.0 : 0.0;
        ZxResult zr;
        try {
          zr = evaluate_zx(inst, x, amb, regime);
        } catch (const SufficientlyExpensiveViolation&) {
          continue;  // worst-case recourse infeasible at this first stage
        }
        double v = zr.value;
        for (int k = 0; k < inst.n1; ++k) v += inst.c[k] * x[k];
        if (v < best) {
          best = v;
          res.status = SolveStatus::Optimal;
          res.objective = v;
          res.x = x;
          res.zx = std::move(zr);
        }
      }
      return res;
    }
  }
  auto de = build_deterministic(inst, amb, regime);
  auto sol = solve_deterministic(de, inst, amb);
  res.status = sol.status;
  if (sol.status != SolveStatus::Optimal) return res;
  res.objective = sol.objective;
  res.x.resize(inst.n1);
  for (int k = 0; k < inst.n1; ++k) {
    double v = sol.x[de.x_vars[k]];
    if (inst.first_stage.binary[k]) v = std::round(v);
    res.x[k] = v;
  }
  res.zx = evaluate_zx(inst, res.x, amb, regime);
  return res;
}

}  // namespace drtsp
