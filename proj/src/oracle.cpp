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

#include "drtsp/oracle/oracle.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

#include "drtsp/lp/simplex.hpp"
#include "drtsp/parallel.hpp"
#include "drtsp/reform/evaluate.hpp"

namespace drtsp {
namespace {

using lp::kInf;
using lp::LinearModel;
using lp::RowSense;
using lp::ScaleError;
using lp::SolveStatus;

constexpr long kScenarioGuard = 65536;

enum class QBall { Box, Cross };

// The recourse value is CONVEX in xi_T (right-hand-side parameterization)
// but CONCAVE in xi_q (a min of functions linear in xi_q), so vertex sweeps
// are valid only on the constraint block. For the objective block the worst
// xi_q is located exactly by maximizing the recourse dual jointly over
// (pi, xi_q in ball); the reported value is then certified by re-solving the
// primal second-stage LP at that scenario, so every oracle number is a
// primal evaluation.
Vec worst_xi_q(const DrtspInstance& inst, const Vec& x, const Vec& xi_T,
               const Vec& center, double radius, QBall ball) {
  Vec h = rhs_at(inst.hmap, x);
  Mat T = technology_at(inst.Tmap, x);
  LinearModel m;
  m.set_obj_sense(lp::ObjSense::Maximize);
  for (int i = 0; i < inst.l; ++i) {
    double obj = h[i];
    for (int j = 0; j < inst.m2; ++j) obj -= T[i][j] * xi_T[j];
    m.add_col(0.0, kInf, obj, "pi");
  }
  int xi0 = m.num_cols();
  for (int s = 0; s < inst.m1; ++s)
    m.add_col(ball == QBall::Box ? center[s] - radius : -kInf,
              ball == QBall::Box ? center[s] + radius : kInf, 0.0, "xi");
  for (int t = 0; t < inst.n2; ++t) {
    std::vector<std::pair<int, double>> coef;
    for (int i = 0; i < inst.l; ++i)
      if (inst.W[i][t] != 0.0) coef.emplace_back(i, inst.W[i][t]);
    for (int s = 0; s < inst.m1; ++s)
      if (inst.Q[t][s] != 0.0) coef.emplace_back(xi0 + s, -inst.Q[t][s]);
    m.add_row(std::move(coef), RowSense::EQ, inst.q[t]);
  }
  if (ball == QBall::Cross) {
    // sum_s |xi_s - center_s| <= radius via auxiliaries.
    std::vector<std::pair<int, double>> budget;
    for (int s = 0; s < inst.m1; ++s) {
      int a = m.add_col(0.0, kInf, 0.0, "d");
      budget.emplace_back(a, -1.0);
      m.add_row({{a, 1.0}, {xi0 + s, -1.0}}, RowSense::GE, -center[s]);
      m.add_row({{a, 1.0}, {xi0 + s, 1.0}}, RowSense::GE, center[s]);
    }
    double rhs = -radius;
    m.add_row(std::move(budget), RowSense::GE, rhs);
  }
  auto sol = lp::solve_lp(m);
  if (sol.status == SolveStatus::Unbounded)
    // Dual unbounded: the primal recourse is infeasible at this scenario,
    // so the worst case over the ball is +infinity.
    throw SufficientlyExpensiveViolation(
        "recourse infeasible at a scenario inside the ball");
  if (sol.status != SolveStatus::Optimal)
    throw SufficientlyExpensiveViolation(
        "worst-case objective scenario search failed over the ball");
  Vec xi(inst.m1);
  for (int s = 0; s < inst.m1; ++s) xi[s] = sol.x[xi0 + s];
  return xi;
}

struct SweepResult {
  double value = -kInf;
  Vec arg_q, arg_T;
};

// Evaluates one constraint-block scenario, optimizing the objective block
// within its remaining ball when it moves.
void consider(const DrtspInstance& inst, const Vec& x, const Vec& xi_T,
              const Vec& q_center, double q_radius, QBall ball,
              SweepResult& best) {
  Vec xi_q = q_radius > 0.0
                 ? worst_xi_q(inst, x, xi_T, q_center, q_radius, ball)
                 : q_center;
  double v = evaluate_recourse(inst, x, xi_q, xi_T).first;
  if (v > best.value + 1e-12) {
    best.value = v;
    best.arg_q = std::move(xi_q);
    best.arg_T = xi_T;
  }
}

void interior_spot_check(const DrtspInstance& inst, const Vec& x,
                         const AmbiguitySet& amb, int j, double best) {
  if (amb.theta == 0.0) return;
  std::mt19937 rng(12345u + static_cast<unsigned>(j));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 2; ++rep) {
    Vec xq = amb.samples_q[j], xt = amb.samples_T[j];
    double scale = amb.p.is_inf ? 1.0 : 1.0 / (inst.m1 + inst.m2 + 1);
    if (amb.support_q.kind == SupportKind::FreeContinuous)
      for (double& v : xq) v += amb.theta * scale * u(rng);
    if (amb.support_T.kind == SupportKind::FreeContinuous)
      for (double& v : xt) v += amb.theta * scale * u(rng);
    double v = evaluate_recourse(inst, x, xq, xt).first;
    if (v > best + 1e-9 * (1.0 + std::fabs(best)))
      throw std::logic_error(
          "random interior scenario beat the reported worst case");
  }
}

OracleReport reduce_oracle(int n, long scenario_count,
                           const std::function<SweepResult(int)>& per_sample) {
  OracleReport rep;
  rep.per_sample.assign(n, 0.0);
  rep.per_sample_argmax.assign(n, {});
  rep.scenario_count = scenario_count;
  for_each_index(n, [&](int j) {
    SweepResult r = per_sample(j);
    rep.per_sample[j] = r.value;
    rep.per_sample_argmax[j] = {r.arg_q, r.arg_T};
  });
  rep.value =
      std::accumulate(rep.per_sample.begin(), rep.per_sample.end(), 0.0) / n;
  return rep;
}

void require_no_binary(const AmbiguitySet& amb, const char* who) {
  if (amb.support_q.kind == SupportKind::Binary ||
      amb.support_T.kind == SupportKind::Binary)
    throw RegimeMismatch(std::string(who) +
                         ": binary blocks use oracle_zx_binary");
}

// All binary vectors within Hamming distance budget of z, flip sets in
// size-then-lexicographic order; fn also receives the flip count.
void hamming_neighbors(const Vec& z, long budget,
                       const std::function<void(const Vec&, long)>& fn) {
  int m = static_cast<int>(z.size());
  Vec xi = z;
  std::function<void(int, long)> rec = [&](int start, long used) {
    fn(xi, used);
    if (used >= budget) return;
    for (int i = start; i < m; ++i) {
      xi[i] = xi[i] < 0.5 ? 1.0 : 0.0;
      rec(i + 1, used + 1);
      xi[i] = z[i];
    }
  };
  rec(0, 0);
}

}  // namespace

OracleReport oracle_zx_box_linf(const DrtspInstance& inst, const Vec& x,
                                const AmbiguitySet& amb) {
  if (!amb.p.is_inf && amb.theta != 0.0 &&
      !(amb.support_q.kind == SupportKind::Singleton &&
        amb.support_T.kind == SupportKind::Singleton))
    throw RegimeMismatch("oracle_zx_box_linf requires the L-inf distance");
  require_no_binary(amb, "oracle_zx_box_linf");
  const bool t_moves =
      amb.theta > 0.0 && amb.support_T.kind == SupportKind::FreeContinuous;
  const bool q_moves =
      amb.theta > 0.0 && amb.support_q.kind == SupportKind::FreeContinuous;
  int ft = t_moves ? inst.m2 : 0;
  if (ft > 12) throw ScaleError("box-vertex sweep limited to 12 free axes");
  long count = 1L << ft;
  double qr = q_moves ? amb.theta : 0.0;
  return reduce_oracle(amb.num_samples(), count, [&](int j) {
    SweepResult best;
    for (long mask = 0; mask < count; ++mask) {
      Vec xi_T = amb.samples_T[j];
      for (int k = 0; k < ft; ++k)
        xi_T[k] += (mask >> k & 1) ? amb.theta : -amb.theta;
      consider(inst, x, xi_T, amb.samples_q[j], qr, QBall::Box, best);
    }
    interior_spot_check(inst, x, amb, j, best.value);
    return best;
  });
}

OracleReport oracle_zx_l1(const DrtspInstance& inst, const Vec& x,
                          const AmbiguitySet& amb) {
  if (amb.p.is_inf || amb.p.value != 1.0)
    throw RegimeMismatch("oracle_zx_l1 requires the L1 distance");
  require_no_binary(amb, "oracle_zx_l1");
  const bool t_moves =
      amb.theta > 0.0 && amb.support_T.kind == SupportKind::FreeContinuous;
  const bool q_moves =
      amb.theta > 0.0 && amb.support_q.kind == SupportKind::FreeContinuous;
  if (t_moves && q_moves)
    throw ScaleError(
        "joint L1 ball with both blocks moving is not supported");
  long count = t_moves ? 1 + 2L * inst.m2 : 1;
  return reduce_oracle(amb.num_samples(), count, [&](int j) {
    SweepResult best;
    if (t_moves) {
      consider(inst, x, amb.samples_T[j], amb.samples_q[j], 0.0, QBall::Cross,
               best);
      for (int i = 0; i < inst.m2; ++i)
        for (double sgn : {1.0, -1.0}) {
          Vec xi_T = amb.samples_T[j];
          xi_T[i] += sgn * amb.theta;
          consider(inst, x, xi_T, amb.samples_q[j], 0.0, QBall::Cross, best);
        }
    } else {
      consider(inst, x, amb.samples_T[j], amb.samples_q[j],
               q_moves ? amb.theta : 0.0, QBall::Cross, best);
    }
    interior_spot_check(inst, x, amb, j, best.value);
    return best;
  });
}

OracleReport oracle_zx_binary(const DrtspInstance& inst, const Vec& x,
                              const AmbiguitySet& amb) {
  const bool q_bin = amb.support_q.kind == SupportKind::Binary;
  const bool t_bin = amb.support_T.kind == SupportKind::Binary;
  if (!q_bin && !t_bin)
    throw RegimeMismatch("oracle_zx_binary requires a binary block");
  const bool q_free = amb.support_q.kind == SupportKind::FreeContinuous;
  const bool t_free = amb.support_T.kind == SupportKind::FreeContinuous;

  if (amb.p.is_inf) {
    int bq = q_bin && amb.theta >= 1.0 ? inst.m1 : 0;
    int bt = t_bin && amb.theta >= 1.0 ? inst.m2 : 0;
    int ft = t_free && amb.theta > 0.0 ? inst.m2 : 0;
    if (bq + bt > 16)
      throw ScaleError("binary corner enumeration limited to 16 axes");
    long count = (1L << (bq + bt)) << ft;
    if (count > kScenarioGuard)
      throw ScaleError("scenario enumeration exceeds the guard");
    double qr = q_free && amb.theta > 0.0 ? amb.theta : 0.0;
    return reduce_oracle(amb.num_samples(), count, [&](int j) {
      SweepResult best;
      for (long bm = 0; bm < (1L << (bq + bt)); ++bm) {
        Vec q_center = amb.samples_q[j];
        Vec t_base = amb.samples_T[j];
        for (int k = 0; k < bq; ++k) q_center[k] = (bm >> k) & 1 ? 1.0 : 0.0;
        for (int k = 0; k < bt; ++k)
          t_base[k] = (bm >> (bq + k)) & 1 ? 1.0 : 0.0;
        for (long cm = 0; cm < (1L << ft); ++cm) {
          Vec xi_T = t_base;
          for (int k = 0; k < ft; ++k)
            xi_T[k] += (cm >> k & 1) ? amb.theta : -amb.theta;
          consider(inst, x, xi_T, q_center, qr, QBall::Box, best);
        }
      }
      return best;
    });
  }

  // Finite p: Hamming budget over the binary coordinates; any continuous
  // companion shares the L1 budget (only p = 1 is enumerable there).
  const double pv = amb.p.value;
  long budget = hamming_budget(amb.theta, pv);
  int mb = (q_bin ? inst.m1 : 0) + (t_bin ? inst.m2 : 0);
  if (hamming_ball_size(mb, budget, kScenarioGuard + 1) > kScenarioGuard)
    throw ScaleError("Hamming-budget enumeration exceeds the guard");
  if ((q_free || t_free) && pv != 1.0)
    throw ScaleError(
        "continuous companion block with p in (1,inf) is not enumerable");
  return reduce_oracle(amb.num_samples(), 0, [&](int j) {
    SweepResult best;
    Vec zjoint;
    if (q_bin)
      zjoint.insert(zjoint.end(), amb.samples_q[j].begin(),
                    amb.samples_q[j].end());
    if (t_bin)
      zjoint.insert(zjoint.end(), amb.samples_T[j].begin(),
                    amb.samples_T[j].end());
    hamming_neighbors(zjoint, budget, [&](const Vec& xi, long flips) {
      Vec q_center = amb.samples_q[j];
      Vec xi_T = amb.samples_T[j];
      size_t off = 0;
      if (q_bin) {
        for (int k = 0; k < inst.m1; ++k) q_center[k] = xi[off + k];
        off += inst.m1;
      }
      if (t_bin)
        for (int k = 0; k < inst.m2; ++k) xi_T[k] = xi[off + k];
      // Continuous companions share the transport budget only under p = 1,
      // where a flip costs exactly one unit of L1 distance.  For p > 1 there
      // is no companion block (guarded above) and every neighbor within the
      // Hamming budget floor(theta^p) is admissible.
      double leftover = 0.0;
      if (pv == 1.0) {
        leftover = amb.theta - static_cast<double>(flips);
        if (leftover < 0.0) return;
      }
      consider(inst, x, xi_T, q_center,
               q_free && leftover > 0.0 ? leftover : 0.0, QBall::Cross, best);
      if (t_free && leftover > 0.0)
        for (int i = 0; i < inst.m2; ++i)
          for (double sgn : {1.0, -1.0}) {
            Vec xt = xi_T;
            xt[i] += sgn * leftover;
            consider(inst, x, xt, q_center, 0.0, QBall::Cross, best);
          }
    });
    return best;
  });
}

OracleReport oracle_zx_pwm(const PiecewiseMaxRecourse& pwm, const Vec& x,
                           const AmbiguitySet& amb) {
  auto piece_value = [&](const Vec& xi) {
    double best = -kInf;
    for (const auto& piece : pwm.pieces) {
      Vec a = rhs_at(piece.a, x);
      double v = piece.d_base;
      for (size_t k = 0; k < piece.d_coeffs.size(); ++k)
        v += piece.d_coeffs[k] * x[k];
      for (int t = 0; t < pwm.tau; ++t) v += a[t] * xi[t];
      best = std::max(best, v);
    }
    return best;
  };
  const bool binary = amb.support_T.kind == SupportKind::Binary;
  return reduce_oracle(amb.num_samples(), 0, [&](int j) {
    const Vec& z = amb.samples_T[j];
    std::vector<Vec> cands;
    if (binary) {
      if (amb.p.is_inf)
        throw RegimeMismatch("binary piecewise-max oracle needs finite p");
      long budget = hamming_budget(amb.theta, amb.p.value);
      if (hamming_ball_size(pwm.tau, budget, kScenarioGuard + 1) >
          kScenarioGuard)
        throw ScaleError("Hamming-budget enumeration exceeds the guard");
      hamming_neighbors(z, budget,
                        [&](const Vec& xi, long) { cands.push_back(xi); });
    } else if (amb.theta == 0.0 ||
               amb.support_T.kind == SupportKind::Singleton) {
      cands.push_back(z);
    } else if (amb.p.is_inf) {
      if (pwm.tau > 16) throw ScaleError("box sweep limited to 16 axes");
      for (long mask = 0; mask < (1L << pwm.tau); ++mask) {
        Vec xi = z;
        for (int k = 0; k < pwm.tau; ++k)
          xi[k] += (mask >> k & 1) ? amb.theta : -amb.theta;
        cands.push_back(std::move(xi));
      }
    } else if (amb.p.value == 1.0) {
      cands.push_back(z);
      for (int i = 0; i < pwm.tau; ++i)
        for (double sgn : {1.0, -1.0}) {
          Vec xi = z;
          xi[i] += sgn * amb.theta;
          cands.push_back(std::move(xi));
        }
    } else {
      // The recourse is itself a max of linear pieces, so the ball supremum
      // is attained at some single piece's own ball maximizer.
      cands.push_back(z);
      double pv = amb.p.value, pstar = pv / (pv - 1.0);
      for (const auto& piece : pwm.pieces) {
        Vec a = rhs_at(piece.a, x);
        double norm = dual_norm(a, amb.p);
        Vec xi = z;
        if (norm > 0.0)
          for (int t = 0; t < pwm.tau; ++t)
            xi[t] += amb.theta * (a[t] > 0 ? 1.0 : a[t] < 0 ? -1.0 : 0.0) *
                     std::pow(std::fabs(a[t]) / norm, pstar - 1.0);
        cands.push_back(std::move(xi));
      }
    }
    SweepResult best;
    for (const auto& xi : cands) {
      double v = piece_value(xi);
      if (v > best.value + 1e-12) {
        best.value = v;
        best.arg_T = xi;
        best.arg_q = amb.samples_q[j];
      }
    }
    return best;
  });
}

OracleReport oracle_zx_auto(const DrtspInstance& inst, const Vec& x,
                            const AmbiguitySet& amb) {
  const bool any_bin = amb.support_q.kind == SupportKind::Binary ||
                       amb.support_T.kind == SupportKind::Binary;
  if (any_bin) return oracle_zx_binary(inst, x, amb);
  const bool pinned = amb.theta == 0.0 ||
                      (amb.support_q.kind == SupportKind::Singleton &&
                       amb.support_T.kind == SupportKind::Singleton);
  if (amb.p.is_inf || pinned) return oracle_zx_box_linf(inst, x, amb);
  if (amb.p.value == 1.0) return oracle_zx_l1(inst, x, amb);
  // p in (1, inf): enumerable when only the objective block moves and it is
  // one-dimensional (the ball degenerates to an interval).
  if (amb.support_T.kind == SupportKind::Singleton && inst.m1 == 1) {
    AmbiguitySet a = amb;
    a.p = PNorm::inf();  // 1-D balls of every exponent coincide
    return oracle_zx_box_linf(inst, x, a);
  }
  throw ScaleError(
      "no enumeration oracle for continuous supports with p in (1,inf)");
}

OracleDrtspResult oracle_drtsp(const DrtspInstance& inst,
                               const AmbiguitySet& amb) {
  std::vector<int> bins;
  Vec x0(inst.n1);
  for (int k = 0; k < inst.n1; ++k) {
    if (inst.first_stage.binary[k]) {
      bins.push_back(k);
    } else if (inst.first_stage.lb[k] == inst.first_stage.ub[k]) {
      x0[k] = inst.first_stage.lb[k];
    } else {
      throw ScaleError(
          "first-stage enumeration needs binary or fixed variables");
    }
  }
  if (bins.size() > 12)
    throw ScaleError("first-stage enumeration limited to 12 binaries");
  OracleDrtspResult res;
  double best = kInf;
  for (long mask = 0; mask < (1L << bins.size()); ++mask) {
    Vec x = x0;
    for (size_t k = 0; k < bins.size(); ++k)
      x[bins[k]] = (mask >> k & 1) ? 1.0 : 0.0;
    bool feas = true;
    for (size_t r = 0; r < inst.first_stage.A.size() && feas; ++r) {
      double act = 0.0;
      for (int k = 0; k < inst.n1; ++k) act += inst.first_stage.A[r][k] * x[k];
      feas = act >= inst.first_stage.b[r] - 1e-9;
    }
    for (size_t k = 0; k < bins.size() && feas; ++k) {
      double v = x[bins[k]];
      feas = v >= inst.first_stage.lb[bins[k]] - 1e-9 &&
             v <= inst.first_stage.ub[bins[k]] + 1e-9;
    }
    if (!feas) continue;
    double v = 0.0;
    for (int k = 0; k < inst.n1; ++k) v += inst.c[k] * x[k];
    try {
      v += oracle_zx_auto(inst, x, amb).value;
    } catch (const SufficientlyExpensiveViolation&) {
      continue;  // worst-case recourse is +infinity for this first stage
    }
    if (v < best - 1e-12) {
      best = v;
      res.x = x;
    }
    res.status = SolveStatus::Optimal;
  }
  if (res.status != SolveStatus::Optimal)
    throw SufficientlyExpensiveViolation(
        "every feasible first stage has infeasible worst-case recourse");
  res.value = best;
  return res;
}

}  // namespace drtsp
