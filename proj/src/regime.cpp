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

#include <cmath>
#include <string>

#include "drtsp/lp/linear_model.hpp"
#include "drtsp/lp/vertex_enum.hpp"
#include "drtsp/model.hpp"

namespace drtsp {
namespace {

constexpr long kEnumGuard = 4096;

// {(pi, xi_q): W'pi = Q xi_q + q, pi >= 0, xi_q in [0,1]^m1}, optionally
// with the Hamming-budget row sum_{C0} xi + sum_{C1} (1-xi) <= budget
// centered at `center`.
lp::LinearModel dual_scenario_polytope(const DrtspInstance& inst,
                                       const Vec* center, long budget) {
  lp::LinearModel m;
  for (int i = 0; i < inst.l; ++i) m.add_col(0.0, lp::kInf, 0.0, "pi");
  for (int s = 0; s < inst.m1; ++s) m.add_col(0.0, 1.0, 0.0, "xi");
  for (int t = 0; t < inst.n2; ++t) {
    std::vector<std::pair<int, double>> coef;
    for (int i = 0; i < inst.l; ++i)
      if (inst.W[i][t] != 0.0) coef.emplace_back(i, inst.W[i][t]);
    for (int s = 0; s < inst.m1; ++s)
      if (inst.Q[t][s] != 0.0) coef.emplace_back(inst.l + s, -inst.Q[t][s]);
    m.add_row(coef, lp::RowSense::EQ, inst.q[t]);
  }
  if (center != nullptr) {
    std::vector<std::pair<int, double>> coef;
    double rhs = static_cast<double>(budget);
    for (int s = 0; s < inst.m1; ++s) {
      if ((*center)[s] < 0.5) {
        coef.emplace_back(inst.l + s, 1.0);
      } else {
        coef.emplace_back(inst.l + s, -1.0);
        rhs -= 1.0;
      }
    }
    m.add_row(coef, lp::RowSense::LE, rhs);
  }
  return m;
}

std::string onoff(bool b) { return b ? "yes" : "no"; }

}  // namespace

bool binary_q_polytope_integral(const DrtspInstance& inst) {
  return lp::is_integral(
      lp::check_integral(dual_scenario_polytope(inst, nullptr, 0)));
}

bool budget_polytope_integral(const DrtspInstance& inst,
                              const AmbiguitySet& amb, long budget) {
  for (const auto& zq : amb.samples_q) {
    auto m = dual_scenario_polytope(inst, &zq, budget);
    if (!lp::is_integral(lp::check_integral(m))) return false;
  }
  return true;
}

long hamming_ball_size(int m, long budget, long cap) {
  long total = 0, binom = 1;
  for (long k = 0; k <= std::min<long>(budget, m); ++k) {
    total += binom;
    if (total >= cap) return cap;
    if (binom > cap) return cap;
    binom = binom * (m - k) / (k + 1);
  }
  return total;
}

Regime classify_regime(const DrtspInstance& inst, const AmbiguitySet& amb) {
  Regime r;
  auto why = [&](const std::string& s) { r.reasons.push_back(s); };
  // Exactness of the entrywise |T(x)| expansion needs per-column uniform
  // signs, a slightly stronger condition than merely "no Mixed entries".
  const bool mixed = !column_uniform_signs(inst.Tmap);
  const auto kq = amb.support_q.kind;
  const auto kt = amb.support_T.kind;
  const bool pinf = amb.p.is_inf;
  const double pv = amb.p.value;

  // A failed expensive-recourse probe forfeits every exactness guarantee.
  bool probe_ok = validate_instance(inst, amb).ok();

  if (amb.theta == 0.0) {
    r.kind = RegimeKind::SaaOnly;
    r.exact = true;
    why("radius zero: empirical distribution is the only member");
  } else if (kq == SupportKind::Singleton && kt == SupportKind::Singleton) {
    r.kind = RegimeKind::SaaOnly;
    r.exact = true;
    why("both blocks singleton: scenario fixed regardless of radius");
  } else if (kt == SupportKind::Singleton) {
    if (kq == SupportKind::FreeContinuous) {
      r.kind = RegimeKind::ObjectiveOnly;
      r.exact = true;
      why("objective uncertainty only: exact for every norm exponent");
    } else if (pinf) {  // binary xi_q, p = inf
      r.kind = RegimeKind::BinaryGeneralLinf;
      r.exact = amb.theta < 1.0 || binary_q_polytope_integral(inst);
      why("binary objective block, L-inf distance: exactness needs theta < 1 "
          "or the dual scenario polytope integral: " +
          onoff(r.exact));
    } else {
      r.kind = RegimeKind::BinaryObjective;
      long budget = hamming_budget(amb.theta, pv);
      // Budget zero pins the scenario at the sample: exact regardless.
      r.exact = budget == 0 || budget_polytope_integral(inst, amb, budget);
      why("binary objective block, Hamming budget " + std::to_string(budget) +
          "; budget polytope integral: " + onoff(r.exact));
    }
  } else if (kq == SupportKind::Singleton) {
    if (kt == SupportKind::FreeContinuous) {
      if (!pinf && pv == 1.0) {
        r.kind = RegimeKind::ConstraintOnlyL1;
        r.exact = true;
        why("constraint uncertainty only with L1 distance: column sweep "
            "exact");
      } else if (pinf) {
        r.kind = RegimeKind::GeneralLinf;
        r.exact = !mixed;
        why("constraint uncertainty, L-inf distance; uniform sign pattern: " +
            onoff(!mixed));
      } else {
        r.kind = RegimeKind::GeneralLinf;
        r.exact = false;
        why("constraint uncertainty with p in (1,inf): bounded above by the "
            "L-inf model at the same radius");
      }
    } else if (pinf) {  // binary xi_T, p = inf
      r.kind = RegimeKind::BinaryGeneralLinf;
      // theta < 1 pins the binary scenario, so the sign pattern is moot.
      r.exact = amb.theta < 1.0 || !mixed;
      why("binary constraint block, L-inf distance; exact: " +
          onoff(r.exact));
    } else {
      r.kind = RegimeKind::BinaryConstraint;
      double step = std::pow(2.0, 1.0 / pv);
      if (amb.theta < 1.0) {
        r.exact = true;
        why("binary constraint block, theta < 1: collapses to the sampling "
            "average");
      } else if (amb.theta < step) {
        r.exact = true;
        why("binary constraint block, theta in [1, 2^(1/p)): Hamming-1 "
            "neighborhood sweep exact");
      } else {
        long budget = hamming_budget(amb.theta, pv);
        bool small =
            hamming_ball_size(inst.m2, budget, kEnumGuard + 1) <= kEnumGuard;
        r.exact = small;
        why(small ? "binary constraint block, large radius: exhaustive "
                    "Hamming-budget enumeration fits the guard"
                  : "binary constraint block, large radius: enumeration "
                    "exceeds the guard, upper bound only");
      }
    }
  } else if (kq == SupportKind::Binary && kt == SupportKind::Binary) {
    r.kind = RegimeKind::GeneralLinf;
    r.exact = false;
    why("both blocks binary: continuous relaxation bound via the L-inf "
        "model");
  } else if (pinf) {
    if (kq == SupportKind::Binary || kt == SupportKind::Binary) {
      r.kind = RegimeKind::BinaryGeneralLinf;
      // Binary xi_q with theta >= 1 additionally needs the dual scenario
      // polytope integral; a pinned binary xi_T (theta < 1) needs no sign
      // condition of its own.
      bool integral_ok = kq != SupportKind::Binary || amb.theta < 1.0 ||
                         binary_q_polytope_integral(inst);
      bool sign_ok = !mixed || (kt == SupportKind::Binary && amb.theta < 1.0 &&
                                kq != SupportKind::Binary);
      r.exact = sign_ok && integral_ok;
      why(std::string("one binary block, L-inf distance; sign condition: ") +
          onoff(sign_ok) + ", dual scenario polytope integral where needed: " +
          onoff(integral_ok));
    } else {
      r.kind = RegimeKind::GeneralLinf;
      r.exact = !mixed;
      why("continuous supports, L-inf distance; uniform sign pattern: " +
          onoff(!mixed));
    }
  } else if (kq == SupportKind::Binary || kt == SupportKind::Binary) {
    r.kind = RegimeKind::BinaryGeneralLinf;
    r.exact = false;
    why("one binary block with p < inf: bounded above by the L-inf model at "
        "the same radius");
  } else {
    r.kind = RegimeKind::GeneralLinf;
    r.exact = false;
    why("continuous supports with p < inf: bounded above by the L-inf model "
        "at the same radius");
  }

  if (!probe_ok && r.exact) {
    r.exact = false;
    why("expensive-recourse probe failed: exactness forfeited");
  }
  return r;
}

}  // namespace drtsp
