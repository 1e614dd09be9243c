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

#include "drtsp/model.hpp"

#include <cmath>
#include <cstddef>

#include "drtsp/lp/linear_model.hpp"
#include "drtsp/lp/simplex.hpp"

namespace drtsp {
namespace {

void require_shape(const Mat& m, int rows, int cols, const std::string& name) {
  if (static_cast<int>(m.size()) != rows)
    throw DimensionError(name + ": expected " + std::to_string(rows) +
                         " rows, got " + std::to_string(m.size()));
  for (const auto& r : m)
    if (static_cast<int>(r.size()) != cols)
      throw DimensionError(name + ": expected " + std::to_string(cols) +
                           " columns per row");
}

void require_len(const Vec& v, int n, const std::string& name) {
  if (static_cast<int>(v.size()) != n)
    throw DimensionError(name + ": expected length " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
}

void check_block_support(const std::vector<Vec>& samples,
                         const SupportKind& support, int dim,
                         const std::string& name) {
  for (size_t j = 0; j < samples.size(); ++j) {
    require_len(samples[j], dim, name + "[" + std::to_string(j) + "]");
    if (support.kind == SupportKind::Binary) {
      for (double v : samples[j])
        if (v != 0.0 && v != 1.0)
          throw SupportError(name + "[" + std::to_string(j) +
                             "]: binary support requires {0,1} coordinates");
    } else if (support.kind == SupportKind::Singleton) {
      for (int t = 0; t < dim; ++t)
        if (std::fabs(samples[j][t] - support.fixed[t]) > 1e-12)
          throw SupportError(name + "[" + std::to_string(j) +
                             "]: sample differs from singleton support");
    }
  }
}

}  // namespace

bool AffineMatrixMap::depends_on_x() const {
  for (const auto& tk : coeffs)
    for (const auto& row : tk)
      for (double v : row)
        if (v != 0.0) return true;
  return false;
}

bool AffineMatrixMap::has_mixed() const {
  for (const auto& row : sign_pattern)
    for (SignKind s : row)
      if (s == SignKind::Mixed) return true;
  return false;
}

bool column_uniform_signs(const AffineMatrixMap& map) {
  const int rows = map.rows(), cols = map.cols();
  for (int j = 0; j < cols; ++j) {
    bool any_neg = false, any_pos = false;
    for (int i = 0; i < rows; ++i) {
      switch (map.sign_pattern[i][j]) {
        case SignKind::NonNeg: any_pos = true; break;
        case SignKind::NonPos: any_neg = true; break;
        case SignKind::Mixed: return false;
      }
    }
    if (any_pos && any_neg) return false;
  }
  return true;
}

const char* regime_kind_name(RegimeKind k) {
  switch (k) {
    case RegimeKind::GeneralLinf: return "GeneralLinf";
    case RegimeKind::ObjectiveOnly: return "ObjectiveOnly";
    case RegimeKind::ConstraintOnlyL1: return "ConstraintOnlyL1";
    case RegimeKind::PiecewiseMax: return "PiecewiseMax";
    case RegimeKind::BinaryGeneralLinf: return "BinaryGeneralLinf";
    case RegimeKind::BinaryObjective: return "BinaryObjective";
    case RegimeKind::BinaryConstraint: return "BinaryConstraint";
    case RegimeKind::BinaryPiecewiseMax: return "BinaryPiecewiseMax";
    case RegimeKind::SaaOnly: return "SaaOnly";
  }
  return "?";
}

Mat technology_at(const AffineMatrixMap& map, const Vec& x) {
  Mat t = map.base;
  for (size_t k = 0; k < map.coeffs.size(); ++k) {
    double xk = x[k];
    if (xk == 0.0) continue;
    for (size_t i = 0; i < t.size(); ++i)
      for (size_t jj = 0; jj < t[i].size(); ++jj)
        t[i][jj] += xk * map.coeffs[k][i][jj];
  }
  return t;
}

Mat abs_technology_at(const AffineMatrixMap& map, const Vec& x) {
  Mat t = technology_at(map, x);
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t jj = 0; jj < t[i].size(); ++jj) {
      switch (map.sign_pattern[i][jj]) {
        case SignKind::NonNeg:
          break;
        case SignKind::NonPos:
          t[i][jj] = -t[i][jj];
          break;
        case SignKind::Mixed:
          throw SignPatternError("abs_technology_at: entry (" +
                                 std::to_string(i) + "," + std::to_string(jj) +
                                 ") has mixed sign");
      }
    }
  return t;
}

Vec rhs_at(const AffineVectorMap& map, const Vec& x) {
  Vec h = map.base;
  if (!map.H.empty())
    for (size_t i = 0; i < h.size(); ++i)
      for (size_t k = 0; k < map.H[i].size(); ++k) h[i] += map.H[i][k] * x[k];
  return h;
}

double dual_norm(const Vec& v, const PNorm& p) {
  if (p.is_inf) {  // dual of l-inf is l1
    double s = 0.0;
    for (double e : v) s += std::fabs(e);
    return s;
  }
  if (p.value <= 1.0) {  // dual of l1 is l-inf
    double m = 0.0;
    for (double e : v) m = std::max(m, std::fabs(e));
    return m;
  }
  double pstar = p.value / (p.value - 1.0);
  double s = 0.0;
  for (double e : v) s += std::pow(std::fabs(e), pstar);
  return std::pow(s, 1.0 / pstar);
}

long hamming_budget(double theta, double p) {
  double tp = std::pow(theta, p);
  return static_cast<long>(std::floor(tp + 1e-12 * (1.0 + tp)));
}

ValidationReport validate_instance(const DrtspInstance& inst,
                                   const AmbiguitySet& amb) {
  ValidationReport rep;
  auto pass = [&](const std::string& name) {
    rep.checks.push_back({name, true, ""});
  };
  auto fail = [&](const std::string& name, const std::string& why) {
    rep.checks.push_back({name, false, why});
  };

  require_len(inst.c, inst.n1, "c");
  require_shape(inst.W, inst.l, inst.n2, "W");
  require_shape(inst.Q, inst.n2, inst.m1, "Q");
  require_len(inst.q, inst.n2, "q");
  require_shape(inst.Tmap.base, inst.l, inst.m2, "T.base");
  if (static_cast<int>(inst.Tmap.coeffs.size()) != inst.n1)
    throw DimensionError("T.coeffs: expected one matrix per first-stage var");
  for (size_t k = 0; k < inst.Tmap.coeffs.size(); ++k)
    require_shape(inst.Tmap.coeffs[k], inst.l, inst.m2,
                  "T.coeffs[" + std::to_string(k) + "]");
  if (static_cast<int>(inst.Tmap.sign_pattern.size()) != inst.l)
    throw DimensionError("T.sign: row count mismatch");
  for (const auto& r : inst.Tmap.sign_pattern)
    if (static_cast<int>(r.size()) != inst.m2)
      throw DimensionError("T.sign: column count mismatch");
  require_len(inst.hmap.base, inst.l, "h.base");
  if (!inst.hmap.H.empty()) require_shape(inst.hmap.H, inst.l, inst.n1, "h.H");
  require_len(inst.first_stage.lb, inst.n1, "first_stage.lb");
  require_len(inst.first_stage.ub, inst.n1, "first_stage.ub");
  require_len(inst.first_stage.b,
              static_cast<int>(inst.first_stage.A.size()), "first_stage.b");
  for (const auto& row : inst.first_stage.A)
    require_len(row, inst.n1, "first_stage.A row");
  if (static_cast<int>(inst.first_stage.binary.size()) != inst.n1)
    throw DimensionError("first_stage.binary: length mismatch");
  pass("dimensions");

  if (amb.num_samples() < 1)
    throw SupportError("ambiguity: at least one sample required");
  if (amb.samples_T.size() != amb.samples_q.size())
    throw DimensionError("ambiguity: samples_q/samples_T count mismatch");
  if (amb.theta < 0.0) throw SupportError("ambiguity: theta must be >= 0");
  if (amb.support_q.kind == SupportKind::Singleton)
    require_len(amb.support_q.fixed, inst.m1, "support_q singleton");
  if (amb.support_T.kind == SupportKind::Singleton)
    require_len(amb.support_T.fixed, inst.m2, "support_T singleton");
  check_block_support(amb.samples_q, amb.support_q, inst.m1, "samples_q");
  check_block_support(amb.samples_T, amb.support_T, inst.m2, "samples_T");
  pass("samples-in-support");

  // Sufficiently-expensive-recourse probe: the recourse dual constraint
  // system W'pi = Q xi_q + q, pi >= 0 must be feasible. It does not depend
  // on x, only on xi_q; probe at every sample and at the support corners of
  // a binary block.
  std::vector<Vec> probes = amb.samples_q;
  if (amb.support_q.kind == SupportKind::Binary) {
    probes.push_back(Vec(inst.m1, 0.0));
    probes.push_back(Vec(inst.m1, 1.0));
  }
  bool dual_ok = true;
  std::string dual_why;
  for (const auto& xi : probes) {
    lp::LinearModel m;
    for (int i = 0; i < inst.l; ++i) m.add_col(0.0, lp::kInf, 0.0);
    for (int t = 0; t < inst.n2; ++t) {
      std::vector<std::pair<int, double>> coef;
      for (int i = 0; i < inst.l; ++i)
        if (inst.W[i][t] != 0.0) coef.emplace_back(i, inst.W[i][t]);
      double rhs = inst.q[t];
      for (int s = 0; s < inst.m1; ++s) rhs += inst.Q[t][s] * xi[s];
      m.add_row(coef, lp::RowSense::EQ, rhs);
    }
    if (lp::solve_lp(m).status != lp::SolveStatus::Optimal) {
      dual_ok = false;
      dual_why = "recourse dual infeasible at a probed scenario";
      break;
    }
  }
  if (dual_ok)
    pass("sufficiently-expensive-recourse-probe");
  else
    fail("sufficiently-expensive-recourse-probe", dual_why);

  return rep;
}

}  // namespace drtsp
