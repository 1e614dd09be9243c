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

#include "drtsp/lp/vertex_enum.hpp"

#include <algorithm>
#include <cmath>

#include "drtsp/lp/simplex.hpp"

namespace drtsp::lp {
namespace {

constexpr int kDimGuard = 12;
constexpr double kActiveTol = 1e-7;
constexpr double kDedupeTol = 1e-8;

struct HalfSpace {
  std::vector<double> a;  // dense, length n
  RowSense sense;
  double b;
};

std::vector<HalfSpace> gather_constraints(const LinearModel& model) {
  const int n = model.num_cols();
  std::vector<HalfSpace> cs;
  for (int i = 0; i < model.num_rows(); ++i) {
    const auto& row = model.row(i);
    HalfSpace h{std::vector<double>(n, 0.0), row.sense, row.rhs};
    for (auto [j, v] : row.coef) h.a[j] += v;
    cs.push_back(std::move(h));
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(model.lb(j))) {
      HalfSpace h{std::vector<double>(n, 0.0), RowSense::GE, model.lb(j)};
      h.a[j] = 1.0;
      cs.push_back(std::move(h));
    }
    if (std::isfinite(model.ub(j))) {
      HalfSpace h{std::vector<double>(n, 0.0), RowSense::LE, model.ub(j)};
      h.a[j] = 1.0;
      cs.push_back(std::move(h));
    }
  }
  return cs;
}

bool feasible_point(const std::vector<HalfSpace>& cs,
                    const std::vector<double>& x) {
  for (const auto& h : cs) {
    double act = 0.0;
    for (size_t j = 0; j < x.size(); ++j) act += h.a[j] * x[j];
    double scale = 1.0 + std::fabs(h.b);
    switch (h.sense) {
      case RowSense::GE:
        if (act < h.b - kActiveTol * scale) return false;
        break;
      case RowSense::LE:
        if (act > h.b + kActiveTol * scale) return false;
        break;
      case RowSense::EQ:
        if (std::fabs(act - h.b) > kActiveTol * scale) return false;
        break;
    }
  }
  return true;
}

// Solves the n x n system formed by the selected constraints; returns false
// when (numerically) singular.
bool solve_square(const std::vector<HalfSpace>& cs, const std::vector<int>& sel,
                  std::vector<double>& x) {
  const int n = static_cast<int>(sel.size());
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = cs[sel[i]].a[j];
    a[i][n] = cs[sel[i]].b;
  }
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
    if (std::fabs(a[piv][k]) < 1e-10) return false;
    std::swap(a[k], a[piv]);
    for (int i = k + 1; i < n; ++i) {
      double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (int j = k; j <= n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  x.assign(n, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    double s = a[k][n];
    for (int j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return true;
}

void check_bounded(const LinearModel& model) {
  LinearModel probe = model;
  for (int j = 0; j < model.num_cols(); ++j) probe.set_obj(j, 0.0);
  for (int j = 0; j < model.num_cols(); ++j) {
    probe.set_obj(j, 1.0);
    for (ObjSense s : {ObjSense::Minimize, ObjSense::Maximize}) {
      probe.set_obj_sense(s);
      if (solve_lp(probe).status == SolveStatus::Unbounded)
        throw ScaleError("unbounded polyhedron in vertex enumeration");
    }
    probe.set_obj(j, 0.0);
  }
}

}  // namespace

namespace {

// Basic feasible points; valid for unbounded polyhedra too (their vertices
// are still intersections of n active constraints).
std::vector<std::vector<double>> enumerate_basic_points(
    const LinearModel& model) {
  const int n = model.num_cols();
  auto cs = gather_constraints(model);
  const int c = static_cast<int>(cs.size());
  if (c < n) return {};
  std::vector<std::vector<double>> verts;
  std::vector<int> sel(n);
  std::vector<double> x;
  // All n-subsets of constraints, lexicographic.
  for (int i = 0; i < n; ++i) sel[i] = i;
  for (;;) {
    if (solve_square(cs, sel, x) && feasible_point(cs, x)) {
      bool dup = false;
      for (const auto& v : verts) {
        double d = 0.0;
        for (int j = 0; j < n; ++j) d = std::max(d, std::fabs(v[j] - x[j]));
        if (d <= kDedupeTol) {
          dup = true;
          break;
        }
      }
      if (!dup) verts.push_back(x);
    }
    int i = n - 1;
    while (i >= 0 && sel[i] == c - n + i) --i;
    if (i < 0) break;
    ++sel[i];
    for (int k = i + 1; k < n; ++k) sel[k] = sel[k - 1] + 1;
  }
  return verts;
}

}  // namespace

std::vector<std::vector<double>> enumerate_vertices(const LinearModel& model) {
  if (model.num_cols() > kDimGuard)
    throw ScaleError("vertex enumeration limited to dimension 12");
  check_bounded(model);
  return enumerate_basic_points(model);
}

namespace {

bool near_integer(double v) { return std::fabs(v - std::round(v)) <= 1e-6; }

// Entries all in {0,+-1} and every column (or every row) has at most one +1
// and at most one -1: a network-matrix pattern, totally unimodular.
bool network_pattern(const std::vector<std::vector<double>>& a) {
  if (a.empty()) return true;
  size_t rows = a.size(), cols = a[0].size();
  for (const auto& r : a)
    for (double v : r)
      if (v != 0.0 && std::fabs(std::fabs(v) - 1.0) > 1e-12) return false;
  auto one_each = [&](bool by_col) {
    size_t outer = by_col ? cols : rows;
    size_t inner = by_col ? rows : cols;
    for (size_t o = 0; o < outer; ++o) {
      int pos = 0, neg = 0;
      for (size_t i = 0; i < inner; ++i) {
        double v = by_col ? a[i][o] : a[o][i];
        if (v > 0.5) ++pos;
        if (v < -0.5) ++neg;
      }
      if (pos > 1 || neg > 1) return false;
    }
    return true;
  };
  return one_each(true) || one_each(false);
}

// 0/1 matrix with consecutive ones in every row (or every column): an
// interval matrix, totally unimodular.
bool interval_pattern(const std::vector<std::vector<double>>& a) {
  if (a.empty()) return true;
  size_t rows = a.size(), cols = a[0].size();
  for (const auto& r : a)
    for (double v : r)
      if (v != 0.0 && std::fabs(v - 1.0) > 1e-12) return false;
  auto consecutive = [&](bool by_row) {
    size_t outer = by_row ? rows : cols;
    size_t inner = by_row ? cols : rows;
    for (size_t o = 0; o < outer; ++o) {
      int first = -1, last = -1, count = 0;
      for (size_t i = 0; i < inner; ++i) {
        double v = by_row ? a[o][i] : a[i][o];
        if (v > 0.5) {
          if (first < 0) first = static_cast<int>(i);
          last = static_cast<int>(i);
          ++count;
        }
      }
      if (count > 0 && last - first + 1 != count) return false;
    }
    return true;
  };
  return consecutive(true) || consecutive(false);
}

}  // namespace

IntegralityVerdict check_integral(const LinearModel& model) {
  const int n = model.num_cols();
  if (n <= kDimGuard) {
    auto verts = enumerate_basic_points(model);
    for (const auto& v : verts)
      for (double coord : v)
        if (!near_integer(coord)) return NotIntegral{v};
    return Integral{};
  }
  // Sufficient-condition screen for larger systems.
  std::vector<std::vector<double>> a(model.num_rows(),
                                     std::vector<double>(n, 0.0));
  for (int i = 0; i < model.num_rows(); ++i) {
    if (!near_integer(model.row(i).rhs))
      return Unknown{"fractional right-hand side"};
    for (auto [j, v] : model.row(i).coef) a[i][j] += v;
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(model.lb(j)) && !near_integer(model.lb(j)))
      return Unknown{"fractional lower bound"};
    if (std::isfinite(model.ub(j)) && !near_integer(model.ub(j)))
      return Unknown{"fractional upper bound"};
  }
  if (network_pattern(a) || interval_pattern(a)) return Integral{};
  return Unknown{"matrix passed neither network nor interval screen"};
}

bool is_integral(const IntegralityVerdict& v) {
  return std::holds_alternative<Integral>(v);
}

}  // namespace drtsp::lp
