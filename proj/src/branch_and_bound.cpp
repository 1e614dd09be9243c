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

#include "drtsp/lp/branch_and_bound.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>

#include "drtsp/lp/simplex.hpp"

namespace drtsp::lp {
namespace {

constexpr double kIntTol = 1e-7;
constexpr double kRelGap = 1e-6;

struct Node {
  double bound;                                 // parent LP value
  long seq;                                     // creation order, tie-break
  std::vector<std::pair<int, double>> fixings;  // (col, value)
  std::shared_ptr<WarmBasis> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;
  }
};

int pick_branch_var(const LinearModel& model, const std::vector<double>& x) {
  int best = -1;
  double best_frac = kIntTol;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (!model.is_binary(j)) continue;
    double f = std::fabs(x[j] - std::round(x[j]));
    if (f > best_frac + 1e-12) {
      best_frac = f;
      best = j;
    }
  }
  return best;
}

}  // namespace

LpSolution solve_milp(const LinearModel& model) {
  const int n = model.num_cols();
  const double dir = model.obj_sense() == ObjSense::Minimize ? 1.0 : -1.0;
  std::vector<double> lb0(n), ub0(n);
  for (int j = 0; j < n; ++j) {
    lb0[j] = model.lb(j);
    ub0[j] = model.ub(j);
    if (model.is_binary(j) && (lb0[j] < -kIntTol || ub0[j] > 1.0 + kIntTol))
      throw SolverError("binary variable with bounds outside [0,1]: " +
                        model.col_name(j));
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long seq = 0;
  open.push(Node{-kInf, seq++, {}, nullptr});

  bool have_incumbent = false;
  bool saw_unbounded = false;
  LpSolution incumbent;
  incumbent.objective = kInf;

  std::vector<double> lb(n), ub(n);
  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (have_incumbent) {
      double cut = dir * incumbent.objective;
      if (node.bound > cut - kRelGap * (1.0 + std::fabs(cut))) continue;
    }
    lb = lb0;
    ub = ub0;
    for (auto [j, v] : node.fixings) lb[j] = ub[j] = v;
    WarmBasis warm = node.warm ? *node.warm : WarmBasis{};
    LpSolution rel = solve_lp(model, lb, ub, &warm);
    if (rel.status == SolveStatus::Infeasible) continue;
    if (rel.status == SolveStatus::Unbounded) {
      // Unbounded relaxation at the root means the MILP is unbounded or
      // infeasible; report unbounded (binary fixings cannot repair it).
      saw_unbounded = true;
      break;
    }
    double relval = dir * rel.objective;
    if (have_incumbent) {
      double cut = dir * incumbent.objective;
      if (relval > cut - kRelGap * (1.0 + std::fabs(cut))) continue;
    }
    int branch = pick_branch_var(model, rel.x);
    if (branch < 0) {
      if (!have_incumbent || relval < dir * incumbent.objective) {
        incumbent = rel;
        for (int j = 0; j < n; ++j)
          if (model.is_binary(j)) incumbent.x[j] = std::round(incumbent.x[j]);
        have_incumbent = true;
      }
      continue;
    }
    auto shared = std::make_shared<WarmBasis>(std::move(warm));
    for (double v : {0.0, 1.0}) {
      Node child;
      child.bound = relval;
      child.seq = seq++;
      child.fixings = node.fixings;
      child.fixings.emplace_back(branch, v);
      child.warm = shared;
      open.push(std::move(child));
    }
  }

  if (saw_unbounded) {
    LpSolution sol;
    sol.status = SolveStatus::Unbounded;
    sol.x.assign(n, 0.0);
    sol.row_dual.assign(model.num_rows(), 0.0);
    sol.reduced_cost.assign(n, 0.0);
    return sol;
  }
  if (!have_incumbent) {
    LpSolution sol;
    sol.status = SolveStatus::Infeasible;
    sol.x.assign(n, 0.0);
    sol.row_dual.assign(model.num_rows(), 0.0);
    sol.reduced_cost.assign(n, 0.0);
    return sol;
  }
  return incumbent;
}

}  // namespace drtsp::lp
