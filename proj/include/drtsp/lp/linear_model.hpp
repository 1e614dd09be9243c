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

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drtsp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LE, GE, EQ };
enum class ObjSense { Minimize, Maximize };
enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sparse LP/MILP in row-oriented form. Columns carry bounds and binary
/// marks; rows carry a sense and right-hand side. Name tags are optional
/// and used for tracing variables of the deterministic equivalents.
class LinearModel {
 public:
  struct Row {
    std::vector<std::pair<int, double>> coef;  // (column, value), column-sorted
    RowSense sense = RowSense::GE;
    double rhs = 0.0;
    std::string name;
  };

  int add_col(double lb, double ub, double obj, std::string name = {},
              bool binary = false) {
    if (std::isnan(lb) || std::isnan(ub) || std::isnan(obj))
      throw SolverError("NaN in column data");
    if (binary && (lb < 0.0 || ub > 1.0))
      throw SolverError("binary mark requires bounds within [0,1]: " + name);
    lb_.push_back(lb);
    ub_.push_back(ub);
    obj_.push_back(obj);
    binary_.push_back(binary);
    col_name_.push_back(std::move(name));
    return static_cast<int>(lb_.size()) - 1;
  }

  int add_row(std::vector<std::pair<int, double>> coef, RowSense sense,
              double rhs, std::string name = {}) {
    for (auto& [j, v] : coef) {
      if (j < 0 || j >= num_cols())
        throw SolverError("row references unknown column");
      if (std::isnan(v) || std::isinf(v))
        throw SolverError("non-finite row coefficient");
    }
    if (std::isnan(rhs) || std::isinf(rhs))
      throw SolverError("non-finite right-hand side");
    rows_.push_back(Row{std::move(coef), sense, rhs, std::move(name)});
    return static_cast<int>(rows_.size()) - 1;
  }

  int num_cols() const { return static_cast<int>(lb_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  double lb(int j) const { return lb_[j]; }
  double ub(int j) const { return ub_[j]; }
  double obj(int j) const { return obj_[j]; }
  bool is_binary(int j) const { return binary_[j]; }
  bool has_binaries() const {
    for (bool b : binary_)
      if (b) return true;
    return false;
  }
  const std::string& col_name(int j) const { return col_name_[j]; }
  const Row& row(int i) const { return rows_[i]; }

  void set_obj(int j, double v) { obj_[j] = v; }
  void set_bounds(int j, double lb, double ub) {
    lb_[j] = lb;
    ub_[j] = ub;
  }
  void set_obj_sense(ObjSense s) { obj_sense_ = s; }
  ObjSense obj_sense() const { return obj_sense_; }

  double row_activity(int i, const std::vector<double>& x) const {
    double a = 0.0;
    for (auto [j, v] : rows_[i].coef) a += v * x[j];
    return a;
  }

 private:
  std::vector<double> lb_, ub_, obj_;
  std::vector<bool> binary_;
  std::vector<std::string> col_name_;
  std::vector<Row> rows_;
  ObjSense obj_sense_ = ObjSense::Minimize;
};

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;             // primal values, one per column
  std::vector<double> row_dual;      // duals, one per row
  std::vector<double> reduced_cost;  // one per column
  long iterations = 0;
};

}  // namespace drtsp::lp
