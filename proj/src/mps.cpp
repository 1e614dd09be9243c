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

#include "drtsp/lp/mps.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

namespace drtsp::lp {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string col_name(const LinearModel& m, int j) {
  std::string s = m.col_name(j);
  return s.empty() ? "C" + std::to_string(j) : s;
}

std::string row_name(const LinearModel& m, int i) {
  std::string s = m.row(i).name;
  return s.empty() ? "R" + std::to_string(i) : s;
}

}  // namespace

void write_mps(const LinearModel& model, std::ostream& os,
               const std::string& name) {
  os << "NAME          " << name << "\n";
  if (model.obj_sense() == ObjSense::Maximize) os << "OBJSENSE\n    MAX\n";
  os << "ROWS\n";
  os << " N  OBJ\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    char sense = model.row(i).sense == RowSense::LE   ? 'L'
                 : model.row(i).sense == RowSense::GE ? 'G'
                                                      : 'E';
    os << " " << sense << "  " << row_name(model, i) << "\n";
  }
  // Column-major view of the row coefficients.
  std::vector<std::vector<std::pair<int, double>>> bycol(model.num_cols());
  for (int i = 0; i < model.num_rows(); ++i)
    for (auto [j, v] : model.row(i).coef)
      if (v != 0.0) bycol[j].emplace_back(i, v);
  os << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.is_binary(j) != in_int) {
      os << "    MARKER                 'MARKER'                 '"
         << (in_int ? "INTEND" : "INTORG") << "'\n";
      in_int = !in_int;
      ++marker;
    }
    const std::string cn = col_name(model, j);
    if (model.obj(j) != 0.0)
      os << "    " << cn << "  OBJ  " << num(model.obj(j)) << "\n";
    for (auto [i, v] : bycol[j])
      os << "    " << cn << "  " << row_name(model, i) << "  " << num(v)
         << "\n";
    if (model.obj(j) == 0.0 && bycol[j].empty())
      os << "    " << cn << "  OBJ  0\n";
  }
  if (in_int)
    os << "    MARKER                 'MARKER'                 'INTEND'\n";
  os << "RHS\n";
  for (int i = 0; i < model.num_rows(); ++i)
    if (model.row(i).rhs != 0.0)
      os << "    RHS  " << row_name(model, i) << "  " << num(model.row(i).rhs)
         << "\n";
  os << "BOUNDS\n";
  for (int j = 0; j < model.num_cols(); ++j) {
    const std::string cn = col_name(model, j);
    double lo = model.lb(j), hi = model.ub(j);
    if (model.is_binary(j) && lo == 0.0 && hi == 1.0) {
      os << " BV BND  " << cn << "\n";
      continue;
    }
    if (lo == hi) {
      os << " FX BND  " << cn << "  " << num(lo) << "\n";
      continue;
    }
    if (!std::isfinite(lo))
      os << " MI BND  " << cn << "\n";
    else if (lo != 0.0)
      os << " LO BND  " << cn << "  " << num(lo) << "\n";
    if (std::isfinite(hi)) os << " UP BND  " << cn << "  " << num(hi) << "\n";
  }
  os << "ENDATA\n";
}

}  // namespace drtsp::lp
