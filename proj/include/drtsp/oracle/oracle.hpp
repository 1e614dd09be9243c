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

#include <utility>
#include <vector>

#include "drtsp/lp/linear_model.hpp"
#include "drtsp/model.hpp"

namespace drtsp {

// Enumeration-based ground truth for the worst-case expected recourse.
// Built on scenario sweeps over the constraint block and an exact worst-case
// search over the objective block; every reported value is the primal
// second-stage LP solved at an explicit scenario, deliberately sharing no
// code with the reformulation evaluators.
struct OracleReport {
  double value = 0.0;
  std::vector<double> per_sample;
  std::vector<std::pair<Vec, Vec>> per_sample_argmax;  // (xi_q, xi_T)
  long scenario_count = 0;
  bool exact = true;
};

// p = inf, continuous supports: all box vertices zeta +- theta per sample.
OracleReport oracle_zx_box_linf(const DrtspInstance& inst, const Vec& x,
                                const AmbiguitySet& amb);
// p = 1, continuous varying block: cross-polytope vertices zeta +- theta e_i.
OracleReport oracle_zx_l1(const DrtspInstance& inst, const Vec& x,
                          const AmbiguitySet& amb);
// Binary block(s): Hamming-budget (finite p) or full-corner (p = inf,
// theta >= 1) enumeration, continuous companion handled by a nested sweep.
OracleReport oracle_zx_binary(const DrtspInstance& inst, const Vec& x,
                              const AmbiguitySet& amb);
// Piecewise-max recourse; pieces evaluated directly at candidate scenarios.
OracleReport oracle_zx_pwm(const PiecewiseMaxRecourse& pwm, const Vec& x,
                           const AmbiguitySet& amb);
// Chooses the applicable oracle from the supports and exponent.
OracleReport oracle_zx_auto(const DrtspInstance& inst, const Vec& x,
                            const AmbiguitySet& amb);

struct OracleDrtspResult {
  lp::SolveStatus status = lp::SolveStatus::Infeasible;
  Vec x;
  double value = 0.0;
};

// Exhaustive first-stage enumeration (binary x, fixed continuous coords).
OracleDrtspResult oracle_drtsp(const DrtspInstance& inst,
                               const AmbiguitySet& amb);

}  // namespace drtsp
