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

#include <map>
#include <string>
#include <vector>

#include "drtsp/lp/branch_and_bound.hpp"
#include "drtsp/lp/linear_model.hpp"
#include "drtsp/model.hpp"
#include "drtsp/reform/evaluate.hpp"

namespace drtsp {

// One flat LP/MILP whose optimum is min_x c'x + Z(x) for the chosen regime.
struct DeterministicEquivalent {
  lp::LinearModel model;
  Regime regime;
  std::vector<int> x_vars;
  std::vector<std::vector<int>> y_blocks;  // every recourse block, in order
  std::vector<int> eta;                    // per-sample epigraphs when used
  std::map<std::string, std::vector<int>> named;  // lambda/sigma/u handles
  // Cutting-plane bookkeeping (objective-uncertainty regimes with a
  // non-linearizable dual norm): per-sample epigraph of ||Q'y^j||_{p*}.
  std::vector<int> w_vars;
  std::vector<int> w_sample_block;  // index into y_blocks per w variable
};

DeterministicEquivalent build_deterministic(const DrtspInstance& inst,
                                            const AmbiguitySet& amb,
                                            const Regime& regime);

// Piecewise-max recourse variant; the scenario coefficients a_i must not
// depend on x when theta > 0 (their dual norm enters the objective).
DeterministicEquivalent build_deterministic(const PiecewiseMaxRecourse& pwm,
                                            const Vec& c,
                                            const FirstStage& fs,
                                            const AmbiguitySet& amb,
                                            const Regime& regime);

// Solves the model (MILP when first-stage binaries are present), running
// the supporting-hyperplane refinement loop when the regime calls for it.
lp::LpSolution solve_deterministic(DeterministicEquivalent& de,
                                   const DrtspInstance& inst,
                                   const AmbiguitySet& amb);

struct DrtspSolveResult {
  lp::SolveStatus status = lp::SolveStatus::Infeasible;
  Vec x;
  double objective = 0.0;
  ZxResult zx;
  Regime regime;
};

DrtspSolveResult solve_drtsp(const DrtspInstance& inst,
                             const AmbiguitySet& amb);
DrtspSolveResult solve_drtsp(const DrtspInstance& inst, const AmbiguitySet& amb,
                             const Regime& regime);

}  // namespace drtsp
