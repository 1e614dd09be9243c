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

#include "drtsp/lp/linear_model.hpp"

namespace drtsp::lp {

/// Global optimum of a mixed binary program by best-first branch and bound on
/// LP relaxations. Branching: most-fractional binary, lowest index on ties.
/// Relative optimality gap at most 1e-6.
LpSolution solve_milp(const LinearModel& model);

}  // namespace drtsp::lp
