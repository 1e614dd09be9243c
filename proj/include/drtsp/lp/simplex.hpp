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

#include <vector>

#include "drtsp/lp/linear_model.hpp"

namespace drtsp::lp {

/// Basis snapshot for warm starts. Covers structural columns followed by
/// one logical column per row. vstat: 0 at lower, 1 at upper, 2 basic,
/// 3 nonbasic free at zero.
struct WarmBasis {
  std::vector<int> basic;
  std::vector<signed char> vstat;
  bool valid = false;
};

/// Solves a pure LP (binary marks are ignored as marks; bounds still apply)
/// with a bounded-variable revised simplex. Dantzig pricing with a Bland
/// fallback after stall detection; sparse LU basis factorization with
/// product-form updates and periodic refactorization.
LpSolution solve_lp(const LinearModel& model);

/// As above with per-column bound overrides and an optional warm basis
/// (updated in place with the final basis when non-null).
LpSolution solve_lp(const LinearModel& model, const std::vector<double>& lb,
                    const std::vector<double>& ub, WarmBasis* warm);

}  // namespace drtsp::lp
