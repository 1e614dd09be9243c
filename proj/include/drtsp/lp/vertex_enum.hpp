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

#include <string>
#include <variant>
#include <vector>

#include "drtsp/lp/linear_model.hpp"

namespace drtsp::lp {

/// All vertices (basic feasible solutions) of the model's polyhedron,
/// deduplicated at tolerance 1e-8. Guard: dimension <= 12 and bounded;
/// violations raise ScaleError.
std::vector<std::vector<double>> enumerate_vertices(const LinearModel& model);

struct Integral {};
struct NotIntegral {
  std::vector<double> witness;  // fractional vertex
};
struct Unknown {
  std::string reason;
};
using IntegralityVerdict = std::variant<Integral, NotIntegral, Unknown>;

/// Exact vertex-based check in dimension <= 12; otherwise a sufficient
/// total-unimodularity screen (network / interval matrix) with integer
/// right-hand sides and bounds. Never reports NotIntegral without a witness.
IntegralityVerdict check_integral(const LinearModel& model);

bool is_integral(const IntegralityVerdict& v);

}  // namespace drtsp::lp
