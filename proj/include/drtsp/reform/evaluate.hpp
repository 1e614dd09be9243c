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
#include <utility>
#include <vector>

#include "drtsp/model.hpp"

namespace drtsp {

// Worst-case expected recourse at a fixed first stage x.
struct ZxResult {
  enum class Mode { Exact, UpperBound };
  double value = 0.0;
  std::vector<double> per_sample;  // value = mean(per_sample)
  Mode mode = Mode::Exact;
  std::vector<Vec> y;  // per-sample recourse minimizers where defined
  std::vector<std::string> notes;
};

// Second-stage LP at a fixed scenario: min (Q xi_q + q)'y subject to
// T(x) xi_T + W y >= h(x). Unbounded below means the recourse is not
// sufficiently expensive.
std::pair<double, Vec> evaluate_recourse(const DrtspInstance& inst,
                                         const Vec& x, const Vec& xi_q,
                                         const Vec& xi_T);
// Its dual: max pi'(h(x) - T(x) xi_T) over W'pi = Q xi_q + q, pi >= 0.
std::pair<double, Vec> evaluate_recourse_dual(const DrtspInstance& inst,
                                              const Vec& x, const Vec& xi_q,
                                              const Vec& xi_T);

ZxResult saa_value(const DrtspInstance& inst, const Vec& x,
                   const AmbiguitySet& amb);

// L-inf distance, continuous supports: per-sample LP with the dual-norm
// objective penalty and the entrywise-|T(x)| constraint slack.
ZxResult zx_general_linf(const DrtspInstance& inst, const Vec& x,
                         const AmbiguitySet& amb);
// Objective uncertainty only (xi_T pinned), any norm exponent.
ZxResult zx_objective_only(const DrtspInstance& inst, const Vec& x,
                           const AmbiguitySet& amb);
// Constraint uncertainty only, L1 distance: column/sign sweep.
ZxResult zx_constraint_only_l1(const DrtspInstance& inst, const Vec& x,
                               const AmbiguitySet& amb);
// Recourse given directly as a max of affine pieces of the scenario; the
// scenario block is the T block of the ambiguity set.
ZxResult zx_piecewise_max(const PiecewiseMaxRecourse& pwm, const Vec& x,
                          const AmbiguitySet& amb);
// One binary scenario block, L-inf distance.
ZxResult zx_binary_general_linf(const DrtspInstance& inst, const Vec& x,
                                const AmbiguitySet& amb);
// Binary objective block, finite p: Hamming-budget dual with (lambda, sigma).
ZxResult zx_binary_objective(const DrtspInstance& inst, const Vec& x,
                             const AmbiguitySet& amb);
// Binary constraint block, finite p: neighborhood sweep / budget enumeration.
ZxResult zx_binary_constraint(const DrtspInstance& inst, const Vec& x,
                              const AmbiguitySet& amb);

// Dispatches to the evaluator matching the regime, applying the documented
// relaxations (p < inf continuous falls back to the L-inf model at the same
// radius, binary supports may be relaxed to continuous) in UpperBound mode.
ZxResult evaluate_zx(const DrtspInstance& inst, const Vec& x,
                     const AmbiguitySet& amb, const Regime& regime);

}  // namespace drtsp
