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

// Reliable facility location benchmark: sites may be disrupted, customers
// have random demands, and an always-available emergency facility with unit
// cost M guarantees feasible (if expensive) recourse.

struct FlpParams {
  int n_sites = 10;
  int n_customers = 15;
  int n_samples = 100;
  double disruption_prob = 0.05;
  std::pair<double, double> demand_range{0.05, 1.0};
  std::pair<double, double> fixed_cost_range{100.0, 400.0};
  double M = 10000.0;
};

struct FlpInstance {
  int n_sites = 0;
  int n_customers = 0;
  Vec fixed_cost;  // per site
  Mat unit_cost;   // n_customers x (n_sites + 1); last column == M
  double disruption_prob = 0.0;
  std::pair<double, double> demand_range{0.0, 0.0};
  double M = 0.0;
};

struct SampleSet {
  std::vector<Vec> delta;   // site availability in {0,1}^{n_sites}
  std::vector<Vec> demand;  // customer demand
  unsigned seed = 0;
  int size() const { return static_cast<int>(delta.size()); }
};

// Model variants; the suffix is the deterministic-equivalent family each
// support/distance combination lands in.
enum class FlpVariant {
  BoxLinf,           // demand + disruption both free continuous, L-inf
  DemandOnly,        // availability pinned at all-ones, any exponent
  DisruptL1,         // demand pinned at its sample mean, L1
  BinaryDisruption,  // demand free, availability on the binary cube, L-inf
  BinaryDisruptL1,   // demand pinned, availability binary, finite exponent
};

const char* flp_variant_name(FlpVariant v);

struct FlpModel {
  DrtspInstance inst;
  AmbiguitySet amb;
};

std::pair<FlpInstance, SampleSet> generate_flp(const FlpParams& params,
                                               unsigned seed);
// Draws n fresh (delta, demand) samples for the given instance.
SampleSet sample_flp(const FlpInstance& flp, int n, unsigned seed);

// Maps the benchmark into the two-stage form for the chosen variant.
// Throws RegimeMismatch if the exponent is incompatible with the variant.
FlpModel flp_to_drtsp(const FlpInstance& flp, const SampleSet& samples,
                      FlpVariant variant, double theta, PNorm p);

struct OosEval {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Mean second-stage-inclusive cost of first stage x over evaluation
// scenarios, with a normal-approximation 95% confidence interval.
OosEval out_of_sample_eval(const DrtspInstance& inst, const Vec& x,
                           const std::vector<Vec>& eval_q,
                           const std::vector<Vec>& eval_T);

struct CrossValRow {
  double theta = 0.0;
  double opt_val = 0.0;
  double time_s = 0.0;
  std::vector<int> built;  // 1-based site indices
  double holdout_mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool chosen = false;
};

struct CrossValReport {
  std::vector<CrossValRow> rows;
  double chosen_theta = 0.0;
  bool none_qualified = false;
};

// Solves the variant on the training samples across the radius grid,
// scores each solution on a fresh holdout set, and picks the smallest
// radius whose model objective exceeds the holdout confidence interval
// (falling back, flagged, to the largest grid point).
CrossValReport cross_validate(const FlpInstance& flp, const SampleSet& train,
                              FlpVariant variant,
                              const std::vector<double>& theta_grid, PNorm p,
                              unsigned holdout_seed, int holdout_n = 100);

std::string crossval_csv(const CrossValReport& report);

}  // namespace drtsp
