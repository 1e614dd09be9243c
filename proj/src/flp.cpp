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

#include "drtsp/flp/flp.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "drtsp/reform/build.hpp"
#include "drtsp/reform/evaluate.hpp"

namespace drtsp {
namespace {

Vec draw_delta(std::mt19937& rng, int n, double p_dis) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec d(n);
  for (double& v : d) v = u(rng) < p_dis ? 0.0 : 1.0;
  return d;
}

Vec draw_demand(std::mt19937& rng, int n, std::pair<double, double> range) {
  std::uniform_real_distribution<double> u(range.first, range.second);
  Vec d(n);
  for (double& v : d) v = u(rng);
  return d;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

const char* flp_variant_name(FlpVariant v) {
  switch (v) {
    case FlpVariant::BoxLinf:
      return "box-linf";
    case FlpVariant::DemandOnly:
      return "demand-only";
    case FlpVariant::DisruptL1:
      return "disrupt-l1";
    case FlpVariant::BinaryDisruption:
      return "binary-disruption";
    case FlpVariant::BinaryDisruptL1:
      return "binary-disrupt-l1";
  }
  return "?";
}

std::pair<FlpInstance, SampleSet> generate_flp(const FlpParams& params,
                                               unsigned seed) {
  if (params.n_sites < 1 || params.n_customers < 1 || params.n_samples < 1)
    throw std::invalid_argument("facility/customer/sample counts must be >= 1");
  if (params.disruption_prob < 0.0 || params.disruption_prob > 1.0)
    throw std::invalid_argument("disruption probability must be in [0, 1]");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> fcost(params.fixed_cost_range.first,
                                               params.fixed_cost_range.second);
  FlpInstance flp;
  flp.n_sites = params.n_sites;
  flp.n_customers = params.n_customers;
  flp.disruption_prob = params.disruption_prob;
  flp.demand_range = params.demand_range;
  flp.M = params.M;
  std::vector<std::pair<double, double>> sites(params.n_sites),
      customers(params.n_customers);
  for (auto& s : sites) s = {unit(rng), unit(rng)};
  for (auto& c : customers) c = {unit(rng), unit(rng)};
  flp.fixed_cost.resize(params.n_sites);
  for (double& f : flp.fixed_cost) f = fcost(rng);
  flp.unit_cost.assign(params.n_customers, Vec(params.n_sites + 1, params.M));
  for (int t = 0; t < params.n_customers; ++t)
    for (int s = 0; s < params.n_sites; ++s)
      flp.unit_cost[t][s] =
          100.0 * std::hypot(customers[t].first - sites[s].first,
                             customers[t].second - sites[s].second);
  SampleSet ss;
  ss.seed = seed;
  for (int j = 0; j < params.n_samples; ++j) {
    ss.delta.push_back(draw_delta(rng, params.n_sites, params.disruption_prob));
    ss.demand.push_back(draw_demand(rng, params.n_customers, params.demand_range));
  }
  return {flp, ss};
}

SampleSet sample_flp(const FlpInstance& flp, int n, unsigned seed) {
  std::mt19937 rng(seed);
  SampleSet ss;
  ss.seed = seed;
  for (int j = 0; j < n; ++j) {
    ss.delta.push_back(draw_delta(rng, flp.n_sites, flp.disruption_prob));
    ss.demand.push_back(draw_demand(rng, flp.n_customers, flp.demand_range));
  }
  return ss;
}

FlpModel flp_to_drtsp(const FlpInstance& flp, const SampleSet& samples,
                      FlpVariant variant, double theta, PNorm p) {
  const int S = flp.n_sites, L = flp.n_customers, N = samples.size();
  if (N < 1) throw std::invalid_argument("empty sample set");
  switch (variant) {
    case FlpVariant::BoxLinf:
    case FlpVariant::BinaryDisruption:
      if (!p.is_inf)
        throw RegimeMismatch(std::string(flp_variant_name(variant)) +
                             " requires the L-inf distance");
      break;
    case FlpVariant::DisruptL1:
      if (p.is_inf || p.value != 1.0)
        throw RegimeMismatch("disrupt-l1 requires the L1 distance");
      break;
    case FlpVariant::BinaryDisruptL1:
      if (p.is_inf)
        throw RegimeMismatch("binary-disrupt-l1 requires a finite exponent");
      break;
    case FlpVariant::DemandOnly:
      break;
  }

  FlpModel m;
  DrtspInstance& inst = m.inst;
  inst.n1 = S;
  inst.n2 = L * (S + 1);
  inst.m1 = L;  // demand enters the objective
  inst.m2 = S;  // availability enters the constraints
  inst.l = 2 * L + L * S + L * (S + 1);
  inst.c = flp.fixed_cost;
  inst.first_stage.lb.assign(S, 0.0);
  inst.first_stage.ub.assign(S, 1.0);
  inst.first_stage.binary.assign(S, true);

  auto yi = [&](int t, int s) { return t * (S + 1) + s; };
  inst.W.assign(inst.l, Vec(inst.n2, 0.0));
  inst.hmap.base.assign(inst.l, 0.0);
  inst.hmap.H.assign(inst.l, Vec(S, 0.0));
  inst.Tmap.base.assign(inst.l, Vec(S, 0.0));
  inst.Tmap.coeffs.assign(S, Mat(inst.l, Vec(S, 0.0)));
  inst.Tmap.sign_pattern.assign(inst.l, std::vector<SignKind>(S, SignKind::NonNeg));
  int row = 0;
  for (int t = 0; t < L; ++t) {  // assignment equality as two inequalities
    for (int s = 0; s <= S; ++s) inst.W[row][yi(t, s)] = 1.0;
    inst.hmap.base[row++] = 1.0;
    for (int s = 0; s <= S; ++s) inst.W[row][yi(t, s)] = -1.0;
    inst.hmap.base[row++] = -1.0;
  }
  for (int t = 0; t < L; ++t)  // y_{ts} <= delta_s x_s for real sites
    for (int s = 0; s < S; ++s) {
      inst.W[row][yi(t, s)] = -1.0;
      inst.Tmap.coeffs[s][row][s] = 1.0;
      ++row;
    }
  for (int t = 0; t < L; ++t)  // y >= 0, emergency included
    for (int s = 0; s <= S; ++s) inst.W[row++][yi(t, s)] = 1.0;

  inst.Q.assign(inst.n2, Vec(L, 0.0));
  inst.q.assign(inst.n2, 0.0);
  for (int t = 0; t < L; ++t)
    for (int s = 0; s <= S; ++s) inst.Q[yi(t, s)][t] = flp.unit_cost[t][s];

  AmbiguitySet& amb = m.amb;
  amb.p = p;
  amb.theta = theta;
  Vec dbar(L, 0.0);
  for (const Vec& d : samples.demand)
    for (int t = 0; t < L; ++t) dbar[t] += d[t] / N;
  const Vec ones(S, 1.0);
  switch (variant) {
    case FlpVariant::BoxLinf:
      amb.support_q.kind = SupportKind::FreeContinuous;
      amb.support_T.kind = SupportKind::FreeContinuous;
      amb.samples_q = samples.demand;
      amb.samples_T = samples.delta;
      break;
    case FlpVariant::DemandOnly:
      amb.support_q.kind = SupportKind::FreeContinuous;
      amb.support_T = {SupportKind::Singleton, ones};
      amb.samples_q = samples.demand;
      amb.samples_T.assign(N, ones);
      break;
    case FlpVariant::DisruptL1:
      amb.support_q = {SupportKind::Singleton, dbar};
      amb.support_T.kind = SupportKind::FreeContinuous;
      amb.samples_q.assign(N, dbar);
      amb.samples_T = samples.delta;
      break;
    case FlpVariant::BinaryDisruption:
      amb.support_q.kind = SupportKind::FreeContinuous;
      amb.support_T.kind = SupportKind::Binary;
      amb.samples_q = samples.demand;
      amb.samples_T = samples.delta;
      break;
    case FlpVariant::BinaryDisruptL1:
      amb.support_q = {SupportKind::Singleton, dbar};
      amb.support_T.kind = SupportKind::Binary;
      amb.samples_q.assign(N, dbar);
      amb.samples_T = samples.delta;
      break;
  }
  return m;
}

OosEval out_of_sample_eval(const DrtspInstance& inst, const Vec& x,
                           const std::vector<Vec>& eval_q,
                           const std::vector<Vec>& eval_T) {
  const int n = static_cast<int>(eval_q.size());
  if (n < 1 || eval_T.size() != eval_q.size())
    throw std::invalid_argument("evaluation sample lists empty or mismatched");
  double fixed = 0.0;
  for (int k = 0; k < inst.n1; ++k) fixed += inst.c[k] * x[k];
  Vec vals(n);
  double mean = 0.0;
  for (int j = 0; j < n; ++j) {
    vals[j] = fixed + evaluate_recourse(inst, x, eval_q[j], eval_T[j]).first;
    mean += vals[j] / n;
  }
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  double stderr_ = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
  return {mean, mean - 1.96 * stderr_, mean + 1.96 * stderr_};
}

CrossValReport cross_validate(const FlpInstance& flp, const SampleSet& train,
                              FlpVariant variant,
                              const std::vector<double>& theta_grid, PNorm p,
                              unsigned holdout_seed, int holdout_n) {
  if (theta_grid.empty())
    throw std::invalid_argument("radius grid must be non-empty");
  SampleSet holdout = sample_flp(flp, holdout_n, holdout_seed);
  CrossValReport rep;
  for (double theta : theta_grid) {
    FlpModel m = flp_to_drtsp(flp, train, variant, theta, p);
    auto t0 = std::chrono::steady_clock::now();
    DrtspSolveResult sol = solve_drtsp(m.inst, m.amb);
    auto t1 = std::chrono::steady_clock::now();
    CrossValRow row;
    row.theta = theta;
    row.opt_val = sol.objective;
    row.time_s = std::chrono::duration<double>(t1 - t0).count();
    for (int s = 0; s < flp.n_sites; ++s)
      if (sol.x[s] > 0.5) row.built.push_back(s + 1);
    OosEval oe = out_of_sample_eval(m.inst, sol.x, holdout.demand, holdout.delta);
    row.holdout_mean = oe.mean;
    row.ci_low = oe.ci_low;
    row.ci_high = oe.ci_high;
    rep.rows.push_back(std::move(row));
  }
  rep.none_qualified = true;
  for (auto& row : rep.rows)
    if (row.opt_val > row.ci_high) {
      row.chosen = true;
      rep.chosen_theta = row.theta;
      rep.none_qualified = false;
      break;
    }
  if (rep.none_qualified) {
    rep.rows.back().chosen = true;
    rep.chosen_theta = rep.rows.back().theta;
  }
  return rep;
}

std::string crossval_csv(const CrossValReport& report) {
  std::ostringstream os;
  os << "theta,opt_val,time_s,built_facilities,holdout_mean,ci_low,ci_high,"
        "chosen\n";
  for (const auto& r : report.rows) {
    os << fmt(r.theta) << ',' << fmt(r.opt_val) << ',' << fmt(r.time_s) << ',';
    for (size_t k = 0; k < r.built.size(); ++k)
      os << (k ? ";" : "") << r.built[k];
    os << ',' << fmt(r.holdout_mean) << ',' << fmt(r.ci_low) << ','
       << fmt(r.ci_high) << ',' << (r.chosen ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace drtsp
