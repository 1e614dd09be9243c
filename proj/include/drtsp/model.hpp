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

#include <stdexcept>
#include <string>
#include <vector>

namespace drtsp {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // row-major

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SignPatternError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RegimeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SufficientlyExpensiveViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sign of an affine matrix entry over the whole first-stage feasible set.
enum class SignKind { NonNeg, NonPos, Mixed };

// x -> T0 + sum_k x_k * Tk, with a declared per-entry sign pattern.
struct AffineMatrixMap {
  Mat base;                             // rows x cols
  std::vector<Mat> coeffs;              // one rows x cols matrix per x_k
  std::vector<std::vector<SignKind>> sign_pattern;  // rows x cols
  int rows() const { return static_cast<int>(base.size()); }
  int cols() const { return base.empty() ? 0 : static_cast<int>(base[0].size()); }
  bool depends_on_x() const;
  bool has_mixed() const;
};

// x -> h0 + H x.
struct AffineVectorMap {
  Vec base;
  Mat H;  // rows() x n1 (empty H means constant map)
  int rows() const { return static_cast<int>(base.size()); }
};

struct FirstStage {
  Mat A;  // rows of length n1; constraints A x >= b
  Vec b;
  Vec lb, ub;
  std::vector<bool> binary;
};

struct DrtspInstance {
  int n1 = 0, n2 = 0, m1 = 0, m2 = 0, l = 0;
  Vec c;             // first-stage cost, length n1
  FirstStage first_stage;
  Mat W;             // l x n2
  Mat Q;             // n2 x m1
  Vec q;             // length n2
  AffineMatrixMap Tmap;  // l x m2
  AffineVectorMap hmap;  // length l
};

struct SupportKind {
  enum Kind { FreeContinuous, Binary, Singleton } kind = FreeContinuous;
  Vec fixed;  // payload for Singleton
};

// Norm exponent; infinity is a distinct flag, never a float sentinel.
struct PNorm {
  bool is_inf = false;
  double value = 2.0;  // meaningful only when !is_inf
  static PNorm inf() { return {true, 0.0}; }
  static PNorm finite(double p) { return {false, p}; }
};

struct AmbiguitySet {
  PNorm p;
  double theta = 0.0;
  std::vector<Vec> samples_q;  // N x m1
  std::vector<Vec> samples_T;  // N x m2
  SupportKind support_q, support_T;
  int num_samples() const { return static_cast<int>(samples_q.size()); }
};

enum class RegimeKind {
  GeneralLinf,
  ObjectiveOnly,
  ConstraintOnlyL1,
  PiecewiseMax,
  BinaryGeneralLinf,
  BinaryObjective,
  BinaryConstraint,
  BinaryPiecewiseMax,
  SaaOnly,
};

struct Regime {
  RegimeKind kind = RegimeKind::SaaOnly;
  bool exact = false;
  std::vector<std::string> reasons;
};

// Recourse given directly as a max of affine pieces of the scenario.
struct PiecewiseMaxRecourse {
  struct Piece {
    AffineVectorMap a;  // x -> coefficient vector in R^tau
    double d_base = 0.0;
    Vec d_coeffs;  // affine scalar offset d(x) = d_base + d_coeffs . x
  };
  std::vector<Piece> pieces;
  int tau = 0;
};

struct ValidationReport {
  struct Check {
    std::string name;
    bool pass = true;
    std::string detail;
  };
  std::vector<Check> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

const char* regime_kind_name(RegimeKind k);

// Structural errors (shape mismatch, support violations) throw; softer
// probes (dual feasibility) land as failed checks in the report.
ValidationReport validate_instance(const DrtspInstance& inst,
                                   const AmbiguitySet& amb);

// True when every column's declared signs are uniformly NonNeg or uniformly
// NonPos (no Mixed). This is what makes the ell-1 norm of T(x)'pi equal its
// entrywise-absolute expansion for pi >= 0, column by column.
bool column_uniform_signs(const AffineMatrixMap& map);

Mat technology_at(const AffineMatrixMap& map, const Vec& x);
// Entrywise |T(x)| assembled from the sign pattern; affine in x. Throws
// SignPatternError on any Mixed entry.
Mat abs_technology_at(const AffineMatrixMap& map, const Vec& x);

Vec rhs_at(const AffineVectorMap& map, const Vec& x);

// ||v||_{p*} where p* is the dual exponent of p.
double dual_norm(const Vec& v, const PNorm& p);

// Hamming budget floor(theta^p) with a small upward guard against float
// error at integer boundaries.
long hamming_budget(double theta, double p);

Regime classify_regime(const DrtspInstance& inst, const AmbiguitySet& amb);

// Integrality of {(pi, xi_q): W'pi = Q xi_q + q, pi >= 0, xi_q in [0,1]^m1}
// (gates exactness of the binary-objective scenario relaxation at p = inf).
bool binary_q_polytope_integral(const DrtspInstance& inst);

// Same polytope with the Hamming-budget row around each sample added (gates
// the floor(theta^p) budget reformulation). True only when the verdict is
// Integral for every sample.
bool budget_polytope_integral(const DrtspInstance& inst,
                              const AmbiguitySet& amb, long budget);

// Number of binary vectors within Hamming distance `budget` of a point in
// {0,1}^m, saturating at `cap`.
long hamming_ball_size(int m, long budget, long cap);

}  // namespace drtsp
