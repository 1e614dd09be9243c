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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "drtsp/json_io.hpp"
#include "drtsp/model.hpp"

using namespace drtsp;

namespace {

// Minimal consistent instance: recourse min xi_q * y s.t. y >= xi_T * x.
DrtspInstance toy_instance() {
  DrtspInstance inst;
  inst.n1 = inst.n2 = inst.m1 = inst.m2 = inst.l = 1;
  inst.c = {0.0};
  inst.first_stage.lb = {0.0};
  inst.first_stage.ub = {1.0};
  inst.first_stage.binary = {false};
  inst.W = {{1.0}};
  inst.Q = {{1.0}};
  inst.q = {0.0};
  inst.Tmap.base = {{0.0}};
  inst.Tmap.coeffs = {{{1.0}}};
  inst.Tmap.sign_pattern = {{SignKind::NonNeg}};
  inst.hmap.base = {0.0};
  inst.hmap.H = {{0.0}};
  return inst;
}

AmbiguitySet toy_ambiguity() {
  AmbiguitySet amb;
  amb.p = PNorm::inf();
  amb.theta = 0.1;
  amb.samples_q = {{0.5}, {0.8}};
  amb.samples_T = {{0.3}, {0.6}};
  return amb;
}

double p_norm(const Vec& v, const PNorm& p) {
  if (p.is_inf) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), p.value);
  return std::pow(s, 1.0 / p.value);
}

}  // namespace

TEST_CASE("well-formed toy passes every validation check") {
  ValidationReport rep = validate_instance(toy_instance(), toy_ambiguity());
  for (const auto& c : rep.checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK(rep.ok());
}

TEST_CASE("binary support rejects fractional samples") {
  AmbiguitySet amb = toy_ambiguity();
  amb.support_T.kind = SupportKind::Binary;
  amb.samples_T = {{0.5}, {1.0}};
  CHECK_THROWS_AS(validate_instance(toy_instance(), amb), SupportError);
}

TEST_CASE("singleton support requires matching samples") {
  AmbiguitySet amb = toy_ambiguity();
  amb.support_q = {SupportKind::Singleton, {0.5}};
  CHECK_THROWS_AS(validate_instance(toy_instance(), amb), SupportError);
  amb.samples_q = {{0.5}, {0.5}};
  CHECK(validate_instance(toy_instance(), amb).ok());
}

TEST_CASE("shape violations raise dimension errors") {
  DrtspInstance inst = toy_instance();
  inst.Q = {{1.0}, {2.0}};  // n2 = 1 but two rows
  CHECK_THROWS_AS(validate_instance(inst, toy_ambiguity()), DimensionError);
  inst = toy_instance();
  inst.W = {{1.0, 2.0}};
  CHECK_THROWS_AS(validate_instance(inst, toy_ambiguity()), DimensionError);
  inst = toy_instance();
  inst.hmap.base = {0.0, 0.0};
  CHECK_THROWS_AS(validate_instance(inst, toy_ambiguity()), DimensionError);
}

TEST_CASE("expensive-recourse probe flags unbounded recourse") {
  // min -y with only y >= 0: dual infeasible, recourse value -inf.
  DrtspInstance inst = toy_instance();
  inst.Q = {{0.0}};
  inst.q = {-1.0};
  ValidationReport rep = validate_instance(inst, toy_ambiguity());
  CHECK(!rep.ok());
}

TEST_CASE("technology maps evaluate and absolute-value consistently") {
  AffineMatrixMap map;
  map.base = {{1.0, 2.0}};
  map.sign_pattern = {{SignKind::NonNeg, SignKind::NonNeg}};
  CHECK(technology_at(map, {}) == Mat{{1.0, 2.0}});
  CHECK(abs_technology_at(map, {}) == Mat{{1.0, 2.0}});

  AffineMatrixMap neg;
  neg.base = {{0.0}};
  neg.coeffs = {{{-1.0}}};
  neg.sign_pattern = {{SignKind::NonPos}};
  CHECK(technology_at(neg, {3.0}) == Mat{{-3.0}});
  CHECK(abs_technology_at(neg, {3.0}) == Mat{{3.0}});

  neg.sign_pattern = {{SignKind::Mixed}};
  CHECK_THROWS_AS(abs_technology_at(neg, {3.0}), SignPatternError);
}

TEST_CASE("absolute technology equals entrywise magnitude when signs declared") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int it = 0; it < 50; ++it) {
    AffineMatrixMap map;
    map.base = {{u(rng), -u(rng)}, {u(rng), -u(rng)}};
    map.coeffs = {{{u(rng), -u(rng)}, {u(rng), -u(rng)}}};
    map.sign_pattern = {{SignKind::NonNeg, SignKind::NonPos},
                        {SignKind::NonNeg, SignKind::NonPos}};
    Vec x = {u(rng)};
    Mat t = technology_at(map, x), a = abs_technology_at(map, x);
    for (size_t i = 0; i < t.size(); ++i)
      for (size_t j = 0; j < t[i].size(); ++j)
        CHECK(a[i][j] == doctest::Approx(std::fabs(t[i][j])));
  }
}

TEST_CASE("dual norm textbook values") {
  CHECK(dual_norm({3.0, 4.0}, PNorm::finite(2.0)) == doctest::Approx(5.0));
  CHECK(dual_norm({1.0, -2.0, 3.0}, PNorm::finite(1.0)) == doctest::Approx(3.0));
  CHECK(dual_norm({1.0, 1.0}, PNorm::inf()) == doctest::Approx(2.0));
}

TEST_CASE("Hoelder inequality holds for random vectors") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const PNorm& p :
       {PNorm::finite(1.0), PNorm::finite(1.5), PNorm::finite(2.0),
        PNorm::finite(3.0), PNorm::inf()}) {
    for (int it = 0; it < 100; ++it) {
      Vec v(4), w(4);
      double dot = 0.0;
      for (int k = 0; k < 4; ++k) {
        v[k] = u(rng);
        w[k] = u(rng);
        dot += v[k] * w[k];
      }
      CHECK(std::fabs(dot) <= p_norm(v, p) * dual_norm(w, p) + 1e-9);
    }
  }
}

TEST_CASE("dual norm equals the supported linear maximum on the sphere") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const PNorm& p : {PNorm::finite(1.0), PNorm::finite(2.0), PNorm::inf()}) {
    for (int it = 0; it < 20; ++it) {
      Vec w = {u(rng), u(rng)};
      double best = 0.0;
      for (int a = 0; a < 20000; ++a) {
        double phi = 2.0 * M_PI * a / 20000;
        Vec s = {std::cos(phi), std::sin(phi)};
        double norm = p_norm(s, p);
        best = std::max(best, (s[0] * w[0] + s[1] * w[1]) / norm);
      }
      CHECK(best == doctest::Approx(dual_norm(w, p)).epsilon(1e-4));
    }
  }
}

TEST_CASE("Hamming budget floors theta to the power p") {
  CHECK(hamming_budget(0.5, 1.0) == 0);
  CHECK(hamming_budget(1.0, 1.0) == 1);
  CHECK(hamming_budget(1.5, 1.0) == 1);
  CHECK(hamming_budget(1.5, 2.0) == 2);  // 1.5^2 = 2.25
  CHECK(hamming_budget(std::sqrt(2.0), 2.0) == 2);
  CHECK(hamming_budget(2.0, 3.0) == 8);
}

TEST_CASE("regime classification: flagship continuous cases") {
  DrtspInstance inst = toy_instance();
  AmbiguitySet amb = toy_ambiguity();
  Regime r = classify_regime(inst, amb);
  CHECK(r.kind == RegimeKind::GeneralLinf);
  CHECK(r.exact);

  amb.p = PNorm::finite(2.0);
  amb.support_T = {SupportKind::Singleton, {0.3}};
  amb.samples_T = {{0.3}, {0.3}};
  r = classify_regime(inst, amb);
  CHECK(r.kind == RegimeKind::ObjectiveOnly);
  CHECK(r.exact);

  amb = toy_ambiguity();
  amb.p = PNorm::finite(1.0);
  amb.support_q = {SupportKind::Singleton, {0.5}};
  amb.samples_q = {{0.5}, {0.5}};
  r = classify_regime(inst, amb);
  CHECK(r.kind == RegimeKind::ConstraintOnlyL1);
  CHECK(r.exact);
}

TEST_CASE("regime classification: binary constraint window and radius zero") {
  DrtspInstance inst = toy_instance();
  AmbiguitySet amb = toy_ambiguity();
  amb.p = PNorm::finite(1.0);
  amb.theta = 1.5;  // within [1, 2)
  amb.support_q = {SupportKind::Singleton, {0.5}};
  amb.samples_q = {{0.5}, {0.5}};
  amb.support_T.kind = SupportKind::Binary;
  amb.samples_T = {{0.0}, {1.0}};
  Regime r = classify_regime(inst, amb);
  CHECK(r.kind == RegimeKind::BinaryConstraint);
  CHECK(r.exact);

  amb.theta = 0.0;
  r = classify_regime(inst, amb);
  CHECK(r.kind == RegimeKind::SaaOnly);
  CHECK(r.exact);
}

TEST_CASE("regime classification is deterministic") {
  DrtspInstance inst = toy_instance();
  AmbiguitySet amb = toy_ambiguity();
  Regime a = classify_regime(inst, amb), b = classify_regime(inst, amb);
  CHECK(a.kind == b.kind);
  CHECK(a.exact == b.exact);
  CHECK(a.reasons == b.reasons);
}

TEST_CASE("mixed sign pattern downgrades the L-inf regime to a bound") {
  DrtspInstance inst = toy_instance();
  inst.Tmap.sign_pattern = {{SignKind::Mixed}};
  Regime r = classify_regime(inst, toy_ambiguity());
  CHECK(r.kind == RegimeKind::GeneralLinf);
  CHECK(!r.exact);
}

TEST_CASE("instance JSON round-trips bit-stably") {
  DrtspInstance inst = toy_instance();
  AmbiguitySet amb = toy_ambiguity();
  std::string a = instance_to_json(inst, amb);
  auto [inst2, amb2] = parse_instance(a);
  std::string b = instance_to_json(inst2, amb2);
  CHECK(a == b);
  CHECK(inst2.W == inst.W);
  CHECK(amb2.samples_q == amb.samples_q);
  CHECK(amb2.p.is_inf);
}

TEST_CASE("JSON parser reports precise failures") {
  CHECK_THROWS_WITH_AS(
      parse_instance(R"({"n1":1,"n2":1,"m1":1,"m2":1,"l":1,"c":[0]})"),
      doctest::Contains("\"first_stage\""), ParseError);
  // exponent strings
  std::string text = instance_to_json(toy_instance(), toy_ambiguity());
  auto pos = text.find("\"inf\"");
  REQUIRE(pos != std::string::npos);
  std::string finite = text;
  finite.replace(pos, 5, "2.5");
  auto [i2, a2] = parse_instance(finite);
  CHECK(!a2.p.is_inf);
  CHECK(a2.p.value == doctest::Approx(2.5));
  std::string bad = text;
  bad.replace(pos, 5, "0.5");
  CHECK_THROWS_AS(parse_instance(bad), ParseError);
}
