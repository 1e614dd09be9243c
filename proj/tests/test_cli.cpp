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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "drtsp/json_io.hpp"
#include "drtsp/model.hpp"
#include "json.hpp"

using namespace drtsp;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("DRTSP_CLI");
  REQUIRE_MESSAGE(p != nullptr, "DRTSP_CLI must point at the binary");
  return p;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, n);
  int st = pclose(pipe);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string tmp_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/drtsp_cli_XXXXXX";
    REQUIRE(mkdtemp(tmpl) != nullptr);
    return std::string(tmpl);
  }();
  return dir;
}

// Recourse min y s.t. y >= 2 - xi_T with one sample at 0.5: the L-inf
// worst case at radius 0.3 is 1.8.
std::string rhs_toy_path() {
  static std::string path = [] {
    DrtspInstance inst;
    inst.n1 = 0;
    inst.n2 = inst.m1 = inst.m2 = inst.l = 1;
    inst.W = {{1.0}};
    inst.Q = {{0.0}};
    inst.q = {1.0};
    inst.Tmap.base = {{1.0}};
    inst.Tmap.sign_pattern = {{SignKind::NonNeg}};
    inst.hmap.base = {2.0};
    inst.hmap.H = {{}};
    AmbiguitySet amb;
    amb.p = PNorm::inf();
    amb.theta = 0.3;
    amb.samples_q = {{0.0}};
    amb.samples_T = {{0.5}};
    std::string p = tmp_dir() + "/rhs_toy.json";
    save_instance(p, inst, amb);
    return p;
  }();
  return path;
}

std::string write_text(const std::string& name, const std::string& text) {
  std::string p = tmp_dir() + "/" + name;
  std::ofstream os(p, std::ios::binary);
  os << text;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("validate accepts a well-formed instance") {
  RunResult r = run("validate -i " + rhs_toy_path() + " --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["checks"].is_array());
}

TEST_CASE("parse errors name the offending field and exit 1") {
  std::string broken = write_text("broken.json", "{ not json");
  RunResult r = run("validate -i " + broken);
  CHECK(r.code == 1);

  json j = json::parse(slurp(rhs_toy_path()));
  j.erase("W");
  std::string no_w = write_text("no_w.json", j.dump());
  RunResult r2 = run("validate -i " + no_w);
  CHECK(r2.code == 1);
  CHECK(r2.out.find("W") != std::string::npos);

  RunResult r3 = run("validate -i " + tmp_dir() + "/missing.json");
  CHECK(r3.code == 1);
}

TEST_CASE("select reports the classified regime") {
  RunResult r = run("select -i " + rhs_toy_path() + " --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["regime"] == "GeneralLinf");
  CHECK(j["exact"] == true);
}

TEST_CASE("solve with verification on the toy") {
  RunResult r = run("solve -i " + rhs_toy_path() + " --verify --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["status"] == "optimal");
  CHECK(j["objective"].get<double>() == doctest::Approx(1.8));
  CHECK(j["zx"].get<double>() == doctest::Approx(1.8));
  CHECK(j["zx_mode"] == "exact");
  CHECK(j["verify"] == "ok");
  CHECK(j["gap"].get<double>() <= 1e-9);
}

TEST_CASE("radius and exponent overrides change the answer") {
  RunResult r = run("solve -i " + rhs_toy_path() + " --theta 0 --format json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["objective"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("output is byte-stable across reruns") {
  std::string args = "solve -i " + rhs_toy_path() + " --verify --format json";
  RunResult a = run(args);
  RunResult b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("text format renders flat key-value lines") {
  RunResult r = run("eval-zx -i " + rhs_toy_path() + " --format text");
  CHECK(r.code == 0);
  CHECK(r.out.find("zx = 1.8") != std::string::npos);
  CHECK(r.out.find("regime = GeneralLinf") != std::string::npos);
}

TEST_CASE("mismatched regime requests are refused") {
  RunResult r = run("solve -i " + rhs_toy_path() + " --regime ObjectiveOnly");
  CHECK(r.code == 1);
  CHECK(r.out.find("GeneralLinf") != std::string::npos);
  RunResult ok = run("solve -i " + rhs_toy_path() + " --regime GeneralLinf");
  CHECK(ok.code == 0);
}

TEST_CASE("first-stage vector length is checked") {
  RunResult r = run("eval-zx -i " + rhs_toy_path() + " --x 1,2,3");
  CHECK(r.code == 1);
  CHECK(r.out.find("n1") != std::string::npos);
}

TEST_CASE("unsupported oracle shapes exit with the solver code") {
  json j = json::parse(slurp(rhs_toy_path()));
  j["ambiguity"]["p"] = 1.0;  // both blocks free under L1: no oracle
  j["Q"] = json::array({json::array({1.0})});
  std::string p = write_text("l1_both.json", j.dump());
  RunResult r = run("oracle -i " + p);
  CHECK(r.code == 2);
  CHECK(r.out.find("solver error") != std::string::npos);
}

TEST_CASE("insufficiently expensive recourse exits with the solver code") {
  json j = json::parse(slurp(rhs_toy_path()));
  j["q"] = json::array({-1.0});  // unbounded second stage
  std::string p = write_text("cheap.json", j.dump());
  RunResult r = run("solve -i " + p);
  CHECK(r.code == 2);
}

TEST_CASE("reformulate reports model sizes and writes MPS") {
  std::string mps = tmp_dir() + "/toy.mps";
  RunResult r = run("reformulate -i " + rhs_toy_path() + " --format json" +
                    " --mps-dump " + mps);
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["cols"].get<int>() > 0);
  CHECK(j["rows"].get<int>() > 0);
  std::string text = slurp(mps);
  CHECK(text.find("ROWS") != std::string::npos);
  CHECK(text.find("COLUMNS") != std::string::npos);
}

TEST_CASE("generated benchmark instances round-trip through the tool") {
  std::string out = tmp_dir() + "/flp.json";
  RunResult gen = run(
      "flp-gen --sites 3 --customers 3 --samples 4 --seed 5 --theta 0.1 "
      "--out " + out);
  CHECK(gen.code == 0);
  RunResult val = run("validate -i " + out);
  CHECK(val.code == 0);
  RunResult gen2 = run(
      "flp-gen --sites 3 --customers 3 --samples 4 --seed 5 --theta 0.1");
  CHECK(gen2.out == slurp(out));  // deterministic in the seed

  // Binary first stage and no --x: the oracle enumerates builds.
  RunResult orc = run("oracle -i " + out + " --format json");
  CHECK(orc.code == 0);
  json oj = json::parse(orc.out);
  CHECK(oj["x"].size() == 3);
  RunResult sol = run("solve -i " + out + " --format json");
  CHECK(sol.code == 0);
  json sj = json::parse(sol.out);
  CHECK(sj["objective"].get<double>() ==
        doctest::Approx(oj["objective"].get<double>()).epsilon(1e-6));
}

TEST_CASE("cross-validation emits the CSV schema") {
  RunResult r = run(
      "crossval --sites 3 --customers 3 --samples 3 --holdout 5 --seed 2 "
      "--grid 0,0.1 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("theta,opt_val,time_s,built_facilities,holdout_mean,"
                    "ci_low,ci_high,chosen",
                    0) == 0);
  RunResult j = run(
      "crossval --sites 3 --customers 3 --samples 3 --holdout 5 --seed 2 "
      "--grid 0,0.1 --format json");
  CHECK(j.code == 0);
  json rep = json::parse(j.out);
  CHECK(rep["rows"].size() == 2);
}
