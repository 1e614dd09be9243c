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

#include "drtsp/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace drtsp {
namespace {

using nlohmann::json;

const json& field(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing field \"" + key + "\"");
  return *it;
}

Vec to_vec(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  Vec v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ParseError(where + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

Mat to_mat(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  Mat m;
  for (size_t i = 0; i < j.size(); ++i)
    m.push_back(to_vec(j[i], where + "[" + std::to_string(i) + "]"));
  return m;
}

SignKind sign_from_string(const std::string& s, const std::string& where) {
  if (s == "+" || s == "nonneg") return SignKind::NonNeg;
  if (s == "-" || s == "nonpos") return SignKind::NonPos;
  if (s == "*" || s == "mixed") return SignKind::Mixed;
  throw ParseError(where + ": sign must be one of \"+\", \"-\", \"*\"");
}

std::string sign_to_string(SignKind s) {
  switch (s) {
    case SignKind::NonNeg: return "+";
    case SignKind::NonPos: return "-";
    case SignKind::Mixed: return "*";
  }
  return "*";
}

SupportKind support_from_json(const json& j, const std::string& where) {
  SupportKind s;
  if (j.is_string()) {
    std::string v = j.get<std::string>();
    if (v == "free") {
      s.kind = SupportKind::FreeContinuous;
    } else if (v == "binary") {
      s.kind = SupportKind::Binary;
    } else {
      throw ParseError(where + ": expected \"free\", \"binary\", or an array");
    }
  } else if (j.is_array()) {
    s.kind = SupportKind::Singleton;
    s.fixed = to_vec(j, where);
  } else {
    throw ParseError(where + ": expected \"free\", \"binary\", or an array");
  }
  return s;
}

json support_to_json(const SupportKind& s) {
  switch (s.kind) {
    case SupportKind::FreeContinuous: return "free";
    case SupportKind::Binary: return "binary";
    case SupportKind::Singleton: return json(s.fixed);
  }
  return "free";
}

double bound_from_json(const json& j, double sign, const std::string& where) {
  if (j.is_string()) {
    std::string v = j.get<std::string>();
    if (v == "inf" || v == "-inf")
      return (v[0] == '-' ? -1.0 : 1.0) * std::numeric_limits<double>::infinity();
    throw ParseError(where + ": expected a number or \"inf\"/\"-inf\"");
  }
  if (!j.is_number())
    throw ParseError(where + ": expected a number or \"inf\"/\"-inf\"");
  (void)sign;
  return j.get<double>();
}

}  // namespace

std::pair<DrtspInstance, AmbiguitySet> parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  DrtspInstance inst;
  inst.n1 = field(j, "n1").get<int>();
  inst.n2 = field(j, "n2").get<int>();
  inst.m1 = field(j, "m1").get<int>();
  inst.m2 = field(j, "m2").get<int>();
  inst.l = field(j, "l").get<int>();
  inst.c = to_vec(field(j, "c"), "c");
  const json& fs = field(j, "first_stage");
  inst.first_stage.A = to_mat(field(fs, "A"), "first_stage.A");
  inst.first_stage.b = to_vec(field(fs, "b"), "first_stage.b");
  const json& lbj = field(fs, "lb");
  const json& ubj = field(fs, "ub");
  for (size_t k = 0; k < lbj.size(); ++k)
    inst.first_stage.lb.push_back(
        bound_from_json(lbj[k], -1.0, "first_stage.lb"));
  for (size_t k = 0; k < ubj.size(); ++k)
    inst.first_stage.ub.push_back(
        bound_from_json(ubj[k], 1.0, "first_stage.ub"));
  for (const auto& e : field(fs, "binary"))
    inst.first_stage.binary.push_back(e.get<int>() != 0);
  inst.W = to_mat(field(j, "W"), "W");
  inst.Q = to_mat(field(j, "Q"), "Q");
  inst.q = to_vec(field(j, "q"), "q");
  const json& tj = field(j, "T");
  inst.Tmap.base = to_mat(field(tj, "base"), "T.base");
  for (size_t k = 0; k < field(tj, "coeffs").size(); ++k)
    inst.Tmap.coeffs.push_back(
        to_mat(tj["coeffs"][k], "T.coeffs[" + std::to_string(k) + "]"));
  const json& sj = field(tj, "sign");
  for (size_t i = 0; i < sj.size(); ++i) {
    std::vector<SignKind> row;
    for (const auto& e : sj[i])
      row.push_back(sign_from_string(e.get<std::string>(), "T.sign"));
    inst.Tmap.sign_pattern.push_back(std::move(row));
  }
  const json& hj = field(j, "h");
  inst.hmap.base = to_vec(field(hj, "base"), "h.base");
  if (hj.contains("H") && !hj["H"].is_null())
    inst.hmap.H = to_mat(hj["H"], "h.H");

  AmbiguitySet amb;
  const json& aj = field(j, "ambiguity");
  const json& pj = field(aj, "p");
  if (pj.is_string()) {
    if (pj.get<std::string>() != "inf")
      throw ParseError("ambiguity.p: expected a number >= 1 or \"inf\"");
    amb.p = PNorm::inf();
  } else if (pj.is_number()) {
    double pv = pj.get<double>();
    if (pv < 1.0) throw ParseError("ambiguity.p: exponent must be >= 1");
    amb.p = PNorm::finite(pv);
  } else {
    throw ParseError("ambiguity.p: expected a number >= 1 or \"inf\"");
  }
  amb.theta = field(aj, "theta").get<double>();
  amb.support_q = support_from_json(field(aj, "support_q"), "support_q");
  amb.support_T = support_from_json(field(aj, "support_T"), "support_T");
  for (size_t k = 0; k < field(aj, "samples_q").size(); ++k)
    amb.samples_q.push_back(
        to_vec(aj["samples_q"][k], "samples_q[" + std::to_string(k) + "]"));
  for (size_t k = 0; k < field(aj, "samples_T").size(); ++k)
    amb.samples_T.push_back(
        to_vec(aj["samples_T"][k], "samples_T[" + std::to_string(k) + "]"));
  return {std::move(inst), std::move(amb)};
}

std::pair<DrtspInstance, AmbiguitySet> load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string instance_to_json(const DrtspInstance& inst,
                             const AmbiguitySet& amb) {
  json j;
  j["n1"] = inst.n1;
  j["n2"] = inst.n2;
  j["m1"] = inst.m1;
  j["m2"] = inst.m2;
  j["l"] = inst.l;
  j["c"] = inst.c;
  json fs;
  fs["A"] = inst.first_stage.A;
  fs["b"] = inst.first_stage.b;
  json lb = json::array(), ub = json::array();
  for (double v : inst.first_stage.lb)
    lb.push_back(v <= -1e307 ? json("-inf") : json(v));
  for (double v : inst.first_stage.ub)
    ub.push_back(v >= 1e307 ? json("inf") : json(v));
  fs["lb"] = lb;
  fs["ub"] = ub;
  json bin = json::array();
  for (bool b : inst.first_stage.binary) bin.push_back(b ? 1 : 0);
  fs["binary"] = bin;
  j["first_stage"] = fs;
  j["W"] = inst.W;
  j["Q"] = inst.Q;
  j["q"] = inst.q;
  json tj;
  tj["base"] = inst.Tmap.base;
  tj["coeffs"] = inst.Tmap.coeffs;
  json sj = json::array();
  for (const auto& row : inst.Tmap.sign_pattern) {
    json r = json::array();
    for (SignKind s : row) r.push_back(sign_to_string(s));
    sj.push_back(r);
  }
  tj["sign"] = sj;
  j["T"] = tj;
  json hj;
  hj["base"] = inst.hmap.base;
  hj["H"] = inst.hmap.H;
  j["h"] = hj;
  json aj;
  aj["p"] = amb.p.is_inf ? json("inf") : json(amb.p.value);
  aj["theta"] = amb.theta;
  aj["support_q"] = support_to_json(amb.support_q);
  aj["support_T"] = support_to_json(amb.support_T);
  aj["samples_q"] = amb.samples_q;
  aj["samples_T"] = amb.samples_T;
  j["ambiguity"] = aj;
  return j.dump(2);
}

void save_instance(const std::string& path, const DrtspInstance& inst,
                   const AmbiguitySet& amb) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << instance_to_json(inst, amb) << "\n";
}

}  // namespace drtsp
