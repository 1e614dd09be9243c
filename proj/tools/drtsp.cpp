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

// Command-line front end: instance validation, regime selection, building
// and solving deterministic equivalents, enumeration-oracle checks, and the
// facility-location benchmark workflows.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "drtsp/flp/flp.hpp"
#include "drtsp/json_io.hpp"
#include "drtsp/lp/mps.hpp"
#include "drtsp/model.hpp"
#include "drtsp/oracle/oracle.hpp"
#include "drtsp/reform/build.hpp"
#include "drtsp/reform/evaluate.hpp"
#include "json.hpp"

namespace {

using drtsp::AmbiguitySet;
using drtsp::DrtspInstance;
using drtsp::PNorm;
using drtsp::Vec;
using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

json jnum(double v) { return json::parse(fmt(v)); }

json jvec(const Vec& v) {
  json a = json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

struct Options {
  std::string instance, format = "text", out, mps_dump, xs, variant;
  double theta = -1.0;
  std::string p;
  std::string regime;
  bool verify = false;
  unsigned seed = 0;
  int sites = 10, customers = 15, samples = 100, holdout = 100;
  double pdis = 0.05;
  std::string grid = "0,0.05,0.1,0.2,0.5";
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(opt.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + opt.out);
  os << text;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

PNorm parse_p(const std::string& s) {
  if (s == "inf") return PNorm::inf();
  double v = std::stod(s);
  if (v < 1.0) throw drtsp::ParseError("exponent p must be >= 1 or \"inf\"");
  return PNorm::finite(v);
}

std::pair<DrtspInstance, AmbiguitySet> load(const Options& opt) {
  auto [inst, amb] = drtsp::load_instance(opt.instance);
  if (opt.theta >= 0.0) amb.theta = opt.theta;
  if (!opt.p.empty()) amb.p = parse_p(opt.p);
  return {std::move(inst), std::move(amb)};
}

drtsp::RegimeKind regime_from_name(const std::string& name) {
  using drtsp::RegimeKind;
  for (auto k :
       {RegimeKind::GeneralLinf, RegimeKind::ObjectiveOnly,
        RegimeKind::ConstraintOnlyL1, RegimeKind::PiecewiseMax,
        RegimeKind::BinaryPiecewiseMax, RegimeKind::BinaryGeneralLinf,
        RegimeKind::BinaryObjective, RegimeKind::BinaryConstraint,
        RegimeKind::SaaOnly})
    if (name == drtsp::regime_kind_name(k)) return k;
  throw drtsp::RegimeMismatch("unknown regime name: " + name);
}

Vec parse_x(const Options& opt, const DrtspInstance& inst) {
  if (opt.xs.empty()) {
    Vec x(inst.n1);
    for (int k = 0; k < inst.n1; ++k) {
      double lo = inst.first_stage.lb[k];
      x[k] = std::isfinite(lo) ? std::max(lo, 0.0) : 0.0;
      x[k] = std::min(x[k], inst.first_stage.ub[k]);
    }
    return x;
  }
  Vec x = parse_list(opt.xs);
  if (static_cast<int>(x.size()) != inst.n1)
    throw drtsp::DimensionError("--x length does not match n1");
  return x;
}

std::string render(const Options& opt, const json& j) {
  if (opt.format == "json") return j.dump(2) + "\n";
  std::ostringstream os;
  std::function<void(const json&, const std::string&)> walk =
      [&](const json& node, const std::string& prefix) {
        if (node.is_object()) {
          for (auto it = node.begin(); it != node.end(); ++it)
            walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
        } else if (node.is_array() &&
                   (node.empty() || !node.front().is_structured())) {
          os << prefix << " =";
          for (const auto& e : node)
            os << ' '
               << (e.is_number() ? fmt(e.get<double>()) : e.dump());
          os << '\n';
        } else if (node.is_array()) {
          int i = 0;
          for (const auto& e : node) walk(e, prefix + "[" + std::to_string(i++) + "]");
        } else if (node.is_number()) {
          os << prefix << " = " << fmt(node.get<double>()) << '\n';
        } else {
          os << prefix << " = " << (node.is_string() ? node.get<std::string>() : node.dump())
             << '\n';
        }
      };
  walk(j, "");
  return os.str();
}

json regime_json(const drtsp::Regime& reg) {
  json j;
  j["regime"] = drtsp::regime_kind_name(reg.kind);
  j["exact"] = reg.exact;
  j["reasons"] = reg.reasons;
  return j;
}

drtsp::FlpVariant variant_from_name(const std::string& name) {
  using drtsp::FlpVariant;
  for (auto v : {FlpVariant::BoxLinf, FlpVariant::DemandOnly,
                 FlpVariant::DisruptL1, FlpVariant::BinaryDisruption,
                 FlpVariant::BinaryDisruptL1})
    if (name == drtsp::flp_variant_name(v)) return v;
  throw drtsp::RegimeMismatch("unknown benchmark variant: " + name);
}

PNorm default_p(drtsp::FlpVariant v) {
  switch (v) {
    case drtsp::FlpVariant::DisruptL1:
    case drtsp::FlpVariant::BinaryDisruptL1:
      return PNorm::finite(1.0);
    case drtsp::FlpVariant::DemandOnly:
      return PNorm::finite(2.0);
    default:
      return PNorm::inf();
  }
}

int cmd_validate(const Options& opt) {
  auto [inst, amb] = load(opt);
  drtsp::ValidationReport rep = drtsp::validate_instance(inst, amb);
  json j;
  j["ok"] = rep.ok();
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"detail", c.detail}, {"name", c.name}, {"pass", c.pass}});
  j["checks"] = checks;
  emit(opt, render(opt, j));
  return rep.ok() ? 0 : 1;
}

int cmd_select(const Options& opt) {
  auto [inst, amb] = load(opt);
  emit(opt, render(opt, regime_json(drtsp::classify_regime(inst, amb))));
  return 0;
}

int cmd_reformulate(const Options& opt) {
  auto [inst, amb] = load(opt);
  drtsp::Regime reg = drtsp::classify_regime(inst, amb);
  if (!opt.regime.empty() && regime_from_name(opt.regime) != reg.kind)
    throw drtsp::RegimeMismatch("requested regime " + opt.regime +
                                " is not applicable; classifier selected " +
                                drtsp::regime_kind_name(reg.kind));
  drtsp::DeterministicEquivalent de = drtsp::build_deterministic(inst, amb, reg);
  if (!opt.mps_dump.empty()) {
    std::ofstream os(opt.mps_dump, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + opt.mps_dump);
    drtsp::lp::write_mps(de.model, os, "DRTSP");
  }
  json j = regime_json(reg);
  j["cols"] = de.model.num_cols();
  j["rows"] = de.model.num_rows();
  int nbin = 0;
  for (int k = 0; k < de.model.num_cols(); ++k)
    if (de.model.is_binary(k)) ++nbin;
  j["binaries"] = nbin;
  emit(opt, render(opt, j));
  return 0;
}

int cmd_solve(const Options& opt) {
  auto [inst, amb] = load(opt);
  drtsp::Regime reg = drtsp::classify_regime(inst, amb);
  if (!opt.regime.empty() && regime_from_name(opt.regime) != reg.kind)
    throw drtsp::RegimeMismatch("requested regime " + opt.regime +
                                " is not applicable; classifier selected " +
                                drtsp::regime_kind_name(reg.kind));
  drtsp::DrtspSolveResult sol = drtsp::solve_drtsp(inst, amb, reg);
  json j = regime_json(reg);
  j["status"] = sol.status == drtsp::lp::SolveStatus::Optimal ? "optimal"
                : sol.status == drtsp::lp::SolveStatus::Infeasible
                    ? "infeasible"
                    : "unbounded";
  j["objective"] = jnum(sol.objective);
  j["x"] = jvec(sol.x);
  j["zx"] = jnum(sol.zx.value);
  j["zx_mode"] =
      sol.zx.mode == drtsp::ZxResult::Mode::Exact ? "exact" : "upper-bound";
  int rc = sol.status == drtsp::lp::SolveStatus::Optimal ? 0 : 2;
  if (opt.verify && sol.status == drtsp::lp::SolveStatus::Optimal) {
    drtsp::OracleReport orc = drtsp::oracle_zx_auto(inst, sol.x, amb);
    double gap = std::fabs(sol.zx.value - orc.value) /
                 (1.0 + std::fabs(orc.value));
    j["oracle_zx"] = jnum(orc.value);
    j["gap"] = jnum(gap);
    if (reg.exact && gap > 1e-5) {
      j["verify"] = "FAIL";
      rc = 3;
    } else {
      j["verify"] = "ok";
    }
  }
  emit(opt, render(opt, j));
  return rc;
}

int cmd_eval_zx(const Options& opt) {
  auto [inst, amb] = load(opt);
  drtsp::Regime reg = drtsp::classify_regime(inst, amb);
  Vec x = parse_x(opt, inst);
  drtsp::ZxResult r = drtsp::evaluate_zx(inst, x, amb, reg);
  json j = regime_json(reg);
  j["x"] = jvec(x);
  j["zx"] = jnum(r.value);
  j["per_sample"] = jvec(r.per_sample);
  j["zx_mode"] = r.mode == drtsp::ZxResult::Mode::Exact ? "exact" : "upper-bound";
  emit(opt, render(opt, j));
  return 0;
}

int cmd_oracle(const Options& opt) {
  auto [inst, amb] = load(opt);
  json j;
  if (opt.xs.empty() &&
      [&] {
        for (bool b : inst.first_stage.binary)
          if (b) return true;
        return false;
      }()) {
    drtsp::OracleDrtspResult r = drtsp::oracle_drtsp(inst, amb);
    j["objective"] = jnum(r.value);
    j["x"] = jvec(r.x);
  } else {
    Vec x = parse_x(opt, inst);
    drtsp::OracleReport r = drtsp::oracle_zx_auto(inst, x, amb);
    j["x"] = jvec(x);
    j["zx"] = jnum(r.value);
    j["per_sample"] = jvec(r.per_sample);
  }
  emit(opt, render(opt, j));
  return 0;
}

int cmd_flp_gen(const Options& opt) {
  drtsp::FlpParams params;
  params.n_sites = opt.sites;
  params.n_customers = opt.customers;
  params.n_samples = opt.samples;
  params.disruption_prob = opt.pdis;
  auto [flp, ss] = drtsp::generate_flp(params, opt.seed);
  drtsp::FlpVariant v =
      opt.variant.empty() ? drtsp::FlpVariant::BoxLinf
                          : variant_from_name(opt.variant);
  PNorm p = opt.p.empty() ? default_p(v) : parse_p(opt.p);
  double theta = opt.theta >= 0.0 ? opt.theta : 0.0;
  drtsp::FlpModel m = drtsp::flp_to_drtsp(flp, ss, v, theta, p);
  emit(opt, drtsp::instance_to_json(m.inst, m.amb) + "\n");
  return 0;
}

int cmd_crossval(const Options& opt) {
  drtsp::FlpParams params;
  params.n_sites = opt.sites;
  params.n_customers = opt.customers;
  params.n_samples = opt.samples;
  params.disruption_prob = opt.pdis;
  auto [flp, train] = drtsp::generate_flp(params, opt.seed);
  drtsp::FlpVariant v =
      opt.variant.empty() ? drtsp::FlpVariant::BoxLinf
                          : variant_from_name(opt.variant);
  PNorm p = opt.p.empty() ? default_p(v) : parse_p(opt.p);
  drtsp::CrossValReport rep =
      drtsp::cross_validate(flp, train, v, parse_list(opt.grid), p,
                            opt.seed + 1, opt.holdout);
  if (opt.format == "json") {
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"built_facilities", r.built},
                      {"chosen", r.chosen},
                      {"ci_high", jnum(r.ci_high)},
                      {"ci_low", jnum(r.ci_low)},
                      {"holdout_mean", jnum(r.holdout_mean)},
                      {"opt_val", jnum(r.opt_val)},
                      {"theta", jnum(r.theta)},
                      {"time_s", jnum(r.time_s)}});
    json j;
    j["chosen_theta"] = jnum(rep.chosen_theta);
    j["none_qualified"] = rep.none_qualified;
    j["rows"] = rows;
    emit(opt, j.dump(2) + "\n");
  } else {
    emit(opt, drtsp::crossval_csv(rep));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Deterministic equivalents for distributionally robust two-stage "
      "programs over Wasserstein balls"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_instance) {
    if (needs_instance)
      sub->add_option("-i,--instance", opt.instance, "instance JSON file")
          ->required();
    sub->add_option("--theta", opt.theta, "override the Wasserstein radius");
    sub->add_option("--p", opt.p, "override the distance exponent (number or inf)");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", opt.out, "write output to a file");
    sub->add_option("--seed", opt.seed, "random seed");
  };

  auto* validate = app.add_subcommand("validate", "check an instance file");
  add_common(validate, true);
  auto* select = app.add_subcommand("select", "classify the solvable regime");
  add_common(select, true);
  auto* reform = app.add_subcommand("reformulate",
                                    "build the deterministic equivalent");
  add_common(reform, true);
  reform->add_option("--regime", opt.regime, "insist on a specific regime");
  reform->add_option("--mps-dump", opt.mps_dump, "write the model in MPS format");
  auto* solve = app.add_subcommand("solve", "solve the robust program");
  add_common(solve, true);
  solve->add_option("--regime", opt.regime, "insist on a specific regime");
  solve->add_flag("--verify", opt.verify,
                  "check the solution against the enumeration oracle");
  auto* evalzx = app.add_subcommand("eval-zx",
                                    "worst-case expected recourse at fixed x");
  add_common(evalzx, true);
  evalzx->add_option("--x", opt.xs, "first-stage point, comma separated");
  auto* oracle = app.add_subcommand("oracle", "enumeration-oracle value");
  add_common(oracle, true);
  oracle->add_option("--x", opt.xs, "first-stage point, comma separated");
  auto* flpgen = app.add_subcommand("flp-gen",
                                    "generate a facility-location instance");
  add_common(flpgen, false);
  flpgen->add_option("--variant", opt.variant, "benchmark variant");
  flpgen->add_option("--sites", opt.sites, "candidate sites");
  flpgen->add_option("--customers", opt.customers, "customers");
  flpgen->add_option("--samples", opt.samples, "training samples");
  flpgen->add_option("--pdis", opt.pdis, "disruption probability");
  auto* crossval = app.add_subcommand("crossval",
                                      "radius selection by cross-validation");
  add_common(crossval, false);
  crossval->add_option("--variant", opt.variant, "benchmark variant");
  crossval->add_option("--sites", opt.sites, "candidate sites");
  crossval->add_option("--customers", opt.customers, "customers");
  crossval->add_option("--samples", opt.samples, "training samples");
  crossval->add_option("--pdis", opt.pdis, "disruption probability");
  crossval->add_option("--grid", opt.grid, "radius grid, comma separated");
  crossval->add_option("--holdout", opt.holdout, "holdout sample count");

  CLI11_PARSE(app, argc, argv);
  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (select->parsed()) return cmd_select(opt);
    if (reform->parsed()) return cmd_reformulate(opt);
    if (solve->parsed()) return cmd_solve(opt);
    if (evalzx->parsed()) return cmd_eval_zx(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (flpgen->parsed()) return cmd_flp_gen(opt);
    if (crossval->parsed()) return cmd_crossval(opt);
  } catch (const drtsp::lp::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const drtsp::lp::ScaleError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const drtsp::SufficientlyExpensiveViolation& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
