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

// Compares the serial reference per-sample loop against the parallel worker
// pool on a seeded facility-location evaluation workload and checks that
// both produce identical values.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "drtsp/flp/flp.hpp"
#include "drtsp/model.hpp"
#include "drtsp/parallel.hpp"
#include "drtsp/reform/evaluate.hpp"

int main(int argc, char** argv) {
  int n_samples = argc > 1 ? std::atoi(argv[1]) : 200;
  drtsp::FlpParams params;
  params.n_sites = 6;
  params.n_customers = 8;
  params.n_samples = n_samples;
  auto [flp, ss] = drtsp::generate_flp(params, 7u);
  drtsp::FlpModel m =
      // Demand-only ambiguity keeps every per-sample program feasible at the
      // all-built first stage used below.
      drtsp::flp_to_drtsp(flp, ss, drtsp::FlpVariant::DemandOnly, 0.1,
                          drtsp::PNorm::inf());
  drtsp::Vec x(flp.n_sites, 1.0);
  drtsp::Regime reg = drtsp::classify_regime(m.inst, m.amb);

  auto run = [&](bool serial) {
    drtsp::set_serial_mode(serial);
    auto t0 = std::chrono::steady_clock::now();
    drtsp::ZxResult r = drtsp::evaluate_zx(m.inst, x, m.amb, reg);
    auto t1 = std::chrono::steady_clock::now();
    return std::pair<double, double>(
        r.value, std::chrono::duration<double>(t1 - t0).count());
  };

  auto [v_serial, t_serial] = run(true);
  auto [v_par, t_par] = run(false);
  drtsp::set_serial_mode(false);
  std::printf("samples:          %d\n", n_samples);
  std::printf("workers:          %d\n", drtsp::worker_count());
  std::printf("serial   value %.9g  time %.3fs\n", v_serial, t_serial);
  std::printf("parallel value %.9g  time %.3fs\n", v_par, t_par);
  std::printf("speedup:          %.2fx\n", t_par > 0 ? t_serial / t_par : 0.0);
  if (std::fabs(v_serial - v_par) > 1e-9 * (1.0 + std::fabs(v_serial))) {
    std::printf("MISMATCH between serial and parallel values\n");
    return 1;
  }
  std::printf("values agree\n");
  return 0;
}
