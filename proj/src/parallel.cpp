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

#include "drtsp/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>

#ifdef DRTSP_HAVE_OPENMP
#include <omp.h>
#endif

namespace drtsp {
namespace {
std::atomic<bool> g_serial{false};
}

void set_serial_mode(bool serial) { g_serial.store(serial); }
bool serial_mode() { return g_serial.load(); }

int worker_count() {
#ifdef DRTSP_HAVE_OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* cap = std::getenv("DRTSP_THREADS")) {
    int c = std::atoi(cap);
    if (c >= 1 && c < n) n = c;
  }
  return n;
}

void for_each_index(int n, const std::function<void(int)>& fn) {
#ifdef DRTSP_HAVE_OPENMP
  if (!serial_mode() && n > 1) {
    const int workers = worker_count();
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < n; ++i) {
      if (failed.load()) continue;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

}  // namespace drtsp
