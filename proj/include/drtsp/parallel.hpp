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

#include <functional>

namespace drtsp {

// When true, per-sample work runs on the plain serial path (the reference
// implementation); otherwise an OpenMP worker pool is used when available.
// DRTSP_THREADS caps the pool size.
void set_serial_mode(bool serial);
bool serial_mode();
int worker_count();

// Runs fn(0..n-1); results must be written to per-index slots so the
// reduction order is independent of scheduling.
void for_each_index(int n, const std::function<void(int)>& fn);

}  // namespace drtsp
