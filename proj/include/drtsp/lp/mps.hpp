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

#include <ostream>
#include <string>

#include "drtsp/lp/linear_model.hpp"

namespace drtsp::lp {

// Serializes the model in MPS format (free-style spacing, fixed section
// order). Binary columns are emitted inside INTORG/INTEND markers and get BV
// bound records.
void write_mps(const LinearModel& model, std::ostream& os,
               const std::string& name = "DRTSP");

}  // namespace drtsp::lp
