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

#include <string>
#include <utility>

#include "drtsp/model.hpp"

namespace drtsp {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance files are JSON objects: {"n1","n2","m1","m2","l","c",
// "first_stage":{"A","b","lb","ub","binary"},"W","Q","q",
// "T":{"base","coeffs","sign"},"h":{"base","H"},
// "ambiguity":{"p","theta","support_q","support_T","samples_q","samples_T"}}.
// "p" is a number or the string "inf"; supports are "free", "binary", or a
// fixed-vector array; matrices are row-major arrays of arrays.
std::pair<DrtspInstance, AmbiguitySet> parse_instance(const std::string& text);
std::pair<DrtspInstance, AmbiguitySet> load_instance(const std::string& path);
std::string instance_to_json(const DrtspInstance& inst,
                             const AmbiguitySet& amb);
void save_instance(const std::string& path, const DrtspInstance& inst,
                   const AmbiguitySet& amb);

}  // namespace drtsp
