// Copyright 2026 The gfk-analogy Authors.
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
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gfk/common.hpp"

namespace gfk::cli {

/// Runs the gfk-analogy command line. `args` excludes the program name.
/// Exit status: 0 success, 1 runtime error, 2 usage error or unreadable input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "20:200:20", "1:40" (step 1) or "20,40,80".
std::vector<Index> parse_dims(const std::string& text);

}  // namespace gfk::cli
