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

#include <iostream>
#include <mutex>
#include <utility>

#include "gfk/common.hpp"

namespace gfk {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink() {
  static WarningSink s = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return s;
}

}  // namespace

void set_warning_sink(WarningSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(s);
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(message);
}

ScopedWarningSink::ScopedWarningSink(WarningSink s) {
  std::lock_guard lock(sink_mutex());
  previous_ = std::move(sink());
  sink() = std::move(s);
}

ScopedWarningSink::ScopedWarningSink(std::vector<std::string>* out)
    : ScopedWarningSink([out](std::string_view msg) { out->emplace_back(msg); }) {}

ScopedWarningSink::~ScopedWarningSink() {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(previous_);
}

}  // namespace gfk
