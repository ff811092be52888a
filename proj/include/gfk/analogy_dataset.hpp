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

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "gfk/common.hpp"

namespace gfk {

/// "a is to b as x is to y"; y is the word to recover.
struct AnalogyQuestion {
  std::string a;
  std::string b;
  std::string x;
  std::string y;
  std::string relation;
};

struct Relation {
  std::string name;
  std::vector<AnalogyQuestion> questions;
};

enum class DatasetSource { kGoogle, kMsr, kOther };

/// Relations in file order (Google) or in the fixed class order adjectives,
/// nouns, verbs (MSR). Classes with no questions are omitted.
struct RelationDataset {
  std::vector<Relation> relations;
  DatasetSource source = DatasetSource::kOther;

  std::size_t question_count() const;
  const Relation* find(const std::string& name) const;
  std::vector<std::string> relation_names() const;
};

/// ": <relation>" headers followed by 4-token question lines.
RelationDataset parse_google(std::istream& in, const std::string& source = "<stream>");
RelationDataset parse_google(const std::filesystem::path& path);

/// Where the POS/relation tag sits on an MSR line of five tokens.
enum class MsrLayout { kTagLast, kTagFirst };

/// The tag's leading POS (JJ*, NN*, VB*) selects the class.
std::string msr_class_for_tag(const std::string& tag);

RelationDataset parse_msr(std::istream& in, MsrLayout layout = MsrLayout::kTagLast,
                          const std::string& source = "<stream>");
RelationDataset parse_msr(const std::filesystem::path& path,
                          MsrLayout layout = MsrLayout::kTagLast);

void write_google(std::ostream& out, const RelationDataset& ds);

}  // namespace gfk
