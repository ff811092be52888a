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

#include "gfk/analogy_dataset.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace gfk {
namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  std::string tok;
  while (ls >> tok) out.push_back(std::move(tok));
  return out;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open analogy dataset " + path.string());
  return in;
}

}  // namespace

std::size_t RelationDataset::question_count() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.questions.size();
  return n;
}

const Relation* RelationDataset::find(const std::string& name) const {
  for (const auto& r : relations) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::vector<std::string> RelationDataset::relation_names() const {
  std::vector<std::string> out;
  for (const auto& r : relations) out.push_back(r.name);
  return out;
}

RelationDataset parse_google(std::istream& in, const std::string& source) {
  RelationDataset ds;
  ds.source = DatasetSource::kGoogle;
  std::string line;
  std::size_t lineno = 0;
  Relation* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (toks[0] == ":" || toks[0].front() == ':') {
      std::string name = toks[0] == ":" ? (toks.size() > 1 ? toks[1] : "") : toks[0].substr(1);
      if (name.empty()) throw ParseError(source, lineno, "relation header without a name");
      ds.relations.push_back({std::move(name), {}});
      current = &ds.relations.back();
      continue;
    }
    if (!current) throw ParseError(source, lineno, "question before any ': <relation>' header");
    if (toks.size() != 4) {
      throw ParseError(source, lineno,
                       "expected 4 tokens, got " + std::to_string(toks.size()));
    }
    current->questions.push_back({toks[0], toks[1], toks[2], toks[3], current->name});
  }
  if (ds.relations.empty()) warn(source + ": analogy dataset is empty");
  return ds;
}

RelationDataset parse_google(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_google(in, path.string());
}

std::string msr_class_for_tag(const std::string& tag) {
  if (tag.rfind("JJ", 0) == 0) return "adjectives";
  if (tag.rfind("NN", 0) == 0) return "nouns";
  if (tag.rfind("VB", 0) == 0) return "verbs";
  return {};
}

RelationDataset parse_msr(std::istream& in, MsrLayout layout, const std::string& source) {
  static const std::array<std::string, 3> kClasses = {"adjectives", "nouns", "verbs"};
  std::array<Relation, 3> buckets;
  for (std::size_t c = 0; c < kClasses.size(); ++c) buckets[c].name = kClasses[c];

  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (toks.size() != 5) {
      throw ParseError(source, lineno,
                       "expected 4 words and a tag, got " + std::to_string(toks.size()) +
                           " tokens");
    }
    const std::size_t off = layout == MsrLayout::kTagFirst ? 1 : 0;
    const std::string& tag = layout == MsrLayout::kTagFirst ? toks[0] : toks[4];
    const std::string cls = msr_class_for_tag(tag);
    if (cls.empty()) throw ParseError(source, lineno, "unrecognized relation tag '" + tag + "'");
    for (std::size_t c = 0; c < kClasses.size(); ++c) {
      if (kClasses[c] == cls) {
        buckets[c].questions.push_back(
            {toks[off], toks[off + 1], toks[off + 2], toks[off + 3], cls});
      }
    }
    ++n;
  }
  RelationDataset ds;
  ds.source = DatasetSource::kMsr;
  for (auto& b : buckets) {
    if (!b.questions.empty()) ds.relations.push_back(std::move(b));
  }
  if (n == 0) warn(source + ": analogy dataset is empty");
  return ds;
}

RelationDataset parse_msr(const std::filesystem::path& path, MsrLayout layout) {
  auto in = open_or_throw(path);
  return parse_msr(in, layout, path.string());
}

void write_google(std::ostream& out, const RelationDataset& ds) {
  for (const auto& r : ds.relations) {
    out << ": " << r.name << '\n';
    for (const auto& q : r.questions) {
      out << q.a << ' ' << q.b << ' ' << q.x << ' ' << q.y << '\n';
    }
  }
}

}  // namespace gfk
