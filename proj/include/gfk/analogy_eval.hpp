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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfk/analogy_dataset.hpp"
#include "gfk/analogy_scoring.hpp"
#include "gfk/embedding_store.hpp"
#include "gfk/grassmann.hpp"

namespace gfk {

/// Which of a question's own words are withheld from the subspace material
/// used to answer it.
enum class Holdout {
  kNone,      // one kernel per relation
  kAnswer,    // drop y from the tail pool
  kQuestion,  // drop a, b, x, y from both pools
};

std::string holdout_name(Holdout h);
Holdout parse_holdout(const std::string& s);

/// Raised when a category pool cannot support the requested subspace size.
class InsufficientWordsError : public Error {
 public:
  using Error::Error;
};

struct EvalConfig {
  std::vector<Measure> measures{std::begin(kAllMeasures), std::end(kAllMeasures)};
  Index subspace_dim = 40;
  double epsilon = 0.001;
  Holdout holdout = Holdout::kAnswer;
  bool exclude_inputs = true;
  bool shift_cosines = true;
  bool center = false;
  int threads = 1;
};

/// A question with its words resolved to vocabulary rows. `gold` holds every
/// row matching y case-insensitively.
struct ResolvedQuestion {
  Index a = 0;
  Index b = 0;
  Index x = 0;
  Index y = 0;
  std::vector<Index> gold;
};

/// Category A material is every a and x; category B is every b and y. Rows
/// are unique and in first-appearance order.
struct CategoryPools {
  std::vector<Index> head;
  std::vector<Index> tail;
};

CategoryPools category_pools(std::span<const ResolvedQuestion> questions, Holdout holdout,
                             const ResolvedQuestion* current);

/// Resolves every question; questions with an out-of-vocabulary word are
/// dropped and counted in `oov_dropped`.
std::vector<ResolvedQuestion> resolve_questions(std::span<const AnalogyQuestion> questions,
                                                const EmbeddingTable& table,
                                                std::size_t* oov_dropped = nullptr);

/// Head and tail subspaces of dimension d learned from the relation's pools
/// after applying the holdout for `current` (ignored for Holdout::kNone).
std::pair<Subspace, Subspace> relation_subspaces(std::span<const AnalogyQuestion> questions,
                                                 const EmbeddingTable& table, Index d,
                                                 Holdout holdout,
                                                 const AnalogyQuestion* current = nullptr,
                                                 bool center = false);
std::pair<Subspace, Subspace> relation_subspaces(const EmbeddingTable& table,
                                                 const CategoryPools& pools, Index d,
                                                 bool center = false);

struct QuestionOutcome {
  std::string relation;
  std::size_t question = 0;  // index within the relation after OOV filtering
  Index rank = 0;
  bool correct = false;
  std::string predicted;  // empty when no ranking could be formed
};

struct RelationResult {
  std::string relation;
  std::size_t n = 0;
  double accuracy = 0.0;
  double average_rank = 0.0;
  std::size_t oov_dropped = 0;
  std::size_t diagnostics = 0;
};

struct SkippedRelation {
  std::string relation;
  std::string reason;
};

struct EvalReport {
  Measure measure = Measure::kCosAdd;
  std::vector<RelationResult> per_relation;
  std::size_t n_questions = 0;
  double micro_accuracy = 0.0;
  double micro_average_rank = 0.0;
  std::size_t oov_dropped = 0;
  std::size_t diagnostics = 0;
  std::vector<SkippedRelation> skipped;
  std::vector<QuestionOutcome> outcomes;

  const RelationResult* find(const std::string& relation) const;
};

/// One report per configured measure, in configuration order. Kernel measures
/// skip (and report) relations whose pools are too small for the subspace size.
std::vector<EvalReport> evaluate(const RelationDataset& dataset, const EmbeddingTable& table,
                                 const EvalConfig& config);

struct SweepCell {
  Index d = 0;
  Measure measure = Measure::kCosAdd;
  std::optional<double> accuracy;  // absent when no relation could be evaluated at d
};

/// Kernel measures are re-run per d; the others are computed once and repeated
/// as flat baselines.
std::vector<SweepCell> dimension_sweep(const RelationDataset& dataset, const EmbeddingTable& table,
                                       const EvalConfig& config, std::span<const Index> dims);

}  // namespace gfk
