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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gfk/analogy_dataset.hpp"
#include "gfk/common.hpp"
#include "gfk/embedding_store.hpp"
#include "gfk/grassmann.hpp"

namespace gfk {

enum class Measure { kCosAdd, kCosMul, kGfkCosAdd, kGfkCosMul };

inline constexpr Measure kAllMeasures[] = {Measure::kCosAdd, Measure::kCosMul,
                                           Measure::kGfkCosAdd, Measure::kGfkCosMul};

std::string measure_name(Measure m);
/// Accepts cosadd, cosmul, gfkcosadd, gfkcosmul (any case).
Measure parse_measure(const std::string& s);
inline bool is_kernel_measure(Measure m) {
  return m == Measure::kGfkCosAdd || m == Measure::kGfkCosMul;
}

enum class Objective { kAdd, kMul };
inline Objective objective_of(Measure m) {
  return (m == Measure::kCosAdd || m == Measure::kGfkCosAdd) ? Objective::kAdd : Objective::kMul;
}

/// Rows in which cosines are taken: either the embeddings themselves (a
/// non-owning view, so the table must outlive the space) or their kernel-space
/// coordinates E * M for a kernel's projection map M.
class SimilaritySpace {
 public:
  static SimilaritySpace plain(const EmbeddingTable& table);
  static SimilaritySpace kernel(const EmbeddingTable& table, const GfkKernel& k);

  Index size() const { return rows_->rows(); }
  const RowMatrix& rows() const { return *rows_; }
  const Vector& norms() const { return norms_; }
  /// Row has (numerically) zero norm in this space.
  bool degenerate(Index i) const { return norms_(i) < 1e-12; }

  /// Cosine of every row with `target`; degenerate rows score -1. Returns an
  /// empty vector when `target` itself is numerically zero.
  Vector similarities(const Vector& target) const;
  Vector similarities_to_row(Index i) const;

 private:
  SimilaritySpace() = default;
  std::shared_ptr<const RowMatrix> owned_;
  const RowMatrix* rows_ = nullptr;
  Vector norms_;
};

struct ScoreOptions {
  double epsilon = 0.001;
  /// Map cosines to (cos + 1) / 2 before the multiplicative objective.
  bool shift_cosines = true;
};

struct QuestionScores {
  Vector scores;  // one per vocabulary row; empty if the question is degenerate
  bool degenerate_inputs = false;
  std::string diagnostic;
};

/// Scores every vocabulary word as the answer to (a : b :: x : ?).
QuestionScores score_question(const SimilaritySpace& space, Objective objective, Index a, Index b,
                              Index x, const ScoreOptions& opts);

/// Multiplicative objective for a single candidate, inputs already shifted.
inline double cos_mul_score(double sim_b, double sim_x, double sim_a, double epsilon) {
  return sim_b * sim_x / (sim_a + epsilon);
}

struct Candidate {
  Index word;
  double score;
};
using Ranking = std::vector<Candidate>;

/// Descending by score, ties to the lower vocabulary index. `excluded` rows are
/// left out.
Ranking rank_candidates(const Vector& scores, std::span<const Index> excluded = {});

/// 1-based rank of the best-placed gold row among non-excluded candidates,
/// using the same ordering as rank_candidates.
Index gold_rank(const Vector& scores, std::span<const Index> excluded,
                std::span<const Index> gold);

Ranking cos_add_answer(const AnalogyQuestion& q, const EmbeddingTable& table,
                       bool exclude_inputs = true);
Ranking cos_mul_answer(const AnalogyQuestion& q, const EmbeddingTable& table,
                       double epsilon = 0.001, bool exclude_inputs = true,
                       bool shift_cosines = true);
Ranking gfk_answer(const AnalogyQuestion& q, const EmbeddingTable& table, const GfkKernel& kernel,
                   Objective mode, double epsilon = 0.001, bool exclude_inputs = true,
                   bool shift_cosines = true);

}  // namespace gfk
