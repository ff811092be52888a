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

#include "gfk/analogy_scoring.hpp"

#include <algorithm>
#include <numeric>

namespace gfk {
namespace {

Vector row_norms(const RowMatrix& m) { return m.rowwise().norm(); }

Index require(const EmbeddingTable& table, const std::string& w) {
  const auto i = table.find_folded(w);
  if (!i) throw Error("word not in vocabulary: " + w);
  return *i;
}

Ranking answer_in(const SimilaritySpace& space, const AnalogyQuestion& q,
                  const EmbeddingTable& table, Objective mode, const ScoreOptions& opts,
                  bool exclude_inputs) {
  const Index a = require(table, q.a);
  const Index b = require(table, q.b);
  const Index x = require(table, q.x);
  const QuestionScores s = score_question(space, mode, a, b, x, opts);
  if (!s.diagnostic.empty()) warn(s.diagnostic);
  if (s.scores.size() == 0) return {};
  const Index ex[] = {a, b, x};
  return rank_candidates(s.scores, exclude_inputs ? std::span<const Index>(ex)
                                                  : std::span<const Index>());
}

}  // namespace

std::string measure_name(Measure m) {
  switch (m) {
    case Measure::kCosAdd: return "CosADD";
    case Measure::kCosMul: return "CosMUL";
    case Measure::kGfkCosAdd: return "GFKCosADD";
    case Measure::kGfkCosMul: return "GFKCosMUL";
  }
  return "?";
}

Measure parse_measure(const std::string& s) {
  const std::string l = ascii_lower(s);
  for (const Measure m : kAllMeasures) {
    if (ascii_lower(measure_name(m)) == l) return m;
  }
  throw Error("unknown measure '" + s + "'");
}

SimilaritySpace SimilaritySpace::plain(const EmbeddingTable& table) {
  SimilaritySpace s;
  s.rows_ = &table.vectors();
  s.norms_ = row_norms(table.vectors());
  return s;
}

SimilaritySpace SimilaritySpace::kernel(const EmbeddingTable& table, const GfkKernel& k) {
  if (k.ambient_dim() != table.dim()) {
    throw Error("kernel dimension " + std::to_string(k.ambient_dim()) +
                " does not match embeddings " + std::to_string(table.dim()));
  }
  SimilaritySpace s;
  auto projected = std::make_shared<RowMatrix>(table.vectors() * k.projection_map());
  s.norms_ = row_norms(*projected);
  s.owned_ = std::move(projected);
  s.rows_ = s.owned_.get();
  return s;
}

Vector SimilaritySpace::similarities(const Vector& target) const {
  const double tn = target.norm();
  if (!(tn >= 1e-12)) return {};
  Vector out = *rows_ * target;
  for (Index i = 0; i < out.size(); ++i) {
    out(i) = degenerate(i) ? -1.0 : std::clamp(out(i) / (norms_(i) * tn), -1.0, 1.0);
  }
  return out;
}

Vector SimilaritySpace::similarities_to_row(Index i) const {
  if (degenerate(i)) return Vector::Constant(size(), -1.0);
  return similarities(rows_->row(i).transpose());
}

QuestionScores score_question(const SimilaritySpace& space, Objective objective, Index a, Index b,
                              Index x, const ScoreOptions& opts) {
  QuestionScores out;
  out.degenerate_inputs = space.degenerate(a) || space.degenerate(b) || space.degenerate(x);
  if (out.degenerate_inputs) out.diagnostic = "question input has zero norm in the scoring space";
  if (objective == Objective::kAdd) {
    const Vector target = (space.rows().row(x) - space.rows().row(a) + space.rows().row(b))
                              .transpose();
    out.scores = space.similarities(target);
    if (out.scores.size() == 0) out.diagnostic = "analogy target vector is numerically zero";
    return out;
  }
  if (!(opts.epsilon > 0.0)) throw Error("epsilon must be positive");
  Vector sa = space.similarities_to_row(a);
  Vector sb = space.similarities_to_row(b);
  Vector sx = space.similarities_to_row(x);
  if (opts.shift_cosines) {
    sa = (sa.array() + 1.0) / 2.0;
    sb = (sb.array() + 1.0) / 2.0;
    sx = (sx.array() + 1.0) / 2.0;
  }
  out.scores.resize(space.size());
  for (Index i = 0; i < space.size(); ++i) {
    out.scores(i) = cos_mul_score(sb(i), sx(i), sa(i), opts.epsilon);
  }
  return out;
}

Ranking rank_candidates(const Vector& scores, std::span<const Index> excluded) {
  std::vector<char> skip(static_cast<std::size_t>(scores.size()), 0);
  for (const Index e : excluded) skip[static_cast<std::size_t>(e)] = 1;
  Ranking r;
  r.reserve(static_cast<std::size_t>(scores.size()));
  for (Index i = 0; i < scores.size(); ++i) {
    if (!skip[static_cast<std::size_t>(i)]) r.push_back({i, scores(i)});
  }
  std::sort(r.begin(), r.end(), [](const Candidate& p, const Candidate& q) {
    return p.score != q.score ? p.score > q.score : p.word < q.word;
  });
  return r;
}

Index gold_rank(const Vector& scores, std::span<const Index> excluded,
                std::span<const Index> gold) {
  auto contains = [](std::span<const Index> set, Index i) {
    return std::find(set.begin(), set.end(), i) != set.end();
  };
  auto ahead = [&](Index p, Index q) {
    return scores(p) != scores(q) ? scores(p) > scores(q) : p < q;
  };
  Index best = -1;
  for (const Index g : gold) {
    if (contains(excluded, g)) continue;
    if (best < 0 || ahead(g, best)) best = g;
  }
  if (best < 0) throw Error("gold_rank: no eligible gold candidate");
  Index rank = 1;
  for (Index i = 0; i < scores.size(); ++i) {
    if (i == best || contains(excluded, i) || contains(gold, i)) continue;
    if (ahead(i, best)) ++rank;
  }
  return rank;
}

Ranking cos_add_answer(const AnalogyQuestion& q, const EmbeddingTable& table,
                       bool exclude_inputs) {
  return answer_in(SimilaritySpace::plain(table), q, table, Objective::kAdd, {}, exclude_inputs);
}

Ranking cos_mul_answer(const AnalogyQuestion& q, const EmbeddingTable& table, double epsilon,
                       bool exclude_inputs, bool shift_cosines) {
  return answer_in(SimilaritySpace::plain(table), q, table, Objective::kMul,
                   {epsilon, shift_cosines}, exclude_inputs);
}

Ranking gfk_answer(const AnalogyQuestion& q, const EmbeddingTable& table, const GfkKernel& kernel,
                   Objective mode, double epsilon, bool exclude_inputs, bool shift_cosines) {
  return answer_in(SimilaritySpace::kernel(table, kernel), q, table, mode,
                   {epsilon, shift_cosines}, exclude_inputs);
}

}  // namespace gfk
