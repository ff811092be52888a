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

#include "gfk/analogy_eval.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "gfk/parallel.hpp"

namespace gfk {
namespace {

using FoldedIndex = std::unordered_map<std::string, std::vector<Index>>;

FoldedIndex build_folded_index(const EmbeddingTable& table) {
  FoldedIndex f;
  for (Index i = 0; i < table.size(); ++i) f[ascii_lower(table.word(i))].push_back(i);
  return f;
}

// Verbatim, then lowercased, then any vocabulary word with the same folded
// form (first in vocabulary order).
std::optional<Index> resolve_word(const std::string& w, const EmbeddingTable& table,
                                  const FoldedIndex& folded) {
  if (auto i = table.find_folded(w)) return i;
  const auto it = folded.find(ascii_lower(w));
  if (it == folded.end()) return std::nullopt;
  return it->second.front();
}

std::optional<ResolvedQuestion> resolve_one(const AnalogyQuestion& q, const EmbeddingTable& table,
                                            const FoldedIndex& folded) {
  const auto a = resolve_word(q.a, table, folded);
  const auto b = resolve_word(q.b, table, folded);
  const auto x = resolve_word(q.x, table, folded);
  const auto y = resolve_word(q.y, table, folded);
  if (!a || !b || !x || !y) return std::nullopt;
  ResolvedQuestion r{*a, *b, *x, *y, {}};
  const auto it = folded.find(ascii_lower(q.y));
  if (it != folded.end()) r.gold = it->second;
  if (std::find(r.gold.begin(), r.gold.end(), *y) == r.gold.end()) r.gold.push_back(*y);
  return r;
}

std::vector<ResolvedQuestion> resolve_all(std::span<const AnalogyQuestion> questions,
                                          const EmbeddingTable& table, const FoldedIndex& folded,
                                          std::size_t* oov) {
  std::vector<ResolvedQuestion> out;
  std::size_t dropped = 0;
  for (const auto& q : questions) {
    if (auto r = resolve_one(q, table, folded)) {
      out.push_back(std::move(*r));
    } else {
      ++dropped;
    }
  }
  if (oov) *oov = dropped;
  return out;
}

std::vector<Index> holdout_key(const ResolvedQuestion& q, Holdout h) {
  switch (h) {
    case Holdout::kNone: return {};
    case Holdout::kAnswer: return {q.y};
    case Holdout::kQuestion: {
      std::vector<Index> k{q.a, q.b, q.x, q.y};
      std::sort(k.begin(), k.end());
      k.erase(std::unique(k.begin(), k.end()), k.end());
      return k;
    }
  }
  return {};
}

QuestionOutcome outcome_from(const QuestionScores& s, const ResolvedQuestion& q,
                             const EmbeddingTable& table, bool exclude_inputs) {
  QuestionOutcome o;
  std::vector<Index> excluded;
  if (exclude_inputs) {
    for (const Index w : {q.a, q.b, q.x}) {
      if (std::find(q.gold.begin(), q.gold.end(), w) == q.gold.end() &&
          std::find(excluded.begin(), excluded.end(), w) == excluded.end()) {
        excluded.push_back(w);
      }
    }
  }
  if (s.scores.size() == 0) {
    // No ranking exists; the gold answer is charged the worst possible rank.
    o.rank = table.size() - static_cast<Index>(excluded.size());
    o.correct = o.rank == 1;
    return o;
  }
  o.rank = gold_rank(s.scores, excluded, q.gold);
  o.correct = o.rank == 1;
  Index top = -1;
  for (Index i = 0; i < s.scores.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), i) != excluded.end()) continue;
    if (top < 0 || s.scores(i) > s.scores(top)) top = i;
  }
  if (top >= 0) o.predicted = table.word(top);
  return o;
}

void check_pool(const std::vector<Index>& pool, Index d, const char* category) {
  if (static_cast<Index>(pool.size()) < d) {
    throw InsufficientWordsError(std::string("category ") + category + " has " +
                                 std::to_string(pool.size()) +
                                 " usable words, fewer than subspace dimension d=" +
                                 std::to_string(d) + "; use a smaller d");
  }
}

RelationResult summarize(const std::string& name, std::span<const QuestionOutcome> outs,
                         std::size_t oov, std::size_t diagnostics) {
  RelationResult r;
  r.relation = name;
  r.n = outs.size();
  r.oov_dropped = oov;
  r.diagnostics = diagnostics;
  if (r.n == 0) return r;
  double correct = 0.0;
  double ranks = 0.0;
  for (const auto& o : outs) {
    correct += o.correct ? 1.0 : 0.0;
    ranks += static_cast<double>(o.rank);
  }
  r.accuracy = correct / static_cast<double>(r.n);
  r.average_rank = ranks / static_cast<double>(r.n);
  return r;
}

void finalize(EvalReport& rep) {
  double correct = 0.0;
  double ranks = 0.0;
  for (const auto& o : rep.outcomes) {
    correct += o.correct ? 1.0 : 0.0;
    ranks += static_cast<double>(o.rank);
  }
  rep.n_questions = rep.outcomes.size();
  if (rep.n_questions) {
    rep.micro_accuracy = correct / static_cast<double>(rep.n_questions);
    rep.micro_average_rank = ranks / static_cast<double>(rep.n_questions);
  }
}

}  // namespace

std::string holdout_name(Holdout h) {
  switch (h) {
    case Holdout::kNone: return "none";
    case Holdout::kAnswer: return "answer";
    case Holdout::kQuestion: return "question";
  }
  return "?";
}

Holdout parse_holdout(const std::string& s) {
  for (const Holdout h : {Holdout::kNone, Holdout::kAnswer, Holdout::kQuestion}) {
    if (holdout_name(h) == ascii_lower(s)) return h;
  }
  throw Error("unknown holdout policy '" + s + "' (expected none, answer or question)");
}

CategoryPools category_pools(std::span<const ResolvedQuestion> questions, Holdout holdout,
                             const ResolvedQuestion* current) {
  std::unordered_set<Index> drop_head;
  std::unordered_set<Index> drop_tail;
  if (current && holdout == Holdout::kAnswer) drop_tail.insert(current->y);
  if (current && holdout == Holdout::kQuestion) {
    for (const Index w : {current->a, current->b, current->x, current->y}) {
      drop_head.insert(w);
      drop_tail.insert(w);
    }
  }
  CategoryPools pools;
  std::unordered_set<Index> seen_head;
  std::unordered_set<Index> seen_tail;
  auto add = [](Index w, std::vector<Index>& pool, std::unordered_set<Index>& seen,
                const std::unordered_set<Index>& drop) {
    if (!drop.count(w) && seen.insert(w).second) pool.push_back(w);
  };
  for (const auto& q : questions) {
    add(q.a, pools.head, seen_head, drop_head);
    add(q.x, pools.head, seen_head, drop_head);
    add(q.b, pools.tail, seen_tail, drop_tail);
    add(q.y, pools.tail, seen_tail, drop_tail);
  }
  return pools;
}

std::vector<ResolvedQuestion> resolve_questions(std::span<const AnalogyQuestion> questions,
                                                const EmbeddingTable& table,
                                                std::size_t* oov_dropped) {
  return resolve_all(questions, table, build_folded_index(table), oov_dropped);
}

std::pair<Subspace, Subspace> relation_subspaces(const EmbeddingTable& table,
                                                 const CategoryPools& pools, Index d,
                                                 bool center) {
  check_pool(pools.head, d, "A (head)");
  check_pool(pools.tail, d, "B (tail)");
  return {subspace_from_rows(stack_rows(table, pools.head), d, center),
          subspace_from_rows(stack_rows(table, pools.tail), d, center)};
}

std::pair<Subspace, Subspace> relation_subspaces(std::span<const AnalogyQuestion> questions,
                                                 const EmbeddingTable& table, Index d,
                                                 Holdout holdout, const AnalogyQuestion* current,
                                                 bool center) {
  const FoldedIndex folded = build_folded_index(table);
  const auto resolved = resolve_all(questions, table, folded, nullptr);
  std::optional<ResolvedQuestion> cur;
  if (current && holdout != Holdout::kNone) {
    cur = resolve_one(*current, table, folded);
    if (!cur) throw Error("current question has an out-of-vocabulary word");
  }
  return relation_subspaces(table, category_pools(resolved, holdout, cur ? &*cur : nullptr), d,
                            center);
}

const RelationResult* EvalReport::find(const std::string& relation) const {
  for (const auto& r : per_relation) {
    if (r.relation == relation) return &r;
  }
  return nullptr;
}

std::vector<EvalReport> evaluate(const RelationDataset& dataset, const EmbeddingTable& table,
                                 const EvalConfig& config) {
  if (config.measures.empty()) throw Error("evaluate: no measures configured");
  if (!(config.epsilon > 0.0)) throw Error("evaluate: epsilon must be positive");
  if (config.subspace_dim < 1) throw Error("evaluate: subspace dimension must be >= 1");
  if (table.empty()) throw Error("evaluate: empty embedding table");

  const FoldedIndex folded = build_folded_index(table);
  const SimilaritySpace plain = SimilaritySpace::plain(table);
  const ScoreOptions opts{config.epsilon, config.shift_cosines};
  const bool any_kernel =
      std::any_of(config.measures.begin(), config.measures.end(), is_kernel_measure);

  std::vector<EvalReport> reports(config.measures.size());
  for (std::size_t m = 0; m < reports.size(); ++m) reports[m].measure = config.measures[m];

  for (const auto& rel : dataset.relations) {
    std::size_t oov = 0;
    const auto qs = resolve_all(rel.questions, table, folded, &oov);
    if (oov) {
      warn("relation " + rel.name + ": dropped " + std::to_string(oov) +
           " question(s) with out-of-vocabulary words");
    }
    const std::size_t n = qs.size();
    std::vector<std::vector<QuestionOutcome>> outs(reports.size(),
                                                   std::vector<QuestionOutcome>(n));
    std::vector<std::vector<char>> diag(reports.size(), std::vector<char>(n, 0));

    auto record = [&](std::size_t m, std::size_t qi, const QuestionScores& s) {
      QuestionOutcome o = outcome_from(s, qs[qi], table, config.exclude_inputs);
      o.relation = rel.name;
      o.question = qi;
      outs[m][qi] = std::move(o);
      diag[m][qi] = s.diagnostic.empty() ? 0 : 1;
    };

    parallel_for(n, config.threads, [&](std::size_t qi) {
      const auto& q = qs[qi];
      for (std::size_t m = 0; m < reports.size(); ++m) {
        if (is_kernel_measure(config.measures[m])) continue;
        record(m, qi, score_question(plain, objective_of(config.measures[m]), q.a, q.b, q.x,
                                     opts));
      }
    });

    std::string kernel_skip;
    if (any_kernel && n > 0) {
      // Questions sharing a held-out word set share one kernel.
      std::map<std::vector<Index>, std::vector<std::size_t>> groups;
      for (std::size_t qi = 0; qi < n; ++qi) {
        groups[holdout_key(qs[qi], config.holdout)].push_back(qi);
      }
      std::vector<const std::vector<std::size_t>*> members;
      for (const auto& [key, idx] : groups) members.push_back(&idx);
      std::vector<std::string> failures(members.size());

      parallel_for(members.size(), config.threads, [&](std::size_t g) {
        const auto& idx = *members[g];
        const ResolvedQuestion* current =
            config.holdout == Holdout::kNone ? nullptr : &qs[idx.front()];
        std::optional<SimilaritySpace> space;
        try {
          const auto [ph, pt] = relation_subspaces(
              table, category_pools(qs, config.holdout, current), config.subspace_dim,
              config.center);
          space = SimilaritySpace::kernel(table, gfk(principal_angles(ph, pt)));
        } catch (const Error& e) {
          failures[g] = e.what();
          return;
        }
        for (const std::size_t qi : idx) {
          const auto& q = qs[qi];
          for (std::size_t m = 0; m < reports.size(); ++m) {
            if (!is_kernel_measure(config.measures[m])) continue;
            record(m, qi, score_question(*space, objective_of(config.measures[m]), q.a, q.b,
                                         q.x, opts));
          }
        }
      });
      for (const auto& f : failures) {
        if (!f.empty()) {
          kernel_skip = f;
          break;
        }
      }
      if (!kernel_skip.empty()) {
        warn("relation " + rel.name + " skipped for kernel measures: " + kernel_skip);
      }
    }

    for (std::size_t m = 0; m < reports.size(); ++m) {
      auto& rep = reports[m];
      rep.oov_dropped += oov;
      if (is_kernel_measure(config.measures[m]) && !kernel_skip.empty()) {
        rep.skipped.push_back({rel.name, kernel_skip});
        continue;
      }
      std::size_t nd = 0;
      for (const char c : diag[m]) nd += static_cast<std::size_t>(c);
      rep.diagnostics += nd;
      rep.per_relation.push_back(summarize(rel.name, outs[m], oov, nd));
      for (auto& o : outs[m]) rep.outcomes.push_back(std::move(o));
    }
  }
  for (auto& rep : reports) finalize(rep);
  return reports;
}

std::vector<SweepCell> dimension_sweep(const RelationDataset& dataset, const EmbeddingTable& table,
                                       const EvalConfig& config, std::span<const Index> dims) {
  EvalConfig flat = config;
  flat.measures.clear();
  EvalConfig kernel = config;
  kernel.measures.clear();
  for (const Measure m : config.measures) {
    (is_kernel_measure(m) ? kernel : flat).measures.push_back(m);
  }

  std::map<Measure, std::optional<double>> baseline;
  if (!flat.measures.empty()) {
    for (const auto& rep : evaluate(dataset, table, flat)) {
      baseline[rep.measure] =
          rep.n_questions ? std::optional<double>(rep.micro_accuracy) : std::nullopt;
    }
  }

  std::vector<SweepCell> cells;
  for (const Index d : dims) {
    std::map<Measure, std::optional<double>> at_d;
    if (!kernel.measures.empty()) {
      if (d >= 1 && d < table.dim()) {
        kernel.subspace_dim = d;
        for (const auto& rep : evaluate(dataset, table, kernel)) {
          at_d[rep.measure] =
              rep.n_questions ? std::optional<double>(rep.micro_accuracy) : std::nullopt;
        }
      } else {
        warn("sweep: d=" + std::to_string(d) + " must satisfy 1 <= d < D=" +
             std::to_string(table.dim()));
      }
    }
    for (const Measure m : config.measures) {
      cells.push_back({d, m, is_kernel_measure(m) ? at_d[m] : baseline[m]});
    }
  }
  return cells;
}

}  // namespace gfk
