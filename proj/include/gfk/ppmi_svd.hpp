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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

#include "gfk/common.hpp"
#include "gfk/embedding_store.hpp"

namespace gfk {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Documents of whitespace-separated tokens. Context windows never cross a
/// document boundary.
using Corpus = std::vector<std::vector<std::string>>;

/// Blank lines separate documents.
Corpus read_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

struct CooccurrenceOptions {
  int window = 2;
  bool positional = false;
  /// Tokens rarer than this are removed from the corpus before windowing.
  std::int64_t min_count = 0;
};

/// Column key. `offset` is the signed displacement for positional contexts and
/// 0 otherwise.
struct ContextKey {
  Index token = 0;
  int offset = 0;
  friend bool operator==(const ContextKey&, const ContextKey&) = default;
};

/// Word-by-context count matrix. Counts are nonnegative integers held exactly
/// in doubles.
struct CooccurrenceCounts {
  std::vector<std::string> words;  // ordered by descending frequency, ties lexicographic
  std::vector<ContextKey> contexts;
  SparseMatrix counts;
  double total = 0.0;
  int window = 0;
  bool positional = false;
  std::unordered_map<std::string, Index> word_ids;

  std::optional<Index> word_index(const std::string& token) const;
  std::optional<Index> context_index(const std::string& token, int offset = 0) const;
  double count(const std::string& word, const std::string& context, int offset = 0) const;
};

CooccurrenceCounts build_cooccurrence(const Corpus& corpus, const CooccurrenceOptions& opts);

/// max(0, log(c_ij * total / (row_i * col_j))); zero cells stay structurally zero.
SparseMatrix ppmi_transform(const CooccurrenceCounts& c);
SparseMatrix ppmi_transform(const SparseMatrix& counts);

struct TruncatedSvd {
  Matrix u;      // rows x k
  Vector sigma;  // k, descending
  Matrix v;      // cols x k
};

struct SvdOptions {
  /// Both matrix dimensions at or below this use a dense SVD; larger inputs
  /// stay sparse and go through randomized subspace iteration.
  Index dense_limit = 5000;
  Index oversample = 10;
  int power_iterations = 8;
  std::uint64_t seed = 0x5eed;
};

/// Rank-`rank` SVD. Asking for more than the numerical rank returns only the
/// numerical rank (with a warning).
TruncatedSvd truncated_svd(const SparseMatrix& m, Index rank, const SvdOptions& opts = {});

/// u * diag(sigma^eigen_weight).
RowMatrix weighted_left_factors(const TruncatedSvd& svd, double eigen_weight);

/// Dense word vectors from the rows of `m`; words whose vector comes out zero
/// are dropped.
EmbeddingTable truncated_svd_embed(const SparseMatrix& m, const std::vector<std::string>& words,
                                   Index dim, double eigen_weight = 0.5,
                                   const SvdOptions& opts = {});

}  // namespace gfk
