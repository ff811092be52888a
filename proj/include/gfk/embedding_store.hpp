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
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfk/common.hpp"

namespace gfk {

/// Vocabulary plus one dense row per word. Immutable once built, so it can be
/// shared read-only across evaluation workers.
///
/// Rows are never all-zero: construction drops zero rows (with a warning), and
/// duplicate words keep their first occurrence.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  /// Builds a table from parallel word/row data, applying the duplicate and
  /// zero-row policies. `rows.rows()` must equal `words.size()`.
  static EmbeddingTable from_rows(std::vector<std::string> words, RowMatrix rows,
                                  bool normalize = false);

  Index size() const { return vectors_.rows(); }
  Index dim() const { return vectors_.cols(); }
  bool empty() const { return vectors_.rows() == 0; }

  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(Index i) const { return words_[static_cast<std::size_t>(i)]; }
  const RowMatrix& vectors() const { return vectors_; }
  auto row(Index i) const { return vectors_.row(i); }

  std::optional<Index> find(std::string_view word) const;
  /// Verbatim lookup first, then the ASCII-lowercased form.
  std::optional<Index> find_folded(std::string_view word) const;
  std::optional<Vector> lookup(std::string_view word) const;

  /// Every row scaled to unit Euclidean norm. Rows already within 1e-12 of
  /// unit norm are left bit-for-bit untouched, which makes this idempotent.
  EmbeddingTable normalized() const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, Index> index_;
  RowMatrix vectors_;
};

/// Reads "<|V|> <D>" followed by "<word> v1 ... vD" lines.
EmbeddingTable load_text_embeddings(const std::filesystem::path& path, bool normalize);
EmbeddingTable read_text_embeddings(std::istream& in, bool normalize,
                                    const std::string& source = "<stream>");

/// Writes the same text format with 17 significant digits (lossless for doubles).
void save_text_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);
void write_text_embeddings(const EmbeddingTable& table, std::ostream& out);

/// Stacks the rows of `words` in order. Throws naming the first absent word.
RowMatrix stack_rows(const EmbeddingTable& table, std::span<const std::string> words);
RowMatrix stack_rows(const EmbeddingTable& table, std::span<const Index> rows);

std::string ascii_lower(std::string_view s);

}  // namespace gfk
