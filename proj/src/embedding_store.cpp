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

#include "gfk/embedding_store.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

namespace gfk {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view tok, double* out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *out);
  return ec == std::errc() && ptr == tok.data() + tok.size() && std::isfinite(*out);
}

bool parse_count(std::string_view tok, long long* out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

EmbeddingTable EmbeddingTable::from_rows(std::vector<std::string> words, RowMatrix rows,
                                         bool normalize) {
  if (static_cast<Index>(words.size()) != rows.rows()) {
    throw Error("embedding table: " + std::to_string(words.size()) + " words but " +
                std::to_string(rows.rows()) + " rows");
  }
  EmbeddingTable t;
  std::vector<Index> keep;
  keep.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Index r = static_cast<Index>(i);
    if (t.index_.count(words[i])) {
      warn("duplicate word '" + words[i] + "' at row " + std::to_string(i) +
           " ignored (first occurrence kept)");
      continue;
    }
    if (rows.row(r).squaredNorm() == 0.0) {
      warn("zero vector for word '" + words[i] + "' at row " + std::to_string(i) + " dropped");
      continue;
    }
    t.index_.emplace(words[i], static_cast<Index>(keep.size()));
    keep.push_back(r);
  }
  if (static_cast<std::size_t>(keep.size()) == words.size()) {
    t.vectors_ = std::move(rows);
    t.words_ = std::move(words);
  } else {
    t.vectors_.resize(static_cast<Index>(keep.size()), rows.cols());
    t.words_.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
      t.vectors_.row(static_cast<Index>(k)) = rows.row(keep[k]);
      t.words_.push_back(std::move(words[static_cast<std::size_t>(keep[k])]));
    }
  }
  return normalize ? t.normalized() : t;
}

std::optional<Index> EmbeddingTable::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> EmbeddingTable::find_folded(std::string_view word) const {
  if (auto i = find(word)) return i;
  const std::string lower = ascii_lower(word);
  if (lower == word) return std::nullopt;
  return find(lower);
}

std::optional<Vector> EmbeddingTable::lookup(std::string_view word) const {
  const auto i = find(word);
  if (!i) return std::nullopt;
  return Vector(vectors_.row(*i).transpose());
}

EmbeddingTable EmbeddingTable::normalized() const {
  EmbeddingTable t = *this;
  for (Index r = 0; r < t.vectors_.rows(); ++r) {
    const double n = t.vectors_.row(r).norm();
    if (std::abs(n - 1.0) > 1e-12) t.vectors_.row(r) /= n;
  }
  return t;
}

EmbeddingTable read_text_embeddings(std::istream& in, bool normalize, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  ++lineno;
  const auto header = split_ws(line);
  long long n_words = 0;
  long long dim = 0;
  if (header.size() != 2 || !parse_count(header[0], &n_words) || !parse_count(header[1], &dim) ||
      n_words < 0 || dim <= 0) {
    throw ParseError(source, lineno, "malformed header, expected \"<|V|> <D>\"");
  }

  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(n_words));
  RowMatrix rows(n_words, dim);
  Index r = 0;
  long long data_lines = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (++data_lines > n_words) {
      throw ParseError(source, lineno, "more rows than the header's " + std::to_string(n_words));
    }
    if (static_cast<long long>(toks.size()) != dim + 1) {
      throw ParseError(source, lineno,
                       "dimension mismatch: expected " + std::to_string(dim) + " values, got " +
                           std::to_string(toks.size() - 1));
    }
    for (Index c = 0; c < dim; ++c) {
      const auto tok = toks[static_cast<std::size_t>(c + 1)];
      double v = 0.0;
      if (!parse_double(tok, &v)) {
        throw ParseError(source, lineno, "bad number '" + std::string(tok) + "'");
      }
      rows(r, c) = v;
    }
    if (rows.row(r).squaredNorm() == 0.0) {
      warn(source + ":" + std::to_string(lineno) + ": zero vector for '" + std::string(toks[0]) +
           "' dropped");
      continue;
    }
    if (!seen.emplace(toks[0]).second) {
      warn(source + ":" + std::to_string(lineno) + ": duplicate word '" + std::string(toks[0]) +
           "' ignored (first occurrence kept)");
      continue;
    }
    words.emplace_back(toks[0]);
    ++r;
  }
  if (data_lines != n_words) {
    throw ParseError(source, lineno,
                     "header announces " + std::to_string(n_words) + " rows, file has " +
                         std::to_string(data_lines));
  }
  rows.conservativeResize(r, dim);
  return EmbeddingTable::from_rows(std::move(words), std::move(rows), normalize);
}

EmbeddingTable load_text_embeddings(const std::filesystem::path& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open embeddings file " + path.string());
  return read_text_embeddings(in, normalize, path.string());
}

void write_text_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dim() << '\n';
  out << std::setprecision(17);
  for (Index r = 0; r < table.size(); ++r) {
    out << table.word(r);
    for (Index c = 0; c < table.dim(); ++c) out << ' ' << table.vectors()(r, c);
    out << '\n';
  }
}

void save_text_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write embeddings file " + path.string());
  write_text_embeddings(table, out);
  if (!out) throw Error("write failed for " + path.string());
}

RowMatrix stack_rows(const EmbeddingTable& table, std::span<const std::string> words) {
  RowMatrix out(static_cast<Index>(words.size()), table.dim());
  for (std::size_t k = 0; k < words.size(); ++k) {
    const auto i = table.find(words[k]);
    if (!i) throw Error("word not in vocabulary: " + words[k]);
    out.row(static_cast<Index>(k)) = table.row(*i);
  }
  return out;
}

RowMatrix stack_rows(const EmbeddingTable& table, std::span<const Index> rows) {
  RowMatrix out(static_cast<Index>(rows.size()), table.dim());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = table.row(rows[k]);
  return out;
}

}  // namespace gfk
