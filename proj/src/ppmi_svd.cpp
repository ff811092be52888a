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

#include "gfk/ppmi_svd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include <Eigen/SVD>

namespace gfk {

Corpus read_corpus(std::istream& in) {
  Corpus docs;
  std::vector<std::string> current;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    bool any = false;
    while (ls >> tok) {
      current.push_back(std::move(tok));
      any = true;
    }
    if (!any && !current.empty()) {
      docs.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) docs.push_back(std::move(current));
  return docs;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open corpus " + path.string());
  return read_corpus(in);
}

std::optional<Index> CooccurrenceCounts::word_index(const std::string& token) const {
  const auto it = word_ids.find(token);
  if (it == word_ids.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> CooccurrenceCounts::context_index(const std::string& token, int offset) const {
  const auto w = word_index(token);
  if (!w) return std::nullopt;
  if (!positional) return *w;
  if (offset == 0 || offset < -window || offset > window) return std::nullopt;
  const int slot = offset < 0 ? offset + window : offset + window - 1;
  return *w * (2 * window) + slot;
}

double CooccurrenceCounts::count(const std::string& word, const std::string& context,
                                 int offset) const {
  const auto i = word_index(word);
  const auto j = context_index(context, offset);
  if (!i || !j) return 0.0;
  return counts.coeff(*i, *j);
}

CooccurrenceCounts build_cooccurrence(const Corpus& corpus, const CooccurrenceOptions& opts) {
  if (opts.window < 1) throw Error("window must be >= 1");
  if (opts.min_count < 0) throw Error("min_count must be >= 0");

  std::unordered_map<std::string, std::int64_t> freq;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n >= opts.min_count) kept.emplace_back(tok, n);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  CooccurrenceCounts c;
  c.window = opts.window;
  c.positional = opts.positional;
  auto& index = c.word_ids;
  for (auto& [tok, n] : kept) {
    index.emplace(tok, static_cast<Index>(c.words.size()));
    c.words.push_back(tok);
  }

  const Index vocab = static_cast<Index>(c.words.size());
  const int slots = opts.positional ? 2 * opts.window : 1;
  auto slot_of = [&](int offset) {
    if (!opts.positional) return 0;
    return offset < 0 ? offset + opts.window : offset + opts.window - 1;
  };
  c.contexts.reserve(static_cast<std::size_t>(vocab * slots));
  for (Index w = 0; w < vocab; ++w) {
    if (!opts.positional) {
      c.contexts.push_back({w, 0});
      continue;
    }
    for (int o = -opts.window; o <= opts.window; ++o) {
      if (o != 0) c.contexts.push_back({w, o});
    }
  }

  std::unordered_map<std::uint64_t, double> cells;
  const std::uint64_t n_cols = static_cast<std::uint64_t>(c.contexts.size());
  std::vector<Index> ids;
  for (const auto& doc : corpus) {
    ids.clear();
    for (const auto& tok : doc) {
      const auto it = index.find(tok);
      if (it != index.end()) ids.push_back(it->second);
    }
    const long long n = static_cast<long long>(ids.size());
    for (long long p = 0; p < n; ++p) {
      for (int o = -opts.window; o <= opts.window; ++o) {
        if (o == 0 || p + o < 0 || p + o >= n) continue;
        const Index ctx = ids[static_cast<std::size_t>(p + o)] * slots + slot_of(o);
        cells[static_cast<std::uint64_t>(ids[static_cast<std::size_t>(p)]) * n_cols +
              static_cast<std::uint64_t>(ctx)] += 1.0;
      }
    }
  }
  if (cells.empty()) throw Error("corpus is empty after filtering: no co-occurrence pairs");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(cells.size());
  for (const auto& [key, n] : cells) {
    trips.emplace_back(static_cast<Index>(key / n_cols), static_cast<Index>(key % n_cols), n);
    c.total += n;
  }
  c.counts.resize(vocab, static_cast<Index>(n_cols));
  c.counts.setFromTriplets(trips.begin(), trips.end());
  c.counts.makeCompressed();
  return c;
}

SparseMatrix ppmi_transform(const CooccurrenceCounts& c) { return ppmi_transform(c.counts); }

SparseMatrix ppmi_transform(const SparseMatrix& counts) {
  Vector row_sum = Vector::Zero(counts.rows());
  Vector col_sum = Vector::Zero(counts.cols());
  double total = 0.0;
  for (Index i = 0; i < counts.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(counts, i); it; ++it) {
      row_sum(it.row()) += it.value();
      col_sum(it.col()) += it.value();
      total += it.value();
    }
  }
  if (!(total > 0.0)) throw Error("ppmi: count matrix has no mass");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(counts.nonZeros()));
  for (Index i = 0; i < counts.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(counts, i); it; ++it) {
      if (it.value() <= 0.0) continue;
      const double pmi =
          std::log((it.value() * total) / (row_sum(it.row()) * col_sum(it.col())));
      if (pmi > 0.0) trips.emplace_back(it.row(), it.col(), pmi);
    }
  }
  SparseMatrix out(counts.rows(), counts.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

namespace {

Matrix orthonormal_columns(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

// Largest-magnitude entry of each left vector positive, so output does not
// depend on the SVD backend's sign choice.
void canonicalize_signs(TruncatedSvd& s) {
  for (Index k = 0; k < s.u.cols(); ++k) {
    Index arg = 0;
    s.u.col(k).cwiseAbs().maxCoeff(&arg);
    if (s.u(arg, k) < 0.0) {
      s.u.col(k) *= -1.0;
      s.v.col(k) *= -1.0;
    }
  }
}

Index numerical_rank(const Vector& sigma, Index rows, Index cols) {
  if (sigma.size() == 0) return 0;
  const double tol = sigma(0) * static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon();
  Index r = 0;
  while (r < sigma.size() && sigma(r) > tol && sigma(r) > 0.0) ++r;
  return r;
}

TruncatedSvd dense_svd(const SparseMatrix& m) {
  Eigen::BDCSVD<Matrix> svd(Matrix(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

TruncatedSvd randomized_svd(const SparseMatrix& m, Index rank, const SvdOptions& opts) {
  const Index k = std::min<Index>(rank + opts.oversample, std::min(m.rows(), m.cols()));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  Matrix omega(m.cols(), k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < m.cols(); ++i) omega(i, j) = gauss(rng);
  }
  const SparseMatrix mt = m.transpose();
  Matrix q = orthonormal_columns(m * omega);
  for (int it = 0; it < opts.power_iterations; ++it) {
    const Matrix z = orthonormal_columns(mt * q);
    q = orthonormal_columns(m * z);
  }
  // B = Q^T M, formed as (M^T Q)^T to keep M sparse.
  const Matrix b = (mt * q).transpose();
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {q * svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace

TruncatedSvd truncated_svd(const SparseMatrix& m, Index rank, const SvdOptions& opts) {
  if (rank < 1) throw Error("truncated_svd: rank must be positive");
  if (m.rows() == 0 || m.cols() == 0) throw Error("truncated_svd: empty matrix");
  const bool dense = m.rows() <= opts.dense_limit && m.cols() <= opts.dense_limit;
  TruncatedSvd full = dense ? dense_svd(m) : randomized_svd(m, rank, opts);
  const Index r = numerical_rank(full.sigma, m.rows(), m.cols());
  Index keep = rank;
  if (rank > r) {
    warn("requested " + std::to_string(rank) + " dimensions but the matrix has numerical rank " +
         std::to_string(r) + "; returning " + std::to_string(r));
    keep = r;
  }
  if (keep == 0) throw Error("truncated_svd: matrix is numerically zero");
  TruncatedSvd out{full.u.leftCols(keep), full.sigma.head(keep), full.v.leftCols(keep)};
  canonicalize_signs(out);
  return out;
}

RowMatrix weighted_left_factors(const TruncatedSvd& svd, double eigen_weight) {
  if (eigen_weight < 0.0 || eigen_weight > 1.0) throw Error("eigen weight must lie in [0, 1]");
  const Vector w = svd.sigma.array().pow(eigen_weight).matrix();
  return svd.u * w.asDiagonal();
}

EmbeddingTable truncated_svd_embed(const SparseMatrix& m, const std::vector<std::string>& words,
                                   Index dim, double eigen_weight, const SvdOptions& opts) {
  if (static_cast<Index>(words.size()) != m.rows()) {
    throw Error("truncated_svd_embed: word list does not match matrix rows");
  }
  const TruncatedSvd svd = truncated_svd(m, dim, opts);
  return EmbeddingTable::from_rows(words, weighted_left_factors(svd, eigen_weight));
}

}  // namespace gfk
