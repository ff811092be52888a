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

#include "gfk/synthetic.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

namespace gfk {
namespace {

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  }
  return m;
}

}  // namespace

RotationRelation::RotationRelation(const SyntheticOptions& opts, std::mt19937_64& rng)
    : dim_(opts.dim), noise_(opts.noise) {
  const Index k = opts.head_rank;
  if (k < 1 || 2 * k > dim_) throw Error("synthetic: head rank must satisfy 1 <= 2*rank <= dim");
  if (!(opts.min_angle >= 0.0) || opts.max_angle < opts.min_angle) {
    throw Error("synthetic: invalid angle range");
  }
  if (!(opts.head_decay > 0.0) || opts.head_decay > 1.0) {
    throw Error("synthetic: head decay must lie in (0, 1]");
  }
  head_scales_.resize(k);
  for (Index i = 0; i < k; ++i) head_scales_(i) = std::pow(opts.head_decay, static_cast<double>(i));
  Eigen::HouseholderQR<Matrix> qr(gaussian(dim_, 2 * k, rng));
  const Matrix q = qr.householderQ() * Matrix::Identity(dim_, 2 * k);
  head_basis_ = q.leftCols(k);
  const Matrix normals = q.rightCols(k);

  std::uniform_real_distribution<double> angle(opts.min_angle, opts.max_angle);
  rotation_ = Matrix::Identity(dim_, dim_);
  for (Index i = 0; i < k; ++i) {
    const double phi = angle(rng);
    const Vector s = head_basis_.col(i);
    const Vector n = normals.col(i);
    rotation_ += (std::cos(phi) - 1.0) * (s * s.transpose() + n * n.transpose()) +
                 std::sin(phi) * (n * s.transpose() - s * n.transpose());
  }
}

void RotationRelation::add_noise(RowMatrix& m, std::mt19937_64& rng) const {
  if (noise_ == 0.0) return;
  const double sd = noise_ / std::sqrt(static_cast<double>(dim_));
  m += sd * RowMatrix(gaussian(m.rows(), m.cols(), rng));
}

RowMatrix RotationRelation::sample_heads(Index n, std::mt19937_64& rng) const {
  const Index k = head_basis_.cols();
  RowMatrix h = (head_basis_ * head_scales_.asDiagonal() * gaussian(k, n, rng)).transpose() /
                std::sqrt(static_cast<double>(k));
  add_noise(h, rng);
  return h;
}

RowMatrix RotationRelation::tails_of(const RowMatrix& heads, std::mt19937_64& rng) const {
  RowMatrix t = heads * rotation_.transpose();
  add_noise(t, rng);
  return t;
}

SyntheticBenchmark make_rotation_benchmark(const SyntheticOptions& opts) {
  if (opts.n_relations < 1) throw Error("synthetic: need at least one relation");
  if (opts.pairs_per_relation < 2) throw Error("synthetic: need at least two pairs per relation");
  if (opts.dim < 2) throw Error("synthetic: dimension must be at least 2");
  if (!(opts.noise >= 0.0) || !std::isfinite(opts.noise)) {
    throw Error("synthetic: noise must be a finite nonnegative number");
  }
  std::mt19937_64 rng(opts.seed);
  const Index p = opts.pairs_per_relation;
  std::vector<std::string> words;
  RowMatrix rows(static_cast<Index>(opts.n_relations) * 2 * p, opts.dim);
  SyntheticBenchmark out;
  out.dataset.source = DatasetSource::kOther;
  for (int r = 0; r < opts.n_relations; ++r) {
    const RotationRelation rel(opts, rng);
    const RowMatrix heads = rel.sample_heads(p, rng);
    const RowMatrix tails = rel.tails_of(heads, rng);
    const Index base = static_cast<Index>(r) * 2 * p;
    rows.middleRows(base, p) = heads;
    rows.middleRows(base + p, p) = tails;
    const std::string prefix = "r" + std::to_string(r) + "_";
    for (Index i = 0; i < p; ++i) words.push_back(prefix + "h" + std::to_string(i));
    for (Index i = 0; i < p; ++i) words.push_back(prefix + "t" + std::to_string(i));

    Relation relation{"relation-" + std::to_string(r), {}};
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < p; ++j) {
        if (i == j) continue;
        relation.questions.push_back({prefix + "h" + std::to_string(i),
                                      prefix + "t" + std::to_string(i),
                                      prefix + "h" + std::to_string(j),
                                      prefix + "t" + std::to_string(j), relation.name});
      }
    }
    out.dataset.relations.push_back(std::move(relation));
  }
  out.table = EmbeddingTable::from_rows(std::move(words), std::move(rows));
  return out;
}

}  // namespace gfk
