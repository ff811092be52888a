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
#include <random>

#include "gfk/analogy_dataset.hpp"
#include "gfk/common.hpp"
#include "gfk/embedding_store.hpp"

namespace gfk {

struct SyntheticOptions {
  int n_relations = 3;
  int pairs_per_relation = 40;
  Index dim = 50;
  /// Expected Euclidean norm of the isotropic noise added to every vector.
  double noise = 0.05;
  /// Dimension of the subspace each relation's head words are drawn from.
  Index head_rank = 8;
  /// Range (radians) of the rotation angles in each principal plane.
  double min_angle = 0.3;
  double max_angle = 1.2;
  /// Head coefficient i along the head basis has standard deviation
  /// head_decay^i; 1 draws heads isotropically within the subspace.
  double head_decay = 1.0;
  std::uint64_t seed = 7;
};

/// One relation of the benchmark: heads are drawn near a random head_rank
/// subspace S, and tails are R * head + noise for a fixed random rotation R
/// that turns each basis direction of S by its own angle toward a random
/// direction orthogonal to S.
class RotationRelation {
 public:
  RotationRelation(const SyntheticOptions& opts, std::mt19937_64& rng);

  RowMatrix sample_heads(Index n, std::mt19937_64& rng) const;
  RowMatrix tails_of(const RowMatrix& heads, std::mt19937_64& rng) const;

  const Matrix& head_basis() const { return head_basis_; }
  const Matrix& rotation() const { return rotation_; }

 private:
  void add_noise(RowMatrix& m, std::mt19937_64& rng) const;

  Index dim_;
  double noise_;
  Vector head_scales_;
  Matrix head_basis_;
  Matrix rotation_;
};

struct SyntheticBenchmark {
  EmbeddingTable table;  // rows are not normalized
  RelationDataset dataset;
};

/// Words are "r<k>_h<i>" / "r<k>_t<i>"; relation k is named "relation-<k>" and
/// holds every ordered pair question (h_i, t_i, h_j, t_j), i != j.
SyntheticBenchmark make_rotation_benchmark(const SyntheticOptions& opts);

}  // namespace gfk
