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

#include "gfk/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace gfk {
namespace {

constexpr double kDegenerateNorm = 1e-12;

// Modified Gram-Schmidt against earlier columns, two passes.
double orthogonalize_against(const Matrix& q, Index upto, Eigen::Ref<Vector> v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < upto; ++j) v -= q.col(j).dot(v) * q.col(j);
  }
  return v.norm();
}

}  // namespace

Subspace Subspace::from_basis(Matrix basis, double tol) {
  const Index big_d = basis.rows();
  const Index d = basis.cols();
  if (d < 1 || d >= big_d) {
    throw Error("subspace dimension must satisfy 1 <= d < D (got d=" + std::to_string(d) +
                ", D=" + std::to_string(big_d) + ")");
  }
  const double err = (basis.transpose() * basis - Matrix::Identity(d, d)).norm();
  if (!(err <= tol)) {
    throw Error("subspace basis is not orthonormal (|B'B - I|_F = " + std::to_string(err) + ")");
  }
  return Subspace(std::move(basis));
}

Subspace subspace_from_rows(const RowMatrix& rows, Index d, bool center) {
  if (rows.rows() < 1) throw Error("subspace_from_rows: no rows");
  if (d < 1) throw Error("subspace_from_rows: d must be positive");
  if (d >= rows.cols()) {
    throw Error("subspace_from_rows: d=" + std::to_string(d) + " must be below the ambient dimension " +
                std::to_string(rows.cols()));
  }
  Matrix m = rows;
  if (center) m.rowwise() -= m.colwise().mean();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double tol =
      (s.size() ? s(0) : 0.0) * static_cast<double>(std::max(m.rows(), m.cols())) *
      std::numeric_limits<double>::epsilon();
  Index rank = 0;
  while (rank < s.size() && s(rank) > tol && s(rank) > 0.0) ++rank;
  if (d > rank) {
    throw Error("subspace_from_rows: requested d=" + std::to_string(d) +
                " exceeds the effective rank " + std::to_string(rank) + " of " +
                std::to_string(rows.rows()) + " rows");
  }
  Matrix basis = svd.matrixV().leftCols(d);
  // Re-orthonormalize to machine precision; the span is unchanged.
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ() * Matrix::Identity(basis.rows(), d);
  for (Index j = 0; j < d; ++j) {
    if (q.col(j).dot(basis.col(j)) < 0.0) q.col(j) *= -1.0;
  }
  return Subspace::from_basis(std::move(q));
}

PrincipalAngleDecomposition principal_angles(const Subspace& ph, const Subspace& pt) {
  if (ph.ambient_dim() != pt.ambient_dim() || ph.dim() != pt.dim()) {
    throw Error("principal_angles: dimension mismatch (" + std::to_string(ph.ambient_dim()) + "x" +
                std::to_string(ph.dim()) + " vs " + std::to_string(pt.ambient_dim()) + "x" +
                std::to_string(pt.dim()) + ")");
  }
  const Index big_d = ph.ambient_dim();
  const Index d = ph.dim();

  Eigen::JacobiSVD<Matrix> svd(ph.basis().transpose() * pt.basis(),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector cosines = svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);

  Eigen::HouseholderQR<Matrix> qr(ph.basis());
  const Matrix q_full = qr.householderQ();
  Matrix complement = q_full.rightCols(big_d - d);

  const Matrix v = svd.matrixV();
  // Columns are orthogonal with norms sin(theta_i).
  const Matrix sines_dirs = -(complement.transpose() * pt.basis() * v);

  Vector theta(d);
  Matrix u2(big_d - d, d);
  std::vector<Index> degenerate;
  for (Index i = 0; i < d; ++i) {
    const double s = sines_dirs.col(i).norm();
    // arccos loses accuracy near cos = 1; the sine is read off the
    // complement there instead.
    if (cosines(i) < std::numbers::sqrt2 / 2.0) {
      theta(i) = std::acos(cosines(i));
    } else {
      theta(i) = std::asin(std::min(s, 1.0));
    }
    if (i > 0) theta(i) = std::max(theta(i), theta(i - 1));
    if (s > kDegenerateNorm) {
      Vector col = sines_dirs.col(i) / s;
      const double n = orthogonalize_against(u2, i, col);
      u2.col(i) = col / n;
    } else {
      u2.col(i).setZero();
      degenerate.push_back(i);
    }
  }
  // A zero sine leaves the direction free; complete U2 to orthonormal columns
  // where the complement has room (it has none left when 2d > D, and those
  // columns stay zero since their sine and kernel weights vanish).
  for (const Index i : degenerate) {
    Vector best_vec;
    double best = 1e-8;
    for (Index e = 0; e < big_d - d; ++e) {
      Vector cand = Vector::Unit(big_d - d, e);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < d; ++j) {
          if (j != i) cand -= u2.col(j).dot(cand) * u2.col(j);
        }
      }
      const double n = cand.norm();
      if (n > best) {
        best = n;
        best_vec = cand / n;
      }
    }
    if (best_vec.size()) u2.col(i) = best_vec;
  }
  return {theta, svd.matrixU(), u2, v, ph, pt, std::move(complement)};
}

Matrix geodesic_flow(const PrincipalAngleDecomposition& pa, double t) {
  const Vector c = (t * pa.theta.array()).cos().matrix();
  const Vector s = (t * pa.theta.array()).sin().matrix();
  return pa.source.basis() * pa.u1 * c.asDiagonal() -
         pa.complement * pa.u2 * s.asDiagonal();
}

Subspace geodesic_point(const PrincipalAngleDecomposition& pa, double t) {
  if (t < 0.0 || t > 1.0) throw Error("geodesic_point: t must lie in [0, 1]");
  return Subspace::from_basis(geodesic_flow(pa, t), 1e-8);
}

KernelCoefficients kernel_coefficients(double theta) {
  const double x = 2.0 * theta;
  double sinc = 0.0;
  double cosm = 0.0;
  if (theta < 1e-4) {
    const double x2 = x * x;
    sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    cosm = -x / 2.0 + x * x2 / 24.0;
  } else {
    sinc = std::sin(x) / x;
    // cos 2t - 1 = -2 sin^2 t, without the cancellation.
    const double s = std::sin(theta);
    cosm = -s * s / theta;
  }
  return {1.0 + sinc, cosm, 1.0 - sinc};
}

GfkKernel GfkKernel::from_factors(Matrix factor, Matrix lambda, Vector theta) {
  if (lambda.rows() != lambda.cols() || lambda.rows() != factor.cols()) {
    throw Error("kernel: lambda must be square and match the factor's column count");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(lambda);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -1e-10) {
    throw Error("kernel: lambda is not positive semi-definite (min eigenvalue " +
                std::to_string(min_eig) + ")");
  }
  GfkKernel k;
  k.lambda_sqrt_ = eig.eigenvectors() *
                   eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                   eig.eigenvectors().transpose();
  k.factor_ = std::move(factor);
  k.lambda_ = std::move(lambda);
  k.theta_ = std::move(theta);
  k.lambda_min_eig_ = min_eig;
  return k;
}

GfkKernel GfkKernel::identity(Index ambient_dim) {
  GfkKernel k;
  k.factor_ = Matrix::Identity(ambient_dim, ambient_dim);
  k.lambda_ = Matrix::Identity(ambient_dim, ambient_dim);
  k.lambda_sqrt_ = Matrix::Identity(ambient_dim, ambient_dim);
  k.lambda_min_eig_ = 1.0;
  return k;
}

GfkKernel GfkKernel::scaled(double c) const {
  if (!(c > 0.0)) throw Error("kernel scale must be positive");
  GfkKernel k = *this;
  k.lambda_ *= c;
  k.lambda_sqrt_ *= std::sqrt(c);
  k.lambda_min_eig_ *= c;
  return k;
}

GfkKernel gfk(const PrincipalAngleDecomposition& pa) {
  const Index big_d = pa.source.ambient_dim();
  const Index d = pa.source.dim();
  Matrix factor(big_d, 2 * d);
  factor.leftCols(d) = pa.source.basis() * pa.u1;
  factor.rightCols(d) = pa.complement * pa.u2;

  Matrix lambda = Matrix::Zero(2 * d, 2 * d);
  for (Index i = 0; i < d; ++i) {
    const auto c = kernel_coefficients(pa.theta(i));
    lambda(i, i) = c.lambda1;
    lambda(i, d + i) = c.lambda2;
    lambda(d + i, i) = c.lambda2;
    lambda(d + i, d + i) = c.lambda3;
  }
  return GfkKernel::from_factors(std::move(factor), std::move(lambda), pa.theta);
}

Matrix gfk_numeric_oracle(const PrincipalAngleDecomposition& pa, int nodes) {
  if (nodes < 2) throw Error("gfk_numeric_oracle: need at least 2 nodes");
  const Index big_d = pa.source.ambient_dim();
  const double h = 1.0 / static_cast<double>(nodes - 1);
  Matrix acc = Matrix::Zero(big_d, big_d);
  for (int n = 0; n < nodes; ++n) {
    const double w = (n == 0 || n == nodes - 1) ? 0.5 * h : h;
    const Matrix phi = geodesic_flow(pa, static_cast<double>(n) * h);
    acc.noalias() += w * phi * phi.transpose();
  }
  return acc;
}

std::optional<double> try_gfk_similarity(const GfkKernel& k, const Vector& x, const Vector& y) {
  if (x.size() != k.ambient_dim() || y.size() != k.ambient_dim()) {
    throw Error("gfk_similarity: vector dimension does not match kernel");
  }
  const Vector a = k.project(x);
  const Vector b = k.project(y);
  const double na = a.norm();
  const double nb = b.norm();
  if (na < kDegenerateNorm || nb < kDegenerateNorm) return std::nullopt;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

double gfk_similarity(const GfkKernel& k, const Vector& x, const Vector& y) {
  return try_gfk_similarity(k, x, y).value_or(-1.0);
}

void write_kernel_dump(std::ostream& out, const GfkKernel& k, const std::string& label) {
  const Index d = k.theta().size();
  out << "# kernel " << label << " D=" << k.ambient_dim() << " d=" << d << '\n';
  out << std::setprecision(17);
  auto line = [&](const char* name, auto&& value_at) {
    out << name;
    for (Index i = 0; i < d; ++i) out << ' ' << value_at(i);
    out << '\n';
  };
  line("theta", [&](Index i) { return k.theta()(i); });
  line("lambda1", [&](Index i) { return k.lambda()(i, i); });
  line("lambda2", [&](Index i) { return k.lambda()(i, d + i); });
  line("lambda3", [&](Index i) { return k.lambda()(d + i, d + i); });
}

}  // namespace gfk
