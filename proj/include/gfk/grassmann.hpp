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

#include <optional>
#include <ostream>
#include <string>

#include "gfk/common.hpp"

namespace gfk {

/// A point on the Grassmannian: D x d basis with orthonormal columns, 1 <= d < D.
class Subspace {
 public:
  /// Validates orthonormality (Frobenius tolerance `tol`) and 1 <= d < D.
  static Subspace from_basis(Matrix basis, double tol = 1e-10);

  const Matrix& basis() const { return basis_; }
  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  Matrix projector() const { return basis_ * basis_.transpose(); }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// Span of the top-d right singular vectors of the stacked rows (uncentered
/// unless `center`). Columns are ordered by descending singular value.
/// Throws when d exceeds the numerical rank of the rows.
Subspace subspace_from_rows(const RowMatrix& rows, Index d, bool center = false);

/// Principal angles between `source` (P_H) and `target` (P_T) together with the
/// rotations that carry one onto the other:
///
///   P_H' P_T = U1 diag(cos theta) V',   R_H' P_T = -U2 diag(sin theta) V'
///
/// where R_H is an orthonormal basis of the complement of P_H. Angles are
/// ascending in [0, pi/2].
struct PrincipalAngleDecomposition {
  Vector theta;
  Matrix u1;  // d x d
  Matrix u2;  // (D - d) x d
  Matrix v;   // d x d
  Subspace source;
  Subspace target;
  Matrix complement;  // D x (D - d)
};

PrincipalAngleDecomposition principal_angles(const Subspace& ph, const Subspace& pt);

/// Phi(t) = P_H U1 diag(cos t theta) - R_H U2 diag(sin t theta). Phi(0) spans
/// P_H and Phi(1) spans P_T.
Matrix geodesic_flow(const PrincipalAngleDecomposition& pa, double t);
Subspace geodesic_point(const PrincipalAngleDecomposition& pa, double t);

/// Diagonal entries of the closed-form kernel blocks for one angle.
struct KernelCoefficients {
  double lambda1;
  double lambda2;
  double lambda3;
};
KernelCoefficients kernel_coefficients(double theta);

/// Kernel G = F Lambda F' kept in factored form. F is D x k with orthonormal
/// columns and Lambda is a k x k symmetric PSD matrix. For a geodesic flow
/// kernel k = 2d, F = [P_H U1 | R_H U2] and Lambda = [[L1, L2], [L2, L3]].
class GfkKernel {
 public:
  /// Throws if `lambda` has an eigenvalue below -1e-10; tiny negative
  /// eigenvalues are clamped to zero in the square root.
  static GfkKernel from_factors(Matrix factor, Matrix lambda, Vector theta = {});
  /// G = I on R^D.
  static GfkKernel identity(Index ambient_dim);

  const Matrix& factor() const { return factor_; }
  const Matrix& lambda() const { return lambda_; }
  const Matrix& lambda_sqrt() const { return lambda_sqrt_; }
  /// Principal angles the kernel was built from (empty for injected kernels).
  const Vector& theta() const { return theta_; }
  double lambda_min_eigenvalue() const { return lambda_min_eig_; }

  Index ambient_dim() const { return factor_.rows(); }
  Index rank_bound() const { return factor_.cols(); }

  /// D x k map M with M' x = Lambda^{1/2} F' x; kernel-space coordinates of a
  /// row-vector batch E are E * M.
  Matrix projection_map() const { return factor_ * lambda_sqrt_; }
  Vector project(const Vector& x) const { return lambda_sqrt_ * (factor_.transpose() * x); }

  /// Dense D x D kernel; diagnostics and tests only.
  Matrix materialize() const { return factor_ * lambda_ * factor_.transpose(); }
  GfkKernel scaled(double c) const;

 private:
  Matrix factor_;
  Matrix lambda_;
  Matrix lambda_sqrt_;
  Vector theta_;
  double lambda_min_eig_ = 0.0;
};

GfkKernel gfk(const PrincipalAngleDecomposition& pa);

/// Trapezoid-rule approximation of the integral of Phi(t) Phi(t)' over [0, 1].
/// The closed-form kernel equals twice this integral.
Matrix gfk_numeric_oracle(const PrincipalAngleDecomposition& pa, int nodes);

/// Kernel cosine x'Gy / (|G^{1/2} x| |G^{1/2} y|). Empty when either vector has
/// kernel-space norm below 1e-12.
std::optional<double> try_gfk_similarity(const GfkKernel& k, const Vector& x, const Vector& y);
/// As above, with degenerate inputs scored -1.
double gfk_similarity(const GfkKernel& k, const Vector& x, const Vector& y);

/// Plain-text dump: theta then the three Lambda diagonals, one line each.
void write_kernel_dump(std::ostream& out, const GfkKernel& k, const std::string& label);

}  // namespace gfk
