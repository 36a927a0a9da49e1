#pragma once

// Dense numerical kernel for small matrices: ranks, null spaces, projectors,
// singular values, extremal eigenpairs. Backed by Eigen; every operation is a
// pure function of its inputs and is defined by the residual/cutoff contracts
// below, not by the algorithm.

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "frameforge/errors.hpp"

namespace frameforge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Tolerance {
  // Relative singular-value cutoff: sigma > rank_rel * sigma_max * max(rows, cols)
  // counts toward the rank. Scale-invariant, so verdicts survive rescaling.
  double rank_rel = 1e-10;
  // Absolute cutoff for witness checks (certificate inner products, symmetry,
  // orthogonality residuals).
  double cert_abs = 1e-8;

  // Throws UsageError unless both lie strictly inside (0, 1).
  void validate() const;
};

// Throws NonFiniteEntry if any entry is NaN or infinite.
void require_finite(const Matrix& a);
void require_finite(const Vector& v);

// Number of singular values above the relative cutoff. The zero matrix has
// rank 0 (sigma_max is taken as 1 for the cutoff in that degenerate case).
int numerical_rank(const Matrix& a, const Tolerance& tol);

// Orthonormal basis of the right null space at the rank cutoff, returned as
// columns; a cols x 0 matrix when a has full column rank.
Matrix nullspace_basis(const Matrix& a, const Tolerance& tol);

// Symmetric idempotent projector onto span(v). P*P = P and P = P^T within
// cert_abs. All-zero vectors project onto {0}; an empty list throws
// UsageError because it does not determine the ambient dimension.
Matrix orth_projector(const std::vector<Vector>& v, const Tolerance& tol);

// Smallest eigenvalue and a unit eigenvector of a symmetric matrix.
// Residual ||S v - lambda v|| <= cert_abs * ||S||. Throws NotSymmetric if
// ||S - S^T||_max exceeds cert_abs (relative to the entry scale).
std::pair<double, Vector> min_eig_sym(const Matrix& s, const Tolerance& tol);

// Nonincreasing, nonnegative, of length min(rows, cols).
std::vector<double> singular_values(const Matrix& a);

}  // namespace frameforge
