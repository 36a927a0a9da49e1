#include "frameforge/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace frameforge {

void Tolerance::validate() const {
  auto inside_unit = [](double v) {
    return std::isfinite(v) && v > 0.0 && v < 1.0;
  };
  if (!inside_unit(rank_rel) || !inside_unit(cert_abs)) {
    throw UsageError("tolerances must lie strictly inside (0, 1): rank_rel=" +
                     std::to_string(rank_rel) +
                     " cert_abs=" + std::to_string(cert_abs));
  }
}

void require_finite(const Matrix& a) {
  if (!a.allFinite()) {
    throw NonFiniteEntry("matrix contains NaN or infinite entries");
  }
}

void require_finite(const Vector& v) {
  if (!v.allFinite()) {
    throw NonFiniteEntry("vector contains NaN or infinite entries");
  }
}

namespace {

// Shared rank cutoff: relative to the largest singular value and the longer
// matrix side; 1 stands in for sigma_max on the zero matrix so the cutoff
// stays positive.
double rank_cutoff(const Eigen::VectorXd& sv, Eigen::Index rows,
                   Eigen::Index cols, const Tolerance& tol) {
  double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (sigma_max <= 0.0) sigma_max = 1.0;
  return tol.rank_rel * sigma_max * static_cast<double>(std::max(rows, cols));
}

}  // namespace

int numerical_rank(const Matrix& a, const Tolerance& tol) {
  tol.validate();
  require_finite(a);
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rank_cutoff(sv, a.rows(), a.cols(), tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix nullspace_basis(const Matrix& a, const Tolerance& tol) {
  tol.validate();
  require_finite(a);
  if (a.size() == 0) return Matrix(0, 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rank_cutoff(sv, a.rows(), a.cols(), tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  // Right singular vectors past the rank span the null space and are already
  // orthonormal.
  return svd.matrixV().rightCols(a.cols() - rank);
}

Matrix orth_projector(const std::vector<Vector>& v, const Tolerance& tol) {
  tol.validate();
  if (v.empty()) {
    throw UsageError("orth_projector needs at least one vector to fix the dimension");
  }
  const Eigen::Index dim = v.front().size();
  Matrix cols(dim, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].size() != dim) {
      throw DimensionMismatch("orth_projector: vectors of different lengths");
    }
    require_finite(v[i]);
    cols.col(static_cast<Eigen::Index>(i)) = v[i];
  }
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rank_cutoff(sv, cols.rows(), cols.cols(), tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  if (rank == 0) return Matrix::Zero(dim, dim);
  Matrix u = svd.matrixU().leftCols(rank);
  return u * u.transpose();
}

std::pair<double, Vector> min_eig_sym(const Matrix& s, const Tolerance& tol) {
  tol.validate();
  require_finite(s);
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw NotSymmetric("min_eig_sym: matrix is not square and nonempty");
  }
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol.cert_abs * scale) {
    throw NotSymmetric("min_eig_sym: matrix is not symmetric within cert_abs");
  }
  // Work on the symmetrized matrix so tiny asymmetries cannot leak into the
  // eigenpair.
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error("min_eig_sym: eigensolver failed to converge");
  }
  double lambda = es.eigenvalues()(0);
  Vector vec = es.eigenvectors().col(0);
  vec.normalize();
  return {lambda, vec};
}

std::vector<double> singular_values(const Matrix& a) {
  require_finite(a);
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

}  // namespace frameforge
