#include "frameforge/linalg.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

using namespace frameforge;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("tolerance bounds") {
  CHECK_NOTHROW(Tolerance{}.validate());
  const Tolerance zero_rank{0.0, 1e-8};
  const Tolerance huge_cert{1e-10, 1.0};
  const Tolerance negative_rank{-1e-10, 1e-8};
  CHECK_THROWS_AS(zero_rank.validate(), UsageError);
  CHECK_THROWS_AS(huge_cert.validate(), UsageError);
  CHECK_THROWS_AS(negative_rank.validate(), UsageError);
}

TEST_CASE("require_finite rejects nan and inf") {
  Vector v(2);
  v << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(require_finite(v), NonFiniteEntry);
  Matrix a(1, 2);
  a << std::numeric_limits<double>::infinity(), 0.0;
  CHECK_THROWS_AS(require_finite(a), NonFiniteEntry);
  Vector ok(2);
  ok << 1.0, -2.0;
  CHECK_NOTHROW(require_finite(ok));
}

TEST_CASE("numerical rank") {
  const Tolerance tol;
  CHECK(numerical_rank(Matrix::Identity(4, 4), tol) == 4);
  CHECK(numerical_rank(Matrix::Zero(3, 5), tol) == 0);

  Vector u(3);
  u << 1, 2, 3;
  CHECK(numerical_rank(u * u.transpose(), tol) == 1);

  // relative cutoff: a tiny singular value next to a large one drops out
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-14;
  CHECK(numerical_rank(d, tol) == 1);
  // but scaling the whole matrix keeps the verdict
  CHECK(numerical_rank(1e-14 * Matrix::Identity(2, 2), tol) == 2);
}

TEST_CASE("nullspace basis annihilates and is orthonormal") {
  const Tolerance tol;
  Matrix a(2, 4);
  a << 1, 0, 1, 0,
       0, 1, 0, 1;
  const Matrix ns = nullspace_basis(a, tol);
  REQUIRE(ns.cols() == 2);
  REQUIRE(ns.rows() == 4);
  CHECK((a * ns).norm() < 1e-12);
  CHECK((ns.transpose() * ns - Matrix::Identity(2, 2)).norm() < 1e-12);

  CHECK(nullspace_basis(Matrix::Identity(3, 3), tol).cols() == 0);
  CHECK(nullspace_basis(Matrix::Zero(2, 3), tol).cols() == 3);
}

TEST_CASE("orthogonal projector") {
  const Tolerance tol;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> span;
  for (int i = 0; i < 2; ++i) {
    Vector v(4);
    for (int j = 0; j < 4; ++j) v(j) = gauss(rng);
    span.push_back(v);
  }
  const Matrix p = orth_projector(span, tol);
  CHECK((p * p - p).norm() < 1e-10);
  CHECK((p - p.transpose()).norm() < 1e-12);
  for (const auto& v : span) CHECK((p * v - v).norm() < 1e-10);
  CHECK(std::llround(p.trace()) == 2);

  const Matrix zero = orth_projector({Vector::Zero(3)}, tol);
  CHECK(zero.norm() == 0.0);
  CHECK_THROWS_AS(orth_projector({}, tol), UsageError);
}

TEST_CASE("extreme eigenpair of a symmetric matrix") {
  const Tolerance tol;
  Matrix s(3, 3);
  s << 5, 0, 0,
       0, 2, 0,
       0, 0, -1;
  const auto [lambda, v] = min_eig_sym(s, tol);
  CHECK(lambda == doctest::Approx(-1.0));
  CHECK(std::fabs(v(2)) == doctest::Approx(1.0));
  CHECK((s * v - lambda * v).norm() < 1e-8 * s.norm());

  Matrix bad(2, 2);
  bad << 0, 1,
         0, 0;
  CHECK_THROWS_AS(min_eig_sym(bad, tol), NotSymmetric);
}

TEST_CASE("singular values are sorted and exact on a known matrix") {
  Matrix a(2, 2);
  a << 3, 0,
       0, 4;
  const auto sv = singular_values(a);
  REQUIRE(sv.size() == 2);
  CHECK(sv[0] == doctest::Approx(4.0));
  CHECK(sv[1] == doctest::Approx(3.0));
  CHECK(singular_values(Matrix::Zero(3, 2)).size() == 2);
}

TEST_SUITE_END();
