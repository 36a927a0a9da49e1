#include "frameforge/analyzer.hpp"

#include "frameforge/constructors.hpp"
#include "oracles.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

using namespace frameforge;

namespace {

Frame frame_of(int n, std::initializer_list<std::initializer_list<double>> rows) {
  Frame f;
  f.dim = n;
  for (const auto& r : rows) {
    Vector v(n);
    int i = 0;
    for (double x : r) v(i++) = x;
    f.vectors.push_back(v);
  }
  return f;
}

Frame random_frame(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Frame f;
  f.dim = n;
  for (int i = 0; i < m; ++i) {
    Vector v(n);
    for (int j = 0; j < n; ++j) v(j) = gauss(rng);
    f.vectors.push_back(v);
  }
  return f;
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// ranks of a witness partition, recomputed by the hand oracle
void check_cp_witness(const Frame& f, const PartitionWitness& w) {
  const auto rows = oracle::rows_of(f);
  std::vector<int> ic;
  for (int j = 1; j <= f.count(); ++j)
    if (!contains(w.subset_I, j)) ic.push_back(j);
  CHECK(contains(w.subset_I, 1));
  CHECK(oracle::gauss_rank(oracle::gather(rows, w.subset_I)) == w.rank_I);
  CHECK(oracle::gauss_rank(oracle::gather(rows, ic)) == w.rank_Ic);
  CHECK(w.rank_I < f.dim);
  CHECK(w.rank_Ic < f.dim);
}

}  // namespace

TEST_SUITE_BEGIN("analyzer");

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::Holds) == "HOLDS");
  CHECK(to_string(Verdict::Fails) == "FAILS");
  CHECK(to_string(Verdict::HoldsProbable) == "HOLDS-probable");
}

TEST_CASE("search config validation") {
  SearchConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("complement property on the canonical small examples") {
  const Tolerance tol;

  const auto basis = complement_property(frame_of(2, {{1, 0}, {0, 1}}), tol);
  REQUIRE(basis.verdict == Verdict::Fails);
  REQUIRE(basis.witness.has_value());
  CHECK(basis.witness->subset_I == std::vector<int>{1});
  CHECK(basis.witness->rank_I == 1);
  CHECK(basis.witness->rank_Ic == 1);

  CHECK(complement_property(frame_of(2, {{1, 0}, {0, 1}, {1, 1}}), tol).verdict ==
        Verdict::Holds);
}

TEST_CASE("pairs frame: the coordinate partition is the found witness") {
  const Tolerance tol;
  const Frame p4 = pairs_family(4);
  const auto cp = complement_property(p4, tol);
  REQUIRE(cp.verdict == Verdict::Fails);
  REQUIRE(cp.witness.has_value());
  // pairs containing coordinate 1, in the lexicographic layout
  CHECK(cp.witness->subset_I == std::vector<int>{1, 2, 3});
  CHECK(cp.witness->rank_I == 3);
  CHECK(cp.witness->rank_Ic == 3);
  check_cp_witness(p4, *cp.witness);
}

TEST_CASE("phase retrieval equals cp and certifies its failures") {
  const Tolerance tol;
  std::mt19937_64 rng(2024);
  int fails = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = n + static_cast<int>(rng() % 5);
    const Frame f = random_frame(n, m, rng);
    const auto pr = phase_retrieval(f, tol);
    const auto cp = complement_property(f, tol);
    CHECK(pr.verdict == cp.verdict);
    const auto truth = oracle::cp(f);
    CHECK((pr.verdict == Verdict::Holds) == truth.holds);
    if (pr.verdict == Verdict::Fails) {
      ++fails;
      REQUIRE(pr.witness.has_value());
      check_cp_witness(f, *pr.witness);
      REQUIRE(pr.certificate.has_value());
      CHECK(pr.certificate->kind == PairCertificate::Kind::PrCounterexample);
      CHECK(certify_counterexample(f, *pr.certificate, tol));
    }
  }
  CHECK(fails > 5);  // the mix actually exercises both verdicts
}

TEST_CASE("certificates from rank-deficient frames still verify") {
  const Tolerance tol;
  // all vectors on one line: u and v coincide, the degenerate-axis path
  const Frame flat = frame_of(2, {{1, 0}, {2, 0}, {-3, 0}});
  const auto pr = phase_retrieval(flat, tol);
  REQUIRE(pr.verdict == Verdict::Fails);
  REQUIRE(pr.certificate.has_value());
  CHECK(certify_counterexample(flat, *pr.certificate, tol));
}

TEST_CASE("certify_counterexample rejects what it should") {
  const Tolerance tol;
  const Frame mercedes = frame_of(2, {{1, 0}, {0, 1}, {1, 1}});
  PairCertificate c;
  c.x = Vector(2);
  c.y = Vector(2);
  c.x << 1, 1;
  c.y << 1, -1;
  CHECK_FALSE(certify_counterexample(mercedes, c, tol));  // |<(1,1),x>| differs

  const Frame basis = frame_of(2, {{1, 0}, {0, 1}});
  CHECK(certify_counterexample(basis, c, tol));

  c.y = c.x;  // x == y pairs carry no information
  CHECK_FALSE(certify_counterexample(basis, c, tol));
  c.y = -c.x;
  CHECK_FALSE(certify_counterexample(basis, c, tol));

  c.y = Vector(3);
  c.y << 1, 0, 0;
  CHECK_THROWS_AS(certify_counterexample(basis, c, tol), DimensionMismatch);
}

TEST_CASE("spark agrees with brute force and reports the first witness") {
  const Tolerance tol;
  const Frame p4 = pairs_family(4);
  const auto sp = spark(p4, tol);
  CHECK(sp.spark == 4);
  REQUIRE(sp.witness.has_value());
  // (1,2),(1,3),(2,4),(3,4) is the lexicographically first even cycle
  CHECK(*sp.witness == std::vector<int>{1, 2, 5, 6});
  CHECK(oracle::gauss_rank(oracle::gather(oracle::rows_of(p4), *sp.witness)) == 3);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % 6);
    Frame f = random_frame(n, m, rng);
    if (trial % 3 == 0 && m >= 2) f.vectors[m - 1] = 2.0 * f.vectors[0];
    if (trial % 5 == 0) f.vectors[0].setZero();
    CHECK(spark(f, tol).spark == oracle::spark(f));
  }
}

TEST_CASE("spark witness absent only in the independent underfilled case") {
  const Tolerance tol;
  const auto under = spark(frame_of(3, {{1, 0, 0}, {0, 1, 0}}), tol);
  CHECK(under.spark == 3);  // m+1
  CHECK_FALSE(under.witness.has_value());

  const auto zero = spark(frame_of(2, {{0, 0}, {1, 0}}), tol);
  CHECK(zero.spark == 1);
  REQUIRE(zero.witness.has_value());
  CHECK(*zero.witness == std::vector<int>{1});
}

TEST_CASE("norm retrieval: exact decision with certificates") {
  const Tolerance tol;

  // orthonormal basis: fails CP but the nullspaces stay orthogonal
  const auto ortho = norm_retrieval(frame_of(2, {{1, 0}, {0, 1}}), tol);
  CHECK(ortho.verdict == Verdict::Holds);
  CHECK(ortho.worst_cross_gram <= 1e-12);

  // sheared pair: nullspaces e2 and (1,-1)/sqrt2 correlate
  const Frame sheared = frame_of(2, {{1, 0}, {1, 1}});
  const auto nr = norm_retrieval(sheared, tol);
  REQUIRE(nr.verdict == Verdict::Fails);
  CHECK(nr.worst_cross_gram == doctest::Approx(1.0 / std::sqrt(2.0)));
  REQUIRE(nr.certificate.has_value());
  CHECK(nr.certificate->kind == PairCertificate::Kind::NrCounterexample);
  // equal measurement magnitudes, different norms
  const auto& c = *nr.certificate;
  for (const auto& v : sheared.vectors) {
    CHECK(std::fabs(std::fabs(v.dot(c.x)) - std::fabs(v.dot(c.y))) < 1e-9);
  }
  CHECK(std::fabs(c.x.squaredNorm() - c.y.squaredNorm()) > 1e-3);

  // pairs(4): documented worst cross-gram 1/2
  CHECK(norm_retrieval(pairs_family(4), tol).worst_cross_gram ==
        doctest::Approx(0.5));
}

TEST_CASE("norm retrieval agrees with the sampling oracle") {
  const Tolerance tol;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int m = 2 + static_cast<int>(rng() % 4);
    Frame f = random_frame(n, m, rng);
    if (trial % 4 == 0) {
      f = frame_of(n, {});
      for (int i = 0; i < m; ++i) {
        Vector v = Vector::Zero(n);
        v(static_cast<int>(rng() % n)) = 1.0;
        f.vectors.push_back(v);  // axis multisets often retrieve norms
      }
    }
    const auto exact = norm_retrieval(f, tol);
    std::mt19937_64 sample_rng(rng());
    const auto sampled = oracle::nr_sampler(f, 400, sample_rng);
    CHECK((exact.verdict == Verdict::Holds) == sampled.holds);
  }
}

TEST_CASE("pr implies nr") {
  const Tolerance tol;
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = 2 * n - 1 + static_cast<int>(rng() % 2);
    const Frame f = random_frame(n, m, rng);
    if (phase_retrieval(f, tol).verdict == Verdict::Holds) {
      CHECK(norm_retrieval(f, tol).verdict == Verdict::Holds);
    }
  }
}

TEST_CASE("overcomplete complement property needs spanning plus dependence") {
  const Tolerance tol;
  std::mt19937_64 rng(7);

  // full spark: OCP holds exactly when every majority side exceeds n
  const Frame six = full_spark_frame(2, 6, 31, tol);
  CHECK(overcomplete_cp(six, tol).verdict == Verdict::Holds);

  const Frame five = full_spark_frame(3, 5, 32, tol);
  const auto ocp = overcomplete_cp(five, tol);
  REQUIRE(ocp.verdict == Verdict::Fails);
  REQUIRE(ocp.witness.has_value());
  // neither side both spans R^3 and is dependent
  const auto rows = oracle::rows_of(five);
  std::vector<int> ic;
  for (int j = 1; j <= 5; ++j)
    if (!contains(ocp.witness->subset_I, j)) ic.push_back(j);
  const int size_i = static_cast<int>(ocp.witness->subset_I.size());
  const int size_ic = static_cast<int>(ic.size());
  const bool i_ok = ocp.witness->rank_I == 3 && size_i > 3;
  const bool ic_ok = ocp.witness->rank_Ic == 3 && size_ic > 3;
  CHECK_FALSE(i_ok);
  CHECK_FALSE(ic_ok);

  // ocp implies cp on random mixes
  for (int trial = 0; trial < 20; ++trial) {
    const Frame f = random_frame(2, 4 + static_cast<int>(rng() % 3), rng);
    if (overcomplete_cp(f, tol).verdict == Verdict::Holds) {
      CHECK(complement_property(f, tol).verdict == Verdict::Holds);
    }
  }
}

TEST_CASE("lifting number matches brute force and spec examples") {
  const Tolerance tol;

  const auto mercedes = lifting_number(frame_of(2, {{1, 0}, {0, 1}, {1, 1}}), tol);
  CHECK(mercedes.value == 0);
  CHECK(static_cast<int>(mercedes.witness_subset.size()) == 2);

  const auto p4 = lifting_number(pairs_family(4), tol);
  CHECK(p4.value == 0);
  CHECK(p4.witness_subset == std::vector<int>{1, 2, 3, 4});

  const Frame seven = full_spark_frame(2, 7, 3, tol);
  CHECK(lifting_number(seven, tol).value == 2);

  CHECK_THROWS_AS(lifting_number(frame_of(3, {{1, 0, 0}, {0, 1, 0}}), tol),
                  NotSpanning);

  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int m = n + static_cast<int>(rng() % 4);
    const Frame f = random_frame(n, m, rng);
    const int truth = oracle::lifting_number(f);
    if (truth < 0) {
      CHECK_THROWS_AS(lifting_number(f, tol), NotSpanning);
    } else {
      const auto lift = lifting_number(f, tol);
      CHECK(lift.value == truth);
      CHECK(oracle::gauss_rank(oracle::gather(oracle::rows_of(f),
                                              lift.witness_subset)) == n);
      CHECK(2 * static_cast<int>(lift.witness_subset.size()) >= m);
    }
  }
}

TEST_CASE("budget is enforced, not degraded") {
  const Tolerance tol;
  const Frame big = full_spark_frame(4, 12, 17, tol);
  CHECK_THROWS_AS(complement_property(big, tol, 3), SubsetBudgetExceeded);
  CHECK_THROWS_AS(spark(pairs_family(5), tol, 2), SubsetBudgetExceeded);
  // generous budget succeeds and reports work done
  const auto cp = complement_property(big, tol);
  CHECK(cp.partitions_tested > 0);
}

TEST_CASE("verdicts are scale and basis invariant") {
  const Tolerance tol;
  std::mt19937_64 rng(321);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int m = n + 1 + static_cast<int>(rng() % 3);
    const Frame f = random_frame(n, m, rng);
    const auto base_pr = phase_retrieval(f, tol).verdict;
    const auto base_spark = spark(f, tol).spark;

    Frame scaled = f;
    for (auto& v : scaled.vectors) {
      const double sign = (rng() & 1) ? 1.0 : -1.0;
      v *= sign * mag(rng);
    }
    CHECK(phase_retrieval(scaled, tol).verdict == base_pr);
    CHECK(spark(scaled, tol).spark == base_spark);

    // well-conditioned invertible map built from a QR factor and a bounded
    // diagonal
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix t = qr.householderQ();
    for (int i = 0; i < n; ++i) t.col(i) *= mag(rng);
    Frame mapped = f;
    for (auto& v : mapped.vectors) v = t * v;
    CHECK(phase_retrieval(mapped, tol).verdict == base_pr);
    CHECK(spark(mapped, tol).spark == base_spark);
  }
}

TEST_CASE("riesz bound certifies perturbed bases") {
  const Tolerance tol;

  const auto exact = riesz_bound(frame_of(2, {{1, 0}, {0, 1}}), tol);
  CHECK(exact.certified);
  CHECK(exact.perturbation_sum == 0.0);
  CHECK(exact.sv_min == doctest::Approx(1.0));
  CHECK(exact.bound == doctest::Approx(1.0));
  REQUIRE(exact.pr_cross_checked);
  CHECK(*exact.pr_verdict == Verdict::Fails);

  const auto far = riesz_bound(frame_of(2, {{1, 0}, {2, 1}}), tol);
  CHECK_FALSE(far.certified);  // s = 4 >= 1, no certificate from this anchor

  CHECK_THROWS_AS(riesz_bound(frame_of(2, {{1, 0}}), tol), CountMismatch);
  CHECK_THROWS_AS(riesz_bound(pairs_family(4), tol), CountMismatch);

  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    Frame f;
    f.dim = n;
    Matrix delta(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) delta(i, j) = gauss(rng);
    const double s = 0.05 + 0.9 * static_cast<double>(trial) / 10.0;
    delta *= std::sqrt(s) / delta.norm();
    for (int i = 0; i < n; ++i) {
      Vector v = Vector::Zero(n);
      v(i) = 1.0;
      v += delta.col(i);
      f.vectors.push_back(v);
    }
    const auto r = riesz_bound(f, tol);
    CHECK(r.perturbation_sum == doctest::Approx(s));
    CHECK(r.certified);
    CHECK(r.sv_min >= r.bound - 1e-10);
    if (r.pr_cross_checked) CHECK(*r.pr_verdict == Verdict::Fails);
  }
}

TEST_CASE("parseval partition experiment measures, does not assume") {
  const Tolerance tol;
  // union of two orthonormal bases scaled by 1/sqrt(2) is Parseval but its
  // partition spans are far from orthogonal
  const double r = 1.0 / std::sqrt(2.0);
  const Frame two_bases = frame_of(
      2, {{r, 0}, {0, r}, {r * r, r * r}, {-r * r, r * r}});
  const auto check = parseval_partition_experiment(two_bases, tol);
  CHECK(check.parseval);
  CHECK_FALSE(check.orthogonal_all);
  REQUIRE(check.violation.has_value());
  CHECK(check.max_defect > 0.5);

  // a lone orthonormal basis really does split orthogonally
  const auto basis = parseval_partition_experiment(frame_of(2, {{1, 0}, {0, 1}}), tol);
  CHECK(basis.parseval);
  CHECK(basis.orthogonal_all);

  const auto not_parseval = parseval_partition_experiment(pairs_family(3), tol);
  CHECK_FALSE(not_parseval.parseval);
}

TEST_SUITE_END();
