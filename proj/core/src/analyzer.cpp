#include "frameforge/analyzer.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace frameforge {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "HOLDS";
    case Verdict::Fails: return "FAILS";
    case Verdict::HoldsProbable: return "HOLDS-probable";
  }
  throw Error("unreachable verdict");
}

void SearchConfig::validate() const {
  if (restarts < 1 || max_iters < 1 || sample_count < 1 || subset_budget < 1) {
    throw UsageError("search configuration values must all be positive");
  }
}

namespace {

// Work meter shared by every enumeration. Charged as work happens, never a
// priori, so cheap early exits stay cheap on huge inputs.
struct BudgetMeter {
  std::uint64_t budget;
  std::uint64_t used = 0;

  explicit BudgetMeter(std::uint64_t b) : budget(b) {}

  void charge() {
    if (++used > budget) {
      throw SubsetBudgetExceeded("subset budget of " + std::to_string(budget) +
                                 " tested partitions exceeded");
    }
  }
};

// Incremental Gram-Schmidt rank state for one side of a partition. push/pop
// follow the DFS; the basis stays orthonormal via a second projection pass.
// This is a fast surrogate for the SVD rank; every emitted witness is
// re-validated with numerical_rank before anyone sees it.
class SpanTracker {
 public:
  explicit SpanTracker(int dim) : basis_(dim, dim), dim_(dim) {}

  int rank() const { return rank_; }
  int size() const { return size_; }

  bool push(const Vector& x) {
    ++size_;
    if (rank_ == dim_) return false;  // span already full
    Vector r = x;
    if (rank_ > 0) {
      auto b = basis_.leftCols(rank_);
      r.noalias() -= b * (b.transpose() * r);
      r.noalias() -= b * (b.transpose() * r);
    }
    const double scale = std::max(x.norm(), 1.0);
    if (r.norm() > kDropTol * scale) {
      basis_.col(rank_) = r / r.norm();
      ++rank_;
      return true;
    }
    return false;
  }

  void pop(bool increased) {
    --size_;
    if (increased) --rank_;
  }

 private:
  // Residual drop tolerance, matching the default relative rank cutoff.
  static constexpr double kDropTol = 1e-10;

  Matrix basis_;
  int dim_;
  int rank_ = 0;
  int size_ = 0;
};

int support_top(const Vector& v) {
  for (Eigen::Index j = v.size(); j > 0; --j) {
    if (v(j - 1) != 0.0) return static_cast<int>(j);
  }
  return 0;
}

// Assignment order for the partition DFS: vector 1 first (the symmetry
// anchor, always forced to side I), then descending support so the deepest
// coordinates are decided early and the rank prunes bite as soon as
// possible. Ties keep ascending original order. Returns 0-based positions.
std::vector<int> dfs_order(const Frame& f) {
  const int m = f.count();
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return support_top(f.vectors[static_cast<std::size_t>(a)]) >
           support_top(f.vectors[static_cast<std::size_t>(b)]);
  });
  auto anchor = std::find(order.begin(), order.end(), 0);
  std::rotate(order.begin(), anchor, anchor + 1);
  return order;
}

Matrix stack_rows(const Frame& f, const std::vector<int>& idx_1based) {
  Matrix a(static_cast<Eigen::Index>(idx_1based.size()), f.dim);
  for (std::size_t r = 0; r < idx_1based.size(); ++r) {
    a.row(static_cast<Eigen::Index>(r)) =
        f.vectors[static_cast<std::size_t>(idx_1based[r] - 1)].transpose();
  }
  return a;
}

int svd_rank(const Frame& f, const std::vector<int>& idx_1based,
             const Tolerance& tol) {
  if (idx_1based.empty()) return 0;
  return numerical_rank(stack_rows(f, idx_1based), tol);
}

struct Partition {
  std::vector<int> side_i;   // 1-based, ascending, contains vector 1
  std::vector<int> side_ic;  // 1-based, ascending
  int rank_i = 0;            // validated SVD ranks
  int rank_ic = 0;
};

PartitionWitness to_witness(const Partition& p) {
  return PartitionWitness{p.side_i, p.rank_i, p.rank_ic};
}

// Coordinate pre-pass: for each coordinate k the vectors with x(k) = 0 lie
// inside a hyperplane, so {x(k) != 0} vs {x(k) = 0} is the first place to
// look for complement-property failures. Finds the canonical witness for
// every hyperplane-style failure at O(n) rank tests; never creates a
// failure that is not there.
template <typename OnFailing>
bool coordinate_prepass(const Frame& f, const Tolerance& tol, BudgetMeter& meter,
                        OnFailing&& on_failing) {
  const int n = f.dim;
  const int m = f.count();
  for (int k = 1; k <= n; ++k) {
    meter.charge();
    Partition p;
    for (int i = 1; i <= m; ++i) {
      if (f.vectors[static_cast<std::size_t>(i - 1)](k - 1) != 0.0) {
        p.side_i.push_back(i);
      } else {
        p.side_ic.push_back(i);
      }
    }
    p.rank_i = svd_rank(f, p.side_i, tol);
    p.rank_ic = svd_rank(f, p.side_ic, tol);
    if (p.rank_i >= n || p.rank_ic >= n) continue;
    // Name the side holding vector 1 "I".
    if (!std::binary_search(p.side_i.begin(), p.side_i.end(), 1)) {
      std::swap(p.side_i, p.side_ic);
      std::swap(p.rank_i, p.rank_ic);
    }
    if (on_failing(p)) return true;
  }
  return false;
}

// Exact partition enumeration: every partition with both spans proper is
// handed to on_failing (after SVD re-validation); return true from the
// callback to stop early. Vector 1 stays on side I.
template <typename OnFailing>
bool enumerate_cp_failures(const Frame& f, const Tolerance& tol,
                           BudgetMeter& meter, OnFailing&& on_failing) {
  const int n = f.dim;
  const int m = f.count();
  const std::vector<int> order = dfs_order(f);
  SpanTracker side_a(n);
  SpanTracker side_b(n);
  std::vector<std::uint8_t> choice(static_cast<std::size_t>(m), 0);

  auto emit_leaf = [&]() {
    Partition p;
    for (int pos = 0; pos < m; ++pos) {
      const int orig = order[static_cast<std::size_t>(pos)] + 1;
      (choice[static_cast<std::size_t>(pos)] == 0 ? p.side_i : p.side_ic)
          .push_back(orig);
    }
    std::sort(p.side_i.begin(), p.side_i.end());
    std::sort(p.side_ic.begin(), p.side_ic.end());
    p.rank_i = svd_rank(f, p.side_i, tol);
    p.rank_ic = svd_rank(f, p.side_ic, tol);
    // Gram-Schmidt said both proper; trust the SVD if it disagrees.
    if (p.rank_i >= n || p.rank_ic >= n) return false;
    return on_failing(p);
  };

  auto dfs = [&](auto&& self, int pos) -> bool {
    if (side_a.rank() == n || side_b.rank() == n) return false;  // all pass
    if (pos == m) return emit_leaf();
    meter.charge();
    const Vector& x = f.vectors[static_cast<std::size_t>(order[pos])];
    const bool anchored = order[static_cast<std::size_t>(pos)] == 0;
    for (int side = 0; side < (anchored ? 1 : 2); ++side) {
      SpanTracker& t = side == 0 ? side_a : side_b;
      choice[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(side);
      const bool inc = t.push(x);
      const bool found = self(self, pos + 1);
      t.pop(inc);
      if (found) return true;
    }
    return false;
  };
  return dfs(dfs, 0);
}

// Orthonormal basis of the orthogonal complement of the span of a subset.
// Subsets with empty index lists get the full identity basis.
Matrix subset_nullspace(const Frame& f, const std::vector<int>& idx,
                        const Tolerance& tol) {
  if (idx.empty()) return Matrix::Identity(f.dim, f.dim);
  return nullspace_basis(stack_rows(f, idx), tol);
}

}  // namespace

SparkResult spark(const Frame& f, const Tolerance& tol,
                  std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  const int n = f.dim;
  const int m = f.count();
  BudgetMeter meter(subset_budget);
  SparkResult result;

  // Size 1: a zero vector is already a dependent subset.
  for (int i = 1; i <= m; ++i) {
    meter.charge();
    if (f.vectors[static_cast<std::size_t>(i - 1)].norm() == 0.0) {
      result.spark = 1;
      result.witness = std::vector<int>{i};
      result.subsets_tested = meter.used;
      return result;
    }
  }

  const int max_k = std::min(n, m);
  std::vector<int> chosen;
  SpanTracker tracker(n);

  // Lexicographic combinations of size k. All proper prefixes are known
  // independent (smaller sizes were exhausted first), so only the final
  // member can close a dependence.
  auto combos = [&](auto&& self, int k, int next) -> bool {
    const int depth = static_cast<int>(chosen.size());
    if (depth == k) return false;  // handled at push of the k-th member
    for (int i = next; i <= m - (k - depth - 1); ++i) {
      meter.charge();
      chosen.push_back(i);
      const bool inc = tracker.push(f.vectors[static_cast<std::size_t>(i - 1)]);
      if (!inc && depth + 1 == k &&
          svd_rank(f, chosen, tol) < static_cast<int>(chosen.size())) {
        return true;  // chosen is the lex-smallest dependent k-subset
      }
      if (inc && depth + 1 < k) {
        if (self(self, k, i + 1)) return true;
      }
      // A non-increasing push below full size would mean a smaller dependent
      // subset that earlier rounds ruled out; treat as numerics and skip.
      tracker.pop(inc);
      chosen.pop_back();
    }
    return false;
  };

  for (int k = 2; k <= max_k; ++k) {
    chosen.clear();
    if (combos(combos, k, 1)) {
      result.spark = k;
      result.witness = chosen;
      result.subsets_tested = meter.used;
      return result;
    }
  }

  // No dependent subset of size <= min(n, m): full spark.
  if (m > n) {
    result.spark = n + 1;
    // Any n+1 vectors are dependent and all proper subsets are independent,
    // so the lex-smallest witness needs no search.
    std::vector<int> w(static_cast<std::size_t>(n) + 1);
    std::iota(w.begin(), w.end(), 1);
    result.witness = w;
  } else {
    result.spark = m + 1;
  }
  result.subsets_tested = meter.used;
  return result;
}

CpResult complement_property(const Frame& f, const Tolerance& tol,
                             std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  BudgetMeter meter(subset_budget);
  CpResult result;
  auto record = [&](const Partition& p) {
    result.verdict = Verdict::Fails;
    result.witness = to_witness(p);
    return true;
  };
  bool failed = coordinate_prepass(f, tol, meter, record) ||
                enumerate_cp_failures(f, tol, meter, record);
  if (!failed) result.verdict = Verdict::Holds;
  result.partitions_tested = meter.used;
  return result;
}

namespace {

// Unit vector e_j least aligned with u; used when both nullspace directions
// coincide (the frame does not span) and the generic pair formula collapses.
Vector fallback_axis(const Vector& u) {
  Eigen::Index j = 0;
  u.cwiseAbs().minCoeff(&j);
  Vector z = Vector::Zero(u.size());
  z(j) = 1.0;
  return z;
}

std::optional<PairCertificate> pr_certificate_from(const Frame& f,
                                                   const Partition& p,
                                                   const Tolerance& tol) {
  Matrix null_i = subset_nullspace(f, p.side_i, tol);
  Matrix null_ic = subset_nullspace(f, p.side_ic, tol);
  if (null_i.cols() == 0 || null_ic.cols() == 0) return std::nullopt;
  Vector u = null_i.col(0);
  Vector v = null_ic.col(0);
  PairCertificate cert;
  cert.kind = PairCertificate::Kind::PrCounterexample;
  if (std::min((u - v).norm(), (u + v).norm()) <= 10 * tol.cert_abs) {
    // u = +-v means u is orthogonal to every frame vector. Then z + u and
    // z - u have identical measurements for any z; pick a z away from u.
    Vector z = fallback_axis(u);
    cert.x = z + u;
    cert.y = z - u;
  } else {
    cert.x = 0.5 * (u + v);
    cert.y = 0.5 * (u - v);
  }
  if (!certify_counterexample(f, cert, tol)) return std::nullopt;
  return cert;
}

}  // namespace

PrResult phase_retrieval(const Frame& f, const Tolerance& tol,
                         std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  BudgetMeter meter(subset_budget);
  PrResult result;
  bool any_failing = false;
  auto attempt = [&](const Partition& p) {
    any_failing = true;
    auto cert = pr_certificate_from(f, p, tol);
    if (!cert) return false;  // degenerate pair; try the next failing partition
    result.verdict = Verdict::Fails;
    result.witness = to_witness(p);
    result.certificate = std::move(*cert);
    return true;
  };
  bool failed = coordinate_prepass(f, tol, meter, attempt) ||
                enumerate_cp_failures(f, tol, meter, attempt);
  result.partitions_tested = meter.used;
  if (failed) return result;
  if (any_failing) {
    throw DegenerateWitness(
        "complement property fails but no failing partition yields a usable "
        "certificate pair");
  }
  result.verdict = Verdict::Holds;
  return result;
}

bool certify_counterexample(const Frame& f, const PairCertificate& c,
                            const Tolerance& tol) {
  tol.validate();
  f.validate();
  if (c.x.size() != f.dim || c.y.size() != f.dim) {
    throw DimensionMismatch("certificate vectors do not match the frame dimension");
  }
  require_finite(c.x);
  require_finite(c.y);
  if (std::min((c.x - c.y).norm(), (c.x + c.y).norm()) <= tol.cert_abs) {
    return false;  // x = +-y does not separate anything
  }
  for (const Vector& xi : f.vectors) {
    const double gap = std::abs(std::abs(xi.dot(c.x)) - std::abs(xi.dot(c.y)));
    if (gap > tol.cert_abs) return false;
  }
  return true;
}

NrResult norm_retrieval(const Frame& f, const Tolerance& tol,
                        std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  BudgetMeter meter(subset_budget);
  NrResult result;

  auto inspect = [&](const Partition& p) {
    Matrix null_i = subset_nullspace(f, p.side_i, tol);
    Matrix null_ic = subset_nullspace(f, p.side_ic, tol);
    if (null_i.cols() == 0 || null_ic.cols() == 0) return false;
    Matrix cross = null_i.transpose() * null_ic;
    Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double sigma = svd.singularValues()(0);
    result.worst_cross_gram = std::max(result.worst_cross_gram, sigma);
    if (sigma <= tol.cert_abs) return false;  // nullspaces orthogonal here
    // Most-correlated unit pair across the two nullspaces.
    Vector u = null_i * svd.matrixU().col(0);
    Vector v = null_ic * svd.matrixV().col(0);
    PairCertificate cert;
    cert.kind = PairCertificate::Kind::NrCounterexample;
    cert.x = 0.5 * (u + v);
    cert.y = 0.5 * (u - v);
    result.verdict = Verdict::Fails;
    result.witness = to_witness(p);
    result.certificate = std::move(cert);
    return true;
  };

  bool failed = coordinate_prepass(f, tol, meter, inspect) ||
                enumerate_cp_failures(f, tol, meter, inspect);
  if (!failed) result.verdict = Verdict::Holds;
  result.partitions_tested = meter.used;
  return result;
}

OcpResult overcomplete_cp(const Frame& f, const Tolerance& tol,
                          std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  const int n = f.dim;
  const int m = f.count();
  BudgetMeter meter(subset_budget);
  const std::vector<int> order = dfs_order(f);
  SpanTracker side_a(n);
  SpanTracker side_b(n);
  std::vector<std::uint8_t> choice(static_cast<std::size_t>(m), 0);
  OcpResult result;

  auto qualifies = [&](const SpanTracker& t) {
    return t.rank() == n && t.size() > n;
  };

  auto emit_leaf = [&]() {
    Partition p;
    for (int pos = 0; pos < m; ++pos) {
      const int orig = order[static_cast<std::size_t>(pos)] + 1;
      (choice[static_cast<std::size_t>(pos)] == 0 ? p.side_i : p.side_ic)
          .push_back(orig);
    }
    std::sort(p.side_i.begin(), p.side_i.end());
    std::sort(p.side_ic.begin(), p.side_ic.end());
    p.rank_i = svd_rank(f, p.side_i, tol);
    p.rank_ic = svd_rank(f, p.side_ic, tol);
    auto ok = [&](int rank, std::size_t size) {
      return rank == n && static_cast<int>(size) > n;
    };
    if (ok(p.rank_i, p.side_i.size()) || ok(p.rank_ic, p.side_ic.size())) {
      return false;  // SVD says a side is an overcomplete spanning set
    }
    result.verdict = Verdict::Fails;
    result.witness = to_witness(p);
    return true;
  };

  auto dfs = [&](auto&& self, int pos) -> bool {
    // Once a side spans with more than n vectors it stays that way for
    // every completion.
    if (qualifies(side_a) || qualifies(side_b)) return false;
    if (pos == m) return emit_leaf();
    meter.charge();
    const Vector& x = f.vectors[static_cast<std::size_t>(order[pos])];
    const bool anchored = order[static_cast<std::size_t>(pos)] == 0;
    for (int side = 0; side < (anchored ? 1 : 2); ++side) {
      SpanTracker& t = side == 0 ? side_a : side_b;
      choice[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(side);
      const bool inc = t.push(x);
      const bool found = self(self, pos + 1);
      t.pop(inc);
      if (found) return true;
    }
    return false;
  };

  if (!dfs(dfs, 0)) result.verdict = Verdict::Holds;
  result.partitions_tested = meter.used;
  return result;
}

LiftingNumber lifting_number(const Frame& f, const Tolerance& tol,
                             std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  const int n = f.dim;
  const int m = f.count();
  if (numerical_rank(f.rows(), tol) < n) {
    throw NotSpanning("lifting number is undefined: the frame does not span");
  }
  BudgetMeter meter(subset_budget);
  LiftingNumber result;

  // Smallest spanning subset S with |S| >= |S^c|, i.e. |S| >= ceil(m/2).
  const int s_min = (m + 1) / 2;
  std::vector<int> chosen;
  SpanTracker tracker(n);

  auto combos = [&](auto&& self, int target, int next) -> bool {
    const int depth = static_cast<int>(chosen.size());
    if (tracker.rank() == n) {
      // Any completion spans; take the lexicographically smallest one.
      int fill = next;
      while (static_cast<int>(chosen.size()) < target) chosen.push_back(fill++);
      return true;
    }
    if (depth == target) return false;
    // Even taking every remaining vector cannot reach full rank: skip.
    if (tracker.rank() + (target - depth) < n) return false;
    for (int i = next; i <= m - (target - depth - 1); ++i) {
      meter.charge();
      chosen.push_back(i);
      const bool inc = tracker.push(f.vectors[static_cast<std::size_t>(i - 1)]);
      if (self(self, target, i + 1)) return true;
      tracker.pop(inc);
      chosen.pop_back();
    }
    return false;
  };

  for (int s = s_min; s <= m; ++s) {
    chosen.clear();
    if (combos(combos, s, 1) && svd_rank(f, chosen, tol) == n) {
      result.value = s - n;
      result.witness_subset = chosen;
      result.subsets_tested = meter.used;
      return result;
    }
    // An SVD disagreement here would land in the next size anyway.
  }
  throw NotSpanning("no majority spanning subset found despite a spanning frame");
}

RieszCertificate riesz_bound(const Frame& f, const Tolerance& tol,
                             std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  if (f.count() != f.dim) {
    throw CountMismatch("riesz_bound compares against the canonical basis and needs"
                        " exactly dim vectors, got " + std::to_string(f.count()) +
                        " in dimension " + std::to_string(f.dim));
  }
  RieszCertificate result;
  const int n = f.dim;
  Matrix synthesis(n, n);
  for (int i = 0; i < n; ++i) {
    Vector diff = f.vectors[static_cast<std::size_t>(i)];
    diff(i) -= 1.0;
    result.perturbation_sum += diff.squaredNorm();
    synthesis.col(i) = f.vectors[static_cast<std::size_t>(i)];
  }
  const std::vector<double> sv = singular_values(synthesis);
  result.sv_min = sv.back();
  if (result.perturbation_sum < 1.0) {
    result.bound = 1.0 - std::sqrt(result.perturbation_sum);
    // The bound is a theorem; 1e-10 absorbs the SVD's own rounding.
    result.certified = result.sv_min >= result.bound - 1e-10;
  }
  if (result.certified && n >= 2) {
    // A basis (Riesz or not) can never satisfy the complement property in
    // dimension >= 2; confirm on the actual frame. Skipped quietly when the
    // partition budget cannot cover the basis, since this is a self-check
    // and not the requested computation.
    try {
      CpResult cp = complement_property(f, tol, subset_budget);
      result.pr_cross_checked = true;
      result.pr_verdict = cp.verdict == Verdict::Holds ? Verdict::Holds
                                                       : Verdict::Fails;
      if (cp.verdict == Verdict::Holds) {
        throw Error("internal inconsistency: certified Riesz basis passed the "
                    "complement property");
      }
    } catch (const SubsetBudgetExceeded&) {
      result.pr_cross_checked = false;
    }
  }
  return result;
}

ParsevalCheck parseval_partition_experiment(const Frame& f, const Tolerance& tol,
                                            std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  const int n = f.dim;
  const int m = f.count();
  BudgetMeter meter(subset_budget);
  ParsevalCheck result;

  Matrix sum = Matrix::Zero(n, n);
  for (const Vector& x : f.vectors) sum += x * x.transpose();
  result.parseval =
      (sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= tol.cert_abs;

  // Orthonormal basis of a subset's span (not its nullspace).
  auto span_basis = [&](const std::vector<int>& idx) -> Matrix {
    if (idx.empty()) return Matrix(n, 0);
    Matrix rows = stack_rows(f, idx);
    Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
    const int r = numerical_rank(rows, tol);
    return svd.matrixV().leftCols(r);
  };

  result.orthogonal_all = true;
  // Every partition with vector 1 on side I; no pruning applies because the
  // orthogonality question is not monotone in the sides.
  if (m - 1 >= 63) {
    throw SubsetBudgetExceeded("partition count 2^" + std::to_string(m - 1) +
                               " is out of reach for exhaustive checking");
  }
  const std::uint64_t total = std::uint64_t{1} << (m - 1);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    meter.charge();
    std::vector<int> side_i{1};
    std::vector<int> side_ic;
    for (int i = 2; i <= m; ++i) {
      if (mask & (std::uint64_t{1} << (i - 2))) side_i.push_back(i);
      else side_ic.push_back(i);
    }
    Matrix bi = span_basis(side_i);
    Matrix bc = span_basis(side_ic);
    if (bi.cols() == 0 || bc.cols() == 0) continue;
    Matrix cross = bi.transpose() * bc;
    const double sigma = singular_values(cross).front();
    if (sigma > result.max_defect) {
      result.max_defect = sigma;
      if (sigma > tol.cert_abs && result.orthogonal_all) {
        result.orthogonal_all = false;
        result.violation = PartitionWitness{
            side_i, static_cast<int>(bi.cols()), static_cast<int>(bc.cols())};
      }
    }
  }
  result.partitions_tested = meter.used;
  return result;
}

}  // namespace frameforge
