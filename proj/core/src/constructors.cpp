#include "frameforge/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "frameforge/report.hpp"

namespace frameforge {

namespace {

// splitmix64 finalizer; decorrelates structured seeds (seed, level, index).
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double sign_magnitude(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  const double m = mag(rng);
  return (rng() & 1) ? m : -m;
}

int pow3(int e) {
  int r = 1;
  while (e-- > 0) r *= 3;
  return r;
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

Frame full_spark_frame(int n, int m, std::uint64_t seed, const Tolerance& tol) {
  tol.validate();
  if (n < 1 || m < 1) throw UsageError("full_spark_frame needs n >= 1 and m >= 1");
  std::mt19937_64 rng(mix(seed));
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    // Jittered equispaced nodes on [-2, 2]. The interval matters: pairwise
    // node gaps multiply into every minor, and on a length-4 interval the
    // products stay far enough from zero for rank detection at n = 12.
    std::vector<double> nodes(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      nodes[static_cast<std::size_t>(i)] =
          -2.0 + 4.0 * (i + 0.5 + jitter(rng)) / m;
    }
    Frame f;
    f.dim = n;
    for (int i = 0; i < m; ++i) {
      Vector row(n);
      double p = 1.0;
      for (int j = 0; j < n; ++j) {
        row(j) = p;
        p *= nodes[static_cast<std::size_t>(i)];
      }
      row /= row.norm();
      f.vectors.push_back(std::move(row));
    }
    if (spark(f, tol).spark == std::min(n, m) + 1) return f;
  }
  throw ConstructionFailed("no full-spark draw after " +
                           std::to_string(kMaxRedraws) + " attempts");
}

Vector phi_vector(int n) {
  if (n < 1) throw UsageError("phi_vector needs n >= 1");
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = 1.0 / (i + 1);
  return v;
}

namespace {

Vector curve_point(int n, double t) {
  // b(t) = n - n * sum_{i=2}^{n-1} t^(i-1)/i
  double acc = 0.0;
  double tp = 1.0;
  for (int i = 2; i <= n - 1; ++i) {
    tp *= t;
    acc += tp / i;
  }
  const double b = n - n * acc;
  // a(t) = sum_{i=1}^{n-2} t^(2i) + b(t)^2
  double a = b * b;
  double t2 = 1.0;
  for (int i = 1; i <= n - 2; ++i) {
    t2 *= t * t;
    a += t2;
  }
  Vector x(n);
  x(0) = a;
  tp = 1.0;
  for (int p = 2; p <= n - 1; ++p) {
    tp *= t;
    x(p - 1) = tp;
  }
  x(n - 1) = b;
  return x;
}

bool curve_frame_valid(const Frame& f, const Tolerance& tol) {
  const int n = f.dim;
  const Vector phi = phi_vector(n);
  for (const Vector& x : f.vectors) {
    const double a = x(0);
    const double nn = x.squaredNorm();
    // Defining identity a = ||x||^2 - a^2; it is what hides phi.
    if (std::abs(nn - a * a - a) > 1e-9 * std::max(1.0, nn)) return false;
    // First coordinate of (I - P_x) phi must vanish.
    const double first = 1.0 - x.dot(phi) * a / nn;
    if (std::abs(first) > 1e-9) return false;
  }
  return spark(f, tol).spark == n + 1;
}

}  // namespace

Frame an_family(int n, const Tolerance& tol, std::uint64_t seed) {
  tol.validate();
  if (n < 2) throw UsageError("the curve family needs dimension at least 2");
  if (n == 2) {
    throw ConstructionFailed(
        "the n = 2 curve degenerates: both defining sums are empty, so every "
        "parameter lands on the single point (4, 2) and no 3 distinct "
        "vectors exist");
  }
  const int m = 2 * n - 1;
  std::mt19937_64 rng(mix(seed));
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    std::vector<double> ts;
    if (attempt == 0) {
      // 0, 1, -1, 2, -2, ...
      ts.push_back(0.0);
      for (int v = 1; static_cast<int>(ts.size()) < m; ++v) {
        ts.push_back(v);
        if (static_cast<int>(ts.size()) < m) ts.push_back(-v);
      }
    } else {
      // Distinct random rationals p/8 keep the parameters exact in binary.
      std::set<int> ps;
      std::uniform_int_distribution<int> pick(-40, 40);
      while (static_cast<int>(ps.size()) < m) ps.insert(pick(rng));
      for (int p : ps) ts.push_back(p / 8.0);
    }
    Frame f;
    f.dim = n;
    for (double t : ts) {
      f.vectors.push_back(curve_point(n, t));
      f.labels.push_back("t=" + format_double(t));
    }
    if (curve_frame_valid(f, tol)) return f;
  }
  throw ConstructionFailed("curve family never reached full spark");
}

Frame pairs_family(int n_top) {
  if (n_top < 2) throw UsageError("pairs_family needs n >= 2");
  Frame f;
  f.dim = n_top;
  for (int i = 1; i < n_top; ++i) {
    for (int j = i + 1; j <= n_top; ++j) {
      Vector v = Vector::Zero(n_top);
      v(i - 1) = 1.0;
      v(j - 1) = 1.0;
      f.vectors.push_back(std::move(v));
      f.labels.push_back("pair " + std::to_string(i) + " " + std::to_string(j));
    }
  }
  return f;
}

SequenceFamily pairs_sequence() {
  SequenceFamily s;
  s.kind = "pairs";
  s.params = "";
  s.description = "e_i + e_j over all pairs, prefixes close under the top coordinate";
  s.generator = [](std::int64_t k) -> SeqVector {
    if (k < 1) throw GeneratorError("member index must be positive");
    // Pairs ordered by top coordinate j, then i: (1,2), (1,3), (2,3), ...
    std::int64_t j = 2;
    while (j * (j - 1) / 2 < k) ++j;
    const std::int64_t i = k - (j - 1) * (j - 2) / 2;
    SeqVector v;
    v.coords.assign(static_cast<std::size_t>(j), 0.0);
    v.coords[static_cast<std::size_t>(i - 1)] = 1.0;
    v.coords[static_cast<std::size_t>(j - 1)] = 1.0;
    v.label = "pair " + std::to_string(i) + " " + std::to_string(j);
    return v;
  };
  return s;
}

SequenceFamily canonical_basis_sequence() {
  SequenceFamily s;
  s.kind = "canonical";
  s.params = "";
  s.description = "canonical basis of l2";
  s.generator = [](std::int64_t k) -> SeqVector {
    if (k < 1) throw GeneratorError("member index must be positive");
    SeqVector v;
    v.coords.assign(static_cast<std::size_t>(k), 0.0);
    v.coords.back() = 1.0;
    v.label = "e " + std::to_string(k);
    return v;
  };
  return s;
}

SequenceFamily phi_sequence() {
  SequenceFamily s;
  s.kind = "phi";
  s.params = "";
  s.description = "single member (1, 1/2, 1/3, ...)";
  s.generator = [](std::int64_t k) -> SeqVector {
    if (k != 1) throw GeneratorError("phi is a single-member family");
    SeqVector v;
    v.tail = [](std::int64_t i) { return 1.0 / static_cast<double>(i); };
    v.label = "phi";
    return v;
  };
  return s;
}

LiftResult lift(const Frame& f, int k, std::uint64_t seed, const Tolerance& tol,
                std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  if (k < 0) throw UsageError("lift count must be nonnegative");
  LiftResult out;
  out.lifted = f;
  if (k == 0) return out;
  const LiftingNumber ln = lifting_number(f, tol, subset_budget);
  if (k > ln.value) {
    throw LiftNotPossible("requested " + std::to_string(k) +
                          " lifts but the lifting number is " +
                          std::to_string(ln.value));
  }
  std::mt19937_64 rng(mix(seed));
  const int m = f.count();
  for (int step = 0; step < k; ++step) {
    bool lifted = false;
    for (int attempt = 0; attempt < kMaxRedraws && !lifted; ++attempt) {
      ++out.attempts;
      // A generic new coordinate (all entries nonzero) preserves every
      // spanning pattern one dimension up; verify rather than trust.
      Vector c(m);
      for (int i = 0; i < m; ++i) c(i) = sign_magnitude(rng);
      Frame candidate;
      candidate.dim = out.lifted.dim + 1;
      candidate.labels = out.lifted.labels;
      for (int i = 0; i < m; ++i) {
        Vector v(candidate.dim);
        v.head(out.lifted.dim) = out.lifted.vectors[static_cast<std::size_t>(i)];
        v(candidate.dim - 1) = c(i);
        candidate.vectors.push_back(std::move(v));
      }
      if (complement_property(candidate, tol, subset_budget).verdict ==
          Verdict::Holds) {
        out.lifted = std::move(candidate);
        out.appended.push_back(std::move(c));
        lifted = true;
      }
    }
    if (!lifted) {
      throw ConstructionFailed("lift step " + std::to_string(step + 1) +
                               " found no working coordinate in " +
                               std::to_string(kMaxRedraws) + " draws");
    }
  }
  return out;
}

TranslateResult translate_family(const Frame& f, const Vector& v, bool bessel,
                                 const Tolerance& tol,
                                 std::uint64_t subset_budget) {
  tol.validate();
  f.validate();
  require_finite(v);
  if (v.size() != f.dim) {
    throw DimensionMismatch("translation vector has length " +
                            std::to_string(v.size()) + ", frame dimension is " +
                            std::to_string(f.dim));
  }
  TranslateResult out;
  out.frame.dim = f.dim;
  for (int i = 1; i <= f.count(); ++i) {
    Vector x = f.vectors[static_cast<std::size_t>(i - 1)];
    if (bessel) {
      const double nrm = x.norm();
      if (nrm == 0.0) {
        out.dropped.push_back(i);
        continue;
      }
      x /= nrm * std::ldexp(1.0, std::min(i, 1023));
    }
    out.frame.vectors.push_back(x + v);
    if (!f.labels.empty()) {
      out.frame.labels.push_back(f.labels[static_cast<std::size_t>(i - 1)]);
    }
  }
  if (out.frame.vectors.empty()) {
    throw ConstructionFailed("rescaling removed every vector");
  }
  try {
    out.pr = phase_retrieval(out.frame, tol, subset_budget);
  } catch (const SubsetBudgetExceeded&) {
    out.pr = std::nullopt;
  }
  return out;
}

SequenceFamily translate_sequence(const SequenceFamily& s, const SeqVector& v,
                                  bool bessel) {
  SequenceFamily out;
  out.kind = "translated-" + s.kind;
  out.params = s.params;
  out.description = "translation of " + s.kind +
                    (bessel ? " after Bessel rescaling" : "");
  auto base = s.generator;
  SeqVector shift = v;
  out.generator = [base, shift, bessel](std::int64_t k) -> SeqVector {
    SeqVector b = base(k);
    if (bessel) {
      if (b.tail) {
        throw GeneratorError("Bessel rescaling needs finitely supported members");
      }
      double nn = 0.0;
      for (double c : b.coords) nn += c * c;
      if (nn == 0.0) throw GeneratorError("cannot rescale a zero member");
      const double scale =
          1.0 / (std::sqrt(nn) *
                 std::ldexp(1.0, static_cast<int>(std::min<std::int64_t>(k, 1023))));
      for (double& c : b.coords) c *= scale;
    }
    const int sb = std::max(b.support_bound(), shift.support_bound());
    SeqVector r;
    r.coords.resize(static_cast<std::size_t>(sb));
    for (int i = 1; i <= sb; ++i) {
      r.coords[static_cast<std::size_t>(i - 1)] = b.coord(i) + shift.coord(i);
    }
    r.label = b.label;
    if (b.tail || shift.tail) {
      // Both supports end at or before sb, so only tails contribute here.
      r.tail = [b, shift](std::int64_t i) {
        return (b.tail ? b.tail(i) : 0.0) + (shift.tail ? shift.tail(i) : 0.0);
      };
    }
    return r;
  };
  return out;
}

namespace {

// Value in (0, cap) maximizing the distance to every forbidden point; the
// candidate grid is one slot wider than the forbidden set, so a positive
// gap always exists. Deterministic on purpose.
double free_midpoint(double cap, const std::vector<double>& forbidden) {
  const int count = static_cast<int>(forbidden.size()) + 2;
  double best = -1.0;
  double best_c = cap / 2;
  for (int r = 0; r < count; ++r) {
    const double c = cap * (2 * r + 1) / (2.0 * count);
    double dist = cap;
    for (double f : forbidden) dist = std::min(dist, std::abs(c - f));
    if (dist > best) {
      best = dist;
      best_c = c;
    }
  }
  return best_c;
}

}  // namespace

Frame nonzero_coordinate_translate(const Frame& f, const Tolerance& tol) {
  tol.validate();
  f.validate();
  const int n = f.dim;
  Vector v(n);
  for (int j = 1; j <= n; ++j) {
    std::vector<double> forbidden;
    for (const Vector& x : f.vectors) forbidden.push_back(-x(j - 1));
    v(j - 1) = free_midpoint(std::ldexp(1.0, -j), forbidden);
  }
  Frame g;
  g.dim = n;
  g.labels = f.labels;
  for (const Vector& x : f.vectors) {
    Vector t = x + v;
    for (int j = 0; j < n; ++j) {
      if (t(j) == 0.0) {
        throw ConstructionFailed("translated coordinate still vanished");
      }
    }
    g.vectors.push_back(std::move(t));
  }
  return g;
}

SequenceFamily nonzero_coordinate_translate_sequence(const SequenceFamily& s,
                                                     int window) {
  if (window < 1) throw UsageError("window must be positive");
  std::vector<SeqVector> members;
  for (int k = 1; k <= window; ++k) {
    try {
      members.push_back(s.at(k));
    } catch (const GeneratorError&) {
      break;  // finite family; the horizon is everything it has
    }
  }
  int horizon = 1;
  for (const SeqVector& m : members) horizon = std::max(horizon, m.support_bound());
  SeqVector v;
  v.coords.resize(static_cast<std::size_t>(horizon));
  for (int j = 1; j <= horizon; ++j) {
    std::vector<double> forbidden;
    for (const SeqVector& m : members) forbidden.push_back(-m.coord(j));
    v.coords[static_cast<std::size_t>(j - 1)] =
        free_midpoint(std::ldexp(1.0, -j), forbidden);
  }
  v.tail = [](std::int64_t i) {
    return std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(i, 2000)) - 1);
  };
  SequenceFamily out = translate_sequence(s, v, false);
  out.kind = "nonzero-translated-" + s.kind;
  out.description = "translation keeping every coordinate nonzero (horizon " +
                    std::to_string(window) + " members)";
  return out;
}

namespace {

struct RieszBlockPlan {
  std::uint64_t seed;
  int levels;

  // Members of family j, counted per level n: i runs over the basis indices
  // 3^n+1 .. 3^(n+1), each perturbed inside the first 3^(n+1) coordinates.
  SeqVector member(int j, std::int64_t k) const {
    int n = 1;
    std::int64_t before = 0;
    while (n <= levels && k > before + 2 * pow3(n)) {
      before += 2 * pow3(n);
      ++n;
    }
    if (n > levels) {
      throw GeneratorError("family has exactly " +
                           std::to_string(pow3(levels + 1) - 3) + " members");
    }
    const int dim = pow3(n + 1);
    const int i = pow3(n) + static_cast<int>(k - before);
    std::mt19937_64 rng(mix(seed ^ mix((static_cast<std::uint64_t>(n) << 40) ^
                                       (static_cast<std::uint64_t>(j) << 32) ^
                                       static_cast<std::uint64_t>(i))));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector delta(dim);
    for (int c = 0; c < dim; ++c) delta(c) = gauss(rng);
    // Per-block perturbation budget 1/2^(n+1), split evenly over the block.
    const double radius =
        0.999 * std::sqrt(std::ldexp(1.0, -(n + 1)) / (2 * pow3(n)));
    delta *= radius / delta.norm();
    delta(i - 1) += 1.0;
    SeqVector v;
    v.coords = to_std(delta);
    v.label = "level " + std::to_string(n) + " basis " + std::to_string(i);
    return v;
  }

  Frame pooled_level(int n) const {
    Frame f;
    f.dim = pow3(n + 1);
    const std::int64_t before = pow3(n) - 3;  // members below level n per family
    for (int j = 1; j <= 3; ++j) {
      for (int b = 1; b <= 2 * pow3(n); ++b) {
        SeqVector m = member(j, before + b);
        Vector x = Vector::Zero(f.dim);
        for (int c = 0; c < m.support_bound(); ++c) {
          x(c) = m.coords[static_cast<std::size_t>(c)];
        }
        f.vectors.push_back(std::move(x));
        f.labels.push_back("family " + std::to_string(j) + " " + m.label);
      }
    }
    return f;
  }
};

}  // namespace

std::array<SequenceFamily, 3> three_riesz_blocks(int levels, std::uint64_t seed,
                                                 const Tolerance& tol) {
  tol.validate();
  if (levels < 1 || levels > 4) {
    throw UsageError("levels must lie in 1..4; the ambient dimension 3^(levels+1)"
                     " makes deeper levels pointless to materialize");
  }
  std::uint64_t eff = seed;
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt, eff = mix(seed + attempt)) {
    RieszBlockPlan plan{eff, levels};
    // Level 1 (18 vectors in dimension 9) is inside exact-decider range.
    if (complement_property(plan.pooled_level(1), tol).verdict != Verdict::Holds) {
      continue;
    }
    // Deeper levels: the Riesz side is a theorem given the radius budget;
    // spanning is spot-checked on seeded random dim-sized subsets.
    bool ok = true;
    for (int n = 2; n <= levels && ok; ++n) {
      Frame pooled = plan.pooled_level(n);
      std::mt19937_64 rng(mix(eff ^ 0xabcdefULL) + static_cast<std::uint64_t>(n));
      for (int trial = 0; trial < 8 && ok; ++trial) {
        std::vector<int> idx(static_cast<std::size_t>(pooled.count()));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        Frame sub;
        sub.dim = pooled.dim;
        for (int t = 0; t < pooled.dim; ++t) {
          sub.vectors.push_back(pooled.vectors[static_cast<std::size_t>(idx[t])]);
        }
        if (numerical_rank(sub.rows(), tol) != pooled.dim) ok = false;
      }
    }
    if (!ok) continue;
    std::array<SequenceFamily, 3> out;
    for (int j = 1; j <= 3; ++j) {
      SequenceFamily& s = out[static_cast<std::size_t>(j - 1)];
      s.kind = "three-riesz";
      s.params = "j=" + std::to_string(j) + " levels=" + std::to_string(levels) +
                 " seed=" + std::to_string(eff);
      s.description = "Riesz family " + std::to_string(j) +
                      " of the pooled phase-retrieval blocks";
      s.generator = [plan, j](std::int64_t k) { return plan.member(j, k); };
    }
    return out;
  }
  throw ConstructionFailed("pooled Riesz blocks never verified");
}

SequenceFamily nested_union(const std::vector<Frame>& per_level,
                            const Tolerance& tol, std::uint64_t subset_budget) {
  tol.validate();
  if (per_level.empty()) throw UsageError("nested_union needs at least one level");
  int prev_dim = 0;
  std::string dims;
  for (std::size_t l = 0; l < per_level.size(); ++l) {
    const Frame& f = per_level[l];
    f.validate();
    if (f.dim <= prev_dim) {
      throw UsageError("level dimensions must strictly increase");
    }
    prev_dim = f.dim;
    if (phase_retrieval(f, tol, subset_budget).verdict != Verdict::Holds) {
      throw LevelNotPR("level " + std::to_string(l + 1) +
                       " does not do phase retrieval in dimension " +
                       std::to_string(f.dim));
    }
    if (!dims.empty()) dims += ",";
    dims += std::to_string(f.dim) + ":" + std::to_string(f.count());
  }

  auto members = std::make_shared<std::vector<SeqVector>>();
  for (std::size_t l = 0; l < per_level.size(); ++l) {
    const Frame& f = per_level[l];
    for (int i = 1; i <= f.count(); ++i) {
      SeqVector v;
      v.coords = to_std(f.vectors[static_cast<std::size_t>(i - 1)]);
      v.label = f.label(i).empty() ? "level " + std::to_string(l + 1) +
                                         " vector " + std::to_string(i)
                                   : f.label(i);
      members->push_back(std::move(v));
    }
  }

  SequenceFamily s;
  s.kind = "nested-union";
  s.params = "dims=" + dims;
  s.description = "zero-padded union of per-level phase-retrieval frames";
  s.generator = [members](std::int64_t k) -> SeqVector {
    if (k < 1 || k > static_cast<std::int64_t>(members->size())) {
      throw GeneratorError("union has exactly " +
                           std::to_string(members->size()) + " members");
    }
    return (*members)[static_cast<std::size_t>(k - 1)];
  };

  // The union restricted to each level's dimension keeps the complement
  // property: it contains that level's frame outright. Verified, not trusted.
  std::int64_t running = 0;
  for (const Frame& f : per_level) {
    running += f.count();
    Truncation t = truncate(s, f.dim, static_cast<int>(running));
    if (complement_property(t.frame, tol, subset_budget).verdict !=
        Verdict::Holds) {
      throw ConstructionFailed("union truncation at dimension " +
                               std::to_string(f.dim) +
                               " lost the complement property");
    }
  }
  return s;
}

TrapFamilies hyperplane_trap(int levels, std::uint64_t seed, const Tolerance& tol,
                             std::function<double(std::int64_t)> w) {
  tol.validate();
  if (levels < 1) throw UsageError("levels must be positive");

  TrapFamilies out;
  out.w.label = "w";
  if (w) {
    out.w.tail = std::move(w);
  } else {
    out.w.tail = [](std::int64_t j) {
      return std::ldexp(1.0, 1 - static_cast<int>(std::min<std::int64_t>(j, 2000)));
    };
  }
  const SeqVector& wv = out.w;

  auto frames = std::make_shared<std::vector<Frame>>();
  for (int n = 1; n <= levels; ++n) {
    frames->push_back(full_spark_frame(
        n, 2 * n - 1, mix(seed ^ mix(static_cast<std::uint64_t>(n))), tol));
  }

  auto locate = [levels](std::int64_t k) -> std::pair<int, int> {
    if (k < 1) throw GeneratorError("member index must be positive");
    int n = 1;
    while (static_cast<std::int64_t>(n) * n < k) ++n;
    if (n > levels) {
      throw GeneratorError("trap family has exactly " +
                           std::to_string(levels * levels) + " members");
    }
    const int idx = static_cast<int>(k - static_cast<std::int64_t>(n - 1) * (n - 1));
    return {n, idx};
  };

  out.x.kind = "trap-x";
  out.x.params = "levels=" + std::to_string(levels) + " seed=" + std::to_string(seed);
  out.x.description = "pooled full-spark levels; truncations do phase retrieval";
  out.x.generator = [frames, locate](std::int64_t k) -> SeqVector {
    auto [n, idx] = locate(k);
    SeqVector v;
    v.coords = to_std((*frames)[static_cast<std::size_t>(n - 1)]
                          .vectors[static_cast<std::size_t>(idx - 1)]);
    v.label = "level " + std::to_string(n) + " vector " + std::to_string(idx);
    return v;
  };

  out.y.kind = "trap-y";
  out.y.params = out.x.params;
  out.y.description = "the same vectors corrected into the hyperplane w-perp";
  out.y.generator = [frames, locate, wv](std::int64_t k) -> SeqVector {
    auto [n, idx] = locate(k);
    const Vector& x = (*frames)[static_cast<std::size_t>(n - 1)]
                          .vectors[static_cast<std::size_t>(idx - 1)];
    double c = 0.0;
    for (int j = 1; j <= n; ++j) c += x(j - 1) * wv.coord(j);
    const double wj = wv.coord(n + 1);
    if (wj == 0.0) {
      throw GeneratorError("trap functional vanishes at coordinate " +
                           std::to_string(n + 1));
    }
    SeqVector v;
    v.coords = to_std(x);
    // With w(j) a power of two the division is exact, so a verifier summing
    // coordinates in order reproduces c and cancels it to exactly zero.
    v.coords.push_back(-(c / wj));
    v.label = "level " + std::to_string(n) + " vector " + std::to_string(idx);
    return v;
  };

  // Construction-time check: every built member really is orthogonal to w.
  for (std::int64_t k = 1; k <= static_cast<std::int64_t>(levels) * levels; ++k) {
    const SeqVector y = out.y.at(k);
    double acc = 0.0;
    for (int j = 1; j <= y.support_bound(); ++j) acc += y.coord(j) * wv.coord(j);
    if (std::abs(acc) > tol.cert_abs) {
      throw ConstructionFailed("trap member " + std::to_string(k) +
                               " is not orthogonal to w");
    }
  }
  return out;
}

Frame finitely_full_spark(int m, int k_max, std::uint64_t seed,
                          const Tolerance& tol, int window, bool near_basis) {
  tol.validate();
  if (m < 1 || window < 1 || k_max < 1 || k_max > window) {
    throw UsageError("need m >= 1 and 1 <= k_max <= window");
  }
  if (near_basis && m != window) {
    throw UsageError("near-basis mode perturbs the canonical basis and needs "
                     "m == window");
  }

  // All nonempty coordinate subsets of size <= k_max, fixed order.
  std::vector<std::vector<int>> subsets;
  for (int mask = 1; mask < (1 << window); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < window; ++j) {
      if (mask & (1 << j)) idx.push_back(j);
    }
    if (static_cast<int>(idx.size()) <= k_max) subsets.push_back(std::move(idx));
  }

  std::mt19937_64 rng(mix(seed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Frame f;
  f.dim = window;

  auto projections_full_spark = [&]() {
    for (const std::vector<int>& idx : subsets) {
      Frame proj;
      proj.dim = static_cast<int>(idx.size());
      for (const Vector& x : f.vectors) {
        Vector p(proj.dim);
        for (int c = 0; c < proj.dim; ++c) p(c) = x(idx[static_cast<std::size_t>(c)]);
        proj.vectors.push_back(std::move(p));
      }
      if (spark(proj, tol).spark != std::min(proj.dim, proj.count()) + 1) {
        return false;
      }
    }
    return true;
  };

  for (int i = 1; i <= m; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRedraws && !placed; ++attempt) {
      Vector x(window);
      for (int j = 0; j < window; ++j) x(j) = gauss(rng);
      if (near_basis) {
        // Total perturbation stays at 0.9 < 1, so the basis anchor certifies.
        x *= std::sqrt(0.9 / m) / x.norm();
        x(i - 1) += 1.0;
      } else {
        x /= x.norm();
      }
      f.vectors.push_back(std::move(x));
      if (projections_full_spark()) {
        placed = true;
      } else {
        f.vectors.pop_back();
      }
    }
    if (!placed) {
      throw ConstructionFailed("vector " + std::to_string(i) +
                               " found no draw keeping all projections full "
                               "spark");
    }
  }
  return f;
}

ShiftLift shift_lift(const Frame& x_pr, const Frame& y_dependent_spanning,
                     std::uint64_t seed, const Tolerance& tol,
                     std::uint64_t subset_budget) {
  tol.validate();
  x_pr.validate();
  y_dependent_spanning.validate();
  if (x_pr.dim != y_dependent_spanning.dim) {
    throw DimensionMismatch("both frames must share one dimension");
  }
  const int n = x_pr.dim;
  if (phase_retrieval(x_pr, tol, subset_budget).verdict != Verdict::Holds) {
    throw UsageError("the first frame must do phase retrieval");
  }
  Matrix synthesis = y_dependent_spanning.rows().transpose();
  if (numerical_rank(synthesis, tol) < n) {
    throw NotSpanning("the second frame must span");
  }
  Matrix deps = nullspace_basis(synthesis, tol);
  if (deps.cols() == 0) {
    throw UsageError("the second frame must be linearly dependent");
  }
  const Vector alpha = deps.col(0);
  const int my = y_dependent_spanning.count();

  std::mt19937_64 rng(mix(seed));
  ShiftLift out;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    ++out.attempts;
    Vector v(my);
    for (int i = 0; i < my; ++i) v(i) = sign_magnitude(rng);
    // The weights must see the dependency, or the lifted copies stay flat.
    if (std::abs(v.dot(alpha)) <= tol.cert_abs * v.norm()) continue;
    Frame lifted;
    lifted.dim = n + 1;
    const bool labeled = !x_pr.labels.empty() || !y_dependent_spanning.labels.empty();
    for (int i = 1; i <= x_pr.count(); ++i) {
      Vector z(n + 1);
      z(0) = 0.0;
      z.tail(n) = x_pr.vectors[static_cast<std::size_t>(i - 1)];
      lifted.vectors.push_back(std::move(z));
      if (labeled) lifted.labels.push_back(x_pr.label(i));
    }
    for (int i = 1; i <= my; ++i) {
      Vector z(n + 1);
      z(0) = v(i - 1);
      z.tail(n) = y_dependent_spanning.vectors[static_cast<std::size_t>(i - 1)];
      lifted.vectors.push_back(std::move(z));
      if (labeled) lifted.labels.push_back(y_dependent_spanning.label(i));
    }
    CpResult cp = complement_property(lifted, tol, subset_budget);
    if (cp.verdict == Verdict::Holds) {
      out.lifted = std::move(lifted);
      out.v = std::move(v);
      out.cp = std::move(cp);
      return out;
    }
  }
  throw ConstructionFailed("no weight draw kept the complement property upstairs");
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw FormatError("malformed parameter '" + token + "'");
    }
    out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return out;
}

std::int64_t need_int(const std::map<std::string, std::string>& params,
                      const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw FormatError("missing parameter '" + key + "'");
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw FormatError("parameter '" + key + "' is not an integer: " + it->second);
  }
}

std::uint64_t need_seed(const std::map<std::string, std::string>& params) {
  const std::int64_t v = need_int(params, "seed");
  if (v < 0) throw FormatError("seed must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

SequenceFamily sequence_from_header(const std::string& header,
                                    const Tolerance& tol) {
  if (header.rfind("seq ", 0) != 0) {
    throw FormatError("sequence header must start with 'seq '");
  }
  const auto kpos = header.find("kind=");
  const auto ppos = header.find(" params=");
  if (kpos == std::string::npos || ppos == std::string::npos || kpos > ppos) {
    throw FormatError("sequence header needs kind= and params= fields");
  }
  const std::string kind = header.substr(kpos + 5, ppos - (kpos + 5));
  const std::string ptext = header.substr(ppos + 8);

  if (kind == "pairs") return pairs_sequence();
  if (kind == "canonical") return canonical_basis_sequence();
  if (kind == "phi") return phi_sequence();

  const auto params = parse_params(ptext);
  if (kind == "three-riesz") {
    const std::int64_t j = need_int(params, "j");
    const std::int64_t levels = need_int(params, "levels");
    if (j < 1 || j > 3) throw FormatError("j must be 1, 2, or 3");
    return three_riesz_blocks(static_cast<int>(levels), need_seed(params),
                              tol)[static_cast<std::size_t>(j - 1)];
  }
  if (kind == "trap-x" || kind == "trap-y") {
    const std::int64_t levels = need_int(params, "levels");
    TrapFamilies trap =
        hyperplane_trap(static_cast<int>(levels), need_seed(params), tol);
    return kind == "trap-x" ? trap.x : trap.y;
  }
  if (kind == "nested-union") {
    auto it = params.find("dims");
    if (it == params.end()) throw FormatError("missing parameter 'dims'");
    const std::uint64_t seed = need_seed(params);
    std::vector<Frame> levels;
    std::istringstream in(it->second);
    std::string piece;
    while (std::getline(in, piece, ',')) {
      const auto colon = piece.find(':');
      if (colon == std::string::npos) {
        throw FormatError("dims entries look like <dim>:<count>, got " + piece);
      }
      int dim = 0;
      int count = 0;
      try {
        dim = std::stoi(piece.substr(0, colon));
        count = std::stoi(piece.substr(colon + 1));
      } catch (const std::exception&) {
        throw FormatError("dims entries look like <dim>:<count>, got " + piece);
      }
      levels.push_back(full_spark_frame(
          dim, count,
          mix(seed ^ mix(static_cast<std::uint64_t>(levels.size() + 1))), tol));
    }
    if (levels.empty()) throw FormatError("dims lists no levels");
    SequenceFamily s = nested_union(levels, tol);
    s.params = "dims=" + it->second + " seed=" + std::to_string(seed);
    return s;
  }
  throw FormatError("unknown sequence kind '" + kind + "'");
}

}  // namespace frameforge
