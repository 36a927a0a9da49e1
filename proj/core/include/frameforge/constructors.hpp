#pragma once

// Builders for the explicit families: random full-spark frames, the curve
// family whose perps share a blind direction, the pairs family, coordinate
// lifts, translated families, three pooled Riesz blocks, nested unions,
// the hyperplane trap pair, and finitely-full-spark prefixes. Every builder
// verifies the property it claims before returning (draw, verify, redraw;
// ConstructionFailed after 16 attempts).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "frameforge/analyzer.hpp"
#include "frameforge/model.hpp"

namespace frameforge {

inline constexpr int kMaxRedraws = 16;

// Rows of a Vandermonde-style matrix at m distinct seeded nodes, normalized;
// spark verified to be min(m, n) + 1.
Frame full_spark_frame(int n, int m, std::uint64_t seed, const Tolerance& tol);

// 2n-1 vectors on the curve x(t) = (a(t), t, t^2, ..., t^(n-2), b(t)) with
// b(t) = n - n * sum_{i=2}^{n-1} t^(i-1)/i and a(t) = sum_{i=1}^{n-2} t^(2i)
// + b(t)^2, evaluated at t = 0, 1, -1, 2, -2, ... (redrawn to random
// rationals if full spark fails). Every member x satisfies
// a = ||x||^2 - a^2, so the first coordinate of (I - P_x)(1, 1/2, ..., 1/n)
// vanishes: the perps of this family all miss the same direction.
// n = 2 is degenerate (the curve is a single point) and always throws
// ConstructionFailed.
Frame an_family(int n, const Tolerance& tol, std::uint64_t seed = kDefaultSeed);

// (1, 1/2, ..., 1/n), the direction the an_family perps cannot see.
Vector phi_vector(int n);

// All e_i + e_j, 1 <= i < j <= n_top, ordered lexicographically on (i, j).
// Labels carry the pair: "pair <i> <j>".
Frame pairs_family(int n_top);

// The same family over the full index set, enumerated so that every prefix
// is exactly the set of pairs supported in an initial coordinate block:
// (1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...
SequenceFamily pairs_sequence();

// Canonical basis e_1, e_2, ... as a sequence family.
SequenceFamily canonical_basis_sequence();

// Single-member family holding (1, 1/2, 1/3, ...) with a summable tail.
SequenceFamily phi_sequence();

struct LiftResult {
  Frame lifted;                  // dimension n + k
  std::vector<Vector> appended;  // the k appended coordinate rows, length m
  int attempts = 0;

  // Convention marker: the finite lift appends new coordinates after the
  // existing ones ("append-last"). The shift_lift below prepends instead.
  static constexpr const char* kConvention = "append-last";
};

// k successive 1-lifts, each appending a seeded coordinate and verifying the
// complement property one dimension up. Throws LiftNotPossible when
// k > lifting_number(f), ConstructionFailed after kMaxRedraws bad draws.
LiftResult lift(const Frame& f, int k, std::uint64_t seed, const Tolerance& tol,
                std::uint64_t subset_budget = kDefaultSubsetBudget);

struct TranslateResult {
  Frame frame;
  std::vector<int> dropped;  // 1-based zero vectors removed by bessel scaling
  std::optional<PrResult> pr;
};

// {x_i + v}, optionally rescaling to x_i / (||x_i|| 2^i) first so the family
// is Bessel with total square sum 1/3. The phase-retrieval verdict of the
// result is recomputed and returned.
TranslateResult translate_family(const Frame& f, const Vector& v, bool bessel,
                                 const Tolerance& tol,
                                 std::uint64_t subset_budget = kDefaultSubsetBudget);

// Sequence version; verification is left to the truncation module. The
// translation vector may carry a tail formula.
SequenceFamily translate_sequence(const SequenceFamily& s, const SeqVector& v,
                                  bool bessel);

// Chooses v with 0 < v(j) < 1/2^j and v(j) != -x_i(j) for all i, then
// translates; every output vector has all coordinates nonzero within the
// frame's dimension. Deterministic (no RNG: finitely many constraints per
// coordinate leave a free midpoint).
Frame nonzero_coordinate_translate(const Frame& f, const Tolerance& tol);

// Sequence version. The per-coordinate constraints are checked against the
// first `window` members (finitely many at any truncation level; the window
// is the documented horizon).
SequenceFamily nonzero_coordinate_translate_sequence(const SequenceFamily& s,
                                                     int window = 256);

// Three Riesz sequences whose union contains, for every level n <= levels, a
// pooled block of 2*3^(n+1) vectors doing phase retrieval in the span of the
// first 3^(n+1) coordinates. Per-level perturbation off the canonical basis
// is at most 1/2^(n+1) per block, so each of the three families has total
// perturbation <= 1/2 and is Riesz. Level 1 is verified by the exact
// complement-property decider; deeper levels (54+ vectors) are verified by
// the perturbation bound plus seeded random spanning-subset rank checks,
// since exact partition enumeration is out of budget there.
std::array<SequenceFamily, 3> three_riesz_blocks(int levels, std::uint64_t seed,
                                                 const Tolerance& tol);

// Union family embedding each level frame into l2 by zero-padding. Every
// level must pass phase retrieval in its own dimension (LevelNotPR
// otherwise); the truncation to dim(level k) over levels 1..k then passes
// the complement property, which is verified for every level.
SequenceFamily nested_union(const std::vector<Frame>& per_level,
                            const Tolerance& tol,
                            std::uint64_t subset_budget = kDefaultSubsetBudget);

struct TrapFamilies {
  SequenceFamily x;  // pooled per-level full-spark frames; truncations do PR
  SequenceFamily y;  // same vectors corrected into the hyperplane w-perp
  SeqVector w;       // the trapping functional, w(j) = 2^(1-j) by default
};

// Per level n <= levels: a full-spark 2n-1 frame supported on coordinates
// 1..n goes into X; Y gets y = x - (<x,w>/w(j)) e_j with j = n+1, so
// <y, w> = 0 (exactly in floating point, since w(j) is a power of two).
// Finite truncations of X pass phase retrieval while truncations of Y fail
// the complement property: term by term Y converges to X in l2, yet every
// truncation lies in a hyperplane.
TrapFamilies hyperplane_trap(int levels, std::uint64_t seed, const Tolerance& tol,
                             std::function<double(std::int64_t)> w = nullptr);

// Greedy prefix x_1..x_m in R^window such that for every coordinate subset I
// within the window with |I| <= k_max, the projected family {P_I x_i} is full
// spark. With near_basis set, vectors are drawn as small perturbations of the
// canonical basis (total perturbation < 1), so riesz_bound certifies the
// result and phase retrieval provably fails at the square truncation.
Frame finitely_full_spark(int m, int k_max, std::uint64_t seed,
                          const Tolerance& tol, int window = 4,
                          bool near_basis = false);

struct ShiftLift {
  Frame lifted;   // in R^(n+1): {L x_i} followed by {v(i) e_1 + L y_i}
  Vector v;       // first-coordinate weights for the dependent spanning part
  CpResult cp;    // verification one dimension up
  int attempts = 0;

  static constexpr const char* kConvention = "prepend-first";
};

// One-higher-dimension lift of a union: right-shift a phase-retrieving frame
// X, and give each vector of a linearly dependent spanning set Y a nonzero
// first coordinate v(i) with <v, alpha> != 0 for Y's dependency alpha. The
// shifted union spans and keeps the complement property (verified).
ShiftLift shift_lift(const Frame& x_pr, const Frame& y_dependent_spanning,
                     std::uint64_t seed, const Tolerance& tol,
                     std::uint64_t subset_budget = kDefaultSubsetBudget);

// Rebuilds a sequence family from its "seq kind=<kind> params=<...>" header.
// Kinds: pairs, canonical, phi, three-riesz (params j=<1|2|3> levels=<n>
// seed=<s>), trap-x / trap-y (params levels=<n> seed=<s>), nested-union
// (params dims=<n:m,...> seed=<s>). Throws FormatError on unknown headers.
SequenceFamily sequence_from_header(const std::string& header,
                                    const Tolerance& tol);

}  // namespace frameforge
