#pragma once

// Domain objects: finite frames, projection families, lazy sequence families
// over l2, partition witnesses, certificate pairs, and the FRAME v1 text
// format. Vector indices that appear in witnesses, labels, and reports are
// 1-based throughout the public surface.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frameforge/linalg.hpp"

namespace frameforge {

struct Frame {
  int dim = 0;                       // n
  std::vector<Vector> vectors;       // m vectors, each of length dim
  std::vector<std::string> labels;   // empty, or one label per vector

  int count() const { return static_cast<int>(vectors.size()); }
  // Vectors stacked as rows: an m x dim matrix (the analysis operator).
  Matrix rows() const;
  // Label of 1-based vector i, or "" when unlabeled.
  std::string label(int i) const;
  // Throws on non-finite entries, length mismatches, or m = 0.
  void validate() const;
};

struct ProjectionFamily {
  int dim = 0;
  // One entry per projection: a dim x r matrix with orthonormal columns
  // spanning the range, 1 <= r <= dim.
  std::vector<Matrix> ranges;

  int count() const { return static_cast<int>(ranges.size()); }
  // Projector matrix of 1-based member i.
  Matrix projector(int i) const;
  void validate(const Tolerance& tol) const;
};

// One member of a sequence family: finitely many explicit coordinates plus an
// optional square-summable tail formula for coordinates past the support
// bound (only translated families need the tail; everything else is finitely
// supported).
struct SeqVector {
  std::vector<double> coords;                    // coordinates 1..support_bound
  std::function<double(std::int64_t)> tail;      // i > support_bound; null = 0
  std::string label;

  int support_bound() const { return static_cast<int>(coords.size()); }
  double coord(std::int64_t i) const;            // 1-based
};

struct SequenceFamily {
  std::string kind;     // construction name, e.g. "pairs"
  std::string params;   // parameter text; header() is reproducible from these
  std::string description;
  // k = 1, 2, ...; must be pure in k (safe to call concurrently). Support
  // bounds are nondecreasing in k for every family built here, which is what
  // lets truncation pick K = "all vectors supported within N" by scanning.
  std::function<SeqVector(std::int64_t)> generator;

  SeqVector at(std::int64_t k) const;  // wraps generator failures in GeneratorError
  std::string header() const;          // "seq kind=<kind> params=<params>"
};

// A partition (I, I^c) of vector indices. As a complement-property failure
// witness both ranks are below the ambient dimension. I is the side holding
// vector index 1.
struct PartitionWitness {
  std::vector<int> subset_I;  // 1-based, ascending
  int rank_I = 0;
  int rank_Ic = 0;
};

struct PairCertificate {
  enum class Kind { PrCounterexample, NrCounterexample, OrthogonalWitness };

  Vector x;
  Vector y;
  Kind kind = Kind::PrCounterexample;
};

std::string to_string(PairCertificate::Kind kind);
PairCertificate::Kind certificate_kind_from_string(const std::string& text);

// FRAME v1: first line "frame n=<int> m=<int>", then m lines of n
// whitespace-separated decimals; '#' lines are comments. Throws FormatError.
Frame parse_frame(const std::string& text);

// Round-trips through parse_frame bit-exactly (17 significant digits).
std::string serialize_frame(const Frame& f);

struct Truncation {
  Frame frame;                   // K vectors restricted to coordinates 1..N
  std::vector<int> zero_vectors; // 1-based indices that became zero (kept)
};

// First K members of s restricted to coordinates 1..N. Zero vectors are
// retained and flagged so index-based witnesses stay valid.
Truncation truncate(const SequenceFamily& s, int n_level, int k_count);

}  // namespace frameforge
