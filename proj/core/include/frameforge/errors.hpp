#pragma once

#include <stdexcept>
#include <string>

namespace frameforge {

// Base for everything this library throws on purpose. Callers that only want
// "did it work" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix or vector entry is NaN or infinite.
class NonFiniteEntry : public Error {
 public:
  using Error::Error;
};

// min_eig_sym was handed a matrix that is not symmetric within tolerance.
class NotSymmetric : public Error {
 public:
  using Error::Error;
};

// Malformed FRAME v1 / report / sequence-header text.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A sequence generator failed to produce the requested member.
class GeneratorError : public Error {
 public:
  using Error::Error;
};

// Vectors of different lengths were combined.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A partition or subset enumeration exceeded its work budget. Never downgraded
// to sampling; the caller sees this error instead of an approximate verdict.
class SubsetBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// No usable witness pair could be built from any failing partition.
class DegenerateWitness : public Error {
 public:
  using Error::Error;
};

// lifting_number on a frame that does not span its space.
class NotSpanning : public Error {
 public:
  using Error::Error;
};

// A randomized builder could not verify its output within the redraw limit.
class ConstructionFailed : public Error {
 public:
  using Error::Error;
};

// Requested lift exceeds the frame's lifting number.
class LiftNotPossible : public Error {
 public:
  using Error::Error;
};

// riesz_bound needs exactly dim vectors.
class CountMismatch : public Error {
 public:
  using Error::Error;
};

// 1-based vector index outside the frame.
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// nested_union level that fails its own phase-retrieval check.
class LevelNotPR : public Error {
 public:
  using Error::Error;
};

// Bad command-line arguments or configuration values.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace frameforge
