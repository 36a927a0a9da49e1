#include "frameforge/model.hpp"

#include "frameforge/constructors.hpp"

#include "doctest.h"

#include <cmath>
#include <string>

using namespace frameforge;

TEST_SUITE_BEGIN("model");

TEST_CASE("frame text round-trips bit-exactly") {
  Frame f;
  f.dim = 3;
  Vector a(3), b(3);
  a << 0.1, -2.0 / 3.0, 1e-17;
  b << 1.0, 0.0, -0.0;
  f.vectors = {a, b};
  f.labels = {"first", "pair 1 2"};

  const std::string text = serialize_frame(f);
  const Frame g = parse_frame(text);
  REQUIRE(g.count() == 2);
  CHECK(g.dim == 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(f.vectors[i](j) == g.vectors[i](j));  // exact, 17 digits
  CHECK(g.label(1) == "first");
  CHECK(g.label(2) == "pair 1 2");
  CHECK(serialize_frame(g) == text);
}

TEST_CASE("frame parser accepts comments and flexible whitespace") {
  const Frame f = parse_frame(
      "# leading comment\n"
      "frame n=2 m=3\n"
      "1 0\n"
      "# interior comment\n"
      "  0.5\t0.5 \n"
      "0 1\n");
  REQUIRE(f.count() == 3);
  CHECK(f.vectors[1](0) == 0.5);
  CHECK(f.labels.empty());
}

TEST_CASE("frame parser rejects malformed input") {
  CHECK_THROWS_AS(parse_frame(""), FormatError);
  CHECK_THROWS_AS(parse_frame("frame n=2 m=2\n1 0\n"), FormatError);        // short
  CHECK_THROWS_AS(parse_frame("frame n=2 m=1\n1 0\n0 1\n"), FormatError);   // long
  CHECK_THROWS_AS(parse_frame("frame n=2 m=1\n1 zebra\n"), FormatError);
  CHECK_THROWS_AS(parse_frame("frame n=2 m=1\n1\n"), FormatError);          // row width
  CHECK_THROWS_AS(parse_frame("frame n=0 m=1\n\n"), FormatError);
  CHECK_THROWS_AS(parse_frame("matrix n=2 m=1\n1 0\n"), FormatError);
  CHECK_THROWS_AS(parse_frame("frame n=2 m=1\n1 nan\n"), Error);
}

TEST_CASE("frame validate") {
  Frame f;
  f.dim = 2;
  CHECK_THROWS_AS(f.validate(), Error);  // no vectors
  Vector v(2);
  v << 1, 0;
  f.vectors = {v};
  CHECK_NOTHROW(f.validate());
  f.labels = {"a", "b"};
  CHECK_THROWS_AS(f.validate(), FormatError);  // label count mismatch
  f.labels = {"a"};
  Vector w(3);
  w << 1, 0, 0;
  f.vectors.push_back(w);
  f.labels.push_back("b");
  CHECK_THROWS_AS(f.validate(), Error);  // length mismatch
}

TEST_CASE("rows stacks vectors as the analysis operator") {
  const Frame f = pairs_family(3);
  const Matrix r = f.rows();
  CHECK(r.rows() == 3);
  CHECK(r.cols() == 3);
  CHECK(r(0, 0) == 1.0);
  CHECK(r(0, 2) == 0.0);
}

TEST_CASE("seq vector tail kicks in past the support bound") {
  SeqVector v;
  v.coords = {1.0, 0.5};
  v.tail = [](std::int64_t i) { return 1.0 / static_cast<double>(i); };
  CHECK(v.support_bound() == 2);
  CHECK(v.coord(1) == 1.0);
  CHECK(v.coord(2) == 0.5);
  CHECK(v.coord(10) == doctest::Approx(0.1));

  SeqVector finite;
  finite.coords = {2.0};
  CHECK(finite.coord(5) == 0.0);  // null tail means zero
}

TEST_CASE("sequence family header and generator wrapping") {
  const SequenceFamily pairs = pairs_sequence();
  CHECK(pairs.header() == "seq kind=pairs params=");
  CHECK_THROWS_AS(pairs.at(0), GeneratorError);

  SequenceFamily boom;
  boom.kind = "boom";
  boom.generator = [](std::int64_t) -> SeqVector { throw std::bad_alloc(); };
  CHECK_THROWS_AS(boom.at(1), GeneratorError);
}

TEST_CASE("truncate keeps zero vectors in place and flags them") {
  const SequenceFamily pairs = pairs_sequence();
  // first coordinate only: (1,2) -> (2,0,..)? no: e1+e2 truncated to N=1 is (1)
  const Truncation t = truncate(pairs, 1, 3);
  REQUIRE(t.frame.count() == 3);
  CHECK(t.frame.dim == 1);
  CHECK(t.frame.vectors[0](0) == 1.0);   // (1,2) sees coordinate 1
  CHECK(t.frame.vectors[2](0) == 0.0);   // (2,3) vanishes there
  REQUIRE(t.zero_vectors.size() == 1);
  CHECK(t.zero_vectors[0] == 3);

  const Truncation wide = truncate(pairs, 4, 6);
  CHECK(wide.zero_vectors.empty());
  CHECK(wide.frame.label(6) == "pair 3 4");

  CHECK_THROWS_AS(truncate(pairs, 0, 3), UsageError);
  CHECK_THROWS_AS(truncate(pairs, 3, 0), UsageError);
}

TEST_CASE("certificate kind names round-trip") {
  for (auto kind : {PairCertificate::Kind::PrCounterexample,
                    PairCertificate::Kind::NrCounterexample,
                    PairCertificate::Kind::OrthogonalWitness}) {
    CHECK(certificate_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(certificate_kind_from_string("banana"), FormatError);
}

TEST_SUITE_END();
