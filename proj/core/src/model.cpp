#include "frameforge/model.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace frameforge {

Matrix Frame::rows() const {
  Matrix a(count(), dim);
  for (int i = 0; i < count(); ++i) {
    a.row(i) = vectors[static_cast<std::size_t>(i)].transpose();
  }
  return a;
}

std::string Frame::label(int i) const {
  if (i < 1 || i > count()) {
    throw IndexOutOfRange("frame label index " + std::to_string(i) +
                          " outside 1.." + std::to_string(count()));
  }
  if (labels.empty()) return "";
  return labels[static_cast<std::size_t>(i - 1)];
}

void Frame::validate() const {
  if (dim < 1) throw FormatError("frame dimension must be at least 1");
  if (vectors.empty()) throw FormatError("frame must contain at least one vector");
  if (!labels.empty() && labels.size() != vectors.size()) {
    throw FormatError("frame has " + std::to_string(labels.size()) +
                      " labels for " + std::to_string(vectors.size()) + " vectors");
  }
  for (const Vector& v : vectors) {
    if (v.size() != dim) {
      throw DimensionMismatch("frame vector of length " + std::to_string(v.size()) +
                              " in dimension " + std::to_string(dim));
    }
    require_finite(v);
  }
}

Matrix ProjectionFamily::projector(int i) const {
  if (i < 1 || i > count()) {
    throw IndexOutOfRange("projection index " + std::to_string(i) + " outside 1.." +
                          std::to_string(count()));
  }
  const Matrix& b = ranges[static_cast<std::size_t>(i - 1)];
  return b * b.transpose();
}

void ProjectionFamily::validate(const Tolerance& tol) const {
  if (dim < 1) throw FormatError("projection family dimension must be at least 1");
  if (ranges.empty()) throw FormatError("projection family must be nonempty");
  for (const Matrix& b : ranges) {
    require_finite(b);
    if (b.rows() != dim) {
      throw DimensionMismatch("projection range rows != family dimension");
    }
    if (b.cols() < 1 || b.cols() > dim) {
      throw FormatError("projection range size must lie in 1..dim");
    }
    Matrix gram = b.transpose() * b;
    gram -= Matrix::Identity(b.cols(), b.cols());
    if (gram.cwiseAbs().maxCoeff() > tol.cert_abs) {
      throw FormatError("projection range basis is not orthonormal within cert_abs");
    }
  }
}

double SeqVector::coord(std::int64_t i) const {
  if (i < 1) throw IndexOutOfRange("sequence coordinate index must be >= 1");
  if (i <= support_bound()) return coords[static_cast<std::size_t>(i - 1)];
  return tail ? tail(i) : 0.0;
}

SeqVector SequenceFamily::at(std::int64_t k) const {
  if (k < 1) throw GeneratorError("sequence member index must be >= 1");
  if (!generator) throw GeneratorError("sequence family has no generator");
  SeqVector sv;
  try {
    sv = generator(k);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw GeneratorError("generator failed at index " + std::to_string(k) + ": " +
                         e.what());
  }
  for (double c : sv.coords) {
    if (!std::isfinite(c)) {
      throw GeneratorError("generator produced a non-finite coordinate at index " +
                           std::to_string(k));
    }
  }
  return sv;
}

std::string SequenceFamily::header() const {
  return "seq kind=" + kind + " params=" + params;
}

std::string to_string(PairCertificate::Kind kind) {
  switch (kind) {
    case PairCertificate::Kind::PrCounterexample: return "PR-counterexample";
    case PairCertificate::Kind::NrCounterexample: return "NR-counterexample";
    case PairCertificate::Kind::OrthogonalWitness: return "orthogonal-witness";
  }
  throw Error("unreachable certificate kind");
}

PairCertificate::Kind certificate_kind_from_string(const std::string& text) {
  if (text == "PR-counterexample") return PairCertificate::Kind::PrCounterexample;
  if (text == "NR-counterexample") return PairCertificate::Kind::NrCounterexample;
  if (text == "orthogonal-witness") return PairCertificate::Kind::OrthogonalWitness;
  throw FormatError("unknown certificate kind: " + text);
}

namespace {

// Strict double parse: the whole token must be consumed.
double parse_number(const std::string& token, std::int64_t line_no) {
  try {
    std::size_t used = 0;
    double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": non-numeric token '" +
                      token + "'");
  }
}

int parse_header_int(const std::string& header, const std::string& key) {
  const std::string want = key + "=";
  std::istringstream fields(header);
  std::string field;
  while (fields >> field) {
    if (field.rfind(want, 0) == 0) {
      const std::string digits = field.substr(want.size());
      try {
        std::size_t used = 0;
        int value = std::stoi(digits, &used);
        if (used != digits.size()) throw std::invalid_argument("trailing");
        return value;
      } catch (const std::exception&) {
        throw FormatError("bad header field '" + field + "'");
      }
    }
  }
  throw FormatError("header is missing " + key + "=<int>");
}

}  // namespace

Frame parse_frame(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::int64_t line_no = 0;

  Frame f;
  bool have_header = false;
  int expected_m = 0;
  std::vector<std::pair<int, std::string>> labels;

  while (std::getline(in, line)) {
    ++line_no;
    // Trim trailing CR from files written on other platforms.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = line;
    std::size_t first = stripped.find_first_not_of(" \t");
    if (first == std::string::npos) continue;  // blank
    if (stripped[first] == '#') {
      // Comments are ignored, except the structured label form
      // "# label <index> <text>" that serialize_frame emits.
      std::istringstream cs(stripped.substr(first + 1));
      std::string tag;
      int idx = 0;
      if (cs >> tag && tag == "label" && cs >> idx) {
        std::string rest;
        std::getline(cs, rest);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        labels.emplace_back(idx, rest);
      }
      continue;
    }
    if (!have_header) {
      std::istringstream hs(line);
      std::string word;
      hs >> word;
      if (word != "frame") {
        throw FormatError("line " + std::to_string(line_no) +
                          ": expected 'frame n=<int> m=<int>' header");
      }
      f.dim = parse_header_int(line, "n");
      expected_m = parse_header_int(line, "m");
      if (f.dim < 1 || expected_m < 1) {
        throw FormatError("header dimensions must be positive");
      }
      have_header = true;
      continue;
    }
    if (static_cast<int>(f.vectors.size()) == expected_m) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": more rows than the declared m=" +
                        std::to_string(expected_m));
    }
    Vector v(f.dim);
    std::istringstream vs(line);
    std::string token;
    int col = 0;
    while (vs >> token) {
      if (col == f.dim) {
        throw FormatError("line " + std::to_string(line_no) + ": more than n=" +
                          std::to_string(f.dim) + " entries");
      }
      v(col++) = parse_number(token, line_no);
    }
    if (col != f.dim) {
      throw FormatError("line " + std::to_string(line_no) + ": expected n=" +
                        std::to_string(f.dim) + " entries, got " +
                        std::to_string(col));
    }
    f.vectors.push_back(std::move(v));
  }

  if (!have_header) throw FormatError("missing 'frame' header line");
  if (static_cast<int>(f.vectors.size()) != expected_m) {
    throw FormatError("declared m=" + std::to_string(expected_m) + " but found " +
                      std::to_string(f.vectors.size()) + " rows");
  }
  if (!labels.empty()) {
    f.labels.assign(f.vectors.size(), "");
    for (const auto& [idx, text] : labels) {
      if (idx >= 1 && idx <= f.count()) {
        f.labels[static_cast<std::size_t>(idx - 1)] = text;
      }
    }
  }
  f.validate();
  return f;
}

namespace {

std::string format_entry(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

std::string serialize_frame(const Frame& f) {
  f.validate();
  std::string out = "frame n=" + std::to_string(f.dim) +
                    " m=" + std::to_string(f.count()) + "\n";
  for (const Vector& v : f.vectors) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (j > 0) out += ' ';
      out += format_entry(v(j));
    }
    out += '\n';
  }
  for (int i = 1; i <= f.count(); ++i) {
    const std::string l = f.label(i);
    if (!l.empty()) {
      out += "# label " + std::to_string(i) + " " + l + "\n";
    }
  }
  return out;
}

Truncation truncate(const SequenceFamily& s, int n_level, int k_count) {
  if (n_level < 1 || k_count < 1) {
    throw UsageError("truncate needs N >= 1 and K >= 1");
  }
  Truncation t;
  t.frame.dim = n_level;
  bool any_label = false;
  for (std::int64_t k = 1; k <= k_count; ++k) {
    SeqVector sv = s.at(k);
    Vector v(n_level);
    for (int i = 1; i <= n_level; ++i) {
      v(i - 1) = sv.coord(i);
    }
    require_finite(v);
    if ((v.array() == 0.0).all()) {
      t.zero_vectors.push_back(static_cast<int>(k));
    }
    t.frame.vectors.push_back(std::move(v));
    t.frame.labels.push_back(sv.label);
    if (!sv.label.empty()) any_label = true;
  }
  if (!any_label) t.frame.labels.clear();
  return t;
}

}  // namespace frameforge
