#pragma once

// Flat key/value analysis reports with fixed sections VERDICTS, WITNESSES,
// CONFIG, LEVELS. The canonical serialization is deterministic given
// (input, seed, tolerances): doubles print with 17 significant digits and
// timings are never part of it (the CLI can append a TIMINGS section to the
// human-readable format on request, outside the canonical bytes).

#include <string>
#include <utility>
#include <vector>

#include "frameforge/linalg.hpp"

namespace frameforge {

struct Report {
  using Entries = std::vector<std::pair<std::string, std::string>>;

  Entries verdicts;
  Entries witnesses;
  Entries config;
  Entries levels;
  Entries timings;  // excluded from both default renderings

  void add_verdict(const std::string& key, const std::string& value);
  void add_witness(const std::string& key, const std::string& value);
  void add_config(const std::string& key, const std::string& value);
  void add_level(const std::string& key, const std::string& value);
  void add_timing(const std::string& key, const std::string& value);

  // First value under the key in the given section, if present.
  static const std::string* find(const Entries& section, const std::string& key);

  bool operator==(const Report& other) const;
};

enum class ReportFormat { Text, Canonical };

// Canonical: "frameforge-report v1" + bracketed sections, byte-stable.
// Text: human-readable rendering of the same entries (plus TIMINGS when
// include_timings is set). Both include tolerances and seed via CONFIG.
std::string render_report(const Report& r, ReportFormat format,
                          bool include_timings = false);

// Inverse of the canonical rendering. Throws FormatError.
Report parse_report(const std::string& text);

// %.17g, locale-independent.
std::string format_double(double value);
// Space-separated %.17g coordinates.
std::string format_vector(const Vector& v);
// Space-separated 1-based indices.
std::string format_indices(const std::vector<int>& idx);

}  // namespace frameforge
