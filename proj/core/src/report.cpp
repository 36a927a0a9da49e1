#include "frameforge/report.hpp"

#include <cstdio>
#include <sstream>

#include "frameforge/errors.hpp"

namespace frameforge {

void Report::add_verdict(const std::string& key, const std::string& value) {
  verdicts.emplace_back(key, value);
}
void Report::add_witness(const std::string& key, const std::string& value) {
  witnesses.emplace_back(key, value);
}
void Report::add_config(const std::string& key, const std::string& value) {
  config.emplace_back(key, value);
}
void Report::add_level(const std::string& key, const std::string& value) {
  levels.emplace_back(key, value);
}
void Report::add_timing(const std::string& key, const std::string& value) {
  timings.emplace_back(key, value);
}

const std::string* Report::find(const Entries& section, const std::string& key) {
  for (const auto& [k, v] : section) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool Report::operator==(const Report& other) const {
  return verdicts == other.verdicts && witnesses == other.witnesses &&
         config == other.config && levels == other.levels;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_double(v(i));
  }
  return out;
}

std::string format_indices(const std::vector<int>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(idx[i]);
  }
  return out;
}

namespace {

constexpr const char* kMagic = "frameforge-report v1";

void render_section(std::string& out, const char* name,
                    const Report::Entries& entries) {
  out += '[';
  out += name;
  out += "]\n";
  for (const auto& [k, v] : entries) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
}

void render_text_section(std::string& out, const char* name,
                         const Report::Entries& entries) {
  if (entries.empty()) return;
  out += name;
  out += '\n';
  for (const auto& [k, v] : entries) {
    out += "  ";
    out += k;
    out += ": ";
    out += v;
    out += '\n';
  }
}

}  // namespace

std::string render_report(const Report& r, ReportFormat format,
                          bool include_timings) {
  std::string out;
  if (format == ReportFormat::Canonical) {
    // Canonical bytes: fixed section order, every section present, timings
    // never included.
    out += kMagic;
    out += '\n';
    render_section(out, "VERDICTS", r.verdicts);
    render_section(out, "WITNESSES", r.witnesses);
    render_section(out, "CONFIG", r.config);
    render_section(out, "LEVELS", r.levels);
    return out;
  }
  out += "frameforge report\n";
  render_text_section(out, "VERDICTS", r.verdicts);
  render_text_section(out, "WITNESSES", r.witnesses);
  render_text_section(out, "CONFIG", r.config);
  render_text_section(out, "LEVELS", r.levels);
  if (include_timings) {
    render_text_section(out, "TIMINGS", r.timings);
  }
  return out;
}

Report parse_report(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw FormatError("report does not start with '" + std::string(kMagic) + "'");
  }
  Report r;
  Report::Entries* current = nullptr;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[VERDICTS]") current = &r.verdicts;
      else if (line == "[WITNESSES]") current = &r.witnesses;
      else if (line == "[CONFIG]") current = &r.config;
      else if (line == "[LEVELS]") current = &r.levels;
      else throw FormatError("line " + std::to_string(line_no) +
                             ": unknown section " + line);
      continue;
    }
    const std::size_t sep = line.find(" = ");
    if (current == nullptr || sep == std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected 'key = value' inside a section");
    }
    current->emplace_back(line.substr(0, sep), line.substr(sep + 3));
  }
  return r;
}

}  // namespace frameforge
