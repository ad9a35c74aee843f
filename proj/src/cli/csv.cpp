#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "npulse/csv.hpp"
#include "npulse/error.hpp"
#include "npulse/phase_cache.hpp"

namespace npulse {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void CsvDocument::add_row(std::vector<double> row) {
  if (row.size() != header.size()) {
    throw InvalidInput("row", "row has " + std::to_string(row.size()) + " fields, header has " +
                                  std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::string CsvDocument::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void CsvDocument::write(const std::filesystem::path& path) const { write_file_atomic(path, to_string()); }

CsvDocument CsvDocument::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CsvDocument doc;
  if (!std::getline(in, line) || line.empty()) throw IoError("CSV has no header");
  doc.header = split(line);
  while (std::getline(in, line)) {
    const auto fields = split(line);
    if (fields.size() != doc.header.size()) throw IoError("ragged CSV row: " + line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size()) {
        throw IoError("non-numeric CSV field '" + f + "'");
      }
      row.push_back(v);
    }
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

}  // namespace npulse
