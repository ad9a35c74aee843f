#pragma once

// Rectangular numeric CSV: fixed header, comma separators, LF line endings,
// every value written with 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

namespace npulse {

/// printf("%.17g"); parses back to the same double.
std::string format_double(double value);

struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Appends a row; throws InvalidInput if its width differs from the header.
  void add_row(std::vector<double> row);
  std::string to_string() const;
  /// Atomic write (temporary sibling + rename). Throws IoError.
  void write(const std::filesystem::path& path) const;

  /// Throws IoError on a ragged or non-numeric document.
  static CsvDocument parse(const std::string& text);
};

}  // namespace npulse
