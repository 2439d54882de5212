#pragma once

// Minimal CSV and file helpers: comma-separated, '.' decimals, header row, no quoting.

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oeh::io {

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed content; the message carries source and line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), source_(source), line_(line) {}

  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  std::string source_;
  int line_ = 0;
};

struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  ///< file line of every row

  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
  /// Parses every cell of a column as a number; throws ParseError naming the line.
  [[nodiscard]] std::vector<double> numbers(std::size_t column) const;
  [[nodiscard]] double number(std::size_t row, std::size_t column) const;
};

/// Blank lines and lines starting with '#' are skipped. Every row must have as many cells
/// as the header.
Table read_csv(std::istream& in, const std::string& source);
Table read_csv_file(const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace oeh::io
