#pragma once

// Fixed-format MPS.
//
// Column layout of data lines (1-based, inclusive):
//   field 1: 2-3    field 2: 5-12    field 3: 15-22
//   field 4: 25-36  field 5: 40-47   field 6: 50-61
//
// Names are mangled by position: variable j becomes C%07d, constraint i becomes R%07d and
// the objective row is COST. The original names follow the NAME line as comments
//   *@C C0000000 <original variable name>
//   *@R R0000000 <original row name>
// which read_mps uses to restore them; without those comments the MPS names are kept.
// Numbers are written with the most significant digits that fit the 12-character field.
// The objective constant is written as the negated RHS of COST. RANGES is always empty on
// output; on input a ranged row becomes two rows, the second named "<row>_range".
//
// The reader splits on whitespace rather than column positions, so free-format files with
// names that contain no spaces are accepted as well.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "oeh/milp/instance.hpp"

namespace oeh::milp {

class MpsParseError : public std::runtime_error {
 public:
  MpsParseError(const std::string& message, int line, int column);
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

 private:
  int line_;
  int column_;
};

std::string write_mps(const MILPInstance& instance);
void write_mps(const MILPInstance& instance, std::ostream& out);

MILPInstance read_mps(std::string_view text);
MILPInstance read_mps_file(const std::filesystem::path& path);

/// Shortest decimal rendering of v that fits in `width` characters, keeping as many
/// significant digits as possible.
std::string format_mps_number(double v, std::size_t width = 12);

}  // namespace oeh::milp
