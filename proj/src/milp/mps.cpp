#include "oeh/milp/mps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace oeh::milp {

namespace {

constexpr std::string_view kObjectiveRow = "COST";
constexpr std::string_view kRhsSet = "RHS";
constexpr std::string_view kBoundSet = "BND";

std::string column_name(std::size_t j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "C%07zu", j);
  return buf;
}

std::string row_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "R%07zu", i);
  return buf;
}

/// Replaces characters that would break a whitespace-delimited line.
std::string sanitize(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') ch = '_';
  }
  return out.empty() ? std::string("_") : out;
}

std::string comment_safe(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (ch == '\n' || ch == '\r') ch = '_';
  }
  return out;
}

void pad_to(std::string& line, std::size_t column) {
  if (line.size() < column - 1) line.resize(column - 1, ' ');
  else if (!line.empty() && line.back() != ' ') line.push_back(' ');
}

std::string data_line(std::string_view f1, std::string_view f2, std::string_view f3 = {}, std::string_view f4 = {},
                      std::string_view f5 = {}, std::string_view f6 = {}) {
  std::string line = " ";
  line += f1;
  const std::pair<std::size_t, std::string_view> fields[] = {{5, f2}, {15, f3}, {25, f4}, {40, f5}, {50, f6}};
  for (const auto& [col, text] : fields) {
    if (text.empty()) continue;
    pad_to(line, col);
    line += text;
  }
  return line;
}

/// "1.5e+06" -> "1.5e6", "2e-07" -> "2e-7".
std::string compact_exponent(std::string s) {
  const auto e = s.find_first_of("eE");
  if (e == std::string::npos) return s;
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  bool negative = false;
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
    negative = exp[0] == '-';
    exp.erase(0, 1);
  }
  exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
  return mant + "e" + (negative ? "-" : "") + exp;
}

/// "0.25" -> ".25", "-0.25" -> "-.25".
std::string strip_leading_zero(std::string s) {
  if (s.rfind("0.", 0) == 0) return s.substr(1);
  if (s.rfind("-0.", 0) == 0) return "-" + s.substr(2);
  return s;
}

std::string shortest_form(std::string s) {
  std::string best = s;
  for (std::string c : {compact_exponent(s), strip_leading_zero(s), strip_leading_zero(compact_exponent(s))}) {
    if (c.size() < best.size()) best = c;
  }
  return best;
}

struct Token {
  std::string_view text;
  int column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t s = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(s, i - s), static_cast<int>(s) + 1});
  }
  return out;
}

struct RowData {
  std::string name;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::optional<double> range;
  std::vector<Term> terms;
};

struct ColumnData {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integral = false;
  bool lower_set = false;
  bool upper_set = false;
};

class MpsReader {
 public:
  explicit MpsReader(std::string_view text) : text_(text) {}

  MILPInstance parse() {
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      auto end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no_;
      handle_line(line);
      if (done_) break;
      pos = end + 1;
    }
    if (!seen_rows_) fail("missing ROWS section", 1);
    return build();
  }

 private:
  enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Ranges, Bounds };

  [[noreturn]] void fail(const std::string& msg, int column) const { throw MpsParseError(msg, line_no_, column); }

  double number(const Token& t) const {
    double v = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (!t.text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail("invalid number '" + std::string(t.text) + "'", t.column);
    return v;
  }

  void handle_line(std::string_view line) {
    if (line.empty()) return;
    if (line[0] == '*') {
      handle_comment(line);
      return;
    }
    auto tokens = tokenize(line);
    if (tokens.empty()) return;
    if (line[0] != ' ' && line[0] != '\t') {
      handle_header(tokens);
      return;
    }
    switch (section_) {
      case Section::None:
      case Section::Name: fail("data line outside of a section", tokens[0].column);
      case Section::ObjSense: handle_objsense(tokens[0]); break;
      case Section::Rows: handle_row(tokens); break;
      case Section::Columns: handle_column(tokens); break;
      case Section::Rhs: handle_rhs(tokens); break;
      case Section::Ranges: handle_range(tokens); break;
      case Section::Bounds: handle_bound(tokens); break;
    }
  }

  void handle_comment(std::string_view line) {
    // "*@C C0000000 original name" (original may contain spaces)
    if (line.size() < 4 || line[1] != '@' || (line[2] != 'C' && line[2] != 'R') || line[3] != ' ') return;
    const auto rest = line.substr(4);
    const auto sp = rest.find(' ');
    if (sp == std::string_view::npos) return;
    auto& map = line[2] == 'C' ? column_names_ : row_names_;
    map.emplace(std::string(rest.substr(0, sp)), std::string(rest.substr(sp + 1)));
  }

  void handle_header(const std::vector<Token>& tokens) {
    const auto word = tokens[0].text;
    if (word == "NAME") {
      section_ = Section::Name;
      if (tokens.size() > 1) name_ = std::string(tokens[1].text);
    } else if (word == "OBJSENSE") {
      section_ = Section::ObjSense;
      if (tokens.size() > 1) handle_objsense(tokens[1]);
    } else if (word == "ROWS") {
      section_ = Section::Rows;
      seen_rows_ = true;
    } else if (word == "COLUMNS") {
      if (!seen_rows_) fail("missing ROWS section before COLUMNS", tokens[0].column);
      section_ = Section::Columns;
    } else if (word == "RHS") {
      section_ = Section::Rhs;
    } else if (word == "RANGES") {
      section_ = Section::Ranges;
    } else if (word == "BOUNDS") {
      section_ = Section::Bounds;
    } else if (word == "ENDATA") {
      done_ = true;
    } else {
      fail("unknown section '" + std::string(word) + "'", tokens[0].column);
    }
  }

  void handle_objsense(const Token& t) {
    if (t.text == "MAX" || t.text == "MAXIMIZE") {
      maximize_ = true;
    } else if (t.text != "MIN" && t.text != "MINIMIZE") {
      fail("unknown objective sense '" + std::string(t.text) + "'", t.column);
    }
  }

  void handle_row(const std::vector<Token>& tokens) {
    if (tokens.size() != 2) fail("ROWS entry needs a type and a name", tokens[0].column);
    const auto type = tokens[0].text;
    const std::string name(tokens[1].text);
    if (row_index_.count(name) != 0 || name == objective_name_) fail("duplicate row '" + name + "'", tokens[1].column);
    if (type == "N") {
      if (objective_name_.empty()) {
        objective_name_ = name;
      } else {
        row_index_.emplace(name, kFreeRow);
      }
      return;
    }
    RowData row;
    row.name = name;
    if (type == "L") {
      row.sense = Sense::LessEqual;
    } else if (type == "G") {
      row.sense = Sense::GreaterEqual;
    } else if (type == "E") {
      row.sense = Sense::Equal;
    } else {
      fail("unknown row type '" + std::string(type) + "'", tokens[0].column);
    }
    row_index_.emplace(name, static_cast<int>(rows_.size()));
    rows_.push_back(std::move(row));
  }

  void handle_column(const std::vector<Token>& tokens) {
    if (tokens.size() >= 3 && tokens[1].text == "'MARKER'") {
      if (tokens[2].text == "'INTORG'") {
        in_integer_block_ = true;
      } else if (tokens[2].text == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        fail("unknown marker '" + std::string(tokens[2].text) + "'", tokens[2].column);
      }
      return;
    }
    if (tokens.size() != 3 && tokens.size() != 5) fail("COLUMNS entry needs a column and one or two row/value pairs", tokens[0].column);
    const std::string col(tokens[0].text);
    auto it = column_index_.find(col);
    int j;
    if (it == column_index_.end()) {
      j = static_cast<int>(columns_.size());
      column_index_.emplace(col, j);
      ColumnData c;
      c.name = col;
      c.integral = in_integer_block_;
      columns_.push_back(c);
      objective_.push_back(0.0);
    } else {
      j = it->second;
    }
    for (std::size_t k = 1; k + 1 < tokens.size(); k += 2) {
      const double v = number(tokens[k + 1]);
      const std::string rname(tokens[k].text);
      if (rname == objective_name_) {
        objective_[static_cast<std::size_t>(j)] += v;
        continue;
      }
      auto r = row_index_.find(rname);
      if (r == row_index_.end()) fail("unknown row '" + rname + "'", tokens[k].column);
      if (r->second == kFreeRow) continue;
      rows_[static_cast<std::size_t>(r->second)].terms.push_back({j, v});
    }
  }

  /// Splits "[set] name value [name value]" into pairs; odd token counts carry a set name.
  std::vector<std::pair<Token, Token>> pairs(const std::vector<Token>& tokens, const char* what) const {
    std::size_t first = tokens.size() % 2 == 1 ? 1 : 0;
    if (tokens.size() - first != 2 && tokens.size() - first != 4) {
      fail(std::string(what) + " entry needs one or two name/value pairs", tokens[0].column);
    }
    std::vector<std::pair<Token, Token>> out;
    for (std::size_t k = first; k + 1 < tokens.size(); k += 2) out.emplace_back(tokens[k], tokens[k + 1]);
    return out;
  }

  void handle_rhs(const std::vector<Token>& tokens) {
    for (const auto& [name, value] : pairs(tokens, "RHS")) {
      const double v = number(value);
      const std::string rname(name.text);
      if (rname == objective_name_) {
        offset_ = -v;
        continue;
      }
      auto r = row_index_.find(rname);
      if (r == row_index_.end()) fail("unknown row '" + rname + "'", name.column);
      if (r->second == kFreeRow) continue;
      rows_[static_cast<std::size_t>(r->second)].rhs = v;
    }
  }

  void handle_range(const std::vector<Token>& tokens) {
    for (const auto& [name, value] : pairs(tokens, "RANGES")) {
      const double v = number(value);
      auto r = row_index_.find(std::string(name.text));
      if (r == row_index_.end() || r->second == kFreeRow) fail("unknown row '" + std::string(name.text) + "'", name.column);
      rows_[static_cast<std::size_t>(r->second)].range = v;
    }
  }

  void handle_bound(const std::vector<Token>& tokens) {
    const auto type = tokens[0].text;
    const bool valued = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
    const bool valueless = type == "FR" || type == "MI" || type == "PL" || type == "BV";
    if (!valued && !valueless) fail("unknown bound type '" + std::string(type) + "'", tokens[0].column);
    std::size_t col_tok;
    if (valued) {
      if (tokens.size() != 3 && tokens.size() != 4) fail("bound entry needs a column and a value", tokens[0].column);
      col_tok = tokens.size() == 4 ? 2 : 1;
    } else {
      if (tokens.size() < 2 || tokens.size() > 4) fail("bound entry needs a column", tokens[0].column);
      col_tok = tokens.size() >= 3 ? 2 : 1;
    }
    const std::string col(tokens[col_tok].text);
    auto it = column_index_.find(col);
    if (it == column_index_.end()) fail("unknown column '" + col + "'", tokens[col_tok].column);
    auto& c = columns_[static_cast<std::size_t>(it->second)];
    const double v = valued ? number(tokens[col_tok + 1]) : 0.0;
    if (type == "UP" || type == "UI") {
      c.upper = v;
      c.upper_set = true;
      if (v < 0.0 && !c.lower_set && c.lower == 0.0) c.lower = -kInfinity;
      if (type == "UI") c.integral = true;
    } else if (type == "LO" || type == "LI") {
      c.lower = v;
      c.lower_set = true;
      if (type == "LI") c.integral = true;
    } else if (type == "FX") {
      c.lower = c.upper = v;
      c.lower_set = c.upper_set = true;
    } else if (type == "FR") {
      c.lower = -kInfinity;
      c.upper = kInfinity;
    } else if (type == "MI") {
      c.lower = -kInfinity;
      c.lower_set = true;
    } else if (type == "PL") {
      c.upper = kInfinity;
    } else {  // BV
      c.lower = 0.0;
      c.upper = 1.0;
      c.integral = true;
    }
  }

  MILPInstance build() {
    InstanceBuilder b;
    for (const auto& c : columns_) {
      auto it = column_names_.find(c.name);
      b.add_variable(it == column_names_.end() ? c.name : it->second, c.lower, c.upper, c.integral);
    }
    for (std::size_t j = 0; j < objective_.size(); ++j) {
      b.add_objective(static_cast<VarId>(j), maximize_ ? -objective_[j] : objective_[j]);
    }
    b.add_objective_constant(maximize_ ? -offset_ : offset_);
    for (auto& row : rows_) {
      auto it = row_names_.find(row.name);
      const std::string name = it == row_names_.end() ? row.name : it->second;
      if (!row.range) {
        b.add_constraint(name, row.terms, row.sense, row.rhs);
        continue;
      }
      const double r = std::abs(*row.range);
      double lo = row.rhs;
      double hi = row.rhs;
      switch (row.sense) {
        case Sense::LessEqual: lo = row.rhs - r; break;
        case Sense::GreaterEqual: hi = row.rhs + r; break;
        case Sense::Equal:
          if (*row.range > 0.0) hi = row.rhs + r; else lo = row.rhs - r;
          break;
      }
      b.add_constraint(name, row.terms, Sense::GreaterEqual, lo);
      b.add_constraint(name + "_range", row.terms, Sense::LessEqual, hi);
    }
    return b.build(name_.empty() ? "OEHPLAN" : name_);
  }

  static constexpr int kFreeRow = -1;

  std::string_view text_;
  int line_no_ = 0;
  Section section_ = Section::None;
  bool seen_rows_ = false;
  bool done_ = false;
  bool maximize_ = false;
  bool in_integer_block_ = false;
  std::string name_;
  std::string objective_name_;
  double offset_ = 0.0;
  std::vector<RowData> rows_;
  std::vector<ColumnData> columns_;
  std::vector<double> objective_;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<std::string, int> column_index_;
  std::unordered_map<std::string, std::string> column_names_;
  std::unordered_map<std::string, std::string> row_names_;
};

}  // namespace

MpsParseError::MpsParseError(const std::string& message, int line, int column)
    : std::runtime_error("MPS parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

std::string format_mps_number(double v, std::size_t width) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.size() <= width) return s;
  s = shortest_form(s);
  if (s.size() <= width) return s;
  for (int p = 17; p >= 1; --p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    const std::string plain(buf);
    if (plain.size() <= width) return plain;
    std::string best = shortest_form(plain);
    std::snprintf(buf, sizeof buf, "%.*e", p - 1, v);
    if (auto e = shortest_form(buf); e.size() < best.size()) best = e;
    if (best.size() <= width) return best;
  }
  return s;
}

void write_mps(const MILPInstance& instance, std::ostream& out) {
  const auto vars = instance.variables();
  const auto rows = instance.constraints();
  out << "NAME          " << sanitize(instance.name()) << '\n';
  for (std::size_t j = 0; j < vars.size(); ++j) out << "*@C " << column_name(j) << ' ' << comment_safe(vars[j].name) << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) out << "*@R " << row_name(i) << ' ' << comment_safe(rows[i].name) << '\n';

  out << "ROWS\n" << data_line("N ", kObjectiveRow) << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const char* type = rows[i].sense == Sense::LessEqual ? "L " : rows[i].sense == Sense::GreaterEqual ? "G " : "E ";
    out << data_line(type, row_name(i)) << '\n';
  }

  out << "COLUMNS\n";
  const auto& csc = instance.csc();
  const auto& cost = instance.cost();
  int marker = 0;
  bool in_block = false;
  auto marker_line = [&](const char* kind) {
    char name[16];
    std::snprintf(name, sizeof name, "MARK%04d", marker);
    out << data_line("  ", name, "'MARKER'", {}, kind) << '\n';
  };
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].integral && !in_block) {
      marker_line("'INTORG'");
      in_block = true;
    } else if (!vars[j].integral && in_block) {
      marker_line("'INTEND'");
      in_block = false;
      ++marker;
    }
    const std::string cname = column_name(j);
    bool any = false;
    if (cost[j] != 0.0) {
      out << data_line("  ", cname, kObjectiveRow, format_mps_number(cost[j])) << '\n';
      any = true;
    }
    for (int p = csc.start[j]; p < csc.start[j + 1]; ++p) {
      out << data_line("  ", cname, row_name(static_cast<std::size_t>(csc.index[static_cast<std::size_t>(p)])),
                       format_mps_number(csc.value[static_cast<std::size_t>(p)]))
          << '\n';
      any = true;
    }
    if (!any) out << data_line("  ", cname, kObjectiveRow, "0") << '\n';
  }
  if (in_block) marker_line("'INTEND'");

  out << "RHS\n";
  if (instance.objective_offset() != 0.0) {
    out << data_line("  ", kRhsSet, kObjectiveRow, format_mps_number(-instance.objective_offset())) << '\n';
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rhs != 0.0) out << data_line("  ", kRhsSet, row_name(i), format_mps_number(rows[i].rhs)) << '\n';
  }
  out << "RANGES\n";

  out << "BOUNDS\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    const std::string cname = column_name(j);
    const bool lo_inf = v.lower == -kInfinity;
    const bool up_inf = v.upper == kInfinity;
    if (!lo_inf && v.lower == v.upper) {
      out << data_line("FX", kBoundSet, cname, format_mps_number(v.lower)) << '\n';
      continue;
    }
    if (lo_inf && up_inf) {
      out << data_line("FR", kBoundSet, cname) << '\n';
      continue;
    }
    if (lo_inf) {
      out << data_line("MI", kBoundSet, cname) << '\n';
    } else if (v.lower != 0.0 || v.integral || (!up_inf && v.upper < 0.0)) {
      out << data_line("LO", kBoundSet, cname, format_mps_number(v.lower)) << '\n';
    }
    if (!up_inf) out << data_line("UP", kBoundSet, cname, format_mps_number(v.upper)) << '\n';
  }
  out << "ENDATA\n";
}

std::string write_mps(const MILPInstance& instance) {
  std::ostringstream out;
  write_mps(instance, out);
  return out.str();
}

MILPInstance read_mps(std::string_view text) { return MpsReader(text).parse(); }

MILPInstance read_mps_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open MPS file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_mps(buf.str());
}

}  // namespace oeh::milp
