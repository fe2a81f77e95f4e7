#include "kemeny/matrix_io.hpp"

#include "kemeny/error.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace kemeny::io {

namespace {

constexpr int kMaxSignificantDigits = 17;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

// [+-]? digits [. digits]? ([eE] [+-]? digits)?  with at least one mantissa digit
bool is_decimal_literal(std::string_view tok, int& significant) {
  std::size_t i = 0;
  if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
  std::string mantissa;
  bool dot = false;
  for (; i < tok.size(); ++i) {
    const char c = tok[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (mantissa.empty()) return false;
  if (i < tok.size()) {
    if (tok[i] != 'e' && tok[i] != 'E') return false;
    ++i;
    if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
    const std::size_t start = i;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
    if (i == start || i != tok.size()) return false;
  }
  const auto first = mantissa.find_first_not_of('0');
  if (first == std::string::npos) {
    significant = 1;
  } else {
    const auto last = mantissa.find_last_not_of('0');
    significant = static_cast<int>(last - first + 1);
  }
  return true;
}

Cell parse_token(std::string_view tok, int line) {
  if (tok == "?") return Cell::free();
  int significant = 0;
  if (!is_decimal_literal(tok, significant)) parse_fail(line, "bad token '" + std::string(tok) + "'");
  if (significant > kMaxSignificantDigits) parse_fail(line, "more than 17 significant digits in '" + std::string(tok) + "'");
  const char* begin = tok.data();
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) parse_fail(line, "cannot read '" + std::string(tok) + "'");
  return Cell::specified(v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

CellGrid parse_text(std::string_view text) {
  CellGrid grid;
  long declared = -1;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    if (declared < 0) {
      const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), declared);
      if (ec != std::errc() || ptr != line.data() + line.size() || declared < 1)
        parse_fail(line_no, "expected a positive integer dimension");
      continue;
    }
    std::vector<Cell> row;
    std::size_t p = 0;
    while (p < line.size()) {
      while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
      if (p >= line.size()) break;
      std::size_t q = p;
      while (q < line.size() && !std::isspace(static_cast<unsigned char>(line[q]))) ++q;
      row.push_back(parse_token(line.substr(p, q - p), line_no));
      p = q;
    }
    if (static_cast<long>(row.size()) != declared)
      throw Error(ErrorCode::NotSquare, "line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                                            " entries, expected " + std::to_string(declared));
    grid.push_back(std::move(row));
  }
  if (declared < 0) parse_fail(line_no, "missing dimension line");
  if (static_cast<long>(grid.size()) != declared)
    throw Error(ErrorCode::NotSquare, "found " + std::to_string(grid.size()) + " rows, expected " + std::to_string(declared));
  return grid;
}

std::string format_text(const CellGrid& grid) {
  std::ostringstream out;
  out << grid.size() << '\n';
  for (const auto& row : grid) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << (row[j].is_free() ? std::string("?") : format_double(row[j].value()));
    }
    out << '\n';
  }
  return out.str();
}

std::string format_text(const Matrix& m) { return format_text(to_grid(m)); }

CellGrid parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("rows"))
    throw Error(ErrorCode::ParseError, "expected an object with \"n\" and \"rows\"");
  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1)
    throw Error(ErrorCode::ParseError, "\"n\" must be a positive integer");
  if (!doc["rows"].is_array()) throw Error(ErrorCode::ParseError, "\"rows\" must be an array");
  const auto n = doc["n"].get<std::size_t>();
  CellGrid grid;
  for (const auto& row : doc["rows"]) {
    if (!row.is_array()) throw Error(ErrorCode::ParseError, "each row must be an array");
    std::vector<Cell> cells;
    for (const auto& v : row) {
      if (v.is_string() && v.get<std::string>() == "?") {
        cells.push_back(Cell::free());
      } else if (v.is_number()) {
        cells.push_back(Cell::specified(v.get<double>()));
      } else {
        throw Error(ErrorCode::ParseError, "cells must be numbers or \"?\"");
      }
    }
    if (cells.size() != n) throw Error(ErrorCode::NotSquare, "row with " + std::to_string(cells.size()) + " entries");
    grid.push_back(std::move(cells));
  }
  if (grid.size() != n) throw Error(ErrorCode::NotSquare, "found " + std::to_string(grid.size()) + " rows");
  return grid;
}

nlohmann::json to_json(const CellGrid& grid) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : grid) {
    nlohmann::json r = nlohmann::json::array();
    for (const Cell& c : row) r.push_back(c.is_free() ? nlohmann::json("?") : nlohmann::json(c.value()));
    rows.push_back(std::move(r));
  }
  return {{"n", grid.size()}, {"rows", std::move(rows)}};
}

nlohmann::json to_json(const Matrix& m) { return to_json(to_grid(m)); }

std::string format_json(const CellGrid& grid) { return to_json(grid).dump(); }

CellGrid parse_any(std::string_view text) {
  const std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') return parse_json(t);
  return parse_text(text);
}

CellGrid read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_any(buf.str());
}

CellGrid to_grid(const Matrix& m) {
  CellGrid grid(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) grid[i].push_back(Cell::specified(m(i, j)));
  return grid;
}

Matrix to_matrix(const CellGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(grid[i].size()) != n) throw Error(ErrorCode::NotSquare, "ragged grid");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (grid[i][j].is_free()) throw Error(ErrorCode::InvalidArgument, "matrix has free cells");
      m(i, j) = grid[i][j].value();
    }
  }
  return m;
}

}  // namespace kemeny::io
