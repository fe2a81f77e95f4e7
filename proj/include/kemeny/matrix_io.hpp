#pragma once

// Text and JSON forms of (partial) matrices.
//
// Text: first content line is n, then n rows of n whitespace-separated
// tokens, each a decimal literal (at most 17 significant digits) or `?` for
// a free cell. Lines starting with `#` are comments.
//
// JSON: {"n": 3, "rows": [[0.5, "?", "?"], ...]}
//
// Numbers are written as the shortest decimal that parses back to the same
// double, so write -> read is exact.

#include "kemeny/markov_core.hpp"
#include "kemeny/partial_matrix.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace kemeny::io {

std::string format_double(double v);

CellGrid parse_text(std::string_view text);
std::string format_text(const CellGrid& grid);
std::string format_text(const Matrix& m);

CellGrid parse_json(std::string_view text);
nlohmann::json to_json(const CellGrid& grid);
nlohmann::json to_json(const Matrix& m);
std::string format_json(const CellGrid& grid);

/// Dispatches on the first non-blank character: `{` means JSON.
CellGrid parse_any(std::string_view text);
CellGrid read_file(const std::filesystem::path& path);

CellGrid to_grid(const Matrix& m);
/// Throws InvalidArgument if any cell is free.
Matrix to_matrix(const CellGrid& grid);

}  // namespace kemeny::io
