#pragma once

#include "indeflll/gram.hpp"

#include <stdexcept>
#include <string>

namespace indef {

/// Row and column are 1-based matrix positions; 0 when the error is not tied to an entry.
struct ParseError : std::runtime_error {
  std::size_t row = 0;
  std::size_t col = 0;
  ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0);
};

enum class MatrixFormat { Text, Json };

/// "d" on the first line, then d rows of d integers. Transforms are read with
/// symmetric = false.
IntMatrix parse_text_matrix(const std::string& content, bool symmetric = true);
/// {"dim": d, "rows": [[...], ...]}; entries may be numbers or decimal strings.
IntMatrix parse_json_matrix(const std::string& content, bool symmetric = true);
/// Picks JSON when the first non-blank character is '{'.
IntMatrix parse_matrix(const std::string& content, bool symmetric = true);

std::string print_text_matrix(const IntMatrix& m);
std::string print_json_matrix(const IntMatrix& m);
std::string print_matrix(const IntMatrix& m, MatrixFormat format);

/// Rejects asymmetric matrices, naming the first offending pair.
void require_symmetric(const IntMatrix& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace indef
