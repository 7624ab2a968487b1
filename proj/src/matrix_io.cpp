#include "indeflll/matrix_io.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace indef {

namespace {

std::string at(std::size_t row, std::size_t col) {
  if (row == 0) return "";
  if (col == 0) return " at row " + std::to_string(row);
  return " at row " + std::to_string(row) + ", column " + std::to_string(col);
}

Int entry_from_token(const std::string& tok, std::size_t row, std::size_t col) {
  try {
    return parse_int(tok);
  } catch (const std::invalid_argument&) {
    throw ParseError("invalid integer '" + tok + "'", row, col);
  }
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t r, std::size_t c)
    : std::runtime_error(what + at(r, c)), row(r), col(c) {}

IntMatrix parse_text_matrix(const std::string& content, bool symmetric) {
  std::istringstream in(content);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ParseError("empty matrix file");
  std::istringstream head(lines[0]);
  std::string tok, extra;
  head >> tok;
  if (head >> extra) throw ParseError("first line must hold only the dimension");
  Int dim_big = entry_from_token(tok, 0, 0);
  if (dim_big < 1 || dim_big > 100000) throw ParseError("dimension must be a positive integer");
  const Index d = dim_big.get_si();
  if (static_cast<Index>(lines.size()) - 1 != d)
    throw ParseError("expected " + std::to_string(d) + " rows, found " + std::to_string(lines.size() - 1));
  IntMatrix m(d, d);
  for (Index i = 0; i < d; ++i) {
    std::istringstream row(lines[static_cast<std::size_t>(i) + 1]);
    Index j = 0;
    while (row >> tok) {
      if (j >= d) throw ParseError("too many entries", static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1);
      m(i, j) = entry_from_token(tok, static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1);
      ++j;
    }
    if (j < d) throw ParseError("too few entries", static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1);
  }
  if (symmetric) require_symmetric(m);
  return m;
}

IntMatrix parse_json_matrix(const std::string& content, bool symmetric) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("rows"))
    throw ParseError("structured matrix needs \"dim\" and \"rows\"");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) throw ParseError("\"dim\" must be a positive integer");
  const Index d = doc["dim"].get<long long>();
  const auto& rows = doc["rows"];
  if (!rows.is_array() || static_cast<Index>(rows.size()) != d)
    throw ParseError("\"rows\" must hold " + std::to_string(d) + " rows");
  IntMatrix m(d, d);
  for (Index i = 0; i < d; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    const auto ri = static_cast<std::size_t>(i) + 1;
    if (!r.is_array() || static_cast<Index>(r.size()) != d)
      throw ParseError("row must hold " + std::to_string(d) + " entries", ri);
    for (Index j = 0; j < d; ++j) {
      const auto& e = r[static_cast<std::size_t>(j)];
      const auto cj = static_cast<std::size_t>(j) + 1;
      if (e.is_number_integer()) m(i, j) = Int(e.dump());
      else if (e.is_string()) m(i, j) = entry_from_token(e.get<std::string>(), ri, cj);
      else throw ParseError("entry must be an integer", ri, cj);
    }
  }
  if (symmetric) require_symmetric(m);
  return m;
}

IntMatrix parse_matrix(const std::string& content, bool symmetric) {
  auto pos = content.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && content[pos] == '{') return parse_json_matrix(content, symmetric);
  return parse_text_matrix(content, symmetric);
}

std::string print_text_matrix(const IntMatrix& m) {
  std::ostringstream out;
  out << m.rows() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j).get_str();
    out << '\n';
  }
  return out.str();
}

std::string print_json_matrix(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).fits_slong_p()) r.push_back(m(i, j).get_si());
      else r.push_back(m(i, j).get_str());
    }
    rows.push_back(std::move(r));
  }
  nlohmann::json doc{{"dim", m.rows()}, {"rows", std::move(rows)}};
  return doc.dump() + "\n";
}

std::string print_matrix(const IntMatrix& m, MatrixFormat format) {
  return format == MatrixFormat::Json ? print_json_matrix(m) : print_text_matrix(m);
}

void require_symmetric(const IntMatrix& m) {
  if (auto bad = first_asymmetry(m)) {
    auto [i, j] = *bad;
    throw ParseError("matrix is not symmetric: entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ") = " +
                         m(i, j).get_str() + " but (" + std::to_string(j + 1) + ", " + std::to_string(i + 1) +
                         ") = " + m(j, i).get_str(),
                     static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace indef
