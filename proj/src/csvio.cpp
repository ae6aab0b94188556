#include "stripcgm/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stripcgm {

CsvWriter::CsvWriter(std::vector<std::string> columns) : width_(columns.size()) {
  if (columns.empty()) throw std::invalid_argument("CsvWriter: no columns");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += columns[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("CsvWriter: wrong arity");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("CsvWriter: cannot open " + path);
  os << buf_;
}

std::string CsvWriter::num(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string CsvWriter::num(std::int64_t v) { return std::to_string(v); }

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::invalid_argument("CsvTable: no column " + name);
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  return std::stod(rows.at(row).at(col));
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != t.columns.size())
        throw std::runtime_error("parse_csv: ragged row");
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.columns.empty()) throw std::runtime_error("parse_csv: empty input");
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_csv: cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace stripcgm
