#ifndef STRIPCGM_CSVIO_HPP
#define STRIPCGM_CSVIO_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace stripcgm {

// Deterministic CSV: %.17g floats, fixed column order, \n line ends.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return buf_; }
  void write_file(const std::string& path) const;

  static std::string num(double v);
  static std::string num(std::int64_t v);

 private:
  std::size_t width_;
  std::string buf_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

}  // namespace stripcgm

#endif
