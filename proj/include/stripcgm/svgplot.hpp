#ifndef STRIPCGM_SVGPLOT_HPP
#define STRIPCGM_SVGPLOT_HPP

#include <string>

#include "stripcgm/csvio.hpp"

namespace stripcgm {

// Deterministic SVG renderings of the CSV schemas. Kinds:
//   "loglog"  - scatter of the first two numeric columns on log-log axes
//   "hist"    - histogram of the first numeric column
//   "sitemap" - colored squares from (x1, x2, value) rows, one rect per site
// Empty tables render axes plus a no-data note.
std::string plot_svg(const CsvTable& table, const std::string& kind);

void plot(const std::string& csv_path, const std::string& kind,
          const std::string& out_path);

}  // namespace stripcgm

#endif
