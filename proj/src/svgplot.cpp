#include "stripcgm/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace stripcgm {

namespace {

constexpr double kW = 640, kH = 480, kPad = 48;

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3f", v);
  return b;
}

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n<style>text{font:12px monospace}</style>\n";
}

std::string axes() {
  std::string s;
  s += "<path d=\"M " + fmt(kPad) + " " + fmt(kPad) + " L " + fmt(kPad) + " " +
       fmt(kH - kPad) + " L " + fmt(kW - kPad) + " " + fmt(kH - kPad) +
       "\" stroke=\"black\" fill=\"none\"/>\n";
  return s;
}

std::string no_data() {
  return "<text x=\"280\" y=\"240\">no data</text>\n";
}

std::vector<double> numeric_column(const CsvTable& t, std::size_t col) {
  std::vector<double> v;
  for (std::size_t r = 0; r < t.rows.size(); ++r) v.push_back(t.number(r, col));
  return v;
}

std::string scatter_loglog(const CsvTable& t) {
  std::string s = header() + axes();
  if (t.rows.empty()) return s + no_data() + "</svg>\n";
  const auto xs = numeric_column(t, 0);
  const auto ys = numeric_column(t, 1);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0 || ys[i] <= 0) throw std::invalid_argument("loglog: positive data only");
    lx.push_back(std::log10(xs[i]));
    ly.push_back(std::log10(ys[i]));
  }
  const double xa = *std::min_element(lx.begin(), lx.end());
  const double xb = *std::max_element(lx.begin(), lx.end());
  const double ya = *std::min_element(ly.begin(), ly.end());
  const double yb = *std::max_element(ly.begin(), ly.end());
  const auto px = [&](double v) {
    return xb == xa ? kW / 2 : kPad + (v - xa) / (xb - xa) * (kW - 2 * kPad);
  };
  const auto py = [&](double v) {
    return yb == ya ? kH / 2 : kH - kPad - (v - ya) / (yb - ya) * (kH - 2 * kPad);
  };
  s += "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
  for (std::size_t i = 0; i < lx.size(); ++i)
    s += fmt(px(lx[i])) + "," + fmt(py(ly[i])) + " ";
  s += "\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i)
    s += "<circle cx=\"" + fmt(px(lx[i])) + "\" cy=\"" + fmt(py(ly[i])) +
         "\" r=\"3\" fill=\"crimson\"/>\n";
  s += "<text x=\"" + fmt(kW / 2) + "\" y=\"" + fmt(kH - 12) + "\">log10 " +
       t.columns[0] + "</text>\n";
  return s + "</svg>\n";
}

std::string histogram(const CsvTable& t) {
  std::string s = header() + axes();
  if (t.rows.empty()) return s + no_data() + "</svg>\n";
  const auto xs = numeric_column(t, 0);
  const double a = *std::min_element(xs.begin(), xs.end());
  const double b = *std::max_element(xs.begin(), xs.end());
  const int bins = 24;
  std::vector<int> count(bins, 0);
  for (double v : xs) {
    int k = b == a ? 0 : static_cast<int>((v - a) / (b - a) * bins);
    count[static_cast<std::size_t>(std::clamp(k, 0, bins - 1))]++;
  }
  const int peak = *std::max_element(count.begin(), count.end());
  const double bw = (kW - 2 * kPad) / bins;
  for (int k = 0; k < bins; ++k) {
    const double h = peak == 0 ? 0 : count[static_cast<std::size_t>(k)] *
                                         (kH - 2 * kPad) / peak;
    s += "<rect x=\"" + fmt(kPad + k * bw) + "\" y=\"" + fmt(kH - kPad - h) +
         "\" width=\"" + fmt(bw - 1) + "\" height=\"" + fmt(h) +
         "\" fill=\"steelblue\"/>\n";
  }
  return s + "</svg>\n";
}

std::string sitemap(const CsvTable& t) {
  // Expected columns: x1, x2, value; value > 0 one color, value < 0 another,
  // exactly one rect per row.
  std::string s = header();
  if (t.rows.empty()) return s + axes() + no_data() + "</svg>\n";
  const auto x1 = numeric_column(t, 0);
  const auto x2 = numeric_column(t, 1);
  const auto val = numeric_column(t, 2);
  const double xa = *std::min_element(x1.begin(), x1.end());
  const double xb = *std::max_element(x1.begin(), x1.end());
  const double ya = *std::min_element(x2.begin(), x2.end());
  const double yb = *std::max_element(x2.begin(), x2.end());
  const double cell = std::min((kW - 2 * kPad) / (xb - xa + 1),
                               (kH - 2 * kPad) / (yb - ya + 1));
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double px = kPad + (x1[i] - xa) * cell;
    const double py = kH - kPad - (x2[i] - ya + 1) * cell;
    const char* color = val[i] > 0 ? "#4477aa" : (val[i] < 0 ? "#cc6677" : "#dddddd");
    s += "<rect x=\"" + fmt(px) + "\" y=\"" + fmt(py) + "\" width=\"" +
         fmt(cell) + "\" height=\"" + fmt(cell) + "\" fill=\"" + color + "\"/>\n";
  }
  return s + "</svg>\n";
}

}  // namespace

std::string plot_svg(const CsvTable& table, const std::string& kind) {
  if (kind == "loglog") return scatter_loglog(table);
  if (kind == "hist") return histogram(table);
  if (kind == "sitemap") return sitemap(table);
  throw std::invalid_argument("plot_svg: unknown kind " + kind);
}

void plot(const std::string& csv_path, const std::string& kind,
          const std::string& out_path) {
  const std::string svg = plot_svg(read_csv(csv_path), kind);
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("plot: cannot open " + out_path);
  os << svg;
}

}  // namespace stripcgm
