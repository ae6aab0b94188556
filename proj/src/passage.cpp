#include "stripcgm/passage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace stripcgm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

PassageField::PassageField(Region region, SourceSpec source)
    : region_(std::move(region)),
      source_(std::move(source)),
      val_(region_.size(), 0.0),
      reach_(region_.size(), 0) {}

double PassageField::g(const Site& x) const {
  const std::size_t i = region_.index(x);
  if (reach_[i] == 0) throw std::runtime_error("PassageField::g: unreachable site");
  return val_[i];
}

std::optional<double> PassageField::try_g(const Site& x) const {
  if (!region_.contains(x)) return std::nullopt;
  const std::size_t i = region_.index(x);
  if (reach_[i] == 0) return std::nullopt;
  return val_[i];
}

PassageField passage_times(const WeightField& field, SourceSpec source) {
  PassageField pf(field.region, std::move(source));
  const Region& reg = pf.region();

  std::unordered_set<Site, SiteHash> point_set;
  const bool points = pf.source().kind == SourceSpec::Kind::Points;
  if (points)
    for (const Site& p : pf.source().points) point_set.insert(p);

  for (std::int64_t s = reg.s_lo(); s <= reg.s_hi(); ++s) {
    const SpanRange row = reg.row(s);
    for (std::int64_t x1 = row.lo; x1 <= row.hi; ++x1) {
      const Site x{x1, s - x1};
      double best = kNegInf;
      if (auto p = pf.try_g(x - e1)) best = *p;
      if (auto p = pf.try_g(x - e2)) best = std::max(best, *p);
      if (points) {
        if (point_set.count(x)) best = std::max(best, 0.0);
      } else if (pf.source().interface.strictly_above(x)) {
        best = std::max(best, 0.0);
      }
      if (best != kNegInf) pf.set(x, best + field.at(x));
    }
  }
  return pf;
}

LatticePath geodesic_to(const PassageField& pf, const Site& y) {
  if (!pf.try_g(y))
    throw std::invalid_argument("geodesic_to: target unreachable from the source");
  const bool points = pf.source().kind == SourceSpec::Kind::Points;
  std::unordered_set<Site, SiteHash> point_set;
  if (points)
    for (const Site& p : pf.source().points) point_set.insert(p);

  LatticePath rev;
  Site z = y;
  for (;;) {
    rev.push_back(z);
    const auto g1 = pf.try_g(z - e1);
    const auto g2 = pf.try_g(z - e2);
    const double v1 = g1 ? *g1 : kNegInf;
    const double v2 = g2 ? *g2 : kNegInf;
    double seed = kNegInf;
    if (points) {
      if (point_set.count(z)) seed = 0.0;
    } else if (pf.source().interface.strictly_above(z)) {
      seed = 0.0;
    }
    if (v1 >= v2 && v1 >= seed) {
      z = z - e1;
    } else if (v2 >= seed) {
      z = z - e2;
    } else {
      break;  // path starts here
    }
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

LatticePath geodesic(const PassageField& pf, const WeightField& field,
                     const Site& x, const Site& y) {
  if (!field.region.contains(y))
    throw std::invalid_argument("geodesic: target outside the sampled region");
  if (pf.source().kind != SourceSpec::Kind::Points || pf.source().points.size() != 1 ||
      !(pf.source().points[0] == x))
    throw std::invalid_argument("geodesic: field was not computed from source {x}");
  if (x == y) return {x};
  return geodesic_to(pf, y);
}

double path_weight(const WeightField& field, const LatticePath& p) {
  double w = 0.0;
  for (const Site& z : p) w += field.at(z);  // accumulated in path order
  return w;
}

InterfaceAt growth_interface_at(const PassageField& pf, const WeightField& field,
                                double t) {
  if (t < 0) throw std::invalid_argument("growth_interface_at: t must be >= 0");
  if (pf.source().kind != SourceSpec::Kind::Interface)
    throw std::invalid_argument("growth_interface_at: needs an interface-sourced field");
  const Region& reg = pf.region();
  const GrowthInterface& gamma0 = pf.source().interface;

  // Grown by time t: reachable with G <= t, unreachable behind the interface,
  // or beside/below the staircase outside the sampled band.
  const auto grown = [&](const Site& x) -> bool {
    if (reg.contains(x)) {
      const auto g = pf.try_g(x);
      return !g || *g <= t;
    }
    return !gamma0.strictly_above(x);
  };

  // x is on the interface iff x is grown and the cell x+(1,1) is a real
  // (supported, reachable) cell that has not grown yet. This matches the
  // staircase hugging the grown region and ignores zero-weight cells off the
  // support.
  InterfaceAt out;
  reg.for_each([&](const Site& c) {
    const auto g = pf.try_g(c);
    if (!g || *g <= t) return;
    if (grown(c - Site{1, 1})) out.sites.push_back(c - Site{1, 1});
  });
  std::sort(out.sites.begin(), out.sites.end(),
            [](const Site& a, const Site& b) {
              return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 > b.x2;
            });
  // Completeness: no cell on the last two anti-diagonals may be grown.
  for (std::int64_t s = std::max(reg.s_lo(), reg.s_hi() - 1); s <= reg.s_hi(); ++s) {
    const SpanRange row = reg.row(s);
    for (std::int64_t x1 = row.lo; x1 <= row.hi; ++x1) {
      const auto g = pf.try_g({x1, s - x1});
      if (g && *g <= t) out.complete = false;
    }
  }
  return out;
}

double homogeneous_corner_value(std::int64_t n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("homogeneous_corner_value: n must be >= 0");
  // Row-by-row DP over the box [0,n]x[0,n] with one row of state.
  const std::size_t width = static_cast<std::size_t>(n) + 1;
  std::vector<double> row(width);
  for (std::int64_t x2 = 0; x2 <= n; ++x2) {
    double left = kNegInf;
    for (std::int64_t x1 = 0; x1 <= n; ++x1) {
      const double up = x2 > 0 ? row[static_cast<std::size_t>(x1)] : kNegInf;
      double best = std::max(left, up);
      if (x1 == 0 && x2 == 0) best = std::max(best, 0.0);
      const double w = rng::site_exponential(seed, x1, x2, 1.0);
      left = best + w;
      row[static_cast<std::size_t>(x1)] = left;
    }
  }
  return row[static_cast<std::size_t>(n)];
}

}  // namespace stripcgm
