#include "stripcgm/lattice.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <limits>
#include <ostream>

namespace stripcgm {

bool is_up_right(const LatticePath& p) {
  if (p.empty()) return false;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const Site d = p[i] - p[i - 1];
    if (!(d == e1 || d == e2)) return false;
  }
  return true;
}

EnvironmentSpec EnvironmentSpec::strip(double alpha, double beta, int n) {
  if (n < 1) throw std::invalid_argument("strip: n must be >= 1");
  if (alpha <= 0 || beta <= 0)
    throw std::invalid_argument("strip: alpha, beta must be > 0");
  return {EnvKind::Strip, n, alpha, beta};
}
EnvironmentSpec EnvironmentSpec::stationary_strip(int n) {
  if (n < 1) throw std::invalid_argument("stationary_strip: n must be >= 1");
  return {EnvKind::StationaryStrip, n, 0.5, 0.5};
}
EnvironmentSpec EnvironmentSpec::half_quadrant() { return {EnvKind::HalfQuadrant, 0, 0, 0}; }
EnvironmentSpec EnvironmentSpec::swap() { return {EnvKind::Swap, 0, 0, 0}; }
EnvironmentSpec EnvironmentSpec::z2_stationary() { return {EnvKind::Z2Stationary, 0, 0, 0}; }
EnvironmentSpec EnvironmentSpec::homogeneous() { return {EnvKind::Homogeneous, 0, 0, 0}; }

std::string EnvironmentSpec::name() const {
  switch (kind) {
    case EnvKind::Strip: return "strip";
    case EnvKind::StationaryStrip: return "stationary_strip";
    case EnvKind::HalfQuadrant: return "half_quadrant";
    case EnvKind::Swap: return "swap";
    case EnvKind::Z2Stationary: return "z2_stationary";
    case EnvKind::Homogeneous: return "homogeneous";
  }
  return "?";
}

double rate_function(const EnvironmentSpec& spec, const Site& x) {
  const std::int64_t d = x.x1 - x.x2;
  switch (spec.kind) {
    case EnvKind::Strip: {
      // Support: x1 >= 1, 0 <= x1-x2 <= n. The beta boundary extends down to
      // x2 = 1-n so that the exit cells of particles present at time 0 carry
      // their Exp(beta) holding times.
      if (x.x1 < 1 || d < 0 || d > spec.n) return 0.0;
      if (d == 0) return 1.0 / spec.alpha;  // entry cells, x2 = x1 >= 1
      if (d == spec.n) return 1.0 / spec.beta;
      return 1.0;
    }
    case EnvKind::StationaryStrip: {
      if (x.x2 < 0 || d < 0 || d > spec.n) return 0.0;
      if (x.x2 == 0) return (x.x1 >= 1 && x.x1 <= spec.n) ? 2.0 : 0.0;
      return (d == 0 || d == spec.n) ? 2.0 : 1.0;
    }
    case EnvKind::HalfQuadrant:
      if (x.x2 < 0 || d < 0) return 0.0;
      return d == 0 ? 2.0 : 1.0;
    case EnvKind::Swap:
      if (x.x2 == 0) return x.x1 >= 0 ? 2.0 : 0.0;
      return (x.x2 > 0 && d >= 0) ? 1.0 : 0.0;
    case EnvKind::Z2Stationary:
      if (x.x1 < 0 || x.x2 < 0) return 0.0;
      return (x.x1 == 0 || x.x2 == 0) ? 2.0 : 1.0;
    case EnvKind::Homogeneous:
      return 1.0;
  }
  return 0.0;
}

namespace {
std::int64_t floor_div2(std::int64_t a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
std::int64_t ceil_div2(std::int64_t a) { return a >= 0 ? (a + 1) / 2 : -((-a) / 2); }
}  // namespace

SpanRange support_span(const EnvironmentSpec& spec, std::int64_t s) {
  switch (spec.kind) {
    case EnvKind::Strip: {
      // x1 >= 1, x1 >= s/2 (d >= 0), x1 <= (s+n)/2 (d <= n)
      SpanRange r{std::max<std::int64_t>(1, ceil_div2(s)), floor_div2(s + spec.n)};
      return r;
    }
    case EnvKind::StationaryStrip: {
      SpanRange r{std::max<std::int64_t>(1, ceil_div2(s)),
                  std::min<std::int64_t>(s, floor_div2(s + spec.n))};
      return r;
    }
    case EnvKind::HalfQuadrant:
      return {ceil_div2(s), s};
    case EnvKind::Swap:
      return {ceil_div2(s), s};
    case EnvKind::Z2Stationary:
      if (s < 0) return {};
      return {0, s};
    case EnvKind::Homogeneous:
      throw std::invalid_argument("support_span: homogeneous support is unbounded");
  }
  return {};
}

std::vector<Site> anti_diagonal(std::int64_t s, const EnvironmentSpec& spec) {
  if (spec.is_strip_like() && s < spec.n)
    throw std::invalid_argument("anti_diagonal: index below the strip width");
  const SpanRange r = support_span(spec, s);
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, r.count())));
  for (std::int64_t x1 = r.lo; x1 <= r.hi; ++x1) {
    Site x{x1, s - x1};
    if (in_support(spec, x)) out.push_back(x);
  }
  return out;
}

Rectangle rectangle(std::int64_t n, std::int64_t m, const EnvironmentSpec& spec) {
  if (m < 1) throw std::invalid_argument("rectangle: m must be >= 1");
  auto lo = anti_diagonal(n, spec);
  auto hi = anti_diagonal(n + m - 1, spec);
  if (lo.empty() || hi.empty())
    throw std::invalid_argument("rectangle: empty anti-diagonal");
  Rectangle rect;
  rect.a1 = lo.front();
  rect.a2 = lo.back();
  rect.a4 = hi.front();
  rect.a3 = hi.back();
  for (std::int64_t s = n; s < n + m; ++s) {
    auto ld = anti_diagonal(s, spec);
    rect.sites.insert(rect.sites.end(), ld.begin(), ld.end());
  }
  return rect;
}

GrowthInterface::GrowthInterface(std::vector<Site> pts) : pts_(std::move(pts)) {
  if (pts_.empty()) throw std::invalid_argument("GrowthInterface: empty");
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    const Site d = pts_[i] - pts_[i - 1];
    if (!(d == e1 || d == Site{0, -1}))
      throw std::invalid_argument("GrowthInterface: steps must be +e1 or -e2");
  }
  col_lo_ = pts_.front().x1;
  const std::int64_t col_hi = pts_.back().x1;
  low_b_.assign(static_cast<std::size_t>(col_hi - col_lo_ + 1),
                std::numeric_limits<std::int64_t>::max());
  for (const Site& p : pts_) {
    auto& b = low_b_[static_cast<std::size_t>(p.x1 - col_lo_)];
    b = std::min(b, p.x2);
  }
  for (std::size_t c = 1; c < low_b_.size(); ++c)
    low_b_[c] = std::min(low_b_[c], low_b_[c - 1]);
}

bool GrowthInterface::strictly_above(const Site& x) const {
  const std::int64_t c = x.x1 - 1;
  if (c < col_lo_) return false;
  const std::size_t idx = static_cast<std::size_t>(
      std::min(c, col_lo_ + static_cast<std::int64_t>(low_b_.size()) - 1) - col_lo_);
  return low_b_[idx] <= x.x2 - 1;
}

GrowthInterface initial_growth_interface(const std::vector<int>& bits) {
  std::vector<Site> pts;
  pts.reserve(bits.size() + 1);
  Site cur{0, 0};
  pts.push_back(cur);
  for (int b : bits) {
    if (b == 0)
      cur = cur + e1;
    else if (b == 1)
      cur = cur - e2;
    else
      throw std::invalid_argument("initial_growth_interface: entries must be 0/1");
    pts.push_back(cur);
  }
  return GrowthInterface(std::move(pts));
}

void Region::finalize() {
  offset_.resize(rows_.size() + 1);
  offset_[0] = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r)
    offset_[r + 1] = offset_[r] + static_cast<std::size_t>(
                                      std::max<std::int64_t>(0, rows_[r].count()));
  total_ = offset_.back();
}

Region Region::strip_band(const EnvironmentSpec& spec, std::int64_t s_lo,
                          std::int64_t s_hi) {
  if (spec.kind == EnvKind::Homogeneous)
    throw std::invalid_argument("strip_band: unbounded support; use Region::box");
  Region r;
  r.s_lo_ = s_lo;
  r.rows_.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, s_hi - s_lo + 1)));
  for (std::int64_t s = s_lo; s <= s_hi; ++s) r.rows_.push_back(support_span(spec, s));
  r.finalize();
  return r;
}

Region Region::box(std::int64_t x1a, std::int64_t x1b, std::int64_t x2a,
                   std::int64_t x2b) {
  if (x1a > x1b || x2a > x2b) throw std::invalid_argument("Region::box: empty box");
  Region r;
  r.s_lo_ = x1a + x2a;
  for (std::int64_t s = x1a + x2a; s <= x1b + x2b; ++s)
    r.rows_.push_back({std::max(x1a, s - x2b), std::min(x1b, s - x2a)});
  r.finalize();
  return r;
}

Region Region::clipped(std::int64_t x1a, std::int64_t x1b, std::int64_t x2a,
                       std::int64_t x2b) const {
  Region r;
  r.s_lo_ = std::max(s_lo_, x1a + x2a);
  const std::int64_t top = std::min(s_hi(), x1b + x2b);
  for (std::int64_t s = r.s_lo_; s <= top; ++s) {
    SpanRange row = rows_[static_cast<std::size_t>(s - s_lo_)];
    row.lo = std::max({row.lo, x1a, s - x2b});
    row.hi = std::min({row.hi, x1b, s - x2a});
    r.rows_.push_back(row);
  }
  r.finalize();
  return r;
}

bool Region::contains(const Site& x) const {
  const std::int64_t s = diag_index(x);
  if (s < s_lo_ || s > s_hi()) return false;
  const SpanRange& row = rows_[static_cast<std::size_t>(s - s_lo_)];
  return x.x1 >= row.lo && x.x1 <= row.hi;
}

std::size_t Region::index(const Site& x) const {
  const std::int64_t s = diag_index(x);
  if (s < s_lo_ || s > s_hi()) throw std::out_of_range("Region::index: site outside");
  const std::size_t r = static_cast<std::size_t>(s - s_lo_);
  const SpanRange& row = rows_[r];
  if (x.x1 < row.lo || x.x1 > row.hi)
    throw std::out_of_range("Region::index: site outside");
  return offset_[r] + static_cast<std::size_t>(x.x1 - row.lo);
}

SpanRange Region::row(std::int64_t s) const {
  if (s < s_lo_ || s > s_hi()) return {};
  return rows_[static_cast<std::size_t>(s - s_lo_)];
}

WeightField sample_weights(const EnvironmentSpec& spec, Region region,
                           std::uint64_t seed) {
  WeightField f;
  f.spec = spec;
  f.seed = seed;
  f.region = std::move(region);
  f.w.assign(f.region.size(), 0.0);
  f.region.for_each([&](const Site& x) {
    f.w[f.region.index(x)] = weight_at(spec, seed, x);
  });
  return f;
}

void dump_weights(std::ostream& os, const WeightField& f) {
  os << "# strip-cgm weights v1 env=" << f.spec.name() << " n=" << f.spec.n
     << " alpha=" << f.spec.alpha << " beta=" << f.spec.beta
     << " seed=" << f.seed << "\n";
  char buf[64];
  f.region.for_each([&](const Site& x) {
    std::snprintf(buf, sizeof buf, "%" PRId64 " %" PRId64 " %.17g\n", x.x1, x.x2,
                  f.at(x));
    os << buf;
  });
}

}  // namespace stripcgm
