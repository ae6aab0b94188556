#ifndef STRIPCGM_LATTICE_HPP
#define STRIPCGM_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "stripcgm/rng.hpp"

namespace stripcgm {

struct Site {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;

  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;
  Site operator+(const Site& o) const { return {x1 + o.x1, x2 + o.x2}; }
  Site operator-(const Site& o) const { return {x1 - o.x1, x2 - o.x2}; }
};

inline constexpr Site e1{1, 0};
inline constexpr Site e2{0, 1};

// Anti-diagonal index x1 + x2. Agrees with |x|_1 on the nonnegative quadrant,
// which covers every use with n >= strip width; the signed form keeps the
// anti-diagonals of the strip segments rather than rays.
inline std::int64_t diag_index(const Site& s) { return s.x1 + s.x2; }

struct SiteHash {
  std::size_t operator()(const Site& s) const {
    return static_cast<std::size_t>(
        rng::mix(rng::zigzag(s.x1), rng::zigzag(s.x2)));
  }
};

using LatticePath = std::vector<Site>;  // consecutive diffs in {e1, e2}

bool is_up_right(const LatticePath& p);

// ---------------------------------------------------------------------------
// Environments: the mean function p of the exponential weight field.

enum class EnvKind {
  Strip,            // open-boundary TASEP strip, parameters alpha, beta, n
  StationaryStrip,  // boundary-weighted strip at the triple point
  HalfQuadrant,     // half-quadrant with mean-2 diagonal
  Swap,             // mean-2 weights moved to the x1-axis
  Z2Stationary,     // stationary model on the quadrant, mean-2 axes
  Homogeneous       // mean 1 everywhere
};

struct EnvironmentSpec {
  EnvKind kind = EnvKind::Homogeneous;
  int n = 0;            // strip width where applicable
  double alpha = 0.0;
  double beta = 0.0;

  static EnvironmentSpec strip(double alpha, double beta, int n);
  static EnvironmentSpec stationary_strip(int n);
  static EnvironmentSpec half_quadrant();
  static EnvironmentSpec swap();
  static EnvironmentSpec z2_stationary();
  static EnvironmentSpec homogeneous();

  bool is_strip_like() const {
    return kind == EnvKind::Strip || kind == EnvKind::StationaryStrip;
  }
  std::string name() const;
};

// Mean of the weight at x; 0 off the support.
double rate_function(const EnvironmentSpec& spec, const Site& x);

inline bool in_support(const EnvironmentSpec& spec, const Site& x) {
  return rate_function(spec, x) != 0.0;
}

// Supported x1-range of the anti-diagonal x1 + x2 == s; empty() when none.
struct SpanRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool empty() const { return lo > hi; }
  std::int64_t count() const { return empty() ? 0 : hi - lo + 1; }
};
SpanRange support_span(const EnvironmentSpec& spec, std::int64_t s);

// Anti-diagonal L_s as an explicit list, diagonal end first.
// Requires s >= strip width for strip-like environments.
std::vector<Site> anti_diagonal(std::int64_t s, const EnvironmentSpec& spec);

// Rectangle R_n^m spanned between L_n and L_{n+m-1}, corners in
// counter-clockwise order: a1, a2 on L_n (a1 at the diagonal end), a3, a4 on
// L_{n+m-1} (a4 at the diagonal end).
struct Rectangle {
  Site a1, a2, a3, a4;
  std::vector<Site> sites;
};
Rectangle rectangle(std::int64_t n, std::int64_t m, const EnvironmentSpec& spec);

// ---------------------------------------------------------------------------
// Growth interfaces (down-right staircases coding a configuration).

class GrowthInterface {
 public:
  GrowthInterface() = default;
  explicit GrowthInterface(std::vector<Site> pts);

  const std::vector<Site>& points() const { return pts_; }
  // True iff x >= g + (1,1) for some interface point g.
  bool strictly_above(const Site& x) const;

 private:
  std::vector<Site> pts_;
  std::int64_t col_lo_ = 0;
  std::vector<std::int64_t> low_b_;  // lowest x2 among points with x1 <= c
};

// gamma^0 = (0,0); step +e1 per empty site, -e2 per particle.
GrowthInterface initial_growth_interface(const std::vector<int>& bits);

// ---------------------------------------------------------------------------
// Regions: ragged anti-diagonal-major site containers.

class Region {
 public:
  Region() = default;

  // All supported sites of the environment with s_lo <= x1+x2 <= s_hi.
  static Region strip_band(const EnvironmentSpec& spec, std::int64_t s_lo,
                           std::int64_t s_hi);
  // Axis-aligned box [x1a,x1b] x [x2a,x2b] (no support filtering).
  static Region box(std::int64_t x1a, std::int64_t x1b, std::int64_t x2a,
                    std::int64_t x2b);

  // This region intersected with a box.
  Region clipped(std::int64_t x1a, std::int64_t x1b, std::int64_t x2a,
                 std::int64_t x2b) const;

  std::int64_t s_lo() const { return s_lo_; }
  std::int64_t s_hi() const { return s_lo_ + static_cast<std::int64_t>(rows_.size()) - 1; }
  std::size_t size() const { return total_; }
  bool empty() const { return total_ == 0; }

  bool contains(const Site& x) const;
  // Index into a size()-long dense array; throws if x is outside.
  std::size_t index(const Site& x) const;

  SpanRange row(std::int64_t s) const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::int64_t s = s_lo_ + static_cast<std::int64_t>(r);
      for (std::int64_t x1 = rows_[r].lo; x1 <= rows_[r].hi; ++x1)
        f(Site{x1, s - x1});
    }
  }

 private:
  std::int64_t s_lo_ = 0;
  std::vector<SpanRange> rows_;
  std::vector<std::size_t> offset_;
  std::size_t total_ = 0;
  void finalize();
};

// ---------------------------------------------------------------------------
// Weight fields: independent exponentials, site-keyed by (seed, x).

struct WeightField {
  EnvironmentSpec spec;
  Region region;
  std::uint64_t seed = 0;
  std::vector<double> w;

  double at(const Site& x) const { return w[region.index(x)]; }
};

WeightField sample_weights(const EnvironmentSpec& spec, Region region,
                           std::uint64_t seed);

// Weight of one site without materializing a field.
inline double weight_at(const EnvironmentSpec& spec, std::uint64_t seed,
                        const Site& x) {
  const double mean = rate_function(spec, x);
  return mean == 0.0 ? 0.0 : rng::site_exponential(seed, x.x1, x.x2, mean);
}

// Text dump/load used by golden tests: header line then "x1 x2 value" rows.
void dump_weights(std::ostream& os, const WeightField& f);

}  // namespace stripcgm

#endif
