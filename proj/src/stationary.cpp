#include "stripcgm/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stripcgm/geodesics.hpp"
#include "stripcgm/rng.hpp"

namespace stripcgm {

std::optional<double> IncrementField::I(const Site& x) const {
  const auto a = pf->try_g(x);
  const auto b = pf->try_g(x - e1);
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

std::optional<double> IncrementField::J(const Site& x) const {
  const auto a = pf->try_g(x);
  const auto b = pf->try_g(x - e2);
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

std::optional<double> IncrementField::Y(const Site& x) const {
  const auto i = I(x + e1);
  const auto j = J(x + e2);
  if (!i || !j) return std::nullopt;
  return std::min(*i, *j);
}

double IncrementField::recursion_error(const WeightField& field) const {
  double worst = 0.0;
  region.for_each([&](const Site& x) {
    const auto lhs = I(x);
    const auto i_prev = I(x - e2);
    const auto j_prev = J(x - e1);
    if (!lhs || !i_prev || !j_prev) return;
    const double rhs = std::max(*i_prev - *j_prev, 0.0) + field.at(x);
    worst = std::max(worst, std::abs(*lhs - rhs) / std::max(1.0, std::abs(*lhs)));
  });
  return worst;
}

IncrementField increments(const PassageField& pf, int n) {
  if (pf.source().kind != SourceSpec::Kind::Points || pf.source().points.size() != 1 ||
      !(pf.source().points[0] == Site{1, 0}))
    throw std::invalid_argument("increments: field must have source {(1,0)}");
  return {n, pf.region(), &pf};
}

BurkeReport burke_test(int n, int height, std::uint64_t seed, int samples) {
  if (samples < 100) throw std::invalid_argument("burke_test: need >= 100 samples");
  if (n < 2) throw std::invalid_argument("burke_test: n must be >= 2");
  const EnvironmentSpec spec = EnvironmentSpec::stationary_strip(n);
  const std::int64_t h = std::max<std::int64_t>(height, n + 1);

  std::vector<double> row_i, col_j, stair, ys;
  std::vector<double> row_lag_a, row_lag_b, st_i, st_j, cr_i, cr_y;

  const int per = n;  // per-replica yield of each family
  const int replicas = (samples + per - 1) / per;
  for (int r = 0; r < replicas; ++r) {
    const std::uint64_t s = rng::replica_seed(seed, static_cast<std::uint64_t>(r));
    const Region reg = Region::strip_band(spec, 1, 2 * h + n + 2);
    const WeightField f = sample_weights(spec, reg, s);
    const PassageField pf = passage_times(f, SourceSpec::point({1, 0}));
    const IncrementField inc = increments(pf, n);

    // Row path at x2 = h: horizontal increments.
    for (std::int64_t i = h + 1; i <= h + n; ++i) {
      if (auto v = inc.I({i, h})) {
        row_i.push_back(*v);
        if (i > h + 1) {
          row_lag_a.push_back(row_i[row_i.size() - 2]);
          row_lag_b.push_back(*v);
        }
      }
    }
    // Column path at x1 = h: vertical increments, descending.
    for (std::int64_t b = h; b >= h - n + 1; --b)
      if (auto v = inc.J({h, b})) col_j.push_back(*v);
    // Staircase from (h,h): alternating e1 / -e2 steps.
    Site z{h, h};
    for (int step = 0; static_cast<std::int64_t>(z.x1 - z.x2) < n; ++step) {
      if (step % 2 == 0) {
        z = z + e1;
        if (auto v = inc.I(z)) { stair.push_back(*v); st_i.push_back(*v); }
      } else {
        // increment of the down-step is J at the upper site
        if (auto v = inc.J(z)) { stair.push_back(*v); st_j.push_back(*v); }
        // Y strictly below the corner (z was entered by an e1 step)
        if (auto y = inc.Y(z - e1 - e2)) {
          ys.push_back(*y);
          if (auto v = inc.I(z)) { cr_i.push_back(*v); cr_y.push_back(*y); }
        }
        z = z - e2;
      }
    }
  }

  const auto take = [&](std::vector<double>& v) {
    if (static_cast<int>(v.size()) > samples) v.resize(static_cast<std::size_t>(samples));
  };
  take(row_i); take(col_j); take(stair); take(ys);

  BurkeReport rep;
  rep.ks_row = ks_exponential(row_i, 0.5);
  rep.ks_col = ks_exponential(col_j, 0.5);
  rep.ks_stair = ks_exponential(stair, 0.5);
  rep.ks_y = ks_exponential(ys, 1.0);
  rep.rho_ii = empirical_correlation(row_lag_a, row_lag_b);
  const std::size_t k = std::min(st_i.size(), st_j.size());
  rep.rho_ij = empirical_correlation(
      std::vector<double>(st_i.begin(), st_i.begin() + static_cast<std::ptrdiff_t>(k)),
      std::vector<double>(st_j.begin(), st_j.begin() + static_cast<std::ptrdiff_t>(k)));
  rep.rho_iy = empirical_correlation(cr_i, cr_y);
  return rep;
}

namespace {

Region parallelogram(const EnvironmentSpec& spec, int n, std::int64_t M) {
  // P_M: (1,0) <= x <= (N+M-1, M) intersected with the support.
  return Region::strip_band(spec, 1, n + 2 * M - 1)
      .clipped(1, n + M - 1, 0, M);
}

}  // namespace

ReversedField reversed_environment(const PassageField& pf, int n, std::int64_t M) {
  const EnvironmentSpec spec = EnvironmentSpec::stationary_strip(n);
  const IncrementField inc = increments(pf, n);
  ReversedField rev{n, M, parallelogram(spec, n, M), {}};
  rev.w.assign(rev.region.size(), 0.0);
  rev.region.for_each([&](const Site& x) {
    const std::int64_t d = x.x1 - x.x2;
    std::optional<double> v;
    if ((d == n && x.x2 >= 1) || (x.x2 == 0 && x.x1 >= 1 && x.x1 <= n)) {
      v = inc.I({n + M + 1 - x.x1, M - x.x2});
    } else if (d == 0 && x.x2 >= 1) {
      v = inc.J({n + M - x.x1, M - x.x2 + 1});
    } else {
      v = inc.Y({n + M - x.x1, M - x.x2});
    }
    if (!v)
      throw std::invalid_argument("reversed_environment: passage field too small");
    rev.w[rev.region.index(x)] = *v;
  });
  return rev;
}

double verify_reversal_identity(int n, std::int64_t M, std::uint64_t seed,
                                bool mutate) {
  if (M < n) throw std::invalid_argument("verify_reversal_identity: M must be >= n");
  const EnvironmentSpec spec = EnvironmentSpec::stationary_strip(n);
  const Region reg =
      Region::strip_band(spec, 1, n + 2 * M).clipped(1, n + M, 0, M);
  const WeightField f = sample_weights(spec, reg, seed);
  const PassageField pf = passage_times(f, SourceSpec::point({1, 0}));

  ReversedField rev = reversed_environment(pf, n, M);
  if (mutate) {
    // Swap two bulk weights; exactness must break.
    std::vector<std::size_t> bulk;
    rev.region.for_each([&](const Site& x) {
      const std::int64_t d = x.x1 - x.x2;
      if (d > 0 && d < n && x.x2 >= 1) bulk.push_back(rev.region.index(x));
    });
    if (bulk.size() >= 2)
      std::swap(rev.w[bulk.front()], rev.w[bulk[bulk.size() / 2]]);
  }

  WeightField rf{spec, rev.region, seed, rev.w};
  const PassageField grev = passage_times(rf, SourceSpec::point({1, 0}));
  const double g_total = pf.g({n + M, M});

  double worst = 0.0;
  rev.region.for_each([&](const Site& x) {
    const auto lhs = grev.try_g(x);
    const auto gr = pf.try_g({n + M - x.x1, M - x.x2});
    if (!lhs || !gr) return;
    const double rhs = g_total - *gr;
    worst = std::max(worst, std::abs(*lhs - rhs) / std::max(1.0, std::abs(rhs)));
  });
  return worst;
}

bool reversed_interface_check(int n, std::int64_t start, std::int64_t m,
                              std::uint64_t seed) {
  if (start < n || m < 1)
    throw std::invalid_argument("reversed_interface_check: need start >= n, m >= 1");
  const EnvironmentSpec spec = EnvironmentSpec::stationary_strip(n);
  const SemiInfiniteGeodesic sig =
      semi_infinite_geodesic(spec, {1, 0}, seed, start + m);
  if (!sig.certified)
    throw std::runtime_error("reversed_interface_check: certificate horizon cap");

  const std::int64_t M = start + m + 1;
  const Region reg =
      Region::strip_band(spec, 1, n + 2 * M).clipped(1, n + M, 0, M);
  const WeightField f = sample_weights(spec, reg, seed);
  const PassageField pf = passage_times(f, SourceSpec::point({1, 0}));
  const ReversedField rev = reversed_environment(pf, n, M);
  WeightField rf{spec, rev.region, seed, rev.w};
  const PassageField grev = passage_times(rf, SourceSpec::point({1, 0}));

  // v*_j at prefix index j-1 (diagonal index = generation).
  const auto v_at = [&](std::int64_t j) { return sig.prefix[static_cast<std::size_t>(j - 1)]; };
  const auto refl = [&](const Site& v) { return Site{n + M - v.x1, M - v.x2}; };

  const auto on_boundary = [&](const Site& z) {
    const std::int64_t d = z.x1 - z.x2;
    return d == 0 || d == n || z.x2 == 0 || z.x2 == M || z.x1 == n + M - 1 ||
           !rev.region.contains(z);
  };

  for (std::int64_t i = 1; i <= m; ++i) {
    const Site zi = refl(v_at(start + m + 1 - i));
    const Site zn = refl(v_at(start + m - i));
    if (on_boundary(zi)) continue;
    const auto gu = grev.try_g(zi + e2);
    const auto gr2 = grev.try_g(zi + e1);
    if (!gu || !gr2) continue;
    const Site argmin = *gu < *gr2 ? zi + e2 : zi + e1;
    if (!(argmin == zn)) return false;
  }
  return true;
}

std::int64_t boundary_hitting(int n, std::int64_t gen, std::uint64_t seed) {
  if (gen < 1) throw std::invalid_argument("boundary_hitting: gen must be >= 1");
  const EnvironmentSpec spec = EnvironmentSpec::stationary_strip(n);
  std::int64_t target = gen + 4 * n + 8;
  for (int attempt = 0; attempt < 24; ++attempt, target *= 2) {
    const SemiInfiniteGeodesic sig = semi_infinite_geodesic(spec, {1, 0}, seed, target);
    if (!sig.certified) break;
    for (const Site& z : sig.prefix) {
      const std::int64_t j = diag_index(z);
      if (j < gen) continue;
      const std::int64_t d = z.x1 - z.x2;
      if (d == 0 || d == n) return j - gen;
    }
  }
  throw std::runtime_error("boundary_hitting: horizon cap reached");
}

CrossingEvents crossing_events(int n_strip, std::int64_t n, std::int64_t m,
                               std::uint64_t seed) {
  const EnvironmentSpec spec = EnvironmentSpec::strip(0.5, 0.5, n_strip);
  const Rectangle rect = rectangle(n, m, spec);
  const WeightField f =
      sample_weights(spec, Region::strip_band(spec, n, n + m - 1), seed);
  const PassageField pf1 = passage_times(f, SourceSpec::point(rect.a1));
  const PassageField pf2 = passage_times(f, SourceSpec::point(rect.a2));
  CrossingEvents ev;
  for (const Site& z : geodesic_to(pf2, rect.a3))
    if (z.x1 == z.x2) { ev.b_plus = true; break; }
  for (const Site& z : geodesic_to(pf1, rect.a4))
    if (z.x1 - z.x2 == n_strip) { ev.b_minus = true; break; }
  return ev;
}

}  // namespace stripcgm
