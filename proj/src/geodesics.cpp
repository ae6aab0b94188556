#include "stripcgm/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "stripcgm/rng.hpp"

namespace stripcgm {

bool paths_ordered(const LatticePath& pi1, const LatticePath& pi2) {
  // A path crosses each of its columns in an interval [lo, hi]; pi1 >= pi2
  // when both interval ends of pi1 sit at least as high on every shared
  // column. Coalesced stretches compare equal.
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> band1, band2;
  const auto collect = [](const LatticePath& p, auto& band) {
    for (const Site& s : p) {
      auto [it, fresh] = band.try_emplace(s.x1, std::pair{s.x2, s.x2});
      if (!fresh) {
        it->second.first = std::min(it->second.first, s.x2);
        it->second.second = std::max(it->second.second, s.x2);
      }
    }
  };
  collect(pi1, band1);
  collect(pi2, band2);
  for (const auto& [c, b2] : band2) {
    auto it = band1.find(c);
    if (it == band1.end()) continue;
    if (it->second.first < b2.first || it->second.second < b2.second) return false;
  }
  return true;
}

bool coalescence_check(const WeightField& field, const Site& a1, const Site& a2,
                       const Site& a3, const Site& a4) {
  const PassageField pf1 = passage_times(field, SourceSpec::point(a1));
  const PassageField pf2 = passage_times(field, SourceSpec::point(a2));
  if (!pf1.try_g(a4) || !pf2.try_g(a3))
    throw std::invalid_argument("coalescence_check: unreachable corner pair");
  const LatticePath p1 = geodesic_to(pf1, a4);
  const LatticePath p2 = geodesic_to(pf2, a3);
  std::unordered_set<Site, SiteHash> s1(p1.begin(), p1.end());
  for (const Site& z : p2)
    if (s1.count(z)) return true;
  return false;
}

namespace {

// Common prefix of the backtracked geodesics from every site of L_M; empty
// when they do not all start at the same site.
LatticePath common_prefix(const PassageField& pf, const std::vector<Site>& targets) {
  LatticePath common;
  bool first = true;
  for (const Site& y : targets) {
    if (!pf.try_g(y)) continue;
    LatticePath p = geodesic_to(pf, y);
    if (first) {
      common = std::move(p);
      first = false;
      continue;
    }
    std::size_t k = 0;
    while (k < common.size() && k < p.size() && common[k] == p[k]) ++k;
    common.resize(k);
    if (common.empty()) break;
  }
  return first ? LatticePath{} : common;
}

}  // namespace

SemiInfiniteGeodesic semi_infinite_geodesic(const EnvironmentSpec& spec, const Site& x,
                                            std::uint64_t seed, std::int64_t target) {
  if (!in_support(spec, x))
    throw std::invalid_argument("semi_infinite_geodesic: start not in the support");
  if (!spec.is_strip_like())
    throw std::invalid_argument("semi_infinite_geodesic: needs a strip-like environment");
  const std::int64_t start = diag_index(x);
  if (target < start)
    throw std::invalid_argument("semi_infinite_geodesic: target below the start");

  std::int64_t M = std::max<std::int64_t>(target + spec.n + 2, 2 * target + 2);
  const std::int64_t cap = std::max<std::int64_t>(M, 1) * 4096;
  for (; M <= cap; M *= 2) {
    const WeightField f =
        sample_weights(spec, Region::strip_band(spec, start, M), seed);
    const PassageField pf = passage_times(f, SourceSpec::point(x));
    const LatticePath common = common_prefix(pf, anti_diagonal(M, spec));
    if (!common.empty() && diag_index(common.back()) >= target) {
      LatticePath prefix;
      for (const Site& z : common) {
        prefix.push_back(z);
        if (diag_index(z) >= target) break;
      }
      return {std::move(prefix), M, true};
    }
  }
  // Cap reached: return the best partial prefix, uncertified.
  const WeightField f = sample_weights(spec, Region::strip_band(spec, start, cap), seed);
  const PassageField pf = passage_times(f, SourceSpec::point(x));
  return {common_prefix(pf, anti_diagonal(cap, spec)), cap, false};
}

double busemann(const EnvironmentSpec& spec, const Site& x, const Site& y,
                std::uint64_t seed) {
  if (x == y) return 0.0;
  std::int64_t target = std::max(diag_index(x), diag_index(y)) + spec.n + 2;
  for (int attempt = 0; attempt < 24; ++attempt, target *= 2) {
    const SemiInfiniteGeodesic gx = semi_infinite_geodesic(spec, x, seed, target);
    const SemiInfiniteGeodesic gy = semi_infinite_geodesic(spec, y, seed, target);
    if (!gx.certified || !gy.certified) break;
    // First shared site; beyond it the two prefixes coincide.
    std::unordered_set<Site, SiteHash> on_x(gx.prefix.begin(), gx.prefix.end());
    const Site* c = nullptr;
    for (const Site& z : gy.prefix)
      if (on_x.count(z)) { c = &z; break; }
    if (c == nullptr) continue;
    const Site meet = *c;
    const auto weight_to = [&](const LatticePath& p) {
      double w = 0.0;
      for (const Site& z : p) {
        w += weight_at(spec, seed, z);
        if (z == meet) return w;
      }
      throw std::logic_error("busemann: meet point left the prefix");
    };
    return weight_to(gx.prefix) - weight_to(gy.prefix);
  }
  throw std::runtime_error("busemann: horizon cap reached before coalescence");
}

std::vector<PathSegment> decompose_path(const LatticePath& path,
                                        const EnvironmentSpec& spec) {
  if (!spec.is_strip_like())
    throw std::invalid_argument("decompose_path: needs a strip-like environment");
  if (!is_up_right(path)) throw std::invalid_argument("decompose_path: not up-right");
  for (const Site& z : path)
    if (!in_support(spec, z))
      throw std::invalid_argument("decompose_path: path exits the strip");

  const auto on_plus = [&](const Site& z) { return z.x1 - z.x2 == 0; };
  const auto on_minus = [&](const Site& z) { return z.x1 - z.x2 == spec.n; };

  std::vector<PathSegment> out;
  const auto emit = [&](std::size_t a, std::size_t b, PathClass cls) {
    if (b < a) return;
    out.push_back({LatticePath(path.begin() + static_cast<std::ptrdiff_t>(a),
                               path.begin() + static_cast<std::ptrdiff_t>(b) + 1),
                   cls});
  };

  std::size_t i = 0;  // start of the remaining sub-path
  const std::size_t last = path.size() - 1;
  while (i <= last) {
    // Indices >= i touching either side.
    std::size_t i_min = last + 1;
    for (std::size_t k = i; k <= last; ++k)
      if (on_plus(path[k]) || on_minus(path[k])) { i_min = k; break; }
    if (i_min > last) {  // no side touches at all: one class-1 tail
      emit(i, last, PathClass::One);
      break;
    }
    if (i_min != i) {  // class-1 head up to the first touch
      emit(i, i_min, PathClass::One);
      i = i_min;
      continue;
    }
    const bool start_plus = on_plus(path[i]);
    // j: first index of the opposite side after i; k: last same-side index < j.
    std::size_t j = last + 1;
    for (std::size_t k = i; k <= last; ++k) {
      const bool opp = start_plus ? on_minus(path[k]) : on_plus(path[k]);
      if (opp) { j = k; break; }
    }
    std::size_t k_same = i;
    for (std::size_t k = i; k < std::min(j, last + 1); ++k) {
      const bool same = start_plus ? on_plus(path[k]) : on_minus(path[k]);
      if (same) k_same = k;
    }
    if (j > last) {
      // Never reaches the opposite side again: class-3 up to the last
      // same-side touch, then a class-1 tail.
      if (k_same > i) emit(i, k_same, PathClass::Three);
      if (k_same < last || k_same == i) emit(k_same, last, PathClass::One);
      break;
    }
    if (k_same > i) emit(i, k_same, PathClass::Three);
    emit(k_same, j, PathClass::Two);
    i = j;
    if (j == last) break;
  }
  return out;
}

namespace {

void enumerate_paths(const Site& x, const Site& y, LatticePath& cur,
                     std::vector<LatticePath>& out) {
  if (cur.back() == y) {
    out.push_back(cur);
    return;
  }
  const Site z = cur.back();
  if (z.x1 < y.x1) {
    cur.push_back(z + e1);
    enumerate_paths(x, y, cur, out);
    cur.pop_back();
  }
  if (z.x2 < y.x2) {
    cur.push_back(z + e2);
    enumerate_paths(x, y, cur, out);
    cur.pop_back();
  }
}

std::vector<LatticePath> all_paths(const Site& x, const Site& y) {
  std::vector<LatticePath> out;
  if (!(y.x1 >= x.x1 && y.x2 >= x.x2)) return out;
  LatticePath cur{x};
  enumerate_paths(x, y, cur, out);
  return out;
}

struct MaskedPath {
  std::uint64_t mask;
  double weight;
};

std::vector<MaskedPath> masked_paths(const WeightField& field, const Site& x,
                                     const Site& y, const Site& origin,
                                     std::int64_t width) {
  std::vector<MaskedPath> out;
  for (const LatticePath& p : all_paths(x, y)) {
    std::uint64_t mask = 0;
    double w = 0.0;
    for (const Site& z : p) {
      const std::int64_t bit = (z.x1 - origin.x1) + width * (z.x2 - origin.x2);
      mask |= std::uint64_t{1} << bit;
      w += field.at(z);
    }
    out.push_back({mask, w});
  }
  return out;
}

}  // namespace

bool disjoint_occurrence(const WeightField& field, const Site& x, const Site& y,
                         const Site& xp, const Site& yp, double t, double tp) {
  const std::int64_t x1a = std::min(x.x1, xp.x1), x1b = std::max(y.x1, yp.x1);
  const std::int64_t x2a = std::min(x.x2, xp.x2), x2b = std::max(y.x2, yp.x2);
  const std::int64_t w = x1b - x1a + 1, h = x2b - x2a + 1;
  if (w > 5 || h > 5) throw std::invalid_argument("disjoint_occurrence: grid too large");
  const Site origin{x1a, x2a};
  const auto pa = masked_paths(field, x, y, origin, w);
  const auto pb = masked_paths(field, xp, yp, origin, w);
  for (const MaskedPath& a : pa) {
    if (a.weight < t) continue;
    for (const MaskedPath& b : pb) {
      if (b.weight < tp) continue;
      if ((a.mask & b.mask) == 0) return true;
    }
  }
  return false;
}

BkrProbe bkr_probe(const EnvironmentSpec& spec, const Site& x, const Site& y,
                   const Site& xp, const Site& yp, double t, double tp,
                   int seeds, std::uint64_t master_seed) {
  if (seeds < 1) throw std::invalid_argument("bkr_probe: seeds must be >= 1");
  const std::int64_t x1a = std::min(x.x1, xp.x1), x1b = std::max(y.x1, yp.x1);
  const std::int64_t x2a = std::min(x.x2, xp.x2), x2b = std::max(y.x2, yp.x2);
  const Region box = Region::box(x1a, x1b, x2a, x2b);

  std::int64_t n_ab = 0, n_a = 0, n_b = 0;
  for (int i = 0; i < seeds; ++i) {
    const WeightField f =
        sample_weights(spec, box, rng::replica_seed(master_seed, static_cast<std::uint64_t>(i)));
    const PassageField pfa = passage_times(f, SourceSpec::point(x));
    const PassageField pfb = passage_times(f, SourceSpec::point(xp));
    const bool a = pfa.g(y) >= t;
    const bool b = pfb.g(yp) >= tp;
    n_a += a;
    n_b += b;
    if (a && b && disjoint_occurrence(f, x, y, xp, yp, t, tp)) ++n_ab;
  }
  BkrProbe r;
  r.seeds = seeds;
  const double n = seeds;
  r.p_ab = n_ab / n;
  r.p_a = n_a / n;
  r.p_b = n_b / n;
  const double v_ab = r.p_ab * (1 - r.p_ab) / n;
  const double v_a = r.p_a * (1 - r.p_a) / n;
  const double v_b = r.p_b * (1 - r.p_b) / n;
  r.se = std::sqrt(v_ab + r.p_a * r.p_a * v_b + r.p_b * r.p_b * v_a);
  return r;
}

}  // namespace stripcgm
