#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unordered_set>

#include "oracle.hpp"
#include "stripcgm/geodesics.hpp"
#include "stripcgm/rng.hpp"

using namespace stripcgm;

TEST_CASE("path ordering") {
  const LatticePath a{{0, 0}, {1, 0}, {1, 1}, {2, 1}};
  CHECK(paths_ordered(a, a));
  const LatticePath high{{0, 1}, {1, 1}, {1, 2}, {2, 2}};
  CHECK(paths_ordered(high, a));
  CHECK(!paths_ordered(a, high));
  // crossing staircases: p1 starts above, ends below
  const LatticePath p1{{0, 1}, {1, 1}, {2, 1}, {2, 2}};
  const LatticePath p2{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {3, 2}};
  CHECK(!paths_ordered(p1, p2));
  CHECK(!paths_ordered(p2, p1));
}

TEST_CASE("corner geodesics are ordered on the strip") {
  const auto spec = EnvironmentSpec::strip(0.5, 0.5, 10);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Rectangle r = rectangle(12, 30, spec);
    const WeightField f =
        sample_weights(spec, Region::strip_band(spec, 12, 41), seed);
    const PassageField p1 = passage_times(f, SourceSpec::point(r.a1));
    const PassageField p2 = passage_times(f, SourceSpec::point(r.a2));
    CHECK(paths_ordered(geodesic_to(p1, r.a4), geodesic_to(p2, r.a3)));
  }
}

TEST_CASE("coalescence of identical corners is immediate") {
  const auto spec = EnvironmentSpec::strip(0.5, 0.5, 6);
  const Rectangle r = rectangle(8, 20, spec);
  const WeightField f = sample_weights(spec, Region::strip_band(spec, 8, 27), 5);
  CHECK(coalescence_check(f, r.a1, r.a1, r.a3, r.a3));
}

TEST_CASE("coalescence probability grows with the rectangle length") {
  const int n = 8;
  const auto spec = EnvironmentSpec::strip(0.5, 0.5, n);
  const double n32 = std::pow(8.0, 1.5);
  int hit1 = 0, hit4 = 0;
  const int reps = 200;
  for (std::uint64_t seed = 0; seed < reps; ++seed) {
    for (int m : {1, 4}) {
      const std::int64_t k = static_cast<std::int64_t>(m * n32);
      const Rectangle r = rectangle(n, k, spec);
      const WeightField f =
          sample_weights(spec, Region::strip_band(spec, n, n + k - 1), seed);
      const bool hit = coalescence_check(f, r.a1, r.a2, r.a3, r.a4);
      (m == 1 ? hit1 : hit4) += hit;
    }
  }
  CHECK(hit4 > hit1);
  CHECK(hit4 > reps / 2);
}

TEST_CASE("semi-infinite geodesics: prefix stability and coalescence") {
  const auto spec = EnvironmentSpec::strip(0.5, 0.5, 4);
  SUBCASE("prefixes agree under a larger target") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const SemiInfiniteGeodesic a = semi_infinite_geodesic(spec, {1, 1}, seed, 12);
      const SemiInfiniteGeodesic b = semi_infinite_geodesic(spec, {1, 1}, seed, 24);
      REQUIRE(a.certified);
      REQUIRE(b.certified);
      REQUIRE(b.prefix.size() >= a.prefix.size());
      for (std::size_t i = 0; i < a.prefix.size(); ++i)
        CHECK(a.prefix[i] == b.prefix[i]);
    }
  }
  SUBCASE("certificates are finite over 200 seeds at width 4") {
    for (std::uint64_t seed = 0; seed < 200; ++seed)
      CHECK(semi_infinite_geodesic(spec, {1, 1}, seed, 10).certified);
  }
  SUBCASE("two starts share their suffix beyond the first meet") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const SemiInfiniteGeodesic a = semi_infinite_geodesic(spec, {1, 1}, seed, 40);
      const SemiInfiniteGeodesic b = semi_infinite_geodesic(spec, {2, -1}, seed, 40);
      REQUIRE(a.certified);
      REQUIRE(b.certified);
      std::unordered_set<Site, SiteHash> on_a(a.prefix.begin(), a.prefix.end());
      std::size_t ib = 0;
      while (ib < b.prefix.size() && !on_a.count(b.prefix[ib])) ++ib;
      REQUIRE(ib < b.prefix.size());
      // align indices at the meet and compare the suffixes
      std::size_t ia = 0;
      while (!(a.prefix[ia] == b.prefix[ib])) ++ia;
      for (; ia < a.prefix.size() && ib < b.prefix.size(); ++ia, ++ib)
        CHECK(a.prefix[ia] == b.prefix[ib]);
    }
  }
}

TEST_CASE("busemann functions") {
  const auto spec = EnvironmentSpec::strip(0.5, 0.5, 4);
  CHECK(busemann(spec, {2, 1}, {2, 1}, 3) == 0.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Site x{1, 1}, y{2, -1}, z{3, 1};
    const double bxy = busemann(spec, x, y, seed);
    const double byx = busemann(spec, y, x, seed);
    CHECK(bxy == -byx);
    const double byz = busemann(spec, y, z, seed);
    const double bxz = busemann(spec, x, z, seed);
    CHECK(std::abs(bxy + byz - bxz) < 1e-9);
  }
}

TEST_CASE("path decomposition") {
  const auto spec = EnvironmentSpec::strip(0.5, 0.5, 6);
  SUBCASE("a path avoiding both sides is a single class-1 segment") {
    // staircase through the middle of the strip
    LatticePath p{{10, 7}};
    for (int i = 0; i < 6; ++i) {
      p.push_back(p.back() + e1);
      p.push_back(p.back() + e2);
    }
    const auto segs = decompose_path(p, spec);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].cls == PathClass::One);
    CHECK(segs[0].sites == p);
  }
  SUBCASE("diagonal run then crossing to the lower boundary") {
    // hug the diagonal (class 3), then run straight down-right to the beta
    // line (class 2)
    LatticePath p{{3, 3}};
    p.push_back({4, 3});
    p.push_back({4, 4});  // back on the diagonal
    p.push_back({5, 4});
    p.push_back({6, 4});
    p.push_back({7, 4});
    p.push_back({8, 4});
    p.push_back({9, 4});
    p.push_back({10, 4});  // d = 6: lower boundary
    const auto segs = decompose_path(p, spec);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].cls == PathClass::Three);
    CHECK(segs[0].sites.front() == Site{3, 3});
    CHECK(segs[0].sites.back() == Site{4, 4});
    CHECK(segs[1].cls == PathClass::Two);
    CHECK(segs[1].sites.front() == Site{4, 4});
    CHECK(segs[1].sites.back() == Site{10, 4});
  }
  SUBCASE("random geodesics: structure and reassembly") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Rectangle r = rectangle(8, 30, spec);
      const WeightField f =
          sample_weights(spec, Region::strip_band(spec, 8, 37), seed);
      const PassageField pf = passage_times(f, SourceSpec::point(r.a1));
      const LatticePath p = geodesic_to(pf, r.a4);
      const auto segs = decompose_path(p, spec);
      // concatenation reproduces the path (segments share endpoints)
      LatticePath glued = segs.front().sites;
      for (std::size_t i = 1; i < segs.size(); ++i) {
        REQUIRE(glued.back() == segs[i].sites.front());
        glued.insert(glued.end(), segs[i].sites.begin() + 1, segs[i].sites.end());
      }
      CHECK(glued == p);
      int n2 = 0, n3 = 0;
      for (const auto& s : segs) {
        const auto plus = [&](const Site& z) { return z.x1 == z.x2; };
        const auto minus = [&](const Site& z) { return z.x1 - z.x2 == 6; };
        switch (s.cls) {
          case PathClass::One:
            for (std::size_t i = 1; i + 1 < s.sites.size(); ++i)
              CHECK(!(plus(s.sites[i]) || minus(s.sites[i])));
            break;
          case PathClass::Two: {
            ++n2;
            const bool up = plus(s.sites.front());
            CHECK((up ? minus(s.sites.back()) : plus(s.sites.back())));
            for (std::size_t i = 1; i + 1 < s.sites.size(); ++i)
              CHECK(!(plus(s.sites[i]) || minus(s.sites[i])));
            break;
          }
          case PathClass::Three: {
            ++n3;
            const bool up = plus(s.sites.front());
            CHECK((up ? plus(s.sites.back()) : minus(s.sites.back())));
            for (const Site& z : s.sites)
              CHECK(!(up ? minus(z) : plus(z)));
            break;
          }
        }
      }
      CHECK(n3 <= n2 + 1);
    }
  }
  SUBCASE("paths leaving the strip are rejected") {
    CHECK_THROWS_AS(decompose_path({{1, 1}, {1, 2}}, spec), std::invalid_argument);
  }
}

TEST_CASE("disjoint occurrence by brute force") {
  const auto spec = EnvironmentSpec::homogeneous();
  SUBCASE("zero thresholds with separable endpoints") {
    const WeightField f = sample_weights(spec, Region::box(1, 4, 1, 4), 1);
    CHECK(disjoint_occurrence(f, {1, 1}, {4, 2}, {1, 3}, {4, 4}, 0.0, 0.0));
  }
  SUBCASE("a one-wide corridor admits no disjoint pair") {
    const WeightField f = sample_weights(spec, Region::box(1, 4, 1, 1), 2);
    CHECK(!disjoint_occurrence(f, {1, 1}, {4, 1}, {1, 1}, {4, 1}, 0.1, 0.1));
  }
  SUBCASE("grid cap") {
    const WeightField f = sample_weights(spec, Region::box(0, 6, 0, 6), 3);
    CHECK_THROWS_AS(disjoint_occurrence(f, {0, 0}, {6, 6}, {0, 0}, {6, 6}, 1, 1),
                    std::invalid_argument);
  }
  SUBCASE("agrees with a direct double loop on tiny grids") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const WeightField f = sample_weights(spec, Region::box(1, 3, 1, 3), seed);
      const Site x{1, 1}, y{3, 2}, xp{1, 2}, yp{3, 3};
      const double t = 2.0, tp = 2.0;
      bool expect = false;
      LatticePath ca{x};
      oracle::walk_paths(x, y, ca, [&](const LatticePath& pa) {
        double wa = 0;
        for (const Site& s : pa) wa += f.at(s);
        if (wa < t) return;
        LatticePath cb{xp};
        oracle::walk_paths(xp, yp, cb, [&](const LatticePath& pb) {
          double wb = 0;
          for (const Site& s : pb) wb += f.at(s);
          if (wb < tp) return;
          std::unordered_set<Site, SiteHash> sa(pa.begin(), pa.end());
          bool disjoint = true;
          for (const Site& s : pb)
            if (sa.count(s)) { disjoint = false; break; }
          expect = expect || disjoint;
        });
      });
      CHECK(disjoint_occurrence(f, x, y, xp, yp, t, tp) == expect);
    }
  }
}

TEST_CASE("BKR probe stays within the product bound") {
  const BkrProbe r = bkr_probe(EnvironmentSpec::homogeneous(), {1, 1}, {4, 4},
                               {1, 2}, {3, 4}, 9.0, 6.0, 2000, 77);
  CHECK(r.p_a > 0.05);
  CHECK(r.p_a < 0.95);
  CHECK(r.p_ab <= r.p_a * r.p_b + 3 * r.se);
}
