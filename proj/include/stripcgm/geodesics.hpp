#ifndef STRIPCGM_GEODESICS_HPP
#define STRIPCGM_GEODESICS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "stripcgm/lattice.hpp"
#include "stripcgm/passage.hpp"

namespace stripcgm {

// pi1 >= pi2 in the natural ordering: for every shared first coordinate,
// every pi1 site sits at least as high as every pi2 site.
bool paths_ordered(const LatticePath& pi1, const LatticePath& pi2);

// Do the corner geodesics pi*_{a1,a4} and pi*_{a2,a3} share a site?
bool coalescence_check(const WeightField& field, const Site& a1, const Site& a2,
                       const Site& a3, const Site& a4);

// Semi-infinite geodesic from x, certified by prefix stability: the horizon M
// is grown (geometric doubling) until the geodesics from x to every site of
// L_M share one prefix through L_target.
struct SemiInfiniteGeodesic {
  LatticePath prefix;       // from x through L_target (inclusive)
  std::int64_t horizon = 0; // certificate: anti-diagonal the backtracks came from
  bool certified = false;   // false when the horizon cap was reached
};

SemiInfiniteGeodesic semi_infinite_geodesic(const EnvironmentSpec& spec, const Site& x,
                                            std::uint64_t seed, std::int64_t target);

// Busemann function B(x,y) = G(x,c) - G(y,c) at the certified coalescence
// point c of the two semi-infinite geodesics.
double busemann(const EnvironmentSpec& spec, const Site& x, const Site& y,
                std::uint64_t seed);

// Path decomposition over the rectangle band [n, n+m-1] of the strip:
// class 1 touches the strip sides only at segment endpoints, class 2 crosses
// from one side to the other, class 3 returns to the side it started on
// without touching the opposite one.
enum class PathClass { One = 1, Two = 2, Three = 3 };

struct PathSegment {
  LatticePath sites;
  PathClass cls;
};

std::vector<PathSegment> decompose_path(const LatticePath& path,
                                        const EnvironmentSpec& spec);

// Disjoint occurrence A o B for A = {G(x,y) >= t}, B = {G(x',y') >= t'},
// decided by brute force over all pairs of site-disjoint up-right paths.
// Grids larger than 5x5 are refused.
bool disjoint_occurrence(const WeightField& field, const Site& x, const Site& y,
                         const Site& xp, const Site& yp, double t, double tp);

struct BkrProbe {
  double p_ab = 0.0;  // estimate of P(A o B)
  double p_a = 0.0;
  double p_b = 0.0;
  double se = 0.0;    // std error of p_ab - p_a * p_b
  int seeds = 0;
};

BkrProbe bkr_probe(const EnvironmentSpec& spec, const Site& x, const Site& y,
                   const Site& xp, const Site& yp, double t, double tp,
                   int seeds, std::uint64_t master_seed);

}  // namespace stripcgm

#endif
