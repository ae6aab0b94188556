#ifndef STRIPCGM_STATIONARY_HPP
#define STRIPCGM_STATIONARY_HPP

#include <cstdint>
#include <vector>

#include "stripcgm/lattice.hpp"
#include "stripcgm/passage.hpp"
#include "stripcgm/stats.hpp"

namespace stripcgm {

// Passage-time increments of the stationary strip model with source (1,0):
//   I_{i,j} = G(i,j) - G(i-1,j),  J_{i,j} = G(i,j) - G(i,j-1),
//   Y_{i,j} = min(I_{i+1,j}, J_{i,j+1}).
struct IncrementField {
  int n = 0;
  Region region;            // region of the underlying passage field
  const PassageField* pf = nullptr;

  std::optional<double> I(const Site& x) const;
  std::optional<double> J(const Site& x) const;
  std::optional<double> Y(const Site& x) const;
  // Max relative violation of I_{i,j} = (I_{i,j-1} - J_{i-1,j})^+ + w_{(i,j)}
  // over interior sites.
  double recursion_error(const WeightField& field) const;
};

IncrementField increments(const PassageField& pf, int n);

// Burke-property test: KS against Exp(1/2) for the increments along three
// down-right path families (row, column, staircase), Exp(1) for Y at the
// staircase corners, plus pairwise correlations. One batch draws ceil(samples
// / per-replica-yield) independent fields.
struct BurkeReport {
  TestReport ks_row;        // horizontal increments, Exp(1/2)
  TestReport ks_col;        // vertical increments, Exp(1/2)
  TestReport ks_stair;      // staircase increments, Exp(1/2)
  TestReport ks_y;          // Y at staircase corners, Exp(1)
  double rho_ii = 0.0;      // lag-1 correlation along the row path
  double rho_ij = 0.0;      // I vs J at matched staircase steps
  double rho_iy = 0.0;      // I vs Y at matched corners
};

BurkeReport burke_test(int n, int height, std::uint64_t seed, int samples);

// Reversed environment on the parallelogram P_M assembled from I, J, Y by
// index reflection.
struct ReversedField {
  int n = 0;
  std::int64_t M = 0;
  Region region;            // P_M
  std::vector<double> w;

  double at(const Site& x) const { return w[region.index(x)]; }
};

ReversedField reversed_environment(const PassageField& pf, int n, std::int64_t M);

// Max relative error of G_rev(i,j) = G((1,0),(N+M,M)) - G((1,0),(N+M-i,M-j))
// over P_M. `mutate` swaps two bulk weights first (negative control).
double verify_reversal_identity(int n, std::int64_t M, std::uint64_t seed,
                                bool mutate = false);

// Checks the argmin recursion of the rotated semi-infinite geodesic in the
// reversed environment at every interior step.
bool reversed_interface_check(int n, std::int64_t start, std::int64_t m,
                              std::uint64_t seed);

// First generation >= gen at which the semi-infinite geodesic from (1,0) in
// the stationary environment touches the strip boundary; returns nu - gen.
std::int64_t boundary_hitting(int n, std::int64_t gen, std::uint64_t seed);

// Crossing events on R_n^m in the flip-symmetric strip environment at the
// triple point: B+ = the lower-corner geodesic touches the diagonal, B- = the
// upper-corner geodesic touches the lower boundary.
struct CrossingEvents {
  bool b_plus = false;
  bool b_minus = false;
};
CrossingEvents crossing_events(int n_strip, std::int64_t n, std::int64_t m,
                               std::uint64_t seed);

}  // namespace stripcgm

#endif
