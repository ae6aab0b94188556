#ifndef STRIPCGM_COMPETITION_HPP
#define STRIPCGM_COMPETITION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "stripcgm/lattice.hpp"
#include "stripcgm/lpp_tasep.hpp"
#include "stripcgm/passage.hpp"
#include "stripcgm/tasep.hpp"

namespace stripcgm {

enum class Color : std::int8_t { Undecided = 0, Plus = 1, Minus = -1 };

// Sites above gamma_0 colored by which interface part wins the race to them.
struct Coloring {
  GrowthInterface gamma0;
  int corner = 0;  // the index m with an e1 step into and an e2 step out
  Region region;
  std::vector<Color> colors;    // by region index; Undecided off/behind
  std::int64_t undecided = 0;   // exact float ties among colored sites

  Color at(const Site& x) const { return colors[region.index(x)]; }
};

// Indices m such that step m is +e1 and step m+1 is -e2 (a "01" pattern).
std::vector<int> corner_indices(const GrowthInterface& gamma0);

Coloring color_sites(const WeightField& field, const GrowthInterface& gamma0,
                     int corner);

// Competition interface driven by the coloring; cross-checked at every step
// against the argmin recursion on G(gamma_0, .). Stops when absorbed at a
// strip boundary or when the colored region ends.
struct InterfacePath {
  LatticePath points;   // phi_1 = gamma_0^corner, then steps in {e1, e2}
  bool absorbed = false;  // reached the strip boundary
};

InterfacePath competition_interface(const Coloring& coloring,
                                    const PassageField& from_gamma0,
                                    std::int64_t max_steps);

// Site-map CSVs (x1,x2,value rows) consumed by the sitemap plot: colors map
// to +1/-1, interface sites to 0.
std::string coloring_to_csv(const Coloring& coloring);
std::string interface_to_csv(const InterfacePath& path);

// Is the anti-diagonal L_k entirely one color?
bool monochromatic_diagonal(const Coloring& coloring, std::int64_t k);

// Couples a disagreement process holding a single second class particle at
// `start` to the competition interface of the (0,1)-pair configuration on the
// strip of width n+1, all read from one weight field.
struct SecondClassReport {
  bool identity_ok = true;       // trajectory identity at every interface step
  std::int64_t steps_checked = 0;
  std::optional<double> exit_time;          // tau_ex, absent if beyond horizon
  bool exit_dominated = true;    // tau_ex <= G(gamma_0, L_k) for monochromatic L_k
  std::int64_t monochromatic_k = -1;        // first monochromatic diagonal found
};

SecondClassReport second_class_vs_interface(int start, const Params& params,
                                            double t_end, std::uint64_t seed,
                                            const std::vector<int>* background = nullptr);

// Triple-point tagging cross-check: decides from the semi-infinite geodesic
// started at (1, -n+1) whether it touches the upper then the lower strip
// boundary with passage time < T, and when it does, verifies on the coupled
// all-two disagreement process that no second class particles remain at T and
// that the induced tag sequence is valid.
struct TagCheckReport {
  bool fired = false;
  bool certified = true;
  std::int64_t upper_touch = -1;  // diagonal index of the (a,a) touch
  std::int64_t lower_touch = -1;  // label of the (a'+n,a') touch
  double passage_time = 0.0;      // G at the lower touch when fired
  bool no_second_class_at_T = false;
  bool tag_sequence_ok = false;
  std::int64_t second_class_left = -1;  // count at T
};

TagCheckReport triple_point_tag_check(int n, double T, std::uint64_t seed);

}  // namespace stripcgm

#endif
