#ifndef STRIPCGM_LPP_TASEP_HPP
#define STRIPCGM_LPP_TASEP_HPP

#include <cstdint>
#include <unordered_map>

#include "stripcgm/lattice.hpp"
#include "stripcgm/passage.hpp"
#include "stripcgm/tasep.hpp"

namespace stripcgm {

// Cell of the strip environment tied to particle `label` passing position n:
// { l_t(label) > n } = { G(gamma_0, cell) <= t }. Column x2 carries the label.
inline Site coupling_cell(std::int64_t label, std::int64_t n) {
  return Site{label + n, label};
}

struct CellMeaning {
  EventKind kind;
  int site;            // swap site (= position the particle leaves), else 1 / n
  std::int64_t label;  // x2
};
CellMeaning classify_cell(int n, const Site& cell);

struct RegionTooSmall : std::runtime_error {
  std::int64_t suggested_s_hi;
  RegionTooSmall(const char* what, std::int64_t s)
      : std::runtime_error(what), suggested_s_hi(s) {}
};

// The TASEP trajectory read off a strip weight field: every reachable cell
// with G <= horizon becomes the event it encodes, sorted by time.
struct StripCoupling {
  WeightField field;
  GrowthInterface gamma0;
  PassageField passage;
  Trajectory trajectory;
};

// Fixed-field version; throws RegionTooSmall when cells on the region
// frontier are still within the horizon.
StripCoupling tasep_from_weights(const WeightField& field, const Configuration& eta0,
                                 double horizon);

// Auto-sizing version: grows the sampled band until the horizon is covered.
StripCoupling tasep_from_weights(const EnvironmentSpec& spec, const Configuration& eta0,
                                 double horizon, std::uint64_t seed);

// The inverse direction: G(gamma_0, cell) read off a clock-driven trajectory.
// Values are the exact event times, so checks against them are float-exact.
struct TrajectoryPassage {
  int n = 0;
  GrowthInterface gamma0;
  double horizon = 0.0;
  std::unordered_map<Site, double, SiteHash> g;

  std::optional<double> try_g(const Site& cell) const {
    auto it = g.find(cell);
    if (it == g.end()) return std::nullopt;
    return it->second;
  }
  // Largest s such that every supported cell on anti-diagonals <= s is either
  // realized or unreachable; cells beyond may still be missing.
  std::int64_t full_diag(const EnvironmentSpec& spec) const;
};

TrajectoryPassage passage_from_trajectory(const Trajectory& traj);

}  // namespace stripcgm

#endif
