#ifndef STRIPCGM_PASSAGE_HPP
#define STRIPCGM_PASSAGE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "stripcgm/lattice.hpp"

namespace stripcgm {

// Where a last-passage computation starts from.
//
// Point sources collect their own weight: G(a, y) sums the weights of every
// site on the path, both endpoints included. Interface sources are growth
// interfaces sitting at time zero: paths start strictly above the staircase
// and the staircase itself contributes nothing.
struct SourceSpec {
  enum class Kind { Points, Interface };
  Kind kind = Kind::Points;
  std::vector<Site> points;      // Kind::Points
  GrowthInterface interface;     // Kind::Interface

  static SourceSpec point(Site x) { return {Kind::Points, {x}, {}}; }
  static SourceSpec point_set(std::vector<Site> xs) { return {Kind::Points, std::move(xs), {}}; }
  static SourceSpec from_interface(GrowthInterface g) { return {Kind::Interface, {}, std::move(g)}; }
};

// Last passage values over a region. Unreachable sites carry an explicit
// marker, never a sentinel value.
class PassageField {
 public:
  PassageField() = default;
  PassageField(Region region, SourceSpec source);

  const Region& region() const { return region_; }
  const SourceSpec& source() const { return source_; }

  bool reachable(const Site& x) const { return reach_[region_.index(x)] != 0; }
  // Throws if x is unreachable or outside the region.
  double g(const Site& x) const;
  std::optional<double> try_g(const Site& x) const;

  // Mutable access for the DP fill.
  void set(const Site& x, double v) {
    const std::size_t i = region_.index(x);
    val_[i] = v;
    reach_[i] = 1;
  }

 private:
  Region region_;
  SourceSpec source_;
  std::vector<double> val_;
  std::vector<std::uint8_t> reach_;
};

// G(source, y) = max over up-right paths of summed weights, filled in
// anti-diagonal order via G(x) = max(G(x-e1), G(x-e2)) + w(x).
PassageField passage_times(const WeightField& field, SourceSpec source);

// Up-right path attaining G(source, y), backtracked by the larger
// predecessor value; float ties pick the e1 predecessor. The path starts at a
// source point (point sources) or at the first site above the interface.
LatticePath geodesic_to(const PassageField& pf, const Site& y);

// Point-to-point convenience with the spec's signature; checks that the
// field's source is exactly {x}.
LatticePath geodesic(const PassageField& pf, const WeightField& field,
                     const Site& x, const Site& y);

double path_weight(const WeightField& field, const LatticePath& p);

// Growth interface at time t: sites x with G <= t and G(x+(1,1)) > t. Sites
// behind the source interface count as grown. `complete` is false when cells
// on the region frontier are already grown by t, i.e. the region was too
// small to decide the full interface.
struct InterfaceAt {
  std::vector<Site> sites;
  bool complete = true;
};
InterfaceAt growth_interface_at(const PassageField& pf, const WeightField& field,
                                double t);

// Streaming last-passage value G(0,(n,n)) in the homogeneous environment,
// O(n) memory; used by the shape-theorem experiments.
double homogeneous_corner_value(std::int64_t n, std::uint64_t seed);

}  // namespace stripcgm

#endif
