#ifndef STRIPCGM_RNG_HPP
#define STRIPCGM_RNG_HPP

#include <cmath>
#include <cstdint>

// Counter-based randomness. Every random quantity in the library is a pure
// function of a 64-bit seed plus integer keys (site coordinates, stream tags,
// ring indices, replica indices), so subregions, extended horizons and
// parallel replicas all see consistent values. The exact mixing function is
// part of the external contract and documented in the README.
namespace stripcgm::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e58bULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combine: mix(mix(s,a),b) != mix(mix(s,b),a) in general.
inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (v + kGamma + (h << 6) + (h >> 2)));
}

inline std::uint64_t zigzag(std::int64_t i) {
  return (static_cast<std::uint64_t>(i) << 1) ^ static_cast<std::uint64_t>(i >> 63);
}

// Stream tags. Weight fields, clock streams and replica derivation use
// disjoint tag spaces so no two draws ever collide.
inline constexpr std::uint64_t kTagWeights    = 0x5745494748545331ULL;
inline constexpr std::uint64_t kTagReplica    = 0x5245504c49434153ULL;
inline constexpr std::uint64_t kTagBulkClock  = 0x42554c4b434c4b00ULL;
inline constexpr std::uint64_t kTagEntryClock = 0x454e545259434c4bULL;
inline constexpr std::uint64_t kTagEntryExtra = 0x454e545259455854ULL;
inline constexpr std::uint64_t kTagExitClock  = 0x45584954434c4b00ULL;
inline constexpr std::uint64_t kTagExitExtra  = 0x4558495445585400ULL;

// Uniform on (0,1]; never returns 0 so -log(u) is finite.
inline double uniform01(std::uint64_t h) {
  return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

inline double exponential(std::uint64_t h, double mean) {
  return -mean * std::log(uniform01(h));
}

// Weight of the site (x1,x2) in field `seed`, for an Exponential of the given
// mean. Pure in (seed, x1, x2).
inline double site_exponential(std::uint64_t seed, std::int64_t x1, std::int64_t x2,
                               double mean) {
  const std::uint64_t h = mix(mix(mix(seed, kTagWeights), zigzag(x1)), zigzag(x2));
  return exponential(h, mean);
}

// i-th inter-arrival gap (i = 0,1,...) of the Poisson clock stream `tag`.
inline double clock_gap(std::uint64_t seed, std::uint64_t tag, std::uint64_t i,
                        double rate) {
  return exponential(mix(mix(seed, tag), i), 1.0 / rate);
}

// Seed for replica i of a run with the given master seed.
inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t i) {
  return mix(mix(master, kTagReplica), i);
}

}  // namespace stripcgm::rng

#endif
