#ifndef STRIPCGM_MANIFEST_HPP
#define STRIPCGM_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stripcgm {

inline constexpr const char* kCodeVersion = "strip-cgm 0.1.0";

std::uint64_t fnv64(const std::string& bytes);
std::uint64_t file_digest(const std::string& path);

struct RunManifest {
  std::string experiment;
  std::uint64_t config_hash = 0;
  std::string code_version = kCodeVersion;
  std::uint64_t master_seed = 0;
  std::int64_t replicas = 0;
  int workers = 1;
  std::vector<std::uint64_t> replica_seeds;
  std::vector<std::pair<std::string, std::uint64_t>> outputs;  // (path, digest)
  double wall_clock_ms = 0.0;

  std::string text() const;
  void write_file(const std::string& path) const;
};

}  // namespace stripcgm

#endif
