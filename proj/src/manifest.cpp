#include "stripcgm/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stripcgm {

std::uint64_t fnv64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("file_digest: cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return fnv64(ss.str());
}

std::string RunManifest::text() const {
  std::ostringstream os;
  char hex[32];
  os << "manifest-version 1\n";
  os << "experiment " << experiment << "\n";
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  os << "config-hash fnv64:" << hex << "\n";
  os << "code-version " << code_version << "\n";
  os << "master-seed " << master_seed << "\n";
  os << "replicas " << replicas << "\n";
  os << "workers " << workers << "\n";
  os << "seed-rule replica_seed(master,i) = splitmix-chain(master, REPLICA-tag, i)\n";
  for (std::size_t i = 0; i < replica_seeds.size(); ++i)
    os << "replica-seed " << i << " " << replica_seeds[i] << "\n";
  for (const auto& [path, digest] : outputs) {
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
    os << "output " << path << " fnv64:" << hex << "\n";
  }
  os << "wall-clock-ms " << wall_clock_ms << "\n";
  return os.str();
}

void RunManifest::write_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("RunManifest: cannot open " + path);
  os << text();
}

}  // namespace stripcgm
