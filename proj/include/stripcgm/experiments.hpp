#ifndef STRIPCGM_EXPERIMENTS_HPP
#define STRIPCGM_EXPERIMENTS_HPP

#include <functional>
#include <string>
#include <vector>

#include "stripcgm/config.hpp"
#include "stripcgm/manifest.hpp"

namespace stripcgm {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs fn(0..count-1) on a bounded pool; results must land in per-index
// slots so aggregation is independent of scheduling.
void parallel_replicas(std::int64_t count, int workers,
                       const std::function<void(std::int64_t)>& fn);

// Executes the named experiment and writes its CSV (plus a manifest) under
// out_dir. Known experiments: mixing-exact, mixing-coupling, burke, reversal,
// coalescence, crossing, shape, current, lower-bound, tag-check, scaling.
RunManifest run(const ExperimentConfig& cfg, const std::string& out_dir);

const std::vector<std::string>& experiment_names();

}  // namespace stripcgm

#endif
