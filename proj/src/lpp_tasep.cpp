#include "stripcgm/lpp_tasep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stripcgm {

CellMeaning classify_cell(int n, const Site& cell) {
  const std::int64_t d = cell.x1 - cell.x2;
  if (d == 0) return {EventKind::Entry, 1, cell.x2};
  if (d == n) return {EventKind::Exit, n, cell.x2};
  if (d < 0 || d > n) throw std::invalid_argument("classify_cell: outside the strip");
  return {EventKind::Swap, static_cast<int>(d), cell.x2};
}

namespace {

StripCoupling build_coupling(WeightField field, const Configuration& eta0,
                             double horizon) {
  if (field.spec.kind != EnvKind::Strip)
    throw std::invalid_argument("tasep_from_weights: needs a strip environment");
  const Params params(field.spec.n, field.spec.alpha, field.spec.beta);
  check_configuration(eta0, params);

  StripCoupling out{std::move(field), initial_growth_interface(eta0), {}, {}};
  out.passage =
      passage_times(out.field, SourceSpec::from_interface(out.gamma0));

  // Frontier check: every reachable cell on the last anti-diagonal must lie
  // beyond the horizon, otherwise events may be missing.
  const Region& reg = out.passage.region();
  {
    const SpanRange row = reg.row(reg.s_hi());
    for (std::int64_t x1 = row.lo; x1 <= row.hi; ++x1) {
      const auto g = out.passage.try_g({x1, reg.s_hi() - x1});
      if (g && *g <= horizon)
        throw RegionTooSmall("tasep_from_weights: horizon exceeds sampled region",
                             reg.s_hi() * 2);
    }
  }

  Trajectory traj{params, out.field.seed, horizon, eta0, {}};
  reg.for_each([&](const Site& cell) {
    const auto g = out.passage.try_g(cell);
    if (!g || *g > horizon) return;
    const CellMeaning m = classify_cell(params.n, cell);
    traj.events.push_back({*g, m.kind, m.site});
  });
  std::sort(traj.events.begin(), traj.events.end(),
            [](const Event& a, const Event& b) {
              if (a.time != b.time) return a.time < b.time;
              return a.site < b.site;  // float ties: site order, documented
            });
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace

StripCoupling tasep_from_weights(const WeightField& field, const Configuration& eta0,
                                 double horizon) {
  return build_coupling(field, eta0, horizon);
}

StripCoupling tasep_from_weights(const EnvironmentSpec& spec, const Configuration& eta0,
                                 double horizon, std::uint64_t seed) {
  if (spec.kind != EnvKind::Strip)
    throw std::invalid_argument("tasep_from_weights: needs a strip environment");
  const std::int64_t s_lo = 2 - spec.n;  // lowest supported anti-diagonal
  std::int64_t s_hi = spec.n + 4 + static_cast<std::int64_t>(horizon);
  for (int attempt = 0; attempt < 48; ++attempt) {
    WeightField f = sample_weights(spec, Region::strip_band(spec, s_lo, s_hi), seed);
    try {
      return build_coupling(std::move(f), eta0, horizon);
    } catch (const RegionTooSmall&) {
      s_hi *= 2;
    }
  }
  throw std::runtime_error("tasep_from_weights: horizon cap reached");
}

TrajectoryPassage passage_from_trajectory(const Trajectory& traj) {
  TrajectoryPassage tp;
  tp.n = traj.params.n;
  tp.gamma0 = initial_growth_interface(traj.initial);
  tp.horizon = traj.horizon;
  const LabelHistory h = label_particles(traj);
  for (const ParticleTrack& t : h.tracks) {
    for (std::size_t j = 0; j < t.pass_times.size(); ++j) {
      const std::int64_t n = t.start_pos + static_cast<std::int64_t>(j);
      tp.g.emplace(coupling_cell(t.label, n), t.pass_times[j]);
    }
  }
  return tp;
}

std::int64_t TrajectoryPassage::full_diag(const EnvironmentSpec& spec) const {
  for (std::int64_t s = 2 - n;; ++s) {
    const SpanRange row = support_span(spec, s);
    for (std::int64_t x1 = row.lo; x1 <= row.hi; ++x1) {
      const Site cell{x1, s - x1};
      if (g.count(cell)) continue;
      if (!gamma0.strictly_above(cell)) continue;  // behind: never realized
      return s - 1;
    }
  }
}

}  // namespace stripcgm
