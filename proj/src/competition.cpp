#include "stripcgm/competition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "stripcgm/rng.hpp"

namespace stripcgm {

std::vector<int> corner_indices(const GrowthInterface& gamma0) {
  const auto& pts = gamma0.points();
  std::vector<int> out;
  for (std::size_t m = 1; m + 1 < pts.size(); ++m) {
    if (pts[m] - pts[m - 1] == e1 && pts[m] - pts[m + 1] == e2)
      out.push_back(static_cast<int>(m));
  }
  return out;
}

Coloring color_sites(const WeightField& field, const GrowthInterface& gamma0,
                     int corner) {
  const auto& pts = gamma0.points();
  if (corner < 1 || corner + 1 >= static_cast<int>(pts.size()) ||
      !(pts[static_cast<std::size_t>(corner)] - pts[static_cast<std::size_t>(corner) - 1] == e1) ||
      !(pts[static_cast<std::size_t>(corner)] - pts[static_cast<std::size_t>(corner) + 1] == e2))
    throw std::invalid_argument("color_sites: no valid corner at m");

  GrowthInterface plus_part(std::vector<Site>(
      pts.begin(), pts.begin() + corner));  // gamma^0 .. gamma^{m-1}
  GrowthInterface minus_part(std::vector<Site>(pts.begin() + corner, pts.end()));

  const PassageField gp = passage_times(field, SourceSpec::from_interface(plus_part));
  const PassageField gm = passage_times(field, SourceSpec::from_interface(minus_part));

  Coloring c{gamma0, corner, field.region, {}, 0};
  c.colors.assign(field.region.size(), Color::Undecided);
  field.region.for_each([&](const Site& x) {
    if (!gamma0.strictly_above(x)) return;
    const auto vp = gp.try_g(x);
    const auto vm = gm.try_g(x);
    Color col = Color::Undecided;
    if (vp && vm) {
      col = *vp > *vm ? Color::Plus : (*vm > *vp ? Color::Minus : Color::Undecided);
      if (col == Color::Undecided) ++c.undecided;
    } else if (vp) {
      col = Color::Plus;
    } else if (vm) {
      col = Color::Minus;
    }
    c.colors[c.region.index(x)] = col;
  });
  return c;
}

InterfacePath competition_interface(const Coloring& coloring,
                                    const PassageField& from_gamma0,
                                    std::int64_t max_steps) {
  const int n = static_cast<int>(coloring.gamma0.points().size()) - 1;
  InterfacePath out;
  Site phi = coloring.gamma0.points()[static_cast<std::size_t>(coloring.corner)];
  out.points.push_back(phi);
  for (std::int64_t step = 0; step < max_steps; ++step) {
    const Site probe = phi + Site{1, 1};
    if (!coloring.region.contains(probe))
      throw std::out_of_range("competition_interface: step beyond colored region");
    // The diagonal cell inherits the color of its later-grown feeder, so the
    // interface steps toward the earlier-grown one: Plus means the gamma_+
    // feeder (phi+e2) grew later, hence the step goes right.
    const Color col = coloring.at(probe);
    Site next;
    if (col == Color::Plus)
      next = phi + e1;
    else if (col == Color::Minus)
      next = phi + e2;
    else
      throw std::runtime_error("competition_interface: undecided color at probe");

    // Cross-check against the argmin recursion on G(gamma_0, .).
    const auto g_up = from_gamma0.try_g(phi + e2);
    const auto g_right = from_gamma0.try_g(phi + e1);
    const double vu = g_up ? *g_up : std::numeric_limits<double>::infinity();
    const double vr = g_right ? *g_right : std::numeric_limits<double>::infinity();
    const Site argmin = vu < vr ? phi + e2 : phi + e1;
    if (!(argmin == next))
      throw std::runtime_error(
          "competition_interface: coloring and argmin recursions disagree");

    phi = next;
    out.points.push_back(phi);
    const std::int64_t d = phi.x1 - phi.x2;
    if (d == 0 || d == n) {  // reached a strip boundary: absorbed
      out.absorbed = true;
      return out;
    }
  }
  return out;
}

std::string coloring_to_csv(const Coloring& coloring) {
  std::string out = "x1,x2,value\n";
  coloring.region.for_each([&](const Site& x) {
    const Color c = coloring.at(x);
    if (c == Color::Undecided) return;
    out += std::to_string(x.x1) + "," + std::to_string(x.x2) + "," +
           (c == Color::Plus ? "1" : "-1") + "\n";
  });
  return out;
}

std::string interface_to_csv(const InterfacePath& path) {
  std::string out = "x1,x2,value\n";
  for (const Site& x : path.points)
    out += std::to_string(x.x1) + "," + std::to_string(x.x2) + ",0\n";
  return out;
}

bool monochromatic_diagonal(const Coloring& coloring, std::int64_t k) {
  bool saw_plus = false, saw_minus = false;
  const SpanRange row = coloring.region.row(k);
  if (row.empty()) throw std::invalid_argument("monochromatic_diagonal: L_k outside region");
  for (std::int64_t x1 = row.lo; x1 <= row.hi; ++x1) {
    const Site x{x1, k - x1};
    if (!coloring.gamma0.strictly_above(x))
      throw std::invalid_argument("monochromatic_diagonal: L_k not fully colored");
    switch (coloring.at(x)) {
      case Color::Plus: saw_plus = true; break;
      case Color::Minus: saw_minus = true; break;
      case Color::Undecided: return false;
    }
  }
  return saw_plus != saw_minus;
}

namespace {

// The (0,1)-pair configuration on [n+1] for a disagreement state with a
// single second class particle at `start` (1-based).
Configuration pair_configuration(const std::vector<int>& xi, int start) {
  const int n = static_cast<int>(xi.size());
  Configuration eta(static_cast<std::size_t>(n) + 1, 0);
  for (int y = 1; y <= n + 1; ++y) {
    int v;
    if (y < start)
      v = xi[static_cast<std::size_t>(y) - 1];
    else if (y == start)
      v = 0;
    else if (y == start + 1)
      v = 1;
    else
      v = xi[static_cast<std::size_t>(y) - 2];
    eta[static_cast<std::size_t>(y) - 1] = v == 1 ? 1 : 0;
  }
  return eta;
}

}  // namespace

SecondClassReport second_class_vs_interface(int start, const Params& params,
                                            double t_end, std::uint64_t seed,
                                            const std::vector<int>* background) {
  const int n = params.n;
  if (start < 1 || start > n)
    throw std::invalid_argument("second_class_vs_interface: start outside segment");

  std::vector<int> xi0;
  if (background != nullptr) {
    xi0 = *background;
    if (static_cast<int>(xi0.size()) != n)
      throw std::invalid_argument("second_class_vs_interface: bad background size");
  } else {
    xi0.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      xi0[static_cast<std::size_t>(i)] =
          static_cast<int>(rng::mix(rng::mix(seed, 0xB17ULL), static_cast<std::uint64_t>(i)) & 1);
  }
  xi0[static_cast<std::size_t>(start) - 1] = 2;

  const Configuration eta01 = pair_configuration(xi0, start);
  const EnvironmentSpec spec = EnvironmentSpec::strip(params.alpha, params.beta, n + 1);
  const StripCoupling cpl = tasep_from_weights(spec, eta01, t_end, seed);

  const Coloring coloring = color_sites(cpl.field, cpl.gamma0, start);
  InterfacePath phi;
  bool region_ended = false;
  try {
    phi = competition_interface(coloring, cpl.passage,
                                cpl.passage.region().s_hi() * 2);
  } catch (const std::out_of_range&) {
    region_ended = true;  // horizon too small to see the exit
  }

  // Replay the pair through the trajectory.
  std::vector<std::pair<double, int>> moves;  // (time, +1 right / -1 left)
  std::optional<double> exit_time;
  {
    int pos = start;  // empty site of the pair
    for (const Event& e : cpl.trajectory.events) {
      if (e.kind == EventKind::Swap) {
        if (e.site == pos + 1) moves.emplace_back(e.time, +1), ++pos;
        else if (e.site == pos - 1) moves.emplace_back(e.time, -1), --pos;
      } else if (e.kind == EventKind::Entry) {
        if (pos == 1) { exit_time = e.time; break; }
      } else {  // exit from site n+1
        if (pos + 1 == n + 1) { exit_time = e.time; break; }
      }
    }
  }

  SecondClassReport rep;
  rep.exit_time = exit_time;

  // Trajectory identity: the k-th pair move happens exactly at
  // G(gamma_0, phi_{k+1}) and in the direction of the interface step. The
  // final interface point, when absorbed, is the exit event, not a move.
  const auto& pts = phi.points;
  const std::size_t till =
      phi.absorbed && !pts.empty() ? pts.size() - 1 : pts.size();
  bool observable = true;
  for (std::size_t k = 0; k + 1 < till; ++k) {
    const auto g = cpl.passage.try_g(pts[k + 1]);
    if (!g) { rep.identity_ok = false; break; }
    if (*g > t_end) { observable = false; break; }  // beyond the horizon
    if (k >= moves.size() || moves[k].first != *g ||
        moves[k].second != (pts[k + 1] - pts[k] == e1 ? +1 : -1)) {
      rep.identity_ok = false;
      break;
    }
    ++rep.steps_checked;
  }
  // Absorption: the exit fires exactly when the interface meets the boundary.
  if (phi.absorbed && observable && rep.identity_ok) {
    const auto g = cpl.passage.try_g(pts.back());
    if (!g) {
      rep.identity_ok = false;
    } else if (*g <= t_end) {
      if (!exit_time || *exit_time != *g) rep.identity_ok = false;
    } else if (exit_time) {
      rep.identity_ok = false;
    }
  } else if (!phi.absorbed && !region_ended && exit_time) {
    rep.identity_ok = false;
  }

  // Exit-time domination by the first monochromatic anti-diagonal.
  for (std::int64_t k = n + 2; k <= cpl.passage.region().s_hi() - 2; ++k) {
    bool mono;
    try {
      mono = monochromatic_diagonal(coloring, k);
    } catch (const std::invalid_argument&) {
      break;
    }
    if (!mono) continue;
    rep.monochromatic_k = k;
    double g_lk = 0.0;
    for (const Site& x : anti_diagonal(k, spec))
      if (auto g = cpl.passage.try_g(x)) g_lk = std::max(g_lk, *g);
    // Beyond the horizon the exit is unobservable; the bound must then also
    // sit beyond the horizon for the domination to be falsifiable.
    rep.exit_dominated = exit_time ? *exit_time <= g_lk : g_lk > t_end;
    break;
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

using ValueFn = std::function<std::optional<double>(const Site&)>;

LatticePath backtrack_from(const ValueFn& value, const GrowthInterface& gamma0,
                           Site y) {
  LatticePath rev;
  Site z = y;
  for (;;) {
    rev.push_back(z);
    const auto g1 = value(z - e1);
    const auto g2 = value(z - e2);
    const double v1 = g1 ? *g1 : -std::numeric_limits<double>::infinity();
    const double v2 = g2 ? *g2 : -std::numeric_limits<double>::infinity();
    const double seed0 = gamma0.strictly_above(z)
                             ? 0.0
                             : -std::numeric_limits<double>::infinity();
    if (v1 >= v2 && v1 >= seed0) z = z - e1;
    else if (v2 >= seed0) z = z - e2;
    else break;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

LatticePath certified_prefix(const ValueFn& value, const GrowthInterface& gamma0,
                             const std::vector<Site>& targets) {
  LatticePath common;
  bool first = true;
  for (const Site& y : targets) {
    if (!value(y)) continue;
    LatticePath p = backtrack_from(value, gamma0, y);
    if (first) {
      common = std::move(p);
      first = false;
      continue;
    }
    std::size_t k = 0;
    while (k < common.size() && k < p.size() && common[k] == p[k]) ++k;
    common.resize(k);
    if (common.empty()) break;
  }
  return first ? LatticePath{} : common;
}

}  // namespace

TagCheckReport triple_point_tag_check(int n, double T, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("triple_point_tag_check: n must be >= 1");
  if (T < 0) throw std::invalid_argument("triple_point_tag_check: T must be >= 0");
  const Params params(n, 0.5, 0.5);
  const EnvironmentSpec spec = EnvironmentSpec::strip(0.5, 0.5, n);
  const Configuration ones(static_cast<std::size_t>(n), 1);
  const Configuration zeros(static_cast<std::size_t>(n), 0);

  TagCheckReport rep;

  double horizon = std::max(4.0 * T + 8, 16.0 * n + 32);
  for (int attempt = 0; attempt < 24; ++attempt, horizon *= 2) {
    const auto [traj1, traj0] =
        canonical_couple(ones, zeros, params, params, horizon, seed);
    const TrajectoryPassage tp = passage_from_trajectory(traj1);
    const ValueFn value = [&](const Site& s) { return tp.try_g(s); };

    const std::int64_t mf = tp.full_diag(spec);
    std::vector<Site> targets;
    {
      const SpanRange row = support_span(spec, mf);
      for (std::int64_t x1 = row.lo; x1 <= row.hi; ++x1) {
        const Site cell{x1, mf - x1};
        if (tp.gamma0.strictly_above(cell)) targets.push_back(cell);
      }
    }
    if (targets.empty()) continue;
    const LatticePath prefix = certified_prefix(value, tp.gamma0, targets);
    if (prefix.empty()) continue;
    if (!(prefix.front() == Site{1, 1 - n}))
      throw std::logic_error("triple_point_tag_check: geodesic start mismatch");

    // Walk the certified prefix: first upper touch (a,a) with a > 1, then the
    // first lower touch afterwards, all with passage time < T.
    std::int64_t upper = -1, lower = -1;
    double tau = 0.0;
    bool decided = false, fired = false;
    for (const Site& z : prefix) {
      const auto g = tp.try_g(z);
      if (!g) break;
      if (*g >= T) { decided = true; break; }  // G grows along the path
      const std::int64_t d = z.x1 - z.x2;
      if (upper < 0) {
        if (d == 0 && z.x2 > 1) upper = z.x2;
      } else if (d == n && z.x2 > upper) {  // strictly later row
        lower = z.x2;
        tau = *g;
        decided = fired = true;
        break;
      }
    }
    if (!decided) continue;  // certified prefix too short, grow the horizon

    rep.fired = fired;
    rep.upper_touch = upper;
    rep.lower_touch = lower;
    rep.passage_time = tau;
    if (!fired) return rep;

    // Verification on the coupled all-two disagreement process.
    const DisagreementPath xi = disagreement(traj1, traj0);
    {
      const auto& state = xi.at(std::min(T, xi.horizon));
      rep.second_class_left = std::count(state.begin(), state.end(), 2);
      rep.no_second_class_at_T = rep.second_class_left == 0;
    }

    // Tag windows: label j is tagged on [t_{j-1}, t_j), t_j the time of the
    // last prefix cell in row j.
    std::vector<double> window_end;  // per label upper..lower
    for (std::int64_t j = upper; j <= lower; ++j) {
      double tj = 0.0;
      for (const Site& z : prefix)
        if (z.x2 == j)
          if (auto g = tp.try_g(z)) tj = std::max(tj, *g);
      window_end.push_back(tj);
    }
    const LabelHistory labels = label_particles(traj1);
    bool tags_ok = true;
    for (std::size_t i = 0; i < xi.times.size(); ++i) {
      const double t = xi.times[i];
      if (t >= tau) break;
      // X_t: first label whose window has not ended.
      std::int64_t xt = lower;
      for (std::size_t j = 0; j < window_end.size(); ++j) {
        if (t < window_end[j]) { xt = upper + static_cast<std::int64_t>(j); break; }
      }
      const ParticleTrack* tr = labels.find(xt);
      if (tr == nullptr || tr->pass_times.empty() || tr->pass_times[0] > t)
        continue;  // tagged particle not yet in the segment
      std::int64_t pos = 1;
      for (std::size_t j = 1; j < tr->pass_times.size() && tr->pass_times[j] <= t; ++j)
        pos = 1 + static_cast<std::int64_t>(j);
      if (pos >= n) continue;  // at site n or already out
      if (xi.states[i][static_cast<std::size_t>(pos)] != 0) {
        tags_ok = false;
        break;
      }
    }
    rep.tag_sequence_ok = tags_ok;
    return rep;
  }
  rep.certified = false;
  return rep;
}

}  // namespace stripcgm
