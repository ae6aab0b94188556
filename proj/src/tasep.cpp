#include "stripcgm/tasep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

#include "stripcgm/rng.hpp"

namespace stripcgm {

void Params::throw_invalid(const char* what) { throw std::invalid_argument(what); }

void check_configuration(const Configuration& c, const Params& p) {
  if (static_cast<int>(c.size()) != p.n)
    throw std::invalid_argument("configuration length does not match n");
  for (int b : c)
    if (b != 0 && b != 1) throw std::invalid_argument("configuration entries must be 0/1");
}

void apply_event(Configuration& c, const Params& p, const Event& e) {
  switch (e.kind) {
    case EventKind::Entry:
      if (p.alpha == 0.0) throw std::runtime_error("entry event with alpha = 0");
      if (c[0] != 0) throw std::runtime_error("entry into occupied site 1");
      c[0] = 1;
      return;
    case EventKind::Exit:
      if (p.beta == 0.0) throw std::runtime_error("exit event with beta = 0");
      if (c[static_cast<std::size_t>(p.n) - 1] != 1)
        throw std::runtime_error("exit from empty site n");
      c[static_cast<std::size_t>(p.n) - 1] = 0;
      return;
    case EventKind::Swap: {
      if (e.site < 1 || e.site >= p.n) throw std::runtime_error("swap site out of range");
      auto x = static_cast<std::size_t>(e.site) - 1;
      if (c[x] != 1 || c[x + 1] != 0)
        throw std::runtime_error("swap violates the exclusion rule");
      c[x] = 0;
      c[x + 1] = 1;
      return;
    }
  }
}

Configuration replay(const Trajectory& t) {
  check_configuration(t.initial, t.params);
  Configuration c = t.initial;
  double last = -1.0;
  for (const Event& e : t.events) {
    if (!(e.time > last)) throw std::runtime_error("event times not strictly increasing");
    if (e.time > t.horizon) throw std::runtime_error("event beyond horizon");
    last = e.time;
    apply_event(c, t.params, e);
  }
  return c;
}

Configuration config_at(const Trajectory& t, double time) {
  if (time < 0 || time > t.horizon) throw std::invalid_argument("config_at: time outside [0, horizon]");
  Configuration c = t.initial;
  for (const Event& e : t.events) {
    if (e.time > time) break;
    apply_event(c, t.params, e);
  }
  return c;
}

std::vector<std::pair<Configuration, double>> enumerate_transitions(
    const Configuration& config, const Params& params) {
  check_configuration(config, params);
  std::vector<std::pair<Configuration, double>> out;
  for (int x = 1; x < params.n; ++x) {
    auto i = static_cast<std::size_t>(x) - 1;
    if (config[i] == 1 && config[i + 1] == 0) {
      Configuration c = config;
      c[i] = 0;
      c[i + 1] = 1;
      out.emplace_back(std::move(c), 1.0);
    }
  }
  if (params.alpha > 0 && config[0] == 0) {
    Configuration c = config;
    c[0] = 1;
    out.emplace_back(std::move(c), params.alpha);
  }
  if (params.beta > 0 && config[static_cast<std::size_t>(params.n) - 1] == 1) {
    Configuration c = config;
    c[static_cast<std::size_t>(params.n) - 1] = 0;
    out.emplace_back(std::move(c), params.beta);
  }
  return out;
}

namespace {

// Lazily generated Poisson clock: arrival i at the partial sum of
// rng::clock_gap(seed, tag, 0..i).
struct ClockStream {
  std::uint64_t tag = 0;
  double rate = 0.0;
  std::uint64_t i = 0;
  double next = 0.0;

  void start(std::uint64_t seed) { next = rng::clock_gap(seed, tag, 0, rate); }
  void advance(std::uint64_t seed) { next += rng::clock_gap(seed, tag, ++i, rate); }
};

// What a ring of each stream does to the coupled pair.
enum class RingKind { Bulk, EntryBoth, EntryEtaOnly, ExitBoth, ExitZetaOnly };

struct Engine {
  std::uint64_t seed;
  std::vector<ClockStream> streams;
  std::vector<RingKind> kinds;
  std::vector<int> sites;  // bulk site, else 0
  // min-heap of (next ring time, stream index); index breaks float ties
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

  void add(std::uint64_t tag, double rate, RingKind k, int site) {
    if (rate <= 0) return;
    ClockStream s{tag, rate, 0, 0.0};
    s.start(seed);
    streams.push_back(s);
    kinds.push_back(k);
    sites.push_back(site);
    heap.emplace(s.next, streams.size() - 1);
  }

  // Pops the next ring; returns false once `t_end` is passed.
  bool next_ring(double t_end, double* t, std::size_t* idx) {
    if (heap.empty()) return false;
    auto [time, k] = heap.top();
    if (time > t_end) return false;
    heap.pop();
    streams[k].advance(seed);
    heap.emplace(streams[k].next, k);
    *t = time;
    *idx = k;
    return true;
  }
};

void ring_one(Configuration& c, const Params& p, RingKind k, int site, double t,
              bool is_eta, std::vector<Event>* out) {
  switch (k) {
    case RingKind::Bulk: {
      auto i = static_cast<std::size_t>(site) - 1;
      if (c[i] == 1 && c[i + 1] == 0) {
        Event e{t, EventKind::Swap, site};
        apply_event(c, p, e);
        out->push_back(e);
      }
      return;
    }
    case RingKind::EntryBoth:
    case RingKind::EntryEtaOnly:
      if ((k == RingKind::EntryBoth || is_eta) && c[0] == 0) {
        Event e{t, EventKind::Entry, 1};
        apply_event(c, p, e);
        out->push_back(e);
      }
      return;
    case RingKind::ExitBoth:
    case RingKind::ExitZetaOnly:
      if ((k == RingKind::ExitBoth || !is_eta) && c[static_cast<std::size_t>(p.n) - 1] == 1) {
        Event e{t, EventKind::Exit, p.n};
        apply_event(c, p, e);
        out->push_back(e);
      }
      return;
  }
}

}  // namespace

Trajectory simulate(const Configuration& config0, const Params& params,
                    double t_end, std::uint64_t seed) {
  if (t_end < 0) throw std::invalid_argument("simulate: t_end must be >= 0");
  check_configuration(config0, params);

  Engine eng{seed, {}, {}, {}, {}};
  for (int x = 1; x < params.n; ++x)
    eng.add(rng::mix(rng::kTagBulkClock, static_cast<std::uint64_t>(x)), 1.0,
            RingKind::Bulk, x);
  eng.add(rng::kTagEntryClock, params.alpha, RingKind::EntryBoth, 0);
  eng.add(rng::kTagExitClock, params.beta, RingKind::ExitBoth, 0);

  Trajectory traj{params, seed, t_end, config0, {}};
  Configuration c = config0;
  double t = 0.0;
  std::size_t k = 0;
  while (eng.next_ring(t_end, &t, &k))
    ring_one(c, params, eng.kinds[k], eng.sites[k], t, true, &traj.events);
  return traj;
}

std::pair<Trajectory, Trajectory> canonical_couple(
    const Configuration& eta0, const Configuration& zeta0, const Params& p_eta,
    const Params& p_zeta, double t_end, std::uint64_t seed) {
  if (p_eta.n != p_zeta.n) throw std::invalid_argument("canonical_couple: n mismatch");
  if (p_eta.alpha < p_zeta.alpha || p_eta.beta > p_zeta.beta)
    throw std::invalid_argument(
        "canonical_couple: requires alpha >= alpha' and beta <= beta'");
  if (t_end < 0) throw std::invalid_argument("canonical_couple: t_end must be >= 0");
  check_configuration(eta0, p_eta);
  check_configuration(zeta0, p_zeta);

  Engine eng{seed, {}, {}, {}, {}};
  for (int x = 1; x < p_eta.n; ++x)
    eng.add(rng::mix(rng::kTagBulkClock, static_cast<std::uint64_t>(x)), 1.0,
            RingKind::Bulk, x);
  eng.add(rng::kTagEntryClock, p_zeta.alpha, RingKind::EntryBoth, 0);
  eng.add(rng::kTagExitClock, p_eta.beta, RingKind::ExitBoth, 0);
  eng.add(rng::kTagEntryExtra, p_eta.alpha - p_zeta.alpha, RingKind::EntryEtaOnly, 0);
  eng.add(rng::kTagExitExtra, p_zeta.beta - p_eta.beta, RingKind::ExitZetaOnly, 0);

  Trajectory te{p_eta, seed, t_end, eta0, {}};
  Trajectory tz{p_zeta, seed, t_end, zeta0, {}};
  Configuration ce = eta0, cz = zeta0;
  double t = 0.0;
  std::size_t k = 0;
  while (eng.next_ring(t_end, &t, &k)) {
    ring_one(ce, p_eta, eng.kinds[k], eng.sites[k], t, true, &te.events);
    ring_one(cz, p_zeta, eng.kinds[k], eng.sites[k], t, false, &tz.events);
  }
  return {std::move(te), std::move(tz)};
}

const std::vector<int>& DisagreementPath::at(double t) const {
  if (t < 0 || t > horizon) throw std::invalid_argument("DisagreementPath::at: time outside");
  std::size_t lo = 0;
  for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) lo = i;
  return states[lo];
}

DisagreementPath disagreement(const Trajectory& eta, const Trajectory& zeta) {
  if (eta.horizon != zeta.horizon)
    throw std::invalid_argument("disagreement: trajectories have different horizons");
  if (eta.params.n != zeta.params.n)
    throw std::invalid_argument("disagreement: segment size mismatch");

  const auto xi_of = [](const Configuration& e, const Configuration& z) {
    std::vector<int> xi(e.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      xi[i] = (e[i] == 1 && z[i] == 1) ? 1 : (e[i] != z[i] ? 2 : 0);
    return xi;
  };

  DisagreementPath path;
  path.horizon = eta.horizon;
  Configuration ce = eta.initial, cz = zeta.initial;
  path.times.push_back(0.0);
  path.states.push_back(xi_of(ce, cz));

  std::size_t ie = 0, iz = 0;
  while (ie < eta.events.size() || iz < zeta.events.size()) {
    const double te = ie < eta.events.size() ? eta.events[ie].time
                                             : std::numeric_limits<double>::infinity();
    const double tz = iz < zeta.events.size() ? zeta.events[iz].time
                                              : std::numeric_limits<double>::infinity();
    const double t = std::min(te, tz);
    // Shared clocks yield exactly equal times; apply everything at t at once.
    while (ie < eta.events.size() && eta.events[ie].time == t)
      apply_event(ce, eta.params, eta.events[ie++]);
    while (iz < zeta.events.size() && zeta.events[iz].time == t)
      apply_event(cz, zeta.params, zeta.events[iz++]);
    path.times.push_back(t);
    path.states.push_back(xi_of(ce, cz));
  }
  return path;
}

std::optional<double> second_class_exit_time(const DisagreementPath& xi) {
  for (std::size_t i = 0; i < xi.times.size(); ++i) {
    bool has2 = false;
    for (int v : xi.states[i])
      if (v == 2) { has2 = true; break; }
    if (!has2) return xi.times[i];
  }
  return std::nullopt;
}

std::optional<double> coupled_exit_time(const Configuration& eta0,
                                        const Configuration& zeta0,
                                        const Params& p, double t_end,
                                        std::uint64_t seed) {
  check_configuration(eta0, p);
  check_configuration(zeta0, p);
  Engine eng{seed, {}, {}, {}, {}};
  for (int x = 1; x < p.n; ++x)
    eng.add(rng::mix(rng::kTagBulkClock, static_cast<std::uint64_t>(x)), 1.0,
            RingKind::Bulk, x);
  eng.add(rng::kTagEntryClock, p.alpha, RingKind::EntryBoth, 0);
  eng.add(rng::kTagExitClock, p.beta, RingKind::ExitBoth, 0);

  Configuration ce = eta0, cz = zeta0;
  int count2 = 0;
  for (std::size_t i = 0; i < ce.size(); ++i) count2 += ce[i] != cz[i];
  if (count2 == 0) return 0.0;

  std::vector<Event> scratch;
  double t = 0.0;
  std::size_t k = 0;
  while (eng.next_ring(t_end, &t, &k)) {
    // A ring touches at most two sites; track the disagreement count there.
    std::size_t i0 = 0, i1 = 0;
    switch (eng.kinds[k]) {
      case RingKind::Bulk:
        i0 = static_cast<std::size_t>(eng.sites[k]) - 1;
        i1 = i0 + 1;
        break;
      case RingKind::EntryBoth:
      case RingKind::EntryEtaOnly:
        i0 = i1 = 0;
        break;
      default:
        i0 = i1 = ce.size() - 1;
    }
    int before = (ce[i0] != cz[i0]) + (i1 != i0 ? ce[i1] != cz[i1] : 0);
    scratch.clear();
    ring_one(ce, p, eng.kinds[k], eng.sites[k], t, true, &scratch);
    ring_one(cz, p, eng.kinds[k], eng.sites[k], t, false, &scratch);
    if (scratch.empty()) continue;
    int after = (ce[i0] != cz[i0]) + (i1 != i0 ? ce[i1] != cz[i1] : 0);
    count2 += after - before;
    if (count2 == 0) return t;
  }
  return std::nullopt;
}

const ParticleTrack* LabelHistory::find(std::int64_t label) const {
  for (const auto& t : tracks)
    if (t.label == label) return &t;
  return nullptr;
}

std::optional<double> LabelHistory::passage_time(std::int64_t label,
                                                 std::int64_t n) const {
  const ParticleTrack* t = find(label);
  if (t == nullptr) return std::nullopt;
  if (n < t->start_pos) return 0.0;  // trivially past from time 0
  const std::size_t j = static_cast<std::size_t>(n - t->start_pos);
  if (j >= t->pass_times.size()) return std::nullopt;
  return t->pass_times[j];
}

namespace {

struct LabelState {
  std::vector<std::int64_t> label_at;  // per site, 0-based; sentinel when empty
  static constexpr std::int64_t kEmpty = std::numeric_limits<std::int64_t>::min();
};

}  // namespace

LabelHistory label_particles(const Trajectory& traj) {
  const int n = traj.params.n;
  std::vector<std::int64_t> at(static_cast<std::size_t>(n), LabelState::kEmpty);

  LabelHistory h;
  // Initial particles: 0, -1, ... left to right, so that positions stay
  // strictly decreasing in the label once particles start entering at site 1.
  std::int64_t next_initial = 0;
  for (int i = 0; i < n; ++i) {
    if (traj.initial[static_cast<std::size_t>(i)] == 1) {
      at[static_cast<std::size_t>(i)] = next_initial;
      h.tracks.push_back({next_initial, i + 1, {}});
      --next_initial;
    }
  }
  std::reverse(h.tracks.begin(), h.tracks.end());  // ascending label

  std::int64_t next_entry = 1;
  auto track_of = [&](std::int64_t label) -> ParticleTrack& {
    for (auto& t : h.tracks)
      if (t.label == label) return t;
    throw std::logic_error("label_particles: unknown label");
  };

  Configuration c = traj.initial;
  for (const Event& e : traj.events) {
    apply_event(c, traj.params, e);
    switch (e.kind) {
      case EventKind::Entry: {
        at[0] = next_entry;
        h.tracks.push_back({next_entry, 0, {e.time}});
        ++next_entry;
        break;
      }
      case EventKind::Exit: {
        const std::int64_t u = at[static_cast<std::size_t>(n) - 1];
        track_of(u).pass_times.push_back(e.time);
        at[static_cast<std::size_t>(n) - 1] = LabelState::kEmpty;
        break;
      }
      case EventKind::Swap: {
        auto i = static_cast<std::size_t>(e.site) - 1;
        const std::int64_t u = at[i];
        track_of(u).pass_times.push_back(e.time);
        at[i + 1] = u;
        at[i] = LabelState::kEmpty;
        break;
      }
    }
  }
  std::sort(h.tracks.begin(), h.tracks.end(),
            [](const ParticleTrack& a, const ParticleTrack& b) { return a.label < b.label; });
  return h;
}

std::vector<std::pair<std::int64_t, int>> labeled_positions_at(const Trajectory& traj,
                                                               double time) {
  LabelHistory h = label_particles(traj);
  std::vector<std::pair<std::int64_t, int>> out;
  for (const auto& t : h.tracks) {
    // Entered after `time`?
    if (t.start_pos == 0 && (t.pass_times.empty() || t.pass_times[0] > time)) continue;
    std::int64_t pos = t.start_pos;
    for (std::size_t j = (t.start_pos == 0 ? 1 : 0); j < t.pass_times.size(); ++j) {
      if (t.pass_times[j] <= time) pos = t.start_pos + static_cast<std::int64_t>(j) + 1;
    }
    if (t.start_pos == 0) pos = std::max<std::int64_t>(pos, 1);
    if (pos <= traj.params.n) out.emplace_back(t.label, static_cast<int>(pos));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t current(const Trajectory& t, double time) {
  if (time > t.horizon) throw std::invalid_argument("current: time beyond horizon");
  std::int64_t j = 0;
  for (const Event& e : t.events)
    if (e.kind == EventKind::Entry && e.time <= time) ++j;
  return j;
}

void write_trajectory(std::ostream& os, const Trajectory& t) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "# strip-cgm trajectory v1 n=%d alpha=%.17g beta=%.17g seed=%llu horizon=%.17g\n",
                t.params.n, t.params.alpha, t.params.beta,
                static_cast<unsigned long long>(t.seed), t.horizon);
  os << buf << "initial ";
  for (int b : t.initial) os << b;
  os << "\n";
  for (const Event& e : t.events) {
    const char* kind = e.kind == EventKind::Entry ? "entry"
                       : e.kind == EventKind::Exit ? "exit"
                                                   : "swap";
    std::snprintf(buf, sizeof buf, "%.17g %s %d\n", e.time, kind, e.site);
    os << buf;
  }
}

Trajectory read_trajectory(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_trajectory: empty input");
  Trajectory t;
  {
    int n = 0;
    double alpha = 0, beta = 0, horizon = 0;
    unsigned long long seed = 0;
    if (std::sscanf(line.c_str(),
                    "# strip-cgm trajectory v1 n=%d alpha=%lg beta=%lg seed=%llu horizon=%lg",
                    &n, &alpha, &beta, &seed, &horizon) != 5)
      throw std::runtime_error("read_trajectory: bad header");
    t.params = Params(n, alpha, beta);
    t.seed = seed;
    t.horizon = horizon;
  }
  if (!std::getline(is, line) || line.rfind("initial ", 0) != 0)
    throw std::runtime_error("read_trajectory: missing initial state");
  for (std::size_t i = 8; i < line.size(); ++i)
    t.initial.push_back(line[i] == '1' ? 1 : 0);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double time = 0;
    std::string kind;
    int site = 0;
    if (!(row >> time >> kind >> site)) throw std::runtime_error("read_trajectory: bad row");
    EventKind k = kind == "entry" ? EventKind::Entry
                  : kind == "exit" ? EventKind::Exit
                                   : EventKind::Swap;
    t.events.push_back({time, k, site});
  }
  return t;
}

}  // namespace stripcgm
