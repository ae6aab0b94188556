#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "stripcgm/rng.hpp"
#include "stripcgm/tasep.hpp"

using namespace stripcgm;

namespace {

Configuration bits(std::initializer_list<int> v) { return Configuration(v); }

// Componentwise dominance of eta over zeta at every event time of the merged
// replay.
bool dominates_throughout(const Trajectory& eta, const Trajectory& zeta) {
  Configuration ce = eta.initial, cz = zeta.initial;
  const auto ok = [&] {
    for (std::size_t i = 0; i < ce.size(); ++i)
      if (ce[i] < cz[i]) return false;
    return true;
  };
  if (!ok()) return false;
  std::size_t ie = 0, iz = 0;
  while (ie < eta.events.size() || iz < zeta.events.size()) {
    const double te = ie < eta.events.size() ? eta.events[ie].time : 1e300;
    const double tz = iz < zeta.events.size() ? zeta.events[iz].time : 1e300;
    const double t = std::min(te, tz);
    while (ie < eta.events.size() && eta.events[ie].time == t)
      apply_event(ce, eta.params, eta.events[ie++]);
    while (iz < zeta.events.size() && zeta.events[iz].time == t)
      apply_event(cz, zeta.params, zeta.events[iz++]);
    if (!ok()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("enumerate_transitions matches the generator") {
  // n=1, eta=(0): only the entry move
  auto t1 = enumerate_transitions(bits({0}), Params(1, 0.5, 0.5));
  REQUIRE(t1.size() == 1);
  CHECK(t1[0].first == bits({1}));
  CHECK(t1[0].second == 0.5);

  // n=3, eta=(1,0,1): bulk swap at 1 (rate 1) and exit at 3 (rate 1/2)
  auto t2 = enumerate_transitions(bits({1, 0, 1}), Params(3, 0.5, 0.5));
  REQUIRE(t2.size() == 2);
  CHECK(t2[0].first == bits({0, 1, 1}));
  CHECK(t2[0].second == 1.0);
  CHECK(t2[1].first == bits({1, 0, 0}));
  CHECK(t2[1].second == 0.5);

  // closed boundaries: the single bulk move
  auto t3 = enumerate_transitions(bits({1, 0}), Params(2, 0.0, 0.0));
  REQUIRE(t3.size() == 1);
  CHECK(t3[0].first == bits({0, 1}));
  CHECK(t3[0].second == 1.0);

  CHECK_THROWS_AS(enumerate_transitions(bits({0, 1}), Params(3, 0.5, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("simulate degenerate cases") {
  // absorbing empty state
  const Trajectory t = simulate(bits({0, 0, 0}), Params(3, 0.0, 0.5), 50.0, 7);
  CHECK(t.events.empty());

  // single clock: exactly one entry
  const Trajectory u = simulate(bits({0}), Params(1, 1.0, 0.0), 1e9, 11);
  REQUIRE(u.events.size() == 1);
  CHECK(u.events[0].kind == EventKind::Entry);
  CHECK(u.events[0].time > 0);
}

TEST_CASE("simulate is deterministic and serializes round-trip") {
  const Params p(4, 0.5, 0.5);
  const Trajectory a = simulate(bits({0, 1, 0, 1}), p, 10.0, 42);
  const Trajectory b = simulate(bits({0, 1, 0, 1}), p, 10.0, 42);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time == b.events[i].time);
    CHECK(a.events[i].kind == b.events[i].kind);
    CHECK(a.events[i].site == b.events[i].site);
  }

  std::ostringstream os;
  write_trajectory(os, a);
  std::istringstream is(os.str());
  const Trajectory c = read_trajectory(is);
  REQUIRE(c.events.size() == a.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i)
    CHECK(c.events[i].time == a.events[i].time);
  CHECK(replay(c) == replay(a));
}

TEST_CASE("replay enforces the exclusion rule") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Params p(5, 0.7, 0.6);
    Configuration c0(5);
    for (int i = 0; i < 5; ++i) c0[static_cast<std::size_t>(i)] =
        static_cast<int>(rng::mix(seed, static_cast<std::uint64_t>(i)) & 1);
    const Trajectory t = simulate(c0, p, 20.0, seed);
    CHECK_NOTHROW(replay(t));
  }
  // a hand-broken trajectory must throw
  Trajectory bad{Params(2, 0.5, 0.5), 0, 1.0, bits({1, 1}), {{0.5, EventKind::Entry, 1}}};
  CHECK_THROWS(replay(bad));
}

TEST_CASE("first-transition frequencies match the generator for n <= 3") {
  // From a fixed state, the first event picks each enabled transition with
  // probability rate/total.
  const Params p(3, 0.6, 0.9);
  const Configuration c0 = bits({1, 0, 1});
  const auto trans = enumerate_transitions(c0, p);
  double total = 0;
  for (const auto& [to, rate] : trans) total += rate;

  const int trials = 100000;
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < trials; ++i) {
    // take a horizon long enough that the first event almost surely fires
    const Trajectory t = simulate(c0, p, 8.0, 1000 + static_cast<std::uint64_t>(i));
    REQUIRE(!t.events.empty());
    Configuration c = c0;
    apply_event(c, p, t.events[0]);
    std::uint64_t key = 0;
    for (int b : c) key = key * 2 + static_cast<std::uint64_t>(b);
    counts[key]++;
  }
  for (const auto& [to, rate] : trans) {
    std::uint64_t key = 0;
    for (int b : to) key = key * 2 + static_cast<std::uint64_t>(b);
    const double want = rate / total;
    const double got = static_cast<double>(counts[key]) / trials;
    const double se = std::sqrt(want * (1 - want) / trials);
    CHECK(std::abs(got - want) < 3 * se + 1e-12);
  }
}

TEST_CASE("canonical coupling degenerates to a single chain") {
  const Params p(4, 0.5, 0.5);
  const Configuration c0 = bits({1, 0, 1, 0});
  const auto [e, z] = canonical_couple(c0, c0, p, p, 15.0, 99);
  REQUIRE(e.events.size() == z.events.size());
  for (std::size_t i = 0; i < e.events.size(); ++i)
    CHECK(e.events[i].time == z.events[i].time);
  // and both equal the plain simulation with the same seed
  const Trajectory s = simulate(c0, p, 15.0, 99);
  REQUIRE(s.events.size() == e.events.size());
  for (std::size_t i = 0; i < s.events.size(); ++i)
    CHECK(s.events[i].time == e.events[i].time);
}

TEST_CASE("canonical coupling preserves dominance") {
  const Params p(6, 0.5, 0.5);
  const Configuration ones(6, 1), zeros(6, 0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto [e, z] = canonical_couple(ones, zeros, p, p, 10.0, seed);
    CHECK(dominates_throughout(e, z));
  }
  // ordered parameters, n=2, 1000 seeded runs
  const Params pe(2, 1.0, 0.5), pz(2, 0.5, 1.0);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto [e, z] = canonical_couple(bits({1, 1}), bits({0, 0}), pe, pz, 8.0, seed);
    CHECK(dominates_throughout(e, z));
  }
  CHECK_THROWS_AS(canonical_couple(zeros, zeros, Params(6, 0.4, 0.5),
                                   Params(6, 0.5, 0.5), 1.0, 0),
                  std::invalid_argument);
}

TEST_CASE("disagreement process basics") {
  const Params p(5, 0.5, 0.5);
  SUBCASE("equal starts never disagree") {
    const Configuration c0 = bits({1, 0, 0, 1, 0});
    const auto [e, z] = canonical_couple(c0, c0, p, p, 12.0, 3);
    const DisagreementPath xi = disagreement(e, z);
    for (const auto& s : xi.states)
      for (int v : s) CHECK(v != 2);
    CHECK(second_class_exit_time(xi) == 0.0);
  }
  SUBCASE("all-one vs all-zero starts all-two") {
    const auto [e, z] = canonical_couple(Configuration(5, 1), Configuration(5, 0), p, p, 1.0, 4);
    const DisagreementPath xi = disagreement(e, z);
    for (int v : xi.states[0]) CHECK(v == 2);
  }
  SUBCASE("a single discrepancy never multiplies") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      Configuration a = bits({1, 0, 1, 0, 0});
      Configuration b = a;
      b[2] = 0;  // one extra particle in a
      const auto [e, z] = canonical_couple(a, b, p, p, 10.0, seed);
      const DisagreementPath xi = disagreement(e, z);
      int prev = 1;
      for (const auto& s : xi.states) {
        int twos = 0;
        for (int v : s) twos += v == 2;
        CHECK(twos <= prev);
        prev = twos;
      }
    }
  }
  SUBCASE("closed boundaries trap the second class particle") {
    const Params closed(4, 0.0, 0.0);
    const auto [e, z] =
        canonical_couple(bits({0, 1, 0, 0}), bits({0, 0, 0, 0}), closed, closed, 200.0, 5);
    const DisagreementPath xi = disagreement(e, z);
    CHECK(!second_class_exit_time(xi).has_value());
  }
}

TEST_CASE("coupled_exit_time agrees with the trajectory route") {
  const Params p(4, 0.5, 0.5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto [e, z] =
        canonical_couple(Configuration(4, 1), Configuration(4, 0), p, p, 400.0, seed);
    const auto a = second_class_exit_time(disagreement(e, z));
    const auto b = coupled_exit_time(Configuration(4, 1), Configuration(4, 0), p, 400.0, seed);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*a == *b);
  }
}

TEST_CASE("empirical exit-time CDF is non-decreasing and eventually full") {
  const Params p(4, 0.5, 0.5);
  std::vector<double> taus;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto tau =
        coupled_exit_time(Configuration(4, 1), Configuration(4, 0), p, 500.0, seed);
    REQUIRE(tau.has_value());
    taus.push_back(*tau);
  }
  std::sort(taus.begin(), taus.end());
  for (double s = 0; s <= 50; s += 5) {
    const auto below = [&](double q) {
      return std::count_if(taus.begin(), taus.end(), [&](double t) { return t <= q; });
    };
    CHECK(below(s) <= below(s + 5));
  }
}

TEST_CASE("labels: entry order and initial right-to-left reading") {
  const Params p(5, 0.9, 0.9);
  SUBCASE("label 1 is the first entry from the empty state") {
    const Trajectory t = simulate(Configuration(5, 0), p, 30.0, 17);
    const LabelHistory h = label_particles(t);
    const ParticleTrack* one = h.find(1);
    REQUIRE(one != nullptr);
    double first_entry = -1;
    for (const Event& e : t.events)
      if (e.kind == EventKind::Entry) { first_entry = e.time; break; }
    REQUIRE(!one->pass_times.empty());
    CHECK(one->pass_times[0] == first_entry);
  }
  SUBCASE("initial particles carry 0,-1,... with positions decreasing in label") {
    const Trajectory t = simulate(bits({0, 1, 1, 0, 1}), p, 0.0, 5);
    const auto pos = labeled_positions_at(t, 0.0);
    // particles at 2,3,5: labels 0 (leftmost), -1, -2
    REQUIRE(pos.size() == 3);
    CHECK(pos[0] == std::pair<std::int64_t, int>{-2, 5});
    CHECK(pos[1] == std::pair<std::int64_t, int>{-1, 3});
    CHECK(pos[2] == std::pair<std::int64_t, int>{0, 2});
  }
  SUBCASE("positions strictly decrease in the label at all event times") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Trajectory t = simulate(bits({0, 1, 0, 1, 1}), p, 15.0, seed);
      for (const Event& e : t.events) {
        const auto pos = labeled_positions_at(t, e.time);
        for (std::size_t i = 1; i < pos.size(); ++i)
          CHECK(pos[i - 1].second > pos[i].second);  // ascending label order
      }
    }
  }
}

TEST_CASE("current counts entries") {
  const Params p(3, 0.0, 0.5);
  const Trajectory none = simulate(bits({1, 0, 1}), p, 25.0, 1);
  CHECK(current(none, 25.0) == 0);

  Trajectory manual{Params(1, 1.0, 1.0), 0, 6.0, bits({0}), {}};
  manual.events = {{1.0, EventKind::Entry, 1},
                   {1.5, EventKind::Exit, 1},
                   {2.0, EventKind::Entry, 1},
                   {4.0, EventKind::Exit, 1},
                   {5.0, EventKind::Entry, 1}};
  CHECK(current(manual, 3.0) == 2);
  CHECK_THROWS_AS(current(manual, 7.0), std::invalid_argument);
}
