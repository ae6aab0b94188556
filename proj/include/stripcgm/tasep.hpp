#ifndef STRIPCGM_TASEP_HPP
#define STRIPCGM_TASEP_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace stripcgm {

struct Params {
  int n = 1;
  double alpha = 0.0;  // entry rate at site 1
  double beta = 0.0;   // exit rate at site n

  Params() = default;
  Params(int n_, double a, double b) : n(n_), alpha(a), beta(b) {
    if (n < 1) throw_invalid("n must be >= 1");
    if (alpha < 0 || beta < 0) throw_invalid("rates must be >= 0");
  }

 private:
  [[noreturn]] static void throw_invalid(const char* what);
};

using Configuration = std::vector<int>;  // entries in {0,1}, length n

void check_configuration(const Configuration& c, const Params& p);

enum class EventKind { Entry, Exit, Swap };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Swap;
  int site = 0;  // swap: particle moves site -> site+1; entry: 1; exit: n
};

struct Trajectory {
  Params params;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  Configuration initial;
  std::vector<Event> events;  // strictly increasing times
};

// Applies one event in place; throws if it violates the dynamics.
void apply_event(Configuration& c, const Params& p, const Event& e);

// Replays the whole trajectory, validating every event; returns the final
// configuration.
Configuration replay(const Trajectory& t);

Configuration config_at(const Trajectory& t, double time);

// Generator transitions from `config`: bulk swaps left to right, then entry,
// then exit. Zero-rate moves are omitted.
std::vector<std::pair<Configuration, double>> enumerate_transitions(
    const Configuration& config, const Params& params);

// Event-driven sample path on [0, t_end], deterministic in (inputs, seed).
Trajectory simulate(const Configuration& config0, const Params& params,
                    double t_end, std::uint64_t seed);

// Canonical coupling of two chains with alpha >= alpha', beta <= beta':
// shared bulk clocks, shared rate-min boundary clocks, independent extra
// boundary clocks. Marginals are TASEP(p_eta) and TASEP(p_zeta).
std::pair<Trajectory, Trajectory> canonical_couple(
    const Configuration& eta0, const Configuration& zeta0, const Params& p_eta,
    const Params& p_zeta, double t_end, std::uint64_t seed);

// Disagreement process xi = 1{eta=zeta=1} + 2*1{eta!=zeta} sampled at every
// event time of the coupled pair.
struct DisagreementPath {
  double horizon = 0.0;
  std::vector<double> times;             // times[0] == 0
  std::vector<std::vector<int>> states;  // states[i] = xi at times[i]

  const std::vector<int>& at(double t) const;
};

DisagreementPath disagreement(const Trajectory& eta, const Trajectory& zeta);

// First time the path holds no second class particle; nullopt if none before
// the horizon.
std::optional<double> second_class_exit_time(const DisagreementPath& xi);

// Online equivalent of second_class_exit_time(disagreement(canonical_couple(
// eta0, zeta0, p, p, t_end, seed))) without materializing trajectories.
std::optional<double> coupled_exit_time(const Configuration& eta0,
                                        const Configuration& zeta0,
                                        const Params& p, double t_end,
                                        std::uint64_t seed);

// Particle labels: entering particles get 1,2,3,... in entry order; particles
// present at time 0 get 0,-1,-2,... left to right, so positions are strictly
// decreasing in the label at all times.
struct ParticleTrack {
  std::int64_t label = 0;
  std::int64_t start_pos = 0;            // 0 for entering particles
  std::vector<double> pass_times;        // pass_times[j]: first time pos > start_pos + j
};

struct LabelHistory {
  std::vector<ParticleTrack> tracks;  // ascending label order

  const ParticleTrack* find(std::int64_t label) const;
  // First time the particle with `label` sits at a position > n; nullopt if
  // that never happens before the horizon (or the label never appears).
  std::optional<double> passage_time(std::int64_t label, std::int64_t n) const;
};

LabelHistory label_particles(const Trajectory& t);

// Positions by label at time `time` (in-segment particles only).
std::vector<std::pair<std::int64_t, int>> labeled_positions_at(const Trajectory& t,
                                                               double time);

// Number of entry events in [0, t].
std::int64_t current(const Trajectory& t, double time);

// Line-oriented text round trip: header then one "time kind site" row per event.
void write_trajectory(std::ostream& os, const Trajectory& t);
Trajectory read_trajectory(std::istream& is);

}  // namespace stripcgm

#endif
