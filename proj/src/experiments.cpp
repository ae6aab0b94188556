#include "stripcgm/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <thread>

#include "stripcgm/competition.hpp"
#include "stripcgm/csvio.hpp"
#include "stripcgm/geodesics.hpp"
#include "stripcgm/lattice.hpp"
#include "stripcgm/lpp_tasep.hpp"
#include "stripcgm/mixing.hpp"
#include "stripcgm/passage.hpp"
#include "stripcgm/rng.hpp"
#include "stripcgm/stationary.hpp"
#include "stripcgm/stats.hpp"

namespace stripcgm {

void parallel_replicas(std::int64_t count, int workers,
                       const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  workers = std::max(1, workers);
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          failed.store(true);
          throw;  // a worker failure is a bug; fail loudly
        }
      }
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

using Row = std::vector<std::string>;

struct Ctx {
  ExperimentConfig cfg;
  std::uint64_t seed;
  std::int64_t replicas;
  int workers;
};

std::string nstr(double v) { return CsvWriter::num(v); }
std::string nstr(std::int64_t v) { return CsvWriter::num(v); }

CsvWriter run_mixing_exact(const Ctx& c) {
  CsvWriter w({"n", "alpha", "beta", "eps", "method", "t", "lo", "hi", "seed"});
  const double alpha = c.cfg.get_num_or("alpha", 0.5);
  const double beta = c.cfg.get_num_or("beta", 0.5);
  const double eps = c.cfg.get_num_or("eps", 0.25);
  const double tol = c.cfg.get_num_or("tol", 1e-3);
  for (std::int64_t n : c.cfg.get_int_list("n_list")) {
    if (n > kGeneratorCap) throw CapExceeded("mixing-exact: n exceeds the cap");
    const MixingReport r = exact_mixing_time(Params(static_cast<int>(n), alpha, beta), eps, tol);
    w.row({nstr(n), nstr(alpha), nstr(beta), nstr(eps), r.method, nstr(r.t),
           nstr(r.lo), nstr(r.hi), nstr(static_cast<std::int64_t>(0))});
  }
  return w;
}

CsvWriter run_mixing_coupling(const Ctx& c) {
  CsvWriter w({"n", "alpha", "beta", "eps", "method", "t", "lo", "hi", "seed"});
  const double alpha = c.cfg.get_num_or("alpha", 0.5);
  const double beta = c.cfg.get_num_or("beta", 0.5);
  const double eps = c.cfg.get_num_or("eps", 0.25);
  const auto ns = c.cfg.get_int_list("n_list");
  std::vector<MixingReport> out(ns.size());
  parallel_replicas(static_cast<std::int64_t>(ns.size()), c.workers, [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = coupling_mixing_upper(
        Params(static_cast<int>(ns[static_cast<std::size_t>(i)]), alpha, beta), eps,
        static_cast<int>(c.replicas), rng::mix(c.seed, static_cast<std::uint64_t>(i)));
  });
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const MixingReport& r = out[i];
    w.row({nstr(ns[i]), nstr(alpha), nstr(beta), nstr(eps), r.method, nstr(r.t),
           nstr(r.lo), nstr(r.hi), nstr(static_cast<std::int64_t>(r.seed))});
  }
  return w;
}

CsvWriter run_burke(const Ctx& c) {
  CsvWriter w({"batch", "test", "statistic", "p_value", "samples", "seed"});
  const int n = static_cast<int>(c.cfg.get_int_or("n", 16));
  const int height = static_cast<int>(c.cfg.get_int_or("height", n + 1));
  const int samples = static_cast<int>(c.cfg.get_int_or("samples", 10000));
  const std::int64_t batches = c.cfg.get_int_or("batches", 100);
  std::vector<BurkeReport> out(static_cast<std::size_t>(batches));
  parallel_replicas(batches, c.workers, [&](std::int64_t b) {
    out[static_cast<std::size_t>(b)] =
        burke_test(n, height, rng::replica_seed(c.seed, static_cast<std::uint64_t>(b)), samples);
  });
  for (std::int64_t b = 0; b < batches; ++b) {
    const BurkeReport& r = out[static_cast<std::size_t>(b)];
    const std::int64_t s =
        static_cast<std::int64_t>(rng::replica_seed(c.seed, static_cast<std::uint64_t>(b)));
    const auto emit = [&](const char* name, const TestReport& t) {
      w.row({nstr(b), name, nstr(t.statistic), nstr(t.p_value), nstr(t.sample_size), nstr(s)});
    };
    emit("I_exp_half", r.ks_row);
    emit("J_exp_half", r.ks_col);
    emit("stair_exp_half", r.ks_stair);
    emit("Y_exp_one", r.ks_y);
    w.row({nstr(b), "rho_ii", nstr(r.rho_ii), "", "0", nstr(s)});
    w.row({nstr(b), "rho_ij", nstr(r.rho_ij), "", "0", nstr(s)});
    w.row({nstr(b), "rho_iy", nstr(r.rho_iy), "", "0", nstr(s)});
  }
  return w;
}

CsvWriter run_reversal(const Ctx& c) {
  CsvWriter w({"n", "M", "seed_index", "max_rel_err", "mutated_err"});
  const std::int64_t M = c.cfg.get_int_or("big_m", 64);
  const auto ns = c.cfg.get_int_list("n_list");
  struct Cell { double err, mut; };
  std::vector<Cell> out(ns.size() * static_cast<std::size_t>(c.replicas));
  parallel_replicas(static_cast<std::int64_t>(out.size()), c.workers, [&](std::int64_t i) {
    const std::size_t ni = static_cast<std::size_t>(i) / static_cast<std::size_t>(c.replicas);
    const std::int64_t r = i % c.replicas;
    const int n = static_cast<int>(ns[ni]);
    const std::uint64_t s = rng::replica_seed(rng::mix(c.seed, ns[ni]),
                                              static_cast<std::uint64_t>(r));
    out[static_cast<std::size_t>(i)] = {
        verify_reversal_identity(n, std::max<std::int64_t>(M, n), s, false),
        verify_reversal_identity(n, std::max<std::int64_t>(M, n), s, true)};
  });
  for (std::size_t ni = 0; ni < ns.size(); ++ni)
    for (std::int64_t r = 0; r < c.replicas; ++r) {
      const Cell& cell = out[ni * static_cast<std::size_t>(c.replicas) +
                             static_cast<std::size_t>(r)];
      w.row({nstr(ns[ni]), nstr(std::max<std::int64_t>(M, ns[ni])), nstr(r),
             nstr(cell.err), nstr(cell.mut)});
    }
  return w;
}

CsvWriter run_coalescence(const Ctx& c) {
  CsvWriter w({"n", "m_factor", "k", "replicas", "p_hat", "se"});
  const int n = static_cast<int>(c.cfg.get_int_or("n", 32));
  const auto ms = c.cfg.get_int_list("m_list");
  const EnvironmentSpec spec = EnvironmentSpec::strip(
      c.cfg.get_num_or("alpha", 0.5), c.cfg.get_num_or("beta", 0.5), n);
  const double n32 = std::pow(static_cast<double>(n), 1.5);

  std::vector<std::vector<char>> hits(ms.size(),
                                      std::vector<char>(static_cast<std::size_t>(c.replicas), 0));
  parallel_replicas(c.replicas, c.workers, [&](std::int64_t r) {
    const std::uint64_t s = rng::replica_seed(c.seed, static_cast<std::uint64_t>(r));
    for (std::size_t mi = 0; mi < ms.size(); ++mi) {
      const std::int64_t k =
          static_cast<std::int64_t>(static_cast<double>(ms[mi]) * n32);
      const Rectangle rect = rectangle(n, k, spec);
      const WeightField f =
          sample_weights(spec, Region::strip_band(spec, n, n + k - 1), s);
      hits[mi][static_cast<std::size_t>(r)] =
          coalescence_check(f, rect.a1, rect.a2, rect.a3, rect.a4) ? 1 : 0;
    }
  });
  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    std::int64_t cnt = 0;
    for (char h : hits[mi]) cnt += h;
    const double p = static_cast<double>(cnt) / static_cast<double>(c.replicas);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(c.replicas));
    w.row({nstr(static_cast<std::int64_t>(n)), nstr(ms[mi]),
           nstr(static_cast<std::int64_t>(static_cast<double>(ms[mi]) * n32)),
           nstr(c.replicas), nstr(p), nstr(se)});
  }
  return w;
}

CsvWriter run_crossing(const Ctx& c) {
  CsvWriter w({"n_strip", "n", "m", "replicas", "p_plus", "p_minus", "z"});
  const int ns = static_cast<int>(c.cfg.get_int_or("n_strip", 16));
  const std::int64_t n = c.cfg.get_int_or("n", ns);
  const std::int64_t m = c.cfg.get_int_or(
      "m", static_cast<std::int64_t>(8.0 * std::pow(static_cast<double>(ns), 1.5)));
  std::vector<char> plus(static_cast<std::size_t>(c.replicas)),
      minus(static_cast<std::size_t>(c.replicas));
  parallel_replicas(c.replicas, c.workers, [&](std::int64_t r) {
    const CrossingEvents ev =
        crossing_events(ns, n, m, rng::replica_seed(c.seed, static_cast<std::uint64_t>(r)));
    plus[static_cast<std::size_t>(r)] = ev.b_plus ? 1 : 0;
    minus[static_cast<std::size_t>(r)] = ev.b_minus ? 1 : 0;
  });
  double pp = 0, pm = 0;
  for (std::int64_t r = 0; r < c.replicas; ++r) {
    pp += plus[static_cast<std::size_t>(r)];
    pm += minus[static_cast<std::size_t>(r)];
  }
  pp /= static_cast<double>(c.replicas);
  pm /= static_cast<double>(c.replicas);
  const double pool = (pp + pm) / 2;
  const double se = std::sqrt(std::max(1e-300, 2 * pool * (1 - pool) / static_cast<double>(c.replicas)));
  w.row({nstr(static_cast<std::int64_t>(ns)), nstr(n), nstr(m), nstr(c.replicas),
         nstr(pp), nstr(pm), nstr((pp - pm) / se)});
  return w;
}

CsvWriter run_shape(const Ctx& c) {
  CsvWriter w({"n", "replicas", "mean", "sd"});
  const auto ns = c.cfg.get_int_list("n_list");
  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    const std::int64_t n = ns[ni];
    std::int64_t reps = c.replicas;
    if (c.cfg.has("replicas_list")) {
      const auto rl = c.cfg.get_int_list("replicas_list");
      if (rl.size() != ns.size())
        throw ConfigError("shape: replicas_list must match n_list");
      reps = rl[ni];
    }
    std::vector<double> g(static_cast<std::size_t>(reps));
    parallel_replicas(reps, c.workers, [&](std::int64_t r) {
      g[static_cast<std::size_t>(r)] = homogeneous_corner_value(
          n, rng::replica_seed(rng::mix(c.seed, static_cast<std::uint64_t>(n)),
                               static_cast<std::uint64_t>(r)));
    });
    w.row({nstr(n), nstr(reps), nstr(mean_of(g)), nstr(stddev_of(g))});
  }
  return w;
}

CsvWriter run_current(const Ctx& c) {
  CsvWriter w({"n", "t_n", "replicas", "mean", "sd", "q25", "q50", "q75"});
  const double cc = c.cfg.get_num_or("c", 1.0);
  const double alpha = c.cfg.get_num_or("alpha", 0.5);
  const double beta = c.cfg.get_num_or("beta", 0.5);
  const auto ns = c.cfg.get_int_list("n_list");
  std::vector<CurrentSummary> out(ns.size());
  parallel_replicas(static_cast<std::int64_t>(ns.size()), c.workers, [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = current_fluctuations(
        Params(static_cast<int>(ns[static_cast<std::size_t>(i)]), alpha, beta), cc,
        static_cast<int>(c.replicas),
        rng::mix(c.seed, static_cast<std::uint64_t>(i)));
  });
  for (const CurrentSummary& s : out)
    w.row({nstr(static_cast<std::int64_t>(s.n)), nstr(s.t_n), nstr(c.replicas),
           nstr(s.mean), nstr(s.sd), nstr(s.q25), nstr(s.q50), nstr(s.q75)});
  return w;
}

CsvWriter run_lower_bound(const Ctx& c) {
  CsvWriter w({"n", "t", "theta", "mu_e", "p_t", "witness", "mc_err", "replicas"});
  const double alpha = c.cfg.get_num_or("alpha", 0.5);
  const double beta = c.cfg.get_num_or("beta", 0.5);
  const double factor = c.cfg.get_num_or("t_factor", 0.05);
  for (std::int64_t n : c.cfg.get_int_list("n_list")) {
    const double t = factor * std::pow(static_cast<double>(n), 1.5);
    const double theta = c.cfg.has("theta") ? c.cfg.get_num("theta")
                                            : choose_theta(static_cast<int>(n));
    const WitnessReport r =
        lower_bound_witness(Params(static_cast<int>(n), alpha, beta), t, theta,
                            static_cast<int>(c.replicas), rng::mix(c.seed, static_cast<std::uint64_t>(n)));
    w.row({nstr(n), nstr(t), nstr(r.theta), nstr(r.mu_e), nstr(r.p_t),
           nstr(r.witness), nstr(r.mc_err), nstr(c.replicas)});
  }
  return w;
}

CsvWriter run_tag_check(const Ctx& c) {
  CsvWriter w({"seed_index", "fired", "upper", "lower", "passage_time",
               "no_second_class_at_T", "tags_ok"});
  const int n = static_cast<int>(c.cfg.get_int_or("n", 6));
  const double T = c.cfg.has("horizon_t")
                       ? c.cfg.get_num("horizon_t")
                       : c.cfg.get_num_or("t_factor", 24.0) *
                             std::pow(static_cast<double>(n), 1.5);
  std::vector<TagCheckReport> out(static_cast<std::size_t>(c.replicas));
  parallel_replicas(c.replicas, c.workers, [&](std::int64_t r) {
    out[static_cast<std::size_t>(r)] =
        triple_point_tag_check(n, T, rng::replica_seed(c.seed, static_cast<std::uint64_t>(r)));
  });
  for (std::int64_t r = 0; r < c.replicas; ++r) {
    const TagCheckReport& t = out[static_cast<std::size_t>(r)];
    w.row({nstr(r), t.fired ? "1" : "0", nstr(t.upper_touch), nstr(t.lower_touch),
           nstr(t.passage_time), t.no_second_class_at_T ? "1" : "0",
           t.tag_sequence_ok ? "1" : "0"});
  }
  return w;
}

CsvWriter run_scaling(const Ctx& c) {
  CsvWriter w({"kind", "n", "t", "slope", "stderr"});
  const double alpha = c.cfg.get_num_or("alpha", 0.5);
  const double beta = c.cfg.get_num_or("beta", 0.5);
  const double eps = c.cfg.get_num_or("eps", 0.25);
  const auto ns = c.cfg.get_int_list("n_list");
  std::vector<MixingReport> out(ns.size());
  parallel_replicas(static_cast<std::int64_t>(ns.size()), c.workers, [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = coupling_mixing_upper(
        Params(static_cast<int>(ns[static_cast<std::size_t>(i)]), alpha, beta), eps,
        static_cast<int>(c.replicas), rng::mix(c.seed, static_cast<std::uint64_t>(i)));
  });
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    pts.emplace_back(static_cast<double>(ns[i]), out[i].t);
    w.row({"point", nstr(ns[i]), nstr(out[i].t), "", ""});
  }
  const LinearFit fit = scaling_fit(pts);
  w.row({"fit", "0", "0", nstr(fit.slope), nstr(fit.stderr_slope)});
  return w;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "mixing-exact", "mixing-coupling", "burke",       "reversal",
      "coalescence",  "crossing",        "shape",       "current",
      "lower-bound",  "tag-check",       "scaling"};
  return names;
}

RunManifest run(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  Ctx ctx{cfg, static_cast<std::uint64_t>(cfg.get_int("seed")),
          cfg.get_int_or("replicas", 100),
          static_cast<int>(cfg.get_int_or("workers", 1))};
  if (ctx.replicas < 1) throw ConfigError("replicas must be >= 1");
  const std::string name = cfg.get("experiment");

  CsvWriter w({"_"});
  if (name == "mixing-exact") w = run_mixing_exact(ctx);
  else if (name == "mixing-coupling") w = run_mixing_coupling(ctx);
  else if (name == "burke") w = run_burke(ctx);
  else if (name == "reversal") w = run_reversal(ctx);
  else if (name == "coalescence") w = run_coalescence(ctx);
  else if (name == "crossing") w = run_crossing(ctx);
  else if (name == "shape") w = run_shape(ctx);
  else if (name == "current") w = run_current(ctx);
  else if (name == "lower-bound") w = run_lower_bound(ctx);
  else if (name == "tag-check") w = run_tag_check(ctx);
  else if (name == "scaling") w = run_scaling(ctx);
  else throw ConfigError("unknown experiment: " + name);

  std::filesystem::create_directories(out_dir);
  const std::string csv_path = out_dir + "/" + name + ".csv";
  w.write_file(csv_path);

  RunManifest man;
  man.experiment = name;
  man.config_hash = fnv64(cfg.canonical());
  man.master_seed = ctx.seed;
  man.replicas = ctx.replicas;
  man.workers = ctx.workers;
  for (std::int64_t i = 0; i < ctx.replicas; ++i)
    man.replica_seeds.push_back(rng::replica_seed(ctx.seed, static_cast<std::uint64_t>(i)));
  man.outputs.emplace_back(csv_path, file_digest(csv_path));
  man.wall_clock_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  man.write_file(out_dir + "/" + name + ".manifest.txt");
  return man;
}

}  // namespace stripcgm
