#include "stripcgm/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stripcgm/rng.hpp"

namespace stripcgm {

Configuration state_to_config(std::uint64_t s, int n) {
  Configuration c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = (s >> i) & 1;
  return c;
}

std::uint64_t config_to_state(const Configuration& c) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) s |= std::uint64_t{1} << i;
  return s;
}

RateMatrix build_generator(const Params& params) {
  if (params.n > kGeneratorCap)
    throw std::invalid_argument("build_generator: n exceeds the cap");
  const std::int64_t dim = std::int64_t{1} << params.n;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(params.n + 2));
  for (std::int64_t s = 0; s < dim; ++s) {
    const Configuration c = state_to_config(static_cast<std::uint64_t>(s), params.n);
    double total = 0.0;
    for (const auto& [to, rate] : enumerate_transitions(c, params)) {
      trips.emplace_back(s, static_cast<std::int64_t>(config_to_state(to)), rate);
      total += rate;
    }
    if (total > 0) trips.emplace_back(s, s, -total);
  }
  RateMatrix Q(dim, dim);
  Q.setFromTriplets(trips.begin(), trips.end());
  return Q;
}

namespace {

double max_exit_rate(const RateMatrix& Q) {
  double lam = 0.0;
  for (int i = 0; i < Q.rows(); ++i) lam = std::max(lam, -Q.coeff(i, i));
  return lam;
}

// Uniformized kernel S = I + Q / lambda (row stochastic).
RateMatrix uniformized(const RateMatrix& Q, double lambda) {
  RateMatrix S = Q / lambda;
  for (int i = 0; i < S.rows(); ++i) S.coeffRef(i, i) += 1.0;
  return S;
}

}  // namespace

DistributionTable stationary_distribution(const RateMatrix& Q) {
  const Eigen::Index dim = Q.rows();
  if (dim < 2) throw std::invalid_argument("stationary_distribution: empty chain");
  const double lambda = max_exit_rate(Q);
  if (lambda == 0.0)
    throw std::runtime_error("stationary_distribution: chain has no transitions");
  // The chain is irreducible iff the empty state can gain a particle and the
  // full state can lose one, i.e. alpha > 0 and beta > 0.
  if (-Q.coeff(0, 0) == 0.0 || -Q.coeff(dim - 1, dim - 1) == 0.0)
    throw std::runtime_error("stationary_distribution: reducible chain (alpha or beta is 0)");

  DistributionTable pi;
  if (dim <= (1 << 10)) {
    // Solve Q^T pi = 0 with a normalization row.
    Eigen::MatrixXd A = Eigen::MatrixXd(Q).transpose();
    A.row(dim - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
    b(dim - 1) = 1.0;
    pi = A.fullPivLu().solve(b);
  } else {
    const RateMatrix S = uniformized(Q, lambda);
    pi = DistributionTable::Constant(dim, 1.0 / static_cast<double>(dim));
    for (int it = 0; it < 200000; ++it) {
      DistributionTable next = S.transpose() * pi;
      const double delta = (next - pi).template lpNorm<1>();
      pi = std::move(next);
      if (delta < 1e-14) break;
    }
  }
  if (pi.minCoeff() < -1e-9)
    throw std::runtime_error("stationary_distribution: singular solve (reducible chain)");
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  const double residual = (Q.transpose() * pi).template lpNorm<Eigen::Infinity>();
  if (residual > 1e-10)
    throw std::runtime_error("stationary_distribution: residual too large (reducible chain?)");
  return pi;
}

DistributionTable evolve(const RateMatrix& Q, DistributionTable rho, double t) {
  if (t < 0) throw std::invalid_argument("evolve: t must be >= 0");
  const double lambda = max_exit_rate(Q);
  if (lambda == 0.0 || t == 0.0) return rho;
  const RateMatrix St = RateMatrix(uniformized(Q, lambda).transpose());

  double remaining = t;
  while (remaining > 0) {
    const double chunk = std::min(remaining, 400.0 / lambda);
    remaining -= chunk;
    const double lt = lambda * chunk;
    DistributionTable acc = DistributionTable::Zero(rho.size());
    DistributionTable term = rho;
    double pmf = std::exp(-lt);
    double cum = pmf;
    acc += pmf * term;
    for (int k = 1; k < 100000; ++k) {
      term = St * term;
      pmf *= lt / k;
      acc += pmf * term;
      cum += pmf;
      if (1.0 - cum < 1e-12 && k > lt) break;
    }
    rho = std::move(acc);
    rho /= rho.sum();  // renormalize the truncated tail
  }
  return rho;
}

DistributionTable distribution_at(const RateMatrix& Q, const Configuration& eta0,
                                  double t) {
  DistributionTable rho = DistributionTable::Zero(Q.rows());
  const std::uint64_t s = config_to_state(eta0);
  if (static_cast<Eigen::Index>(s) >= Q.rows())
    throw std::invalid_argument("distribution_at: state outside the chain");
  rho(static_cast<Eigen::Index>(s)) = 1.0;
  return evolve(Q, std::move(rho), t);
}

double tv_distance(const DistributionTable& p, const DistributionTable& q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: dimension mismatch");
  return 0.5 * (p - q).template lpNorm<1>();
}

TvCurvePoint worst_case_tv(const RateMatrix& Q, const Params& params, double t) {
  const DistributionTable pi = stationary_distribution(Q);
  std::vector<std::uint64_t> starts;
  if (params.n <= 10) {
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << params.n); ++s) starts.push_back(s);
  } else {
    std::uint64_t alternating = 0;
    for (int i = 0; i < params.n; i += 2) alternating |= std::uint64_t{1} << i;
    starts = {0, (std::uint64_t{1} << params.n) - 1, alternating};
  }
  TvCurvePoint best{t, -1.0, 0};
  for (std::uint64_t s : starts) {
    const double d = tv_distance(distribution_at(Q, state_to_config(s, params.n), t), pi);
    if (d > best.d) { best.d = d; best.argmax_state = s; }
  }
  return best;
}

MixingReport exact_mixing_time(const Params& params, double eps, double tol) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("exact_mixing_time: eps in (0,1)");
  if (tol <= 0) throw std::invalid_argument("exact_mixing_time: tol must be > 0");
  const RateMatrix Q = build_generator(params);

  std::vector<TvCurvePoint> probed;
  const auto d_at = [&](double t) {
    const TvCurvePoint p = worst_case_tv(Q, params, t);
    probed.push_back(p);
    return p.d;
  };

  MixingReport rep;
  rep.n = params.n;
  rep.alpha = params.alpha;
  rep.beta = params.beta;
  rep.eps = eps;
  rep.method = params.n <= 10 ? "exact" : "exact-restricted";

  double lo = 0.0, hi = std::max(1.0, static_cast<double>(params.n));
  if (d_at(lo) < eps) {
    rep.t = rep.lo = rep.hi = 0.0;
    return rep;
  }
  int doublings = 0;
  while (d_at(hi) >= eps) {
    lo = hi;
    hi *= 2;
    if (++doublings > 60)
      throw std::runtime_error("exact_mixing_time: bisection never bracketed");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (d_at(mid) < eps ? hi : lo) = mid;
  }

  // d(t) must be non-increasing along every increasing grid we touched.
  std::sort(probed.begin(), probed.end(),
            [](const TvCurvePoint& a, const TvCurvePoint& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < probed.size(); ++i)
    if (probed[i].d > probed[i - 1].d + 1e-9)
      throw std::runtime_error("exact_mixing_time: worst-case TV not monotone");

  rep.lo = lo;
  rep.hi = hi;
  rep.t = 0.5 * (lo + hi);
  return rep;
}

MixingReport coupling_mixing_upper(const Params& params, double eps, int replicas,
                                   std::uint64_t seed) {
  if (replicas < 100)
    throw std::invalid_argument("coupling_mixing_upper: need >= 100 replicas");
  if (eps <= 0 || eps >= 1)
    throw std::invalid_argument("coupling_mixing_upper: eps in (0,1)");
  const Configuration ones(static_cast<std::size_t>(params.n), 1);
  const Configuration zeros(static_cast<std::size_t>(params.n), 0);

  const double n32 = std::pow(static_cast<double>(params.n), 1.5);
  double horizon = std::max(16.0, 4.0 * n32);

  std::vector<double> taus;
  for (int cap = 0; cap < 16; ++cap, horizon *= 2) {
    taus.clear();
    bool resolved = true;
    for (int r = 0; r < replicas; ++r) {
      const auto tau = coupled_exit_time(ones, zeros, params, horizon,
                                         rng::replica_seed(seed, static_cast<std::uint64_t>(r)));
      if (!tau) { resolved = false; break; }
      taus.push_back(*tau);
    }
    if (resolved) break;
  }
  if (static_cast<int>(taus.size()) != replicas)
    throw std::runtime_error("coupling_mixing_upper: horizon cap exceeded");

  std::sort(taus.begin(), taus.end());
  const double q = 1.0 - eps;
  const double nn = static_cast<double>(replicas);
  const auto at = [&](double k) {
    const std::int64_t idx = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(k)) - 1, 0, replicas - 1);
    return taus[static_cast<std::size_t>(idx)];
  };
  const double band = 1.96 * std::sqrt(nn * q * (1 - q));

  MixingReport rep;
  rep.n = params.n;
  rep.alpha = params.alpha;
  rep.beta = params.beta;
  rep.eps = eps;
  rep.method = "coupling";
  rep.seed = seed;
  rep.t = at(q * nn);
  rep.lo = at(q * nn - band);
  rep.hi = at(q * nn + band);
  return rep;
}

double binomial_e_theta_mass(int n, double theta) {
  // P(Bin(n,1/2) >= n/2 - theta sqrt(n)), summed in log space.
  const double cut = n / 2.0 - theta * std::sqrt(static_cast<double>(n));
  double mass = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (k < cut) continue;
    const double logp = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                        std::lgamma(n - k + 1.0) - n * std::log(2.0);
    mass += std::exp(logp);
  }
  return std::min(mass, 1.0);
}

double choose_theta(int n) {
  double best = 0.05, best_dist = 2.0;
  for (double theta = 0.05; theta <= 5.0; theta += 0.05) {
    const double m = binomial_e_theta_mass(n, theta);
    if (m >= 0.85 && m <= 0.95) return theta;
    const double d = std::min(std::abs(m - 0.85), std::abs(m - 0.95));
    if (d < best_dist) { best_dist = d; best = theta; }
  }
  return best;
}

WitnessReport lower_bound_witness(const Params& params, double t, double theta,
                                  int replicas, std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("lower_bound_witness: too few replicas");
  WitnessReport rep;
  rep.theta = theta;
  rep.replicas = replicas;
  rep.mu_e = binomial_e_theta_mass(params.n, theta);

  const Configuration zeros(static_cast<std::size_t>(params.n), 0);
  const double cut = params.n / 2.0 - theta * std::sqrt(static_cast<double>(params.n));
  int hits = 0;
  for (int r = 0; r < replicas; ++r) {
    const Trajectory traj =
        simulate(zeros, params, t, rng::replica_seed(seed, static_cast<std::uint64_t>(r)));
    const Configuration c = replay(traj);
    int count = 0;
    for (int b : c) count += b;
    if (count >= cut) ++hits;
  }
  rep.p_t = static_cast<double>(hits) / replicas;
  rep.mc_err = std::sqrt(rep.p_t * (1 - rep.p_t) / replicas);
  rep.witness = rep.mu_e - rep.p_t;
  return rep;
}

CurrentSummary current_fluctuations(const Params& params, double c, int replicas,
                                    std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("current_fluctuations: too few replicas");
  CurrentSummary s;
  s.n = params.n;
  s.t_n = c * std::pow(static_cast<double>(params.n), 1.5);
  s.replicas = replicas;
  const Configuration zeros(static_cast<std::size_t>(params.n), 0);
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(replicas));
  for (int r = 0; r < replicas; ++r) {
    const Trajectory traj =
        simulate(zeros, params, s.t_n, rng::replica_seed(seed, static_cast<std::uint64_t>(r)));
    const double j = static_cast<double>(current(traj, s.t_n));
    stats.push_back((j - s.t_n / 4.0) / std::sqrt(static_cast<double>(params.n)));
  }
  s.mean = mean_of(stats);
  s.sd = stddev_of(stats);
  s.q25 = quantile_of(stats, 0.25);
  s.q50 = quantile_of(stats, 0.50);
  s.q75 = quantile_of(stats, 0.75);
  return s;
}

LinearFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("scaling_fit: need >= 3 points");
  std::vector<double> xs, ys;
  for (const auto& [n, t] : points) {
    if (n <= 0 || t <= 0) throw std::invalid_argument("scaling_fit: positive values only");
    xs.push_back(std::log(n));
    ys.push_back(std::log(t));
  }
  return linear_fit(xs, ys);
}

}  // namespace stripcgm
