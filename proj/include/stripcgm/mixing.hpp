#ifndef STRIPCGM_MIXING_HPP
#define STRIPCGM_MIXING_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "stripcgm/stats.hpp"
#include "stripcgm/tasep.hpp"

namespace stripcgm {

// States are bit-encoded configurations: site i (1-based) is bit (i-1), so
// state index s has eta(i) = (s >> (i-1)) & 1.
using RateMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using DistributionTable = Eigen::VectorXd;

inline constexpr int kGeneratorCap = 14;

Configuration state_to_config(std::uint64_t s, int n);
std::uint64_t config_to_state(const Configuration& c);

// Exact sparse generator; rows sum to zero.
RateMatrix build_generator(const Params& params);

// Solves pi Q = 0 with sum(pi) = 1; dense LU for n <= 10, power iteration on
// the uniformized kernel above. Throws if the chain is reducible.
DistributionTable stationary_distribution(const RateMatrix& Q);

// Row eta0 of exp(tQ) by uniformization, Poisson tail below 1e-12; long
// horizons are split into chunks to keep the term count bounded.
DistributionTable distribution_at(const RateMatrix& Q, const Configuration& eta0,
                                  double t);
DistributionTable evolve(const RateMatrix& Q, DistributionTable rho, double t);

double tv_distance(const DistributionTable& p, const DistributionTable& q);

struct MixingReport {
  int n = 0;
  double alpha = 0.0, beta = 0.0;
  double eps = 0.25;
  double t = 0.0;       // estimate
  double lo = 0.0, hi = 0.0;  // bracket / confidence band
  std::string method;   // "exact" or "coupling"
  std::uint64_t seed = 0;
};

// Worst-case total-variation distance to stationarity at time t. For n <= 10
// the maximum runs over all states; above, over {all-one, all-zero,
// alternating} (recorded in reports by the "exact-restricted" method tag).
struct TvCurvePoint {
  double t = 0.0;
  double d = 0.0;
  std::uint64_t argmax_state = 0;
};
TvCurvePoint worst_case_tv(const RateMatrix& Q, const Params& params, double t);

// Bisection on d(t) to bracket inf{t : d(t) < eps} within tol. Asserts the
// evaluated d values are non-increasing along the probed grid.
MixingReport exact_mixing_time(const Params& params, double eps, double tol);

// Empirical (1-eps)-quantile of the second-class exit time from the
// all-one/all-zero disagreement, with a binomial-order-statistic band.
MixingReport coupling_mixing_upper(const Params& params, double eps, int replicas,
                                   std::uint64_t seed);

// Total-variation lower-bound witness at time t via the particle-count event
// E_theta = { sum(eta - 1/2) >= -theta sqrt(N) }.
struct WitnessReport {
  double theta = 0.0;
  double mu_e = 0.0;        // exact stationary mass of E_theta (triple point)
  double p_t = 0.0;         // estimated P(eta_t in E_theta | eta_0 = 0)
  double witness = 0.0;     // mu_e - p_t
  double mc_err = 0.0;      // std error of p_t
  int replicas = 0;
};

// Exact Binomial(N, 1/2) mass of E_theta.
double binomial_e_theta_mass(int n, double theta);
// Smallest theta on a 0.05-grid with mass in [0.85, 0.95] (closest if none).
double choose_theta(int n);

WitnessReport lower_bound_witness(const Params& params, double t, double theta,
                                  int replicas, std::uint64_t seed);

// Per-N summaries of (J_{t_N} - t_N/4)/sqrt(N) at t_N = c N^{3/2}.
struct CurrentSummary {
  int n = 0;
  double t_n = 0.0;
  double mean = 0.0, sd = 0.0;
  double q25 = 0.0, q50 = 0.0, q75 = 0.0;
  int replicas = 0;
};
CurrentSummary current_fluctuations(const Params& params, double c, int replicas,
                                    std::uint64_t seed);

// Least squares on (log N, log t).
LinearFit scaling_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace stripcgm

#endif
