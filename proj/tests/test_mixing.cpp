#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "stripcgm/mixing.hpp"
#include "stripcgm/rng.hpp"

using namespace stripcgm;

TEST_CASE("generator basics") {
  SUBCASE("n=1 by hand") {
    const RateMatrix Q = build_generator(Params(1, 0.5, 0.5));
    CHECK(Q.coeff(0, 0) == -0.5);
    CHECK(Q.coeff(0, 1) == 0.5);
    CHECK(Q.coeff(1, 0) == 0.5);
    CHECK(Q.coeff(1, 1) == -0.5);
  }
  SUBCASE("rows sum to zero for n <= 8") {
    for (int n : {2, 4, 8}) {
      const RateMatrix Q = build_generator(Params(n, 0.7, 0.4));
      for (int i = 0; i < Q.rows(); ++i) {
        double s = 0;
        for (RateMatrix::InnerIterator it(Q, i); it; ++it) s += it.value();
        CHECK(std::abs(s) < 1e-14);
      }
    }
  }
  SUBCASE("agrees with enumerate_transitions state by state, n <= 6") {
    for (int n : {2, 3, 6}) {
      const Params p(n, 0.8, 0.6);
      const RateMatrix Q = build_generator(p);
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        const auto trans = enumerate_transitions(state_to_config(s, n), p);
        double total = 0;
        for (const auto& [to, rate] : trans) {
          CHECK(Q.coeff(static_cast<Eigen::Index>(s),
                        static_cast<Eigen::Index>(config_to_state(to))) == rate);
          total += rate;
        }
        CHECK(Q.coeff(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) ==
              -total);
      }
    }
  }
  SUBCASE("cap") {
    CHECK_THROWS(build_generator(Params(15, 0.5, 0.5)));
  }
}

TEST_CASE("stationary distribution") {
  SUBCASE("uniform at the triple point for n <= 10") {
    for (int n = 2; n <= 10; ++n) {
      const RateMatrix Q = build_generator(Params(n, 0.5, 0.5));
      const DistributionTable pi = stationary_distribution(Q);
      const DistributionTable uni =
          DistributionTable::Constant(pi.size(), 1.0 / static_cast<double>(pi.size()));
      CHECK(tv_distance(pi, uni) <= 1e-10);
    }
  }
  SUBCASE("two-state balance") {
    const RateMatrix Q = build_generator(Params(1, 0.3, 0.9));
    const DistributionTable pi = stationary_distribution(Q);
    CHECK(pi(1) == doctest::Approx(0.3 / 1.2).epsilon(1e-12));
  }
  SUBCASE("matches a dense null-space solve at n=2, alpha=beta=1") {
    const RateMatrix Q = build_generator(Params(2, 1.0, 1.0));
    const DistributionTable pi = stationary_distribution(Q);
    // independent oracle: eigenvector of Q^T for eigenvalue 0 via full
    // eigendecomposition
    Eigen::MatrixXd Qd = Eigen::MatrixXd(Q).transpose();
    Eigen::EigenSolver<Eigen::MatrixXd> es(Qd);
    int zero_idx = 0;
    for (int i = 0; i < 4; ++i)
      if (std::abs(es.eigenvalues()(i).real()) <
          std::abs(es.eigenvalues()(zero_idx).real()))
        zero_idx = i;
    Eigen::VectorXd v = es.eigenvectors().col(zero_idx).real();
    v /= v.sum();
    CHECK((pi - v).lpNorm<Eigen::Infinity>() < 1e-10);
  }
  SUBCASE("is a fixed point of the semigroup") {
    const RateMatrix Q = build_generator(Params(4, 0.6, 0.8));
    const DistributionTable pi = stationary_distribution(Q);
    for (double t : {1.0, 10.0})
      CHECK(tv_distance(evolve(Q, pi, t), pi) <= 1e-9);
  }
  SUBCASE("reducible chains are rejected") {
    CHECK_THROWS(stationary_distribution(build_generator(Params(3, 0.0, 0.0))));
  }
}

TEST_CASE("uniformization") {
  const Params p(4, 0.5, 0.5);
  const RateMatrix Q = build_generator(p);
  const Configuration eta0 = state_to_config(5, 4);
  SUBCASE("t=0 is a point mass") {
    const DistributionTable d = distribution_at(Q, eta0, 0.0);
    CHECK(d(5) == 1.0);
    CHECK(d.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("long horizons reach stationarity") {
    const DistributionTable d = distribution_at(Q, eta0, 1000.0);
    CHECK(tv_distance(d, stationary_distribution(Q)) <= 1e-8);
  }
  SUBCASE("semigroup property") {
    const DistributionTable once = distribution_at(Q, eta0, 7.0);
    const DistributionTable split = evolve(Q, distribution_at(Q, eta0, 3.0), 4.0);
    CHECK(tv_distance(once, split) <= 1e-9);
  }
}

TEST_CASE("tv distance") {
  DistributionTable p(4), q(4), u(4), d(4);
  p << 1, 0, 0, 0;
  q << 0, 1, 0, 0;
  u << 0.25, 0.25, 0.25, 0.25;
  d << 1, 0, 0, 0;
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(p, q) == 1.0);
  CHECK(tv_distance(u, d) == 0.75);
  DistributionTable bad(3);
  CHECK_THROWS(tv_distance(p, bad));
}

TEST_CASE("exact mixing time") {
  SUBCASE("golden value at n=2, triple point, eps=1/4") {
    const MixingReport r = exact_mixing_time(Params(2, 0.5, 0.5), 0.25, 1e-6);
    CHECK(r.t == doctest::Approx(1.7307744739).epsilon(1e-6));
    CHECK(r.lo <= r.hi);
  }
  SUBCASE("monotone in eps") {
    const MixingReport tight = exact_mixing_time(Params(3, 0.5, 0.5), 0.125, 1e-4);
    const MixingReport loose = exact_mixing_time(Params(3, 0.5, 0.5), 0.25, 1e-4);
    CHECK(tight.t >= loose.t - 1e-3);
  }
  SUBCASE("worst initial state at the triple point is a boundary state") {
    for (int n : {2, 3, 4, 5, 6}) {
      const Params p(n, 0.5, 0.5);
      const RateMatrix Q = build_generator(p);
      const MixingReport r = exact_mixing_time(p, 0.25, 1e-3);
      const TvCurvePoint at = worst_case_tv(Q, p, r.t);
      const std::uint64_t all = (std::uint64_t{1} << n) - 1;
      CHECK((at.argmax_state == 0 || at.argmax_state == all));
    }
  }
}

TEST_CASE("restricted maximization above n = 10") {
  const MixingReport r = exact_mixing_time(Params(11, 0.5, 0.5), 0.25, 0.05);
  CHECK(r.method == "exact-restricted");
  // order N^{3/2} = 36.5; the restricted estimate sits in a sane band
  CHECK(r.t > 10.0);
  CHECK(r.t < 200.0);
}

TEST_CASE("worst-case TV is non-increasing along a grid") {
  const Params p(5, 0.7, 0.6);
  const RateMatrix Q = build_generator(p);
  double prev = 2.0;
  for (double t : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double d = worst_case_tv(Q, p, t).d;
    CHECK(d <= prev + 1e-9);
    prev = d;
  }
}

TEST_CASE("coupling upper bound brackets the exact mixing time") {
  const Params p(4, 0.5, 0.5);
  const MixingReport exact = exact_mixing_time(p, 0.25, 1e-3);
  int ok = 0;
  const int batches = 20;
  for (int b = 0; b < batches; ++b) {
    const MixingReport up =
        coupling_mixing_upper(p, 0.25, 200, rng::replica_seed(31337, static_cast<std::uint64_t>(b)));
    CHECK(up.lo <= up.t);
    CHECK(up.t <= up.hi);
    if (up.hi >= exact.t - 1e-3) ++ok;
  }
  CHECK(ok >= 19);
}

TEST_CASE("lower-bound witness") {
  SUBCASE("theta selection hits the window") {
    for (int n : {32, 64, 128}) {
      const double m = binomial_e_theta_mass(n, choose_theta(n));
      CHECK(m >= 0.85);
      CHECK(m <= 0.95);
    }
  }
  SUBCASE("binomial tail sanity") {
    CHECK(binomial_e_theta_mass(10, 100.0) == 1.0);
    CHECK(binomial_e_theta_mass(10, 0.0) == doctest::Approx(0.623046875));  // P(Bin(10,1/2) >= 5)
  }
  SUBCASE("t=0 witness equals the stationary mass") {
    const WitnessReport r = lower_bound_witness(Params(16, 0.5, 0.5), 0.0,
                                                choose_theta(16), 200, 5);
    CHECK(r.p_t == 0.0);
    CHECK(r.witness == r.mu_e);
  }
  SUBCASE("witness dies as the chain mixes") {
    const WitnessReport r = lower_bound_witness(Params(8, 0.5, 0.5), 500.0,
                                                choose_theta(8), 400, 6);
    CHECK(std::abs(r.witness) < 5 * std::max(r.mc_err, 0.01) + 0.05);
  }
}

TEST_CASE("current fluctuations") {
  SUBCASE("degenerate alpha=0 gives the deterministic scaled statistic") {
    const CurrentSummary s = current_fluctuations(Params(16, 0.0, 0.5), 1.0, 50, 2);
    const double expect = -1.0 * 16.0 / 4.0;  // (0 - t_N/4)/sqrt(N) = -cN/4
    CHECK(s.mean == doctest::Approx(expect));
    CHECK(s.sd == 0.0);
  }
  SUBCASE("replica halving moves summaries within noise") {
    const CurrentSummary a = current_fluctuations(Params(16, 0.5, 0.5), 1.0, 400, 3);
    const CurrentSummary b = current_fluctuations(Params(16, 0.5, 0.5), 1.0, 200, 4);
    const double se = a.sd / std::sqrt(200.0);
    CHECK(std::abs(a.mean - b.mean) < 4 * se);
  }
}

TEST_CASE("scaling fit") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {8.0, 16.0, 32.0, 64.0}) pts.emplace_back(n, std::pow(n, 1.5));
  const LinearFit f = scaling_fit(pts);
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
  std::vector<std::pair<double, double>> lin;
  for (double n : {8.0, 16.0, 32.0}) lin.emplace_back(n, 3 * n);
  CHECK(scaling_fit(lin).slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(scaling_fit({{1, 1}, {2, 2}}));
}
