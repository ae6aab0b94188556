#ifndef STRIPCGM_STATS_HPP
#define STRIPCGM_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace stripcgm {

struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  std::int64_t sample_size = 0;
  std::string null_hypothesis;
};

// One-sample Kolmogorov-Smirnov against Exponential(rate); asymptotic
// p-value. Throws on empty samples, nonpositive rate or nonpositive samples.
TestReport ks_exponential(const std::vector<double>& samples, double rate);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

// Ordinary least squares; needs >= 2 distinct abscissae.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
};

// Normal-approximation confidence interval at the given two-sided level.
MeanCi mean_ci(const std::vector<double>& samples, double level);

// Pearson correlation; throws on constant input.
double empirical_correlation(const std::vector<double>& a,
                             const std::vector<double>& b);

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);  // sample (n-1) convention
// Empirical quantile (inverted CDF, right-continuous): smallest value v with
// #(x <= v) >= q * n.
double quantile_of(std::vector<double> v, double q);

}  // namespace stripcgm

#endif
