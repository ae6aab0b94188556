#include "stripcgm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stripcgm {

namespace {

// Kolmogorov distribution tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} e^{-2k^2 l^2}.
double kolmogorov_tail(double lambda) {
  if (lambda < 1e-6) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

TestReport ks_exponential(const std::vector<double>& samples, double rate) {
  if (samples.empty()) throw std::invalid_argument("ks_exponential: no samples");
  if (rate <= 0) throw std::invalid_argument("ks_exponential: rate must be > 0");
  for (double s : samples)
    if (s <= 0) throw std::invalid_argument("ks_exponential: nonpositive sample");

  std::vector<double> x = samples;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 1.0 - std::exp(-rate * x[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  const double lambda = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
  TestReport r;
  r.statistic = d;
  r.p_value = kolmogorov_tail(lambda);
  r.sample_size = static_cast<std::int64_t>(x.size());
  r.null_hypothesis = "Exponential(rate=" + std::to_string(rate) + ")";
  return r;
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("linear_fit: size mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("linear_fit: need >= 2 points");
  const double mx = mean_of(xs), my = mean_of(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate design");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (f.intercept + f.slope * xs[i]);
      ssr += r * r;
    }
    f.stderr_slope = std::sqrt(std::max(0.0, ssr / (static_cast<double>(n) - 2)) / sxx);
  }
  return f;
}

namespace {

// Inverse standard normal CDF (Acklam's rational approximation).
double normal_quantile(double p) {
  if (p <= 0 || p >= 1) throw std::invalid_argument("normal_quantile: p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

MeanCi mean_ci(const std::vector<double>& samples, double level) {
  if (samples.size() < 2) throw std::invalid_argument("mean_ci: need >= 2 samples");
  if (level <= 0 || level >= 1) throw std::invalid_argument("mean_ci: level in (0,1)");
  const double z = normal_quantile(0.5 + level / 2);
  MeanCi ci;
  ci.mean = mean_of(samples);
  ci.half_width = z * stddev_of(samples) / std::sqrt(static_cast<double>(samples.size()));
  return ci;
}

double empirical_correlation(const std::vector<double>& a,
                             const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("empirical_correlation: need matched sizes >= 2");
  const double ma = mean_of(a), mb = mean_of(b);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0)
    throw std::invalid_argument("empirical_correlation: constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean_of: empty");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("stddev_of: need >= 2");
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (static_cast<double>(v.size()) - 1));
}

double quantile_of(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile_of: empty");
  if (q < 0 || q > 1) throw std::invalid_argument("quantile_of: q in [0,1]");
  std::sort(v.begin(), v.end());
  const std::size_t k = static_cast<std::size_t>(
      std::max<double>(1.0, std::ceil(q * static_cast<double>(v.size()))));
  return v[std::min(v.size(), k) - 1];
}

}  // namespace stripcgm
