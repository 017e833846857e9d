#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "lozenge/error.hpp"

namespace lozenge {

// Kahan-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

// Mergeable moment accumulator: count, sum, sum of squares/cubes/fourths
// about a fixed origin; reduction order does not change results beyond
// compensated-summation error.
struct Moments {
  long long count = 0;
  CompensatedSum s1, s2, s3, s4;

  void add(double x) {
    ++count;
    s1.add(x);
    s2.add(x * x);
    s3.add(x * x * x);
    s4.add(x * x * x * x);
  }
  double mean() const { return s1.value() / (double)count; }
  double variance() const {
    double m = mean();
    double v = s2.value() / (double)count - m * m;
    return v * (double)count / (double)(count - 1);
  }
  // central moments via the raw sums
  double central(int k) const {
    double m = mean();
    double r1 = s1.value() / count, r2 = s2.value() / count, r3 = s3.value() / count,
           r4 = s4.value() / count;
    switch (k) {
      case 2:
        return r2 - m * m;
      case 3:
        return r3 - 3 * m * r2 + 2 * m * m * m;
      case 4:
        return r4 - 4 * m * r3 + 6 * m * m * r2 - 3 * m * m * m * m;
      default:
        (void)r1;
        throw Error(ErrorKind::invalid_argument, "central moment order");
    }
  }
  double skewness() const { return central(3) / std::pow(central(2), 1.5); }
  double excess_kurtosis() const { return central(4) / (central(2) * central(2)) - 3.0; }
  double skewness_se() const { return std::sqrt(6.0 / (double)count); }
  double kurtosis_se() const { return std::sqrt(24.0 / (double)count); }
};

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Chi-square upper tail probability.
inline double chi_square_pvalue(double statistic, double dof) {
  if (statistic <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

// Pearson chi-square goodness of fit against given expected counts.
struct ChiSquareResult {
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
};

inline ChiSquareResult chi_square_uniformity(const std::vector<long long>& observed,
                                             long long total) {
  ChiSquareResult r;
  size_t k = observed.size();
  if (k < 2) return r;
  double expect = (double)total / (double)k;
  for (long long o : observed) r.statistic += ((double)o - expect) * ((double)o - expect) / expect;
  r.dof = (double)(k - 1);
  r.p_value = chi_square_pvalue(r.statistic, r.dof);
  return r;
}

// Anderson-Darling normality test with estimated mean and variance
// (case 3 of D'Agostino & Stephens), p-value from the standard adjusted
// statistic A*^2 = A^2 (1 + 0.75/K + 2.25/K^2).
struct AndersonDarlingResult {
  double a2 = 0;        // raw statistic
  double a2_star = 0;   // small-sample adjusted
  double p_value = 1;
  bool degenerate = false;  // zero variance probe
};

inline AndersonDarlingResult anderson_darling_normality(std::vector<double> x) {
  AndersonDarlingResult r;
  size_t k = x.size();
  if (k < 8) throw Error(ErrorKind::invalid_argument, "need at least 8 samples");
  double mean = 0;
  for (double v : x) mean += v;
  mean /= (double)k;
  double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= (double)(k - 1);
  if (var <= 0) {
    r.degenerate = true;
    return r;
  }
  std::sort(x.begin(), x.end());
  double sd = std::sqrt(var);
  double s = 0;
  for (size_t i = 0; i < k; ++i) {
    double zi = (x[i] - mean) / sd;
    double zri = (x[k - 1 - i] - mean) / sd;
    double f = normal_cdf(zi);
    double fr = normal_cdf(zri);
    f = std::min(std::max(f, 1e-300), 1 - 1e-16);
    fr = std::min(std::max(fr, 1e-300), 1 - 1e-16);
    s += (2.0 * (double)(i + 1) - 1.0) * (std::log(f) + std::log1p(-fr));
  }
  r.a2 = -(double)k - s / (double)k;
  r.a2_star = r.a2 * (1.0 + 0.75 / (double)k + 2.25 / ((double)k * (double)k));
  double a = r.a2_star;
  if (a < 0.2)
    r.p_value = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
  else if (a < 0.34)
    r.p_value = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
  else if (a < 0.6)
    r.p_value = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
  else
    r.p_value = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
  r.p_value = std::min(std::max(r.p_value, 0.0), 1.0);
  return r;
}

// Delete-one-batch jackknife for a statistic of paired samples; used for
// covariance error bars under serial correlation.
struct JackknifeEstimate {
  double value = 0;
  double std_error = 0;
  int batches = 0;
};

// Covariance of (u, v) with batched jackknife error.
inline JackknifeEstimate jackknife_covariance(const std::vector<double>& u,
                                              const std::vector<double>& v, int batches = 20) {
  if (u.size() != v.size() || u.size() < 16)
    throw Error(ErrorKind::invalid_argument, "jackknife needs paired samples");
  size_t k = u.size();
  batches = std::min<int>(batches, (int)(k / 8));
  if (batches < 4) batches = 4;
  auto cov_of = [&](size_t skip_lo, size_t skip_hi) {
    double su = 0, sv = 0, suv = 0;
    size_t cnt = 0;
    for (size_t i = 0; i < k; ++i) {
      if (i >= skip_lo && i < skip_hi) continue;
      su += u[i];
      sv += v[i];
      suv += u[i] * v[i];
      ++cnt;
    }
    double mu = su / cnt, mv = sv / cnt;
    return suv / cnt - mu * mv;
  };
  JackknifeEstimate est;
  est.batches = batches;
  est.value = cov_of(1, 0);  // nothing skipped
  std::vector<double> loo(batches);
  for (int b = 0; b < batches; ++b) {
    size_t lo = k * (size_t)b / (size_t)batches;
    size_t hi = k * (size_t)(b + 1) / (size_t)batches;
    loo[(size_t)b] = cov_of(lo, hi);
  }
  double mean = 0;
  for (double x : loo) mean += x;
  mean /= batches;
  double var = 0;
  for (double x : loo) var += (x - mean) * (x - mean);
  var *= (double)(batches - 1) / (double)batches;
  est.std_error = std::sqrt(var);
  return est;
}

// Least-squares slope of y against x with the standard error of the slope.
struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
};

inline SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  size_t k = x.size();
  if (k < 2 || y.size() != k)
    throw Error(ErrorKind::invalid_argument, "need matched x,y with >= 2 points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (k > 2) {
    double ss = 0;
    for (size_t i = 0; i < k; ++i) {
      double r = y[i] - (f.intercept + f.slope * x[i]);
      ss += r * r;
    }
    f.slope_se = std::sqrt(ss / (double)(k - 2) / sxx);
  }
  return f;
}

}  // namespace lozenge
