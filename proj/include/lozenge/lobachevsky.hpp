#pragma once

#include <cmath>
#include <vector>

#include "lozenge/error.hpp"

namespace lozenge {

namespace detail {

// Coefficients of Cl2(x) = x - x ln x + sum_n c_n x^{2n+1}, derived from
// c_n = |B_2n| / (2n (2n+1)!) = 2 zeta(2n) / ((2pi)^{2n} 2n (2n+1)).
// Convergence on [0, pi] is geometric with ratio 1/4.
inline const std::vector<double>& clausen_coeffs() {
  static const std::vector<double> coeffs = [] {
    std::vector<double> c;
    const double pi = M_PI;
    for (int n = 1; n <= 40; ++n) {
      double zeta;
      if (n == 1)
        zeta = pi * pi / 6.0;
      else if (n == 2)
        zeta = pi * pi * pi * pi / 90.0;
      else if (n == 3)
        zeta = std::pow(pi, 6) / 945.0;
      else {
        zeta = 0.0;
        for (int k = 40; k >= 1; --k) zeta += std::pow((double)k, -2.0 * n);
      }
      double denom = std::pow(2.0 * pi, 2.0 * n) * (2.0 * n) * (2.0 * n + 1.0);
      c.push_back(2.0 * zeta / denom);
    }
    return c;
  }();
  return coeffs;
}

// Clausen function Cl2 on [0, pi] by the ascending series.
inline double clausen2(double x) {
  if (x <= 0.0) return 0.0;
  double acc = 0.0;
  double x2 = x * x;
  double pw = x * x2;  // x^{2n+1} starting at n=1
  for (double cn : clausen_coeffs()) {
    double term = cn * pw;
    acc += term;
    if (term < 1e-18 * (1.0 + std::abs(acc))) break;
    pw *= x2;
  }
  return x - x * std::log(x) + acc;
}

}  // namespace detail

// Lobachevsky function by series: L(theta) = Cl2(2 theta)/2, with the
// reflection L(pi - u) = -L(u) mapping into the series domain. Fast path
// for the surface-tension hot loop.
inline double lobachevsky_series(double theta) {
  if (theta < 0 || theta > M_PI + 1e-12)
    throw Error(ErrorKind::invalid_argument, "lobachevsky argument outside [0,pi]");
  theta = std::min(theta, M_PI);
  if (theta <= M_PI / 2) return 0.5 * detail::clausen2(2.0 * theta);
  return -0.5 * detail::clausen2(2.0 * (M_PI - theta));
}

namespace detail {

inline double adaptive_simpson(double (*f)(double), double a, double b, double fa, double fm,
                               double fb, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double s1 = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double s2 = (b - a) / 12.0 * (fa + 4 * flm + 2 * fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(s2 - s1) < 15 * eps) return s2 + (s2 - s1) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, eps / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, eps / 2, depth - 1);
}

inline double log_sinc2(double t) {
  return t == 0.0 ? std::log(2.0) : std::log(2.0 * std::sin(t) / t);
}

}  // namespace detail

// L(theta) = -int_0^theta ln(2 sin t) dt. The endpoint log singularity is
// integrated analytically (-int ln t dt = theta(1 - ln theta)); the smooth
// remainder ln(2 sin t / t) goes through adaptive quadrature. Absolute error
// below 1e-12 on [0, pi].
inline double lobachevsky(double theta) {
  if (theta < 0 || theta > M_PI + 1e-12)
    throw Error(ErrorKind::invalid_argument, "lobachevsky argument outside [0,pi]");
  theta = std::min(theta, M_PI);
  if (theta > M_PI / 2) {
    double u = M_PI - theta;
    return u == 0.0 ? 0.0 : -lobachevsky(u);
  }
  if (theta == 0.0) return 0.0;
  double smooth = detail::adaptive_simpson(detail::log_sinc2, 0.0, theta,
                                           detail::log_sinc2(0.0), detail::log_sinc2(theta / 2),
                                           detail::log_sinc2(theta), 1e-15, 60);
  return theta * (1.0 - std::log(theta)) - smooth;
}

}  // namespace lozenge
