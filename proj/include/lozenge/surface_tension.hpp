#pragma once

#include <cmath>
#include <complex>

#include "lozenge/error.hpp"
#include "lozenge/lobachevsky.hpp"

namespace lozenge {

// Local lozenge densities: staying particle, jumping particle, no particle.
// In gradient terms: stay = dx_h + dt_h, jump = -dt_h, vacant = 1 - dx_h.
struct DensityTriple {
  double stay = 0;
  double jump = 0;
  double vacant = 0;

  static DensityTriple from_gradient(double px, double pt) {
    return DensityTriple{px + pt, -pt, 1.0 - px};
  }
  double grad_x() const { return stay + jump; }
  double grad_t() const { return -jump; }
  bool valid(double tol = 1e-12) const {
    return stay >= -tol && jump >= -tol && vacant >= -tol &&
           std::abs(stay + jump + vacant - 1.0) <= tol;
  }
  bool liquid(double eps) const { return stay > eps && jump > eps && vacant > eps; }
};

// Entropy density sigma = (L(pi p1) + L(pi p2) + L(pi p3)) / pi.
inline double surface_tension(const DensityTriple& p) {
  if (!p.valid(1e-9))
    throw Error(ErrorKind::invalid_argument, "density triple outside the simplex");
  auto clamp01 = [](double v) { return std::min(std::max(v, 0.0), 1.0); };
  return (lobachevsky_series(M_PI * clamp01(p.stay)) +
          lobachevsky_series(M_PI * clamp01(p.jump)) +
          lobachevsky_series(M_PI * clamp01(p.vacant))) /
         M_PI;
}

// Partial derivatives of sigma with respect to the height gradient:
//   d sigma / d(dx_h) = ln|f+1| = ln sin(pi vacant) - ln sin(pi stay)
//   d sigma / d(dt_h) = ln|f|   = ln sin(pi jump)   - ln sin(pi stay)
// with the logarithmic divergence clamped at the simplex boundary.
struct SigmaGradient {
  double d_px;
  double d_pt;
};

inline SigmaGradient surface_tension_gradient(const DensityTriple& p, double eps_grad = 1e-8) {
  auto logsin = [eps_grad](double v) {
    v = std::min(std::max(v, eps_grad), 1.0 - eps_grad);
    return std::log(std::sin(M_PI * v));
  };
  double ls = logsin(p.stay);
  return SigmaGradient{logsin(p.vacant) - ls, logsin(p.jump) - ls};
}

// Complex slope of a liquid density triple: the unique f in the open lower
// half plane with arg* f = pi(vacant - 1) and arg*(f + 1) = -pi jump,
// arg* in [-pi, 0]. Trigonometric form: f = e^{-i pi (stay+jump)}
// sin(pi jump) / sin(pi stay).
inline std::complex<double> complex_slope(const DensityTriple& p) {
  if (!p.valid(1e-9))
    throw Error(ErrorKind::invalid_argument, "density triple outside the simplex");
  double alpha = p.stay + p.jump;  // dx_h
  double r = std::sin(M_PI * p.jump) / std::sin(M_PI * p.stay);
  return std::polar(r, -M_PI * alpha);
}

// Inverse reading: densities from a lower-half-plane slope.
inline DensityTriple densities_from_slope(std::complex<double> f) {
  double argf = std::arg(f);           // in (-pi, pi]
  double argf1 = std::arg(f + 1.0);
  if (argf > 0 || argf1 > 0)
    throw Error(ErrorKind::invalid_argument, "slope not in the closed lower half plane");
  double px = -argf / M_PI;
  double pt = argf1 / M_PI;
  return DensityTriple::from_gradient(px, pt);
}

}  // namespace lozenge
