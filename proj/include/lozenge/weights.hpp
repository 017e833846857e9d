#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "lozenge/domain.hpp"
#include "lozenge/error.hpp"

namespace lozenge {

using Complex = std::complex<double>;

// Real-coefficient polynomial, evaluable at complex arguments.
struct Poly {
  std::vector<double> c;  // c[k] x^k; empty means the zero polynomial

  static Poly constant(double v) { return Poly{{v}}; }

  Complex operator()(Complex z) const {
    Complex r = 0.0;
    for (size_t k = c.size(); k-- > 0;) r = r * z + c[k];
    return r;
  }
  double operator()(double x) const {
    double r = 0.0;
    for (size_t k = c.size(); k-- > 0;) r = r * x + c[k];
    return r;
  }
  Poly deriv() const {
    Poly d;
    for (size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * (double)k);
    return d;
  }
  bool is_zero() const {
    for (double v : c)
      if (v != 0.0) return false;
    return true;
  }
};

// Rational function num/den; den defaults to 1. The denominator exists for
// deliberately non-analytic test weights.
struct RationalFn {
  Poly num{{1.0}};
  Poly den{{1.0}};

  static RationalFn constant(double v) { return {Poly::constant(v), Poly::constant(1.0)}; }
  static RationalFn poly(Poly p) { return {std::move(p), Poly::constant(1.0)}; }

  Complex operator()(Complex z) const { return num(z) / den(z); }
  double operator()(double x) const { return num(x) / den(x); }
  // d/dz log f = num'/num - den'/den
  Complex log_deriv(Complex z) const {
    Complex r = num.deriv()(z) / num(z);
    if (!(den.c.size() == 1 && den.c[0] == 1.0)) r -= den.deriv()(z) / den(z);
    return r;
  }
  bool trivial_den() const { return den.c.size() == 1 && den.c[0] == 1.0; }
};

// Symmetric bivariate polynomial kappa(x,y) = sum c[i][j] x^i y^j.
struct PairPoly {
  std::vector<std::vector<double>> c;

  bool is_zero() const {
    for (const auto& row : c)
      for (double v : row)
        if (v != 0.0) return false;
    return true;
  }
  Complex operator()(Complex x, Complex y) const {
    Complex r = 0.0;
    Complex xi = 1.0;
    for (size_t i = 0; i < c.size(); ++i) {
      Complex yj = 1.0;
      Complex acc = 0.0;
      for (size_t j = 0; j < c[i].size(); ++j) {
        acc += c[i][j] * yj;
        yj *= y;
      }
      r += xi * acc;
      xi *= x;
    }
    return r;
  }
  double operator()(double x, double y) const { return (*this)(Complex(x), Complex(y)).real(); }
  // Antiderivative in the first argument, vanishing at 0.
  PairPoly antideriv_first() const {
    PairPoly a;
    a.c.assign(c.size() + 1, {});
    for (size_t i = 0; i < c.size(); ++i) {
      a.c[i + 1].resize(c[i].size());
      for (size_t j = 0; j < c[i].size(); ++j) a.c[i + 1][j] = c[i][j] / (double)(i + 1);
    }
    return a;
  }
};

// Analytic weight data for a drifted nonintersecting Bernoulli step:
// phi^pm(x) = varphi_pm(x) exp(psi^pm(x)/n), with a symmetric pair
// interaction kappa. The kappa sum in the step weight runs over unordered
// pairs i<j once; a diagonal term would just rescale phi^+.
struct DriftedWalkWeights {
  RationalFn varphi_plus = RationalFn::constant(1.0);
  RationalFn varphi_minus = RationalFn::constant(1.0);
  Poly psi_plus;   // zero polynomial => no correction
  Poly psi_minus;
  PairPoly kappa;

  double log_phi_plus(double x, long long n) const {
    double lead = varphi_plus(x);
    if (!(lead > 0))
      throw Error(ErrorKind::invalid_argument, "phi+ must be positive on the configuration");
    return std::log(lead) + (psi_plus.c.empty() ? 0.0 : psi_plus(x) / (double)n);
  }
  double log_phi_minus(double x, long long n) const {
    double lead = varphi_minus(x);
    if (!(lead > 0))
      throw Error(ErrorKind::invalid_argument, "phi- must be positive on the configuration");
    return std::log(lead) + (psi_minus.c.empty() ? 0.0 : psi_minus(x) / (double)n);
  }
  Complex phi_plus(Complex z, long long n) const {
    Complex v = varphi_plus(z);
    if (!psi_plus.c.empty()) v *= std::exp(psi_plus(z) / (double)n);
    return v;
  }
  Complex phi_minus(Complex z, long long n) const {
    Complex v = varphi_minus(z);
    if (!psi_minus.c.empty()) v *= std::exp(psi_minus(z) / (double)n);
    return v;
  }

  // Free walk: phi+ = phi- = 1, no interaction.
  static DriftedWalkWeights free_walk() { return DriftedWalkWeights{}; }

  // Drift of a walk confined between a left wall at `a` (pole travelling
  // with the wall) and a right wall at `b`: varphi-(x) = x-a,
  // varphi+(x) = b-x. This is the leading part of the uniform-tiling drift
  // for a hexagon-like slice with bookkeeping sets A={a}, B={b}.
  static DriftedWalkWeights hexagon_drift(double a, double b) {
    DriftedWalkWeights w;
    w.varphi_minus = RationalFn::poly(Poly{{-a, 1.0}});
    w.varphi_plus = RationalFn::poly(Poly{{b, -1.0}});
    return w;
  }
};

// Probability table over jump vectors e in {0,1}^m for the drifted step:
//   P_e ∝ [V(x+e/n)/V(x)] prod_i phi+(x_i)^{e_i} phi-(x_i)^{1-e_i}
//         exp( sum_{i<j} e_i e_j kappa(x_i,x_j)/n^2 ).
// Collision-producing e get exactly zero via the vanishing Vandermonde.
struct StepDistribution {
  std::vector<double> prob;  // indexed by bitmask over particles
  double log_weight(size_t mask) const { return std::log(prob[mask]); }
};

inline StepDistribution drifted_step_distribution(const ParticleConfig& c,
                                                  const DriftedWalkWeights& w,
                                                  size_t brute_cap = 20) {
  size_t m = c.sites.size();
  if (m > brute_cap)
    throw Error(ErrorKind::capacity, "drifted step: particle count exceeds brute-force cap");
  long long n = c.n;
  std::vector<double> logp(m), logq(m);
  for (size_t i = 0; i < m; ++i) {
    double x = (double)c.sites[i] / (double)n;
    logp[i] = w.log_phi_plus(x, n);
    logq[i] = w.log_phi_minus(x, n);
  }
  size_t total = size_t(1) << m;
  std::vector<double> loga(total, -INFINITY);
  for (size_t mask = 0; mask < total; ++mask) {
    // exact collision test in lattice units
    bool collide = false;
    for (size_t i = 0; i + 1 < m; ++i)
      if (c.sites[i + 1] - c.sites[i] == 1 && (mask & (size_t(1) << i)) &&
          !(mask & (size_t(1) << (i + 1))))
        collide = true;
    if (collide) continue;
    double s = 0.0;
    for (size_t i = 0; i < m; ++i)
      s += (mask & (size_t(1) << i)) ? logp[i] : logq[i];
    // log Vandermonde ratio, in double from exact lattice differences
    for (size_t i = 0; i < m; ++i)
      for (size_t j = i + 1; j < m; ++j) {
        long long diff = c.sites[j] - c.sites[i];
        int ei = (mask >> i) & 1, ej = (mask >> j) & 1;
        if (ej != ei) s += std::log((double)(diff + ej - ei)) - std::log((double)diff);
        if (ei && ej && !w.kappa.is_zero()) {
          double xi = (double)c.sites[i] / (double)n, xj = (double)c.sites[j] / (double)n;
          s += w.kappa(xi, xj) / ((double)n * (double)n);
        }
      }
    loga[mask] = s;
  }
  double mx = -INFINITY;
  for (double v : loga) mx = std::max(mx, v);
  if (mx == -INFINITY)
    throw Error(ErrorKind::infeasible, "stuck configuration: all step weights vanish");
  StepDistribution out;
  out.prob.assign(total, 0.0);
  double z = 0.0;
  for (size_t mask = 0; mask < total; ++mask) {
    if (loga[mask] == -INFINITY) continue;
    out.prob[mask] = std::exp(loga[mask] - mx);
    z += out.prob[mask];
  }
  for (double& p : out.prob) p /= z;
  return out;
}

}  // namespace lozenge
