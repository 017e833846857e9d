#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "lozenge/counting.hpp"
#include "lozenge/domain.hpp"

namespace oracle {

using lozenge::BigInt;
using lozenge::ParticleConfig;
using lozenge::PolygonalDomain;
using lozenge::Slice;
using lozenge::SliceSide;

// Exhaustive forward enumeration of nonintersecting Bernoulli walk families
// from `start` to the packed terminal configuration. Counts by depth-first
// search over whole trajectories; usable only for tiny domains.
inline void enumerate_rec(const PolygonalDomain& d, const std::vector<long long>& cur,
                          long long tau,
                          const std::function<void(const std::vector<std::vector<long long>>&)>& emit,
                          std::vector<std::vector<long long>>& path) {
  long long T = d.T_lattice();
  if (tau == T) {
    auto term = d.terminal_config();
    std::vector<long long> want(term.sites.begin(), term.sites.end());
    if (cur == want) emit(path);
    return;
  }
  // all jump vectors e in {0,1}^m
  size_t m = cur.size();
  for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
    std::vector<long long> nxt(cur);
    bool ok = true;
    for (size_t i = 0; i < m; ++i)
      if (mask & (size_t(1) << i)) nxt[i] += 1;
    for (size_t i = 0; i + 1 < m; ++i)
      if (nxt[i] >= nxt[i + 1]) ok = false;
    if (!ok) continue;
    // support at (tau+1)-: the upper slice at tau+1
    Slice s = d.slice_lattice(tau + 1, SliceSide::upper);
    for (long long x : nxt)
      if (!s.contains_site(x)) ok = false;
    if (!ok) continue;
    std::vector<long long> post(nxt);
    if (d.is_horizontal_time(tau + 1) && tau + 1 < T) {
      bool feasible = true;
      for (long long c : d.creation_sites(tau + 1)) {
        auto it = std::lower_bound(post.begin(), post.end(), c);
        if (it != post.end() && *it == c) feasible = false;
        post.insert(it, c);
        if (!feasible) break;
      }
      if (!feasible) continue;
    }
    path.push_back(post);
    enumerate_rec(d, post, tau + 1, emit, path);
    path.pop_back();
  }
}

inline BigInt count_by_enumeration(const PolygonalDomain& d, const ParticleConfig& start) {
  BigInt total = 0;
  std::vector<std::vector<long long>> path;
  std::vector<long long> cur(start.sites.begin(), start.sites.end());
  path.push_back(cur);
  enumerate_rec(d, cur, start.t, [&](const std::vector<std::vector<long long>>&) { total += 1; },
                path);
  return total;
}

// All trajectories (lists of per-level site vectors) from the initial
// configuration; index in the returned list is the canonical tiling id.
inline std::vector<std::vector<std::vector<long long>>> all_trajectories(
    const PolygonalDomain& d) {
  std::vector<std::vector<std::vector<long long>>> out;
  auto start = lozenge::initial_config(d);
  std::vector<long long> cur(start.sites.begin(), start.sites.end());
  std::vector<std::vector<long long>> path;
  path.push_back(cur);
  enumerate_rec(d, cur, start.t,
                [&](const std::vector<std::vector<long long>>& p) { out.push_back(p); }, path);
  return out;
}

// Adaptive Simpson quadrature for the Lobachevsky integrand, splitting the
// log singularities at both endpoints by hand.
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double s1 = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double s2 = (b - a) / 12.0 * (fa + 4 * flm + 2 * fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(s2 - s1) < 15 * eps) return s2 + (s2 - s1) / 15.0;
  return simpson(f, a, m, fa, flm, fm, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, eps / 2, depth - 1);
}

inline double lobachevsky_quadrature(double theta) {
  // L(theta) = -int_0^theta ln(2 sin t) dt, with ln t split off analytically
  // near 0 and the reflection L(pi - u) = -L(u) handling the other endpoint.
  if (theta < 1e-300) return 0.0;
  if (theta > M_PI / 2) {
    double u = M_PI - theta;
    return u < 1e-300 ? 0.0 : -lobachevsky_quadrature(u);
  }
  auto smooth = [](double t) { return t == 0.0 ? std::log(2.0) : std::log(2.0 * std::sin(t) / t); };
  double s = simpson(smooth, 0.0, theta, smooth(0.0), smooth(theta / 2), smooth(theta), 1e-14, 48);
  // -int ln t dt = theta(1 - ln theta)
  return theta * (1.0 - std::log(theta)) - s;
}

}  // namespace oracle
