#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "lozenge/domain.hpp"
#include "lozenge/error.hpp"
#include "lozenge/surface_tension.hpp"
#include "lozenge/variational.hpp"

namespace lozenge {

// Complex slope on cell centers of a solved height field. Cells outside the
// liquid thresholds are masked.
struct ComplexSlopeField {
  Mesh mesh;  // inherited from the height field; values live on cell centers
  std::vector<std::complex<double>> f;
  std::vector<uint8_t> liquid;
  double eps = 1e-3;

  size_t idx(int i, int j) const { return (size_t)j * (size_t)mesh.nx + (size_t)i; }
  double xc(int i) const { return mesh.x0 + mesh.dx * (i + 0.5); }
  double tc(int j) const { return mesh.t0 + mesh.dt * (j + 0.5); }

  bool is_liquid(int i, int j) const {
    return i >= 0 && j >= 0 && i < mesh.nx && j < mesh.nt && liquid[idx(i, j)];
  }

  // Bilinear interpolation of f over liquid cell centers.
  std::complex<double> interpolate(double x, double t) const {
    double gi = (x - mesh.x0) / mesh.dx - 0.5;
    double gj = (t - mesh.t0) / mesh.dt - 0.5;
    int i0 = (int)std::floor(gi), j0 = (int)std::floor(gj);
    double wx = gi - i0, wt = gj - j0;
    for (int dj = 0; dj <= 1; ++dj)
      for (int di = 0; di <= 1; ++di)
        if (!is_liquid(i0 + di, j0 + dj))
          throw Error(ErrorKind::invalid_argument, "interpolation touches a frozen cell");
    return f[idx(i0, j0)] * ((1 - wx) * (1 - wt)) + f[idx(i0 + 1, j0)] * (wx * (1 - wt)) +
           f[idx(i0, j0 + 1)] * ((1 - wx) * wt) + f[idx(i0 + 1, j0 + 1)] * (wx * wt);
  }
};

// Slope field from the solved heights: unique lower-half-plane f per liquid
// cell via the two boundary angles. Frozen cells are masked, not errors;
// point queries on frozen cells throw.
inline ComplexSlopeField gradient_to_slope(const HeightField& hf, double eps = 1e-3) {
  ComplexSlopeField out;
  out.mesh = hf.mesh;
  out.eps = eps;
  out.f.assign((size_t)hf.mesh.nx * hf.mesh.nt, {0.0, 0.0});
  out.liquid.assign(out.f.size(), 0);
  for (int j = 0; j < hf.mesh.nt; ++j)
    for (int i = 0; i < hf.mesh.nx; ++i) {
      if (!hf.active_cell[hf.mesh.cell(i, j)]) continue;
      DensityTriple p = DensityTriple::from_gradient(hf.px(i, j), hf.pt(i, j));
      if (!p.liquid(eps)) continue;
      out.f[out.idx(i, j)] = complex_slope(p);
      out.liquid[out.idx(i, j)] = 1;
    }
  return out;
}

inline std::complex<double> slope_at_cell(const HeightField& hf, int i, int j,
                                          double eps = 1e-3) {
  DensityTriple p = DensityTriple::from_gradient(hf.px(i, j), hf.pt(i, j));
  if (!p.liquid(eps))
    throw Error(ErrorKind::invalid_argument, "frozen node: complex slope undefined");
  return complex_slope(p);
}

// Centered-difference residual of the complex Burgers equation
// r = dt_f / f + dx_f / (f+1) on interior liquid stencils.
struct BurgersResidual {
  Mesh mesh;
  std::vector<std::complex<double>> r;
  std::vector<uint8_t> defined;
  std::vector<uint8_t> singular;  // f ~ 0 or f ~ -1 at a stencil node
  double norm_l2 = 0;             // rms over defined cells
  double norm_max = 0;
  long long count = 0;

  size_t idx(int i, int j) const { return (size_t)j * (size_t)mesh.nx + (size_t)i; }
};

inline BurgersResidual burgers_residual(const ComplexSlopeField& sf) {
  BurgersResidual out;
  out.mesh = sf.mesh;
  out.r.assign(sf.f.size(), {0, 0});
  out.defined.assign(sf.f.size(), 0);
  out.singular.assign(sf.f.size(), 0);
  double ss = 0;
  for (int j = 1; j + 1 < sf.mesh.nt; ++j)
    for (int i = 1; i + 1 < sf.mesh.nx; ++i) {
      if (!(sf.is_liquid(i, j) && sf.is_liquid(i - 1, j) && sf.is_liquid(i + 1, j) &&
            sf.is_liquid(i, j - 1) && sf.is_liquid(i, j + 1)))
        continue;
      std::complex<double> f0 = sf.f[sf.idx(i, j)];
      if (std::abs(f0) < 1e-9 || std::abs(f0 + 1.0) < 1e-9) {
        out.singular[out.idx(i, j)] = 1;
        continue;
      }
      std::complex<double> fx =
          (sf.f[sf.idx(i + 1, j)] - sf.f[sf.idx(i - 1, j)]) / (2.0 * sf.mesh.dx);
      std::complex<double> ft =
          (sf.f[sf.idx(i, j + 1)] - sf.f[sf.idx(i, j - 1)]) / (2.0 * sf.mesh.dt);
      std::complex<double> r = ft / f0 + fx / (f0 + 1.0);
      out.r[out.idx(i, j)] = r;
      out.defined[out.idx(i, j)] = 1;
      double a = std::abs(r);
      ss += a * a;
      out.norm_max = std::max(out.norm_max, a);
      ++out.count;
    }
  out.norm_l2 = out.count ? std::sqrt(ss / (double)out.count) : 0.0;
  return out;
}

// Characteristic transport: f is conserved, the base point moves with
// velocity f/(f+1).
inline std::pair<std::complex<double>, std::complex<double>> characteristic_advance(
    std::complex<double> f0, std::complex<double> z0, double duration) {
  if (std::abs(f0 + 1.0) == 0.0)
    throw Error(ErrorKind::invalid_argument, "characteristic speed undefined at f = -1");
  std::complex<double> velocity;
  if (std::isinf(f0.real()) || std::isinf(f0.imag()))
    velocity = 1.0;  // f/(f+1) -> 1
  else
    velocity = f0 / (f0 + 1.0);
  return {f0, z0 + duration * velocity};
}

// Arctic curve: marching-squares contour of dx_h at the two thresholds
// eps and 1-eps over cell centers, plus the frozen classification.
struct ArcticCurve {
  struct Point {
    double x, t;
  };
  std::vector<std::vector<Point>> polylines;
  // per domain side (nondegenerate segment index): min distance curve-side
  std::vector<std::pair<int, double>> side_distance;
  // frozen cells classified by dominant lozenge type
  long long frozen_vacant = 0, frozen_stay = 0, frozen_jump = 0;
};

namespace detail {

struct SegKey {
  long long a, b;
  bool operator<(const SegKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

inline long long quantize(double v) { return (long long)std::llround(v * 1e7); }

// chain unordered segments into polylines
inline std::vector<std::vector<ArcticCurve::Point>> chain_segments(
    std::vector<std::array<ArcticCurve::Point, 2>>& segs) {
  std::map<std::pair<long long, long long>, std::vector<size_t>> by_end;
  for (size_t k = 0; k < segs.size(); ++k) {
    for (int e = 0; e < 2; ++e) {
      auto key = std::make_pair(quantize(segs[k][(size_t)e].x), quantize(segs[k][(size_t)e].t));
      by_end[key].push_back(k);
    }
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<std::vector<ArcticCurve::Point>> out;
  for (size_t k = 0; k < segs.size(); ++k) {
    if (used[k]) continue;
    used[k] = true;
    std::vector<ArcticCurve::Point> line = {segs[k][0], segs[k][1]};
    for (int dir = 0; dir < 2; ++dir) {
      bool extended = true;
      while (extended) {
        extended = false;
        ArcticCurve::Point tail = line.back();
        auto key = std::make_pair(quantize(tail.x), quantize(tail.t));
        auto it = by_end.find(key);
        if (it == by_end.end()) break;
        for (size_t cand : it->second) {
          if (used[cand]) continue;
          ArcticCurve::Point next;
          if (quantize(segs[cand][0].x) == key.first && quantize(segs[cand][0].t) == key.second)
            next = segs[cand][1];
          else if (quantize(segs[cand][1].x) == key.first &&
                   quantize(segs[cand][1].t) == key.second)
            next = segs[cand][0];
          else
            continue;
          used[cand] = true;
          line.push_back(next);
          extended = true;
          break;
        }
      }
      std::reverse(line.begin(), line.end());
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace detail

inline ArcticCurve arctic_curve(const HeightField& hf, double eps = 1e-3) {
  ArcticCurve out;
  const Mesh& m = hf.mesh;
  // scalar field on cell centers; inactive cells treated as frozen by its
  // pin extension value side
  auto fieldval = [&](int i, int j) { return hf.px(i, j); };
  std::vector<std::array<ArcticCurve::Point, 2>> segs;
  auto add_level = [&](double level) {
    for (int j = 0; j + 1 < m.nt; ++j)
      for (int i = 0; i + 1 < m.nx; ++i) {
        // marching squares on the 2x2 block of cell centers
        double v00 = fieldval(i, j), v10 = fieldval(i + 1, j);
        double v01 = fieldval(i, j + 1), v11 = fieldval(i + 1, j + 1);
        bool a00 = v00 > level, a10 = v10 > level, a01 = v01 > level, a11 = v11 > level;
        int c = (a00 ? 1 : 0) | (a10 ? 2 : 0) | (a01 ? 4 : 0) | (a11 ? 8 : 0);
        if (c == 0 || c == 15) continue;
        double x0 = m.x0 + m.dx * (i + 0.5), t0 = m.t0 + m.dt * (j + 0.5);
        auto lerp = [&](double va, double vb) {
          double d = vb - va;
          return std::abs(d) < 1e-300 ? 0.5 : (level - va) / d;
        };
        ArcticCurve::Point pb{x0 + m.dx * lerp(v00, v10), t0};                 // bottom
        ArcticCurve::Point pt_{x0 + m.dx * lerp(v01, v11), t0 + m.dt};        // top
        ArcticCurve::Point pl{x0, t0 + m.dt * lerp(v00, v01)};                // left
        ArcticCurve::Point pr{x0 + m.dx, t0 + m.dt * lerp(v10, v11)};         // right
        auto emit = [&](ArcticCurve::Point a, ArcticCurve::Point b) {
          segs.push_back({a, b});
        };
        switch (c) {
          case 1: case 14: emit(pb, pl); break;
          case 2: case 13: emit(pb, pr); break;
          case 4: case 11: emit(pl, pt_); break;
          case 8: case 7: emit(pr, pt_); break;
          case 3: case 12: emit(pl, pr); break;
          case 5: case 10: emit(pb, pt_); break;
          case 6: case 9:  // ambiguous saddle: split along both diagonals
            emit(pb, pl);
            emit(pr, pt_);
            break;
          default: break;
        }
      }
  };
  add_level(eps);
  add_level(1.0 - eps);
  out.polylines = detail::chain_segments(segs);

  // frozen classification over active cells
  for (int j = 0; j < m.nt; ++j)
    for (int i = 0; i < m.nx; ++i) {
      if (!hf.active_cell[m.cell(i, j)]) continue;
      DensityTriple p = DensityTriple::from_gradient(hf.px(i, j), hf.pt(i, j));
      if (p.liquid(eps)) continue;
      if (p.vacant >= p.stay && p.vacant >= p.jump)
        ++out.frozen_vacant;
      else if (p.stay >= p.jump)
        ++out.frozen_stay;
      else
        ++out.frozen_jump;
    }
  return out;
}

// Minimum distance from the curve points to each nondegenerate boundary
// segment of the domain; the arctic curve of a polygon is tangent to every
// side, so these distances vanish under refinement.
inline std::vector<std::pair<int, double>> arctic_tangency_report(const ArcticCurve& curve,
                                                                  const PolygonalDomain& d) {
  std::vector<std::pair<int, double>> out;
  const auto& segs = d.segments();
  for (size_t s = 0; s < segs.size(); ++s) {
    if (segs[s].degenerate) continue;
    double ax = segs[s].a.x.to_double(), at = segs[s].a.t.to_double();
    double bx = segs[s].b.x.to_double(), bt = segs[s].b.t.to_double();
    double best = 1e300;
    for (const auto& line : curve.polylines)
      for (const auto& p : line) {
        double vx = bx - ax, vt = bt - at;
        double L2 = vx * vx + vt * vt;
        double u = ((p.x - ax) * vx + (p.t - at) * vt) / L2;
        u = std::min(std::max(u, 0.0), 1.0);
        double dx = p.x - (ax + u * vx), dt2 = p.t - (at + u * vt);
        best = std::min(best, std::hypot(dx, dt2));
      }
    out.emplace_back((int)s, best);
  }
  return out;
}

}  // namespace lozenge
