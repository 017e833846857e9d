#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "lozenge/domain.hpp"
#include "lozenge/error.hpp"
#include "lozenge/surface_tension.hpp"

namespace lozenge {

struct Mesh {
  double x0 = 0, t0 = 0;
  double dx = 1, dt = 1;
  int nx = 1, nt = 1;  // cells; nodes are (nx+1) x (nt+1)
  double x(int i) const { return x0 + dx * i; }
  double t(int j) const { return t0 + dt * j; }
  size_t node(int i, int j) const { return (size_t)j * (size_t)(nx + 1) + (size_t)i; }
  size_t cell(int i, int j) const { return (size_t)j * (size_t)nx + (size_t)i; }
};

// Discrete height field on a rectangular mesh: piecewise-linear heights,
// sigma evaluated per cell from forward differences, boundary nodes pinned
// to the domain's boundary height (frozen extension outside).
struct HeightField {
  Mesh mesh;
  std::vector<double> h;
  std::vector<uint8_t> free_node;
  std::vector<uint8_t> active_cell;  // cell center inside the domain
  double value = 0;
  double residual = 0;
  long long iterations = 0;

  double px(int i, int j) const {
    return (h[mesh.node(i + 1, j)] - h[mesh.node(i, j)]) / mesh.dx;
  }
  double pt(int i, int j) const {
    return (h[mesh.node(i, j + 1)] - h[mesh.node(i, j)]) / mesh.dt;
  }
};

struct SolveOptions {
  double tol = 1e-6;        // rms projected-gradient residual
  long long max_iters = 400;  // outer (Newton) iterations per level
  double eps_grad = 1e-8;   // clamp for the log-singular gradient
  bool throw_on_max_iters = true;
  int cg_max = 400;
  double hess_floor = 1e-7;  // sin floor inside curvature terms
  bool cascade = true;       // coarse-to-fine initialization
};

// Optional general boundary condition at the start time: piecewise-linear
// nondecreasing 1-Lipschitz height on the bottom slice.
struct BottomBoundary {
  std::vector<std::pair<double, double>> knots;  // (x, beta), sorted by x
  double operator()(double x) const {
    if (knots.empty()) throw Error(ErrorKind::invalid_argument, "empty bottom boundary");
    if (x <= knots.front().first) return knots.front().second;
    if (x >= knots.back().first) return knots.back().second;
    for (size_t k = 0; k + 1 < knots.size(); ++k) {
      if (x <= knots[k + 1].first) {
        double w = (x - knots[k].first) / (knots[k + 1].first - knots[k].first);
        return knots[k].second + w * (knots[k + 1].second - knots[k].second);
      }
    }
    return knots.back().second;
  }
};

namespace detail {

// Closest point on the gradient cone triangle {(0,0),(1,0),(1,-1)} in the
// (px, pt) plane.
inline void project_to_cone(double& px, double& pt) {
  // inside test: px <= 1, pt <= 0, px + pt >= 0
  if (px <= 1.0 && pt <= 0.0 && px + pt >= 0.0) return;
  struct P {
    double x, y;
  };
  const P A{0, 0}, B{1, 0}, C{1, -1};
  auto seg = [](P p, P a, P b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / (vx * vx + vy * vy);
    t = std::min(std::max(t, 0.0), 1.0);
    return P{a.x + t * vx, a.y + t * vy};
  };
  P p{px, pt};
  P cand[3] = {seg(p, A, B), seg(p, B, C), seg(p, C, A)};
  double best = 1e300;
  P bp = cand[0];
  for (const P& c : cand) {
    double d = (c.x - p.x) * (c.x - p.x) + (c.y - p.y) * (c.y - p.y);
    if (d < best) {
      best = d;
      bp = c;
    }
  }
  px = bp.x;
  pt = bp.y;
}

}  // namespace detail

class VariationalSolver {
 public:
  VariationalSolver(const PolygonalDomain& d, int nx, int nt,
                    const BottomBoundary* bottom = nullptr, double start_time = 0.0)
      : d_(&d), bottom_(bottom), s_(start_time) {
    double T = d.T().to_double();
    if (start_time < 0 || start_time >= T)
      throw Error(ErrorKind::invalid_argument, "start time outside [0,T)");
    f_.mesh.x0 = d.x_min().to_double();
    f_.mesh.t0 = start_time;
    f_.mesh.nx = nx;
    f_.mesh.nt = nt;
    f_.mesh.dx = (d.x_max().to_double() - f_.mesh.x0) / nx;
    f_.mesh.dt = (T - start_time) / nt;
    classify_nodes();
    initialize();
  }

  HeightField& field() { return f_; }
  const HeightField& field() const { return f_; }

  double objective() const {
    double acc = 0;
    const Mesh& m = f_.mesh;
    for (int j = 0; j < m.nt; ++j)
      for (int i = 0; i < m.nx; ++i) {
        if (!f_.active_cell[m.cell(i, j)]) continue;
        DensityTriple p = cell_triple(f_.h, i, j);
        acc += surface_tension(p);
      }
    return acc * m.dx * m.dt;
  }

  // Ascent on the free nodes: Newton steps with a conjugate-gradient inner
  // solve on the (clamped) concave Hessian, safeguarded by a backtracking
  // line search and the cell-local cone repair. Monotone in the functional.
  void solve(const SolveOptions& opt = {}) {
    repair(f_.h, 400);
    double F = objective();
    std::vector<double> grad(f_.h.size());
    std::vector<double> dir(f_.h.size());
    long long iter = 0;
    double res = 1e300;
    for (; iter < opt.max_iters; ++iter) {
      gradient(f_.h, grad, opt.eps_grad);
      res = residual_probe(grad);
      if (res <= opt.tol) break;
      newton_direction(grad, dir, opt);
      double gd = 0;
      for (size_t k = 0; k < dir.size(); ++k)
        if (f_.free_node[k]) gd += dir[k] * grad[k];
      if (!(gd > 0)) {
        dir = grad;  // fall back to steepest ascent
      }
      bool accepted = false;
      double alpha = 1.0;
      std::vector<double> trial;
      for (int bt = 0; bt < 60 && !accepted; ++bt) {
        trial = f_.h;
        for (size_t k = 0; k < trial.size(); ++k)
          if (f_.free_node[k]) trial[k] += alpha * dir[k];
        repair(trial, 400);
        double Ft = obj_of(trial);
        if (Ft >= F - 1e-13 * (1.0 + std::abs(F))) {
          f_.h.swap(trial);
          F = Ft;
          accepted = true;
        } else {
          alpha *= 0.5;
        }
      }
      if (!accepted) break;  // numerically stationary
    }
    f_.iterations = iter;
    f_.residual = res;
    f_.value = objective();
    if (res > opt.tol && opt.throw_on_max_iters)
      throw Error(ErrorKind::convergence,
                  "variational solver: residual " + std::to_string(res) + " after " +
                      std::to_string(iter) + " iterations");
  }

  // CG solve of (-Hessian) dir = grad on the free nodes. Per-cell 2x2
  // curvature blocks are frozen at the current densities:
  //   -sigma_pxpx = pi (cot(pi vacant) + cot(pi stay))
  //   -sigma_pxpt = pi cot(pi stay)
  //   -sigma_ptpt = pi (cot(pi jump) + cot(pi stay))
  void newton_direction(const std::vector<double>& grad, std::vector<double>& dir,
                        const SolveOptions& opt) const {
    const Mesh& m = f_.mesh;
    size_t ncell = (size_t)m.nx * m.nt;
    std::vector<double> axx(ncell, 0), axt(ncell, 0), att(ncell, 0);
    auto cot_clamped = [&](double p) {
      double s = std::max(std::sin(M_PI * std::min(std::max(p, 0.0), 1.0)), opt.hess_floor);
      double c = std::cos(M_PI * std::min(std::max(p, 0.0), 1.0));
      return c / s;
    };
    for (int j = 0; j < m.nt; ++j)
      for (int i = 0; i < m.nx; ++i) {
        size_t c = m.cell(i, j);
        if (!f_.active_cell[c]) continue;
        DensityTriple p = cell_triple(f_.h, i, j);
        double cs = cot_clamped(p.stay), cj = cot_clamped(p.jump), cv = cot_clamped(p.vacant);
        axx[c] = M_PI * (cv + cs);
        axt[c] = M_PI * cs;
        att[c] = M_PI * (cj + cs);
        // keep the 2x2 block positive definite under clamping
        double mineig = 0.5 * (axx[c] + att[c]) -
                        std::sqrt(0.25 * (axx[c] - att[c]) * (axx[c] - att[c]) +
                                  axt[c] * axt[c]);
        if (mineig < 1e-8) {
          double bump = 1e-8 - mineig;
          axx[c] += bump;
          att[c] += bump;
        }
      }
    auto hv = [&](const std::vector<double>& v, std::vector<double>& out) {
      std::fill(out.begin(), out.end(), 0.0);
      for (int j = 0; j < m.nt; ++j)
        for (int i = 0; i < m.nx; ++i) {
          size_t c = m.cell(i, j);
          if (!f_.active_cell[c]) continue;
          size_t n00 = m.node(i, j), n10 = m.node(i + 1, j), n01 = m.node(i, j + 1);
          double dpx = (v[n10] - v[n00]) / m.dx;
          double dpt = (v[n01] - v[n00]) / m.dt;
          double qx = (axx[c] * dpx + axt[c] * dpt) * m.dt;  // times dx dt / dx
          double qt = (axt[c] * dpx + att[c] * dpt) * m.dx;
          if (f_.free_node[n00]) out[n00] -= qx + qt;
          if (f_.free_node[n10]) out[n10] += qx;
          if (f_.free_node[n01]) out[n01] += qt;
        }
    };
    // Jacobi preconditioner from the block diagonals
    std::vector<double> diag(f_.h.size(), 0.0);
    for (int j = 0; j < m.nt; ++j)
      for (int i = 0; i < m.nx; ++i) {
        size_t c = m.cell(i, j);
        if (!f_.active_cell[c]) continue;
        size_t n00 = m.node(i, j), n10 = m.node(i + 1, j), n01 = m.node(i, j + 1);
        double wxx = axx[c] * m.dt / m.dx, wtt = att[c] * m.dx / m.dt;
        double wxt = axt[c];
        diag[n00] += wxx + wtt + 2 * wxt;
        diag[n10] += wxx;
        diag[n01] += wtt;
      }
    for (double& v : diag) v = v > 1e-12 ? v : 1.0;

    std::fill(dir.begin(), dir.end(), 0.0);
    std::vector<double> r(grad), z(grad.size()), p(grad.size()), ap(grad.size());
    for (size_t k = 0; k < r.size(); ++k)
      if (!f_.free_node[k]) r[k] = 0;
    double rz = 0;
    for (size_t k = 0; k < r.size(); ++k) {
      z[k] = f_.free_node[k] ? r[k] / diag[k] : 0.0;
      rz += r[k] * z[k];
    }
    p = z;
    double r0 = std::sqrt(std::max(rz, 0.0));
    if (r0 == 0) return;
    for (int it = 0; it < opt.cg_max; ++it) {
      hv(p, ap);
      double pap = 0;
      for (size_t k = 0; k < p.size(); ++k)
        if (f_.free_node[k]) pap += p[k] * ap[k];
      if (!(pap > 0)) break;
      double a = rz / pap;
      double rz_new = 0;
      for (size_t k = 0; k < p.size(); ++k) {
        if (!f_.free_node[k]) continue;
        dir[k] += a * p[k];
        r[k] -= a * ap[k];
        z[k] = r[k] / diag[k];
      }
      for (size_t k = 0; k < p.size(); ++k)
        if (f_.free_node[k]) rz_new += r[k] * z[k];
      if (std::sqrt(std::max(rz_new, 0.0)) < 0.05 * r0) break;
      double beta = rz_new / rz;
      rz = rz_new;
      for (size_t k = 0; k < p.size(); ++k)
        if (f_.free_node[k]) p[k] = z[k] + beta * p[k];
    }
  }

  // rms of the projected ascent step at probe step size.
  double residual_probe(const std::vector<double>& grad) const {
    const double a0 = 1e-3;
    std::vector<double> probe = f_.h;
    long long nfree = 0;
    for (size_t k = 0; k < probe.size(); ++k)
      if (f_.free_node[k]) {
        probe[k] += a0 * grad[k];
        ++nfree;
      }
    repair(probe, 200);
    double ss = 0;
    for (size_t k = 0; k < probe.size(); ++k)
      if (f_.free_node[k]) {
        double d = (probe[k] - f_.h[k]) / a0;
        ss += d * d;
      }
    return nfree ? std::sqrt(ss / (double)nfree) : 0.0;
  }

  // Ascent direction: dF/dh at free nodes, log-singularity clamped.
  void gradient(const std::vector<double>& h, std::vector<double>& grad,
                double eps_grad) const {
    const Mesh& m = f_.mesh;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int j = 0; j < m.nt; ++j)
      for (int i = 0; i < m.nx; ++i) {
        if (!f_.active_cell[m.cell(i, j)]) continue;
        DensityTriple p = cell_triple(h, i, j);
        SigmaGradient g = surface_tension_gradient(p, eps_grad);
        double gx = g.d_px * m.dt;  // d(sigma dx dt)/d h[i+1,j]
        double gt = g.d_pt * m.dx;
        size_t n00 = m.node(i, j), n10 = m.node(i + 1, j), n01 = m.node(i, j + 1);
        if (f_.free_node[n00]) grad[n00] -= gx + gt;
        if (f_.free_node[n10]) grad[n10] += gx;
        if (f_.free_node[n01]) grad[n01] += gt;
      }
  }

  double obj_of(const std::vector<double>& h) const {
    double acc = 0;
    const Mesh& m = f_.mesh;
    for (int j = 0; j < m.nt; ++j)
      for (int i = 0; i < m.nx; ++i) {
        if (!f_.active_cell[m.cell(i, j)]) continue;
        acc += surface_tension(cell_triple(h, i, j));
      }
    return acc * m.dx * m.dt;
  }

  // Cell-local feasibility repair: project every active cell's (px, pt)
  // onto the cone triangle, adjusting only free corner nodes. Alternating
  // sweep direction; returns the max violation seen in the last sweep.
  double repair(std::vector<double>& h, int max_sweeps) const {
    const Mesh& m = f_.mesh;
    double viol = 0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      viol = 0;
      bool fwd = (sweep % 2) == 0;
      for (int jj = 0; jj < m.nt; ++jj)
        for (int ii = 0; ii < m.nx; ++ii) {
          int j = fwd ? jj : m.nt - 1 - jj;
          int i = fwd ? ii : m.nx - 1 - ii;
          if (!f_.active_cell[m.cell(i, j)]) continue;
          size_t n00 = m.node(i, j), n10 = m.node(i + 1, j), n01 = m.node(i, j + 1);
          double px = (h[n10] - h[n00]) / m.dx;
          double pt = (h[n01] - h[n00]) / m.dt;
          if (px <= 1.0 && pt <= 0.0 && px + pt >= 0.0) continue;
          bool f10 = f_.free_node[n10], f01 = f_.free_node[n01], f00 = f_.free_node[n00];
          double qx = px, qt = pt;
          if (f10 && f01) {
            detail::project_to_cone(qx, qt);
          } else if (f10) {  // pt fixed by pins
            if (pt <= 0.0) qx = std::min(std::max(px, -pt), 1.0);
          } else if (f01) {  // px fixed by pins
            if (px >= 0.0 && px <= 1.0) qt = std::min(std::max(pt, -px), 0.0);
          } else if (f00) {
            // move the base: h00 in [max(h10-dx, h01), weighted mean]
            double lo = std::max(h[n10] - m.dx, h[n01]);
            double hi = (h[n10] * m.dt + h[n01] * m.dx) / (m.dx + m.dt);
            if (lo <= hi + 1e-12) {
              h[n00] = std::min(std::max(h[n00], lo), std::min(hi, std::max(lo, hi)));
              px = (h[n10] - h[n00]) / m.dx;
              pt = (h[n01] - h[n00]) / m.dt;
            }
            qx = px;
            qt = pt;
          }
          if (f10) h[n10] = h[n00] + qx * m.dx;
          if (f01) h[n01] = h[n00] + qt * m.dt;
          double rx = (h[n10] - h[n00]) / m.dx;
          double rt = (h[n01] - h[n00]) / m.dt;
          double v = std::max({rx - 1.0, rt, -(rx + rt), 0.0});
          viol = std::max(viol, v);
        }
      if (viol < 1e-12) break;
    }
    return viol;
  }

  DensityTriple cell_triple(const std::vector<double>& h, int i, int j) const {
    const Mesh& m = f_.mesh;
    double px = (h[m.node(i + 1, j)] - h[m.node(i, j)]) / m.dx;
    double pt = (h[m.node(i, j + 1)] - h[m.node(i, j)]) / m.dt;
    // tiny excursions from repair round-off
    px = std::min(std::max(px, 0.0), 1.0);
    pt = std::min(std::max(pt, -px), 0.0);
    return DensityTriple::from_gradient(px, pt);
  }

  // Boundary height with frozen extension outside the domain.
  double pin_value(double x, double t) const {
    double T = d_->T().to_double();
    SliceSide side = (t >= T) ? SliceSide::upper : SliceSide::lower;
    if (t <= s_ && bottom_) {
      // general start boundary, clamped outside its slice
      return (*bottom_)(x);
    }
    auto sl = d_->slice_real(std::min(t, T), side);
    if (sl.intervals.empty())
      throw Error(ErrorKind::validation, "empty slice during pinning");
    if (x <= sl.intervals.front().a) return sl.intervals.front().beta_a;
    if (x >= sl.intervals.back().b) return sl.intervals.back().beta_b;
    for (size_t k = 0; k < sl.intervals.size(); ++k) {
      const auto& iv = sl.intervals[k];
      if (x <= iv.b) {
        if (x >= iv.a) {
          // on the slice: interior nodes are free, so this is a boundary
          // point (horizontal edge / start row): packed height is linear
          // only on horizontal edges; recover via the boundary rule
          return boundary_height_on_slice(iv, x, t);
        }
        const auto& prev = sl.intervals[k - 1];
        double w = (x - prev.b) / (iv.a - prev.b);
        return prev.beta_b + w * (iv.beta_a - prev.beta_b);
      }
    }
    return sl.intervals.back().beta_b;
  }

  double start_time() const { return s_; }
  const PolygonalDomain& domain() const { return *d_; }

 private:
  static double boundary_height_on_slice(const PolygonalDomain::RealSlice::Interval& iv,
                                         double x, double /*t*/) {
    // on horizontal boundary edges the height rises at rate one; edges are
    // fully packed, so the linear rule matches beta^P there
    double w = iv.b > iv.a ? (x - iv.a) / (iv.b - iv.a) : 0.0;
    double packed = iv.beta_a + (x - iv.a);
    double linear = iv.beta_a + w * (iv.beta_b - iv.beta_a);
    // a boundary row is either an exactly packed edge (mass == width) or a
    // general start row; prefer the packed rule when consistent
    if (std::abs((iv.beta_b - iv.beta_a) - (iv.b - iv.a)) < 1e-9) return packed;
    return linear;
  }

  void classify_nodes() {
    const Mesh& m = f_.mesh;
    double T = d_->T().to_double();
    f_.h.assign((size_t)(m.nx + 1) * (m.nt + 1), 0.0);
    f_.free_node.assign(f_.h.size(), 0);
    f_.active_cell.assign((size_t)m.nx * m.nt, 0);
    for (int j = 0; j <= m.nt; ++j) {
      double t = m.t(j);
      bool interior_row = t > s_ + 1e-12 && t < T - 1e-12;
      PolygonalDomain::RealSlice lo, up;
      if (interior_row) {
        lo = d_->slice_real(t, SliceSide::lower);
        up = d_->slice_real(t, SliceSide::upper);
      }
      for (int i = 0; i <= m.nx; ++i) {
        double x = m.x(i);
        bool free = false;
        if (interior_row) {
          int kl = lo.interval_of(x), ku = up.interval_of(x);
          if (kl >= 0 && ku >= 0) {
            const auto& a = lo.intervals[(size_t)kl];
            const auto& b = up.intervals[(size_t)ku];
            free = x > a.a + 1e-12 && x < a.b - 1e-12 && x > b.a + 1e-12 && x < b.b - 1e-12;
          }
        }
        f_.free_node[m.node(i, j)] = free ? 1 : 0;
      }
    }
    for (int j = 0; j < m.nt; ++j)
      for (int i = 0; i < m.nx; ++i) {
        double xc = m.x0 + m.dx * (i + 0.5);
        double tc = m.t0 + m.dt * (j + 0.5);
        f_.active_cell[m.cell(i, j)] = d_->contains_point(xc, tc) ? 1 : 0;
      }
  }

  void initialize() {
    const Mesh& m = f_.mesh;
    for (int j = 0; j <= m.nt; ++j) {
      double t = m.t(j);
      for (int i = 0; i <= m.nx; ++i) {
        double x = m.x(i);
        size_t k = m.node(i, j);
        if (!f_.free_node[k]) {
          f_.h[k] = pin_value(x, t);
        } else {
          // linear interpolation across the slice interval
          auto sl = d_->slice_real(t, SliceSide::lower);
          int iv = sl.interval_of(x);
          const auto& I = sl.intervals[(size_t)(iv < 0 ? 0 : iv)];
          double w = (x - I.a) / (I.b - I.a);
          f_.h[k] = I.beta_a + w * (I.beta_b - I.beta_a);
        }
      }
    }
  }

  const PolygonalDomain* d_;
  const BottomBoundary* bottom_;
  double s_;
  HeightField f_;
};

// Spec entry point: maximize the surface-tension functional over the
// Lipschitz cone with pinned boundary. Returns the solved field; `value`
// carries W_s(beta). Coarse-to-fine cascade: each level starts from the
// bilinear prolongation of the previous solution.
inline HeightField solve_variational(const PolygonalDomain& d, int nx, int nt,
                                     const SolveOptions& opt = {},
                                     const BottomBoundary* bottom = nullptr,
                                     double start_time = 0.0) {
  std::vector<std::pair<int, int>> levels;
  int cx = nx, ct = nt;
  levels.emplace_back(cx, ct);
  if (opt.cascade) {
    while (cx >= 16 && ct >= 16 && cx % 2 == 0 && ct % 2 == 0) {
      cx /= 2;
      ct /= 2;
      levels.emplace_back(cx, ct);
    }
  }
  std::reverse(levels.begin(), levels.end());
  HeightField prev;
  bool have_prev = false;
  HeightField out;
  for (size_t L = 0; L < levels.size(); ++L) {
    VariationalSolver solver(d, levels[L].first, levels[L].second, bottom, start_time);
    if (have_prev) {
      HeightField& f = solver.field();
      const Mesh& pm = prev.mesh;
      for (int j = 0; j <= f.mesh.nt; ++j)
        for (int i = 0; i <= f.mesh.nx; ++i) {
          size_t k = f.mesh.node(i, j);
          if (!f.free_node[k]) continue;
          double gx = (f.mesh.x(i) - pm.x0) / pm.dx;
          double gt = (f.mesh.t(j) - pm.t0) / pm.dt;
          int i0 = std::min(std::max((int)std::floor(gx), 0), pm.nx - 1);
          int j0 = std::min(std::max((int)std::floor(gt), 0), pm.nt - 1);
          double wx = gx - i0, wt = gt - j0;
          f.h[k] = prev.h[pm.node(i0, j0)] * (1 - wx) * (1 - wt) +
                   prev.h[pm.node(i0 + 1, j0)] * wx * (1 - wt) +
                   prev.h[pm.node(i0, j0 + 1)] * (1 - wx) * wt +
                   prev.h[pm.node(i0 + 1, j0 + 1)] * wx * wt;
        }
    }
    SolveOptions level_opt = opt;
    if (L + 1 < levels.size()) {
      level_opt.tol = std::max(opt.tol, 1e-5);
      level_opt.throw_on_max_iters = false;
    }
    solver.solve(level_opt);
    prev = solver.field();
    have_prev = true;
    if (L + 1 == levels.size()) out = solver.field();
  }
  return out;
}

}  // namespace lozenge
