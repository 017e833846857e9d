#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lozenge/error.hpp"
#include "lozenge/rational.hpp"

namespace lozenge {

enum class SlopeTag { horizontal, diagonal, vertical };

enum class SliceSide { lower, upper };

struct Vertex {
  Rational x;
  Rational t;
  friend bool operator==(const Vertex& a, const Vertex& b) {
    return a.x == b.x && a.t == b.t;
  }
};

// One boundary segment, oriented along the counterclockwise traversal.
// Zero-length segments are allowed as placeholders so that domains with
// fewer than 3d geometric sides (trapezoids, sawtooths) still carry the
// cyclic 0,1,inf slope pattern; they are skipped by all geometric queries.
struct Segment {
  Vertex a;
  Vertex b;
  SlopeTag slope;
  bool degenerate = false;
  // Traversal direction decides which side of the domain the segment bounds:
  //   horizontal, dx>0: lower edge      horizontal, dx<0: upper edge
  //   diagonal/vertical, dt>0: right boundary; dt<0: left boundary
  bool forward;
};

struct Violation {
  int segment = -1;  // -1 when not tied to a specific segment
  std::string rule;
  std::string detail;
};

// A time slice of the domain: disjoint closed intervals in lattice units
// (multiples of 1/n). `beta` holds the boundary height (again in lattice
// units, i.e. n*beta^P) at each interval endpoint.
struct Slice {
  long long t = 0;  // lattice time
  SliceSide side = SliceSide::lower;
  struct Interval {
    long long a = 0;
    long long b = 0;
    long long beta_a = 0;
    long long beta_b = 0;
    long long mass() const { return beta_b - beta_a; }  // particle count
  };
  std::vector<Interval> intervals;

  bool contains_site(long long x) const {
    for (const auto& iv : intervals)
      if (iv.a <= x && x + 1 <= iv.b) return true;
    return false;
  }
  int interval_of(long long x) const {
    for (size_t i = 0; i < intervals.size(); ++i)
      if (intervals[i].a <= x && x + 1 <= intervals[i].b) return (int)i;
    return -1;
  }
};

// Sorted particle positions on the (1/n)-grid at a time slice. Everything in
// lattice units; the particle at site k occupies the box [k/n,(k+1)/n].
struct ParticleConfig {
  long long t = 0;
  std::vector<long long> sites;
  long long n = 1;

  friend bool operator==(const ParticleConfig& a, const ParticleConfig& b) {
    return a.t == b.t && a.n == b.n && a.sites == b.sites;
  }
};

class PolygonalDomain {
 public:
  // Vertices traversed counterclockwise; the boundary closes implicitly.
  static PolygonalDomain from_vertices(long long n, std::vector<Vertex> verts) {
    PolygonalDomain d;
    d.n_ = n;
    if (!verts.empty() && verts.size() > 1 && verts.front() == verts.back())
      verts.pop_back();  // accept explicitly closed input
    d.vertices_ = std::move(verts);
    d.build();
    return d;
  }

  // The a x b x c hexagon in walk coordinates: bottom edge [0,a] at t=0,
  // top edge [c,a+c] at t=b+c, grid parameter n.
  static PolygonalDomain hexagon(long long a, long long b, long long c, long long n) {
    std::vector<Vertex> v = {
        {Rational(0), Rational(0)},     {Rational(a), Rational(0)},
        {Rational(a + c), Rational(c)}, {Rational(a + c), Rational(b + c)},
        {Rational(c), Rational(b + c)}, {Rational(0), Rational(b)}};
    return from_vertices(n, v);
  }

  long long n() const { return n_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Segment>& segments() const { return segments_; }
  Rational T() const { return T_; }
  long long T_lattice() const { return T_.lattice(n_); }
  const std::vector<long long>& horizontal_times() const { return horizontal_times_; }
  Rational x_min() const { return x_min_; }
  Rational x_max() const { return x_max_; }

  std::vector<Violation> validate() const {
    std::vector<Violation> v;
    if (vertices_.size() < 3) {
      v.push_back({-1, "too-few-vertices", "need at least 3 vertices"});
      return v;
    }
    // grid alignment
    for (size_t i = 0; i < vertices_.size(); ++i) {
      if (!vertices_[i].x.on_grid(n_) || !vertices_[i].t.on_grid(n_))
        v.push_back({(int)i, "vertex-off-grid",
                     "vertex (" + vertices_[i].x.str() + "," + vertices_[i].t.str() + ")"});
    }
    if (!v.empty()) return v;  // lattice queries below need on-grid data

    for (size_t i = 0; i + 1 < segments_.size(); ++i) {
      const auto& s = segments_[i];
      if (s.degenerate) continue;
      Rational dx = s.b.x - s.a.x;
      Rational dt = s.b.t - s.a.t;
      bool ok = (dt.num == 0) || (dx.num == 0) || (dx == dt);
      if (!ok) v.push_back({(int)i, "invalid-slope", "dx=" + dx.str() + " dt=" + dt.str()});
    }
    // an implicit closing edge that cannot carry a legal slope means the
    // polyline does not close
    {
      const auto& s = segments_.back();
      if (!s.degenerate) {
        Rational dx = s.b.x - s.a.x;
        Rational dt = s.b.t - s.a.t;
        bool ok = (dt.num == 0) || (dx.num == 0) || (dx == dt);
        if (!ok) v.push_back({(int)segments_.size() - 1, "boundary-not-closed", ""});
      }
    }
    if (!v.empty()) return v;

    // slopes 0,1,inf cyclically repeated; degenerate segments occupy their
    // slot in the cycle, but a degenerate horizontal is rejected
    {
      size_t first = segments_.size();
      for (size_t i = 0; i < segments_.size(); ++i)
        if (!segments_[i].degenerate) {
          first = i;
          break;
        }
      if (first < segments_.size()) {
        auto next_slope = [](SlopeTag s) {
          return s == SlopeTag::horizontal ? SlopeTag::diagonal
                 : s == SlopeTag::diagonal ? SlopeTag::vertical
                                           : SlopeTag::horizontal;
        };
        SlopeTag expect = segments_[first].slope;
        for (size_t step = 0; step < segments_.size(); ++step) {
          size_t i = (first + step) % segments_.size();
          const auto& s = segments_[i];
          if (s.degenerate) {
            if (expect == SlopeTag::horizontal)
              v.push_back({(int)i, "zero-length-edge", "degenerate horizontal edge"});
          } else if (s.slope != expect) {
            v.push_back({(int)i, "slope-cycle",
                         "segment " + std::to_string(i) + " breaks the 0,1,inf cycle"});
            break;
          }
          expect = next_slope(expect);
        }
      }
      if (segments_.size() % 3 != 0)
        v.push_back({-1, "slope-cycle", "segment count not a multiple of 3"});
    }

    // counterclockwise orientation (positive signed area)
    Rational area2(0);
    for (size_t i = 0; i < vertices_.size(); ++i) {
      const auto& p = vertices_[i];
      const auto& q = vertices_[(i + 1) % vertices_.size()];
      area2 = area2 + (p.x * q.t - q.x * p.t);
    }
    if (!(Rational(0) < area2)) v.push_back({-1, "not-counterclockwise", ""});

    // strip [0,T]
    Rational tmin = vertices_[0].t;
    for (const auto& p : vertices_) tmin = std::min(tmin, p.t, [](const Rational& a, const Rational& b) { return a < b; });
    if (tmin != Rational(0)) v.push_back({-1, "outside-strip", "lowest time is " + tmin.str()});

    // boundary height must close up: sum of dx over horizontal edges is 0
    Rational h(0);
    for (const auto& s : segments_)
      if (s.slope == SlopeTag::horizontal) h = h + (s.b.x - s.a.x);
    if (h != Rational(0))
      v.push_back({-1, "boundary-height-inconsistent", "net horizontal drift " + h.str()});

    if (!v.empty()) return v;

    // per-interval masses must be achievable: site count >= mass >= 0
    for (long long tau = 0; tau < T_lattice(); ++tau) {
      Slice s = slice_lattice(tau, SliceSide::lower);
      for (const auto& iv : s.intervals) {
        if (iv.mass() < 0 || iv.mass() > iv.b - iv.a) {
          v.push_back({-1, "infeasible-mass",
                       "t=" + Rational(tau, n_).str() + " interval [" +
                           Rational(iv.a, n_).str() + "," + Rational(iv.b, n_).str() +
                           "] mass " + std::to_string(iv.mass())});
          return v;
        }
      }
    }
    return v;
  }

  // Definition: the t=T slice is a single interval and every horizontal edge
  // below T is a lower boundary edge.
  bool has_one_upper_edge() const {
    Slice top = slice_lattice(T_lattice(), SliceSide::upper);
    if (top.intervals.size() != 1) return false;
    for (const auto& s : segments_) {
      if (s.degenerate || s.slope != SlopeTag::horizontal) continue;
      bool upper = !s.forward;
      if (upper && s.a.t != T_) return false;
      if (!upper && s.a.t == T_) return false;
    }
    return true;
  }

  Slice slice_at(const Rational& t, SliceSide side) const {
    if (t < Rational(0) || T_ < t)
      throw Error(ErrorKind::invalid_argument, "slice time outside strip");
    if (side == SliceSide::lower && !(t < T_))
      throw Error(ErrorKind::invalid_argument, "lower slice requires t < T");
    if (side == SliceSide::upper && !(Rational(0) < t))
      throw Error(ErrorKind::invalid_argument, "upper slice requires t > 0");
    return slice_lattice(t.lattice(n_), side);
  }

  // Cross-section at lattice time tau, approached from above (lower) or from
  // below (upper). Ties at horizontal edges resolve by the epsilon side tag:
  // the section is taken at t = tau +- eps and crossings are sorted by their
  // position there, which separates vertical from diagonal crossings meeting
  // at a vertex.
  Slice slice_lattice(long long tau, SliceSide side) const {
    if (tau < 0 || tau > T_lattice())
      throw Error(ErrorKind::invalid_argument, "slice time outside strip");
    if (side == SliceSide::lower && tau >= T_lattice())
      throw Error(ErrorKind::invalid_argument, "lower slice requires t < T");
    if (side == SliceSide::upper && tau <= 0)
      throw Error(ErrorKind::invalid_argument, "upper slice requires t > 0");

    struct Crossing {
      long long x;    // position at t = tau
      int eps;        // coefficient of eps in the position at tau +- eps
      long long beta; // boundary height at the crossing, lattice units
    };
    std::vector<Crossing> cr;
    int sgn = side == SliceSide::lower ? +1 : -1;
    for (size_t i = 0; i < segments_.size(); ++i) {
      const auto& s = segments_[i];
      if (s.slope == SlopeTag::horizontal) continue;
      long long t1 = std::min(s.a.t.lattice(n_), s.b.t.lattice(n_));
      long long t2 = std::max(s.a.t.lattice(n_), s.b.t.lattice(n_));
      bool crosses = side == SliceSide::lower ? (t1 <= tau && t2 >= tau + 1)
                                              : (t1 <= tau - 1 && t2 >= tau);
      if (!crosses) continue;
      const Vertex& lo = (s.a.t <= s.b.t) ? s.a : s.b;
      long long x;
      int eps = 0;
      if (s.slope == SlopeTag::vertical) {
        x = s.a.x.lattice(n_);
      } else {
        x = lo.x.lattice(n_) + (tau - lo.t.lattice(n_));
        eps = sgn;
      }
      cr.push_back({x, eps, beta_vertex_lattice(index_of_vertex(lo))});
    }
    std::sort(cr.begin(), cr.end(), [](const Crossing& a, const Crossing& b) {
      if (a.x != b.x) return a.x < b.x;
      return a.eps < b.eps;
    });
    if (cr.size() % 2 != 0)
      throw Error(ErrorKind::validation, "odd crossing count; polygon is not simple");
    Slice sl;
    sl.t = tau;
    sl.side = side;
    for (size_t i = 0; i + 1 < cr.size(); i += 2) {
      Slice::Interval iv;
      iv.a = cr[i].x;
      iv.b = cr[i + 1].x;
      iv.beta_a = cr[i].beta;
      iv.beta_b = cr[i + 1].beta;
      sl.intervals.push_back(iv);
    }
    return sl;
  }

  // Continuous-time cross-section for mesh-based solvers. Same epsilon
  // tie-break as slice_lattice; heights are continuum beta^P values.
  struct RealSlice {
    struct Interval {
      double a, b;
      double beta_a, beta_b;
    };
    std::vector<Interval> intervals;
    bool contains(double x) const {
      for (const auto& iv : intervals)
        if (iv.a <= x && x <= iv.b) return true;
      return false;
    }
    int interval_of(double x) const {
      for (size_t i = 0; i < intervals.size(); ++i)
        if (intervals[i].a <= x && x <= intervals[i].b) return (int)i;
      return -1;
    }
  };

  RealSlice slice_real(double t, SliceSide side) const {
    struct Crossing {
      double x;
      int eps;
      double beta;
    };
    std::vector<Crossing> cr;
    int sgn = side == SliceSide::lower ? +1 : -1;
    double n = (double)n_;
    for (const auto& s : segments_) {
      if (s.degenerate || s.slope == SlopeTag::horizontal) continue;
      double t1 = std::min(s.a.t.to_double(), s.b.t.to_double());
      double t2 = std::max(s.a.t.to_double(), s.b.t.to_double());
      bool crosses = side == SliceSide::lower ? (t1 <= t && t < t2) : (t1 < t && t <= t2);
      if (!crosses) continue;
      const Vertex& lo = (s.a.t <= s.b.t) ? s.a : s.b;
      double x;
      int eps = 0;
      if (s.slope == SlopeTag::vertical) {
        x = s.a.x.to_double();
      } else {
        x = lo.x.to_double() + (t - lo.t.to_double());
        eps = sgn;
      }
      cr.push_back({x, eps, (double)beta_vertex_lattice(index_of_vertex(lo)) / n});
    }
    std::sort(cr.begin(), cr.end(), [](const Crossing& a, const Crossing& b) {
      if (a.x != b.x) return a.x < b.x;
      return a.eps < b.eps;
    });
    if (cr.size() % 2 != 0)
      throw Error(ErrorKind::validation, "odd crossing count; polygon is not simple");
    RealSlice out;
    for (size_t i = 0; i + 1 < cr.size(); i += 2)
      out.intervals.push_back({cr[i].x, cr[i + 1].x, cr[i].beta, cr[i + 1].beta});
    return out;
  }

  bool contains_point(double x, double t) const {
    if (t < 0 || t > T_.to_double()) return false;
    RealSlice s = slice_real(t, t >= T_.to_double() ? SliceSide::upper : SliceSide::lower);
    return s.contains(x);
  }

  // Boundary height in lattice units (n * beta^P) at a boundary vertex.
  long long beta_vertex_lattice(size_t vertex_index) const { return beta_lattice_[vertex_index]; }

  // n * beta^P at a lattice point lying on a horizontal edge at time tau.
  long long beta_on_horizontal_lattice(long long x, long long tau) const {
    for (size_t i = 0; i < segments_.size(); ++i) {
      const auto& s = segments_[i];
      if (s.slope != SlopeTag::horizontal) continue;
      if (s.a.t.lattice(n_) != tau) continue;
      long long xa = s.a.x.lattice(n_), xb = s.b.x.lattice(n_);
      long long lo = std::min(xa, xb), hi = std::max(xa, xb);
      if (x < lo || x > hi) continue;
      size_t vi = index_of_vertex(s.forward ? s.a : s.b);  // left endpoint
      return beta_lattice_[vi] + (x - lo);
    }
    throw Error(ErrorKind::invalid_argument, "point not on a horizontal edge");
  }

  // Lattice sites where particles are created at horizontal time tau: the
  // half-open footprint [a',b') of every lower horizontal edge at tau.
  std::vector<long long> creation_sites(long long tau) const {
    std::vector<long long> out;
    for (const auto& s : segments_) {
      if (s.slope != SlopeTag::horizontal || !s.forward) continue;
      if (s.a.t.lattice(n_) != tau) continue;
      long long xa = s.a.x.lattice(n_), xb = s.b.x.lattice(n_);
      for (long long x = xa; x < xb; ++x) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_horizontal_time(long long tau) const {
    return std::binary_search(horizontal_times_.begin(), horizontal_times_.end(), tau);
  }

  // Number of particles at lattice time tau (from the interval masses).
  long long particle_count(long long tau) const {
    Slice s = slice_lattice(tau, tau == T_lattice() ? SliceSide::upper : SliceSide::lower);
    long long m = 0;
    for (const auto& iv : s.intervals) m += iv.mass();
    return m;
  }

  // Membership in the configuration space M_t: support inside the lower
  // slice, full packing on lower horizontal edges at tau, and per-interval
  // masses matching the boundary heights.
  bool config_valid(const ParticleConfig& c) const {
    if (c.n != n_) return false;
    Slice s = slice_lattice(c.t, SliceSide::lower);
    std::vector<long long> mass(s.intervals.size(), 0);
    long long prev = INT64_MIN;
    for (long long x : c.sites) {
      if (x <= prev) return false;
      prev = x;
      int k = s.interval_of(x);
      if (k < 0) return false;
      ++mass[k];
    }
    for (size_t i = 0; i < s.intervals.size(); ++i)
      if (mass[i] != s.intervals[i].mass()) return false;
    if (is_horizontal_time(c.t)) {
      for (long long x : creation_sites(c.t))
        if (!std::binary_search(c.sites.begin(), c.sites.end(), x)) return false;
    }
    return true;
  }

  // Packed configuration along the terminal (t=T) edge; the walk ending
  // convention for one-upper-edge domains.
  ParticleConfig terminal_config() const {
    Slice top = slice_lattice(T_lattice(), SliceSide::upper);
    if (top.intervals.size() != 1)
      throw Error(ErrorKind::validation, "terminal slice is not a single interval");
    ParticleConfig c;
    c.t = T_lattice();
    c.n = n_;
    for (long long x = top.intervals[0].a; x < top.intervals[0].b; ++x) c.sites.push_back(x);
    return c;
  }

  // Insert particles created at horizontal time tau into the pre-creation
  // configuration `c` (given at tau-). Collisions raise infeasible-creation.
  ParticleConfig apply_creation(const ParticleConfig& c, long long tau) const {
    ParticleConfig out;
    out.t = tau;
    out.n = n_;
    std::vector<long long> created = creation_sites(tau);
    out.sites = c.sites;
    for (long long x : created) {
      auto it = std::lower_bound(out.sites.begin(), out.sites.end(), x);
      if (it != out.sites.end() && *it == x)
        throw Error(ErrorKind::infeasible,
                    "infeasible-creation: site " + Rational(x, n_).str() + " already occupied");
      out.sites.insert(it, x);
    }
    return out;
  }

  // Remove the particles created at horizontal time tau (inverse of
  // apply_creation for configurations in M_tau).
  ParticleConfig strip_creation(const ParticleConfig& c, long long tau) const {
    ParticleConfig out;
    out.t = tau;
    out.n = n_;
    std::vector<long long> created = creation_sites(tau);
    size_t j = 0;
    for (long long x : c.sites) {
      if (j < created.size() && created[j] == x) {
        ++j;
        continue;
      }
      out.sites.push_back(x);
    }
    if (j != created.size())
      throw Error(ErrorKind::validation, "configuration lacks a creation site");
    return out;
  }

  // Pole/zero bookkeeping for the drifted-walk weights. For the interval of
  // the lower slice at tau containing x: A collects the time-tau projections
  // of slope-1 left boundary edges still alive above tau (they travel at
  // rate 1), filtered to lie at or left of the interval; B collects the
  // positions of vertical right boundary edges alive above tau, at or right
  // of the interval.
  struct PoleZeroSets {
    std::vector<Rational> A;
    std::vector<Rational> B;
  };
  PoleZeroSets pole_zero_sets(long long tau, long long x) const {
    Slice s = slice_lattice(tau, SliceSide::lower);
    int k = -1;
    for (size_t i = 0; i < s.intervals.size(); ++i)
      if (s.intervals[i].a <= x && x <= s.intervals[i].b) k = (int)i;
    if (k < 0) throw Error(ErrorKind::invalid_argument, "x outside the lower slice");
    Rational a_k = Rational(s.intervals[k].a, n_);
    Rational b_k = Rational(s.intervals[k].b, n_);
    Rational t = Rational(tau, n_);
    PoleZeroSets out;
    for (const auto& seg : segments_) {
      if (seg.forward) continue;  // left boundaries only (traversed downward)
      Rational t2 = std::max(seg.a.t, seg.b.t, [](const Rational& u, const Rational& v) { return u < v; });
      if (!(t < t2)) continue;  // edge must still be alive above tau
      if (seg.slope == SlopeTag::diagonal) {
        const Vertex& lo = (seg.a.t <= seg.b.t) ? seg.a : seg.b;
        Rational proj = lo.x + (t - lo.t);  // the pole travels at rate 1
        if (proj <= a_k) out.A.push_back(proj);
      }
    }
    for (const auto& seg : segments_) {
      if (!seg.forward || seg.slope != SlopeTag::vertical) continue;  // right verticals
      Rational t2 = std::max(seg.a.t, seg.b.t, [](const Rational& u, const Rational& v) { return u < v; });
      if (!(t < t2)) continue;
      if (b_k <= seg.a.x) out.B.push_back(seg.a.x);
    }
    std::sort(out.A.begin(), out.A.end());
    std::sort(out.B.begin(), out.B.end());
    return out;
  }

  uint64_t hash() const {
    uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](long long v) {
      h ^= (uint64_t)v;
      h *= 1099511628211ULL;
    };
    mix(n_);
    for (const auto& p : vertices_) {
      mix(p.x.num);
      mix(p.x.den);
      mix(p.t.num);
      mix(p.t.den);
    }
    return h;
  }

 private:
  void build() {
    segments_.clear();
    size_t k = vertices_.size();
    T_ = Rational(0);
    x_min_ = x_max_ = vertices_.empty() ? Rational(0) : vertices_[0].x;
    for (const auto& p : vertices_) {
      if (T_ < p.t) T_ = p.t;
      if (p.x < x_min_) x_min_ = p.x;
      if (x_max_ < p.x) x_max_ = p.x;
    }
    for (size_t i = 0; i < k; ++i) {
      const Vertex& a = vertices_[i];
      const Vertex& b = vertices_[(i + 1) % k];
      Segment s;
      s.a = a;
      s.b = b;
      Rational dx = b.x - a.x, dt = b.t - a.t;
      s.degenerate = (dx.num == 0 && dt.num == 0);
      if (dt.num == 0)
        s.slope = SlopeTag::horizontal;
      else if (dx.num == 0)
        s.slope = SlopeTag::vertical;
      else
        s.slope = SlopeTag::diagonal;
      s.forward = s.slope == SlopeTag::horizontal ? (Rational(0) < dx) : (Rational(0) < dt);
      segments_.push_back(s);
    }

    // Boundary height: zero at the lower-left corner, slope 1 along
    // horizontal edges, constant along the others.
    beta_lattice_.assign(k, 0);
    if (k > 0 && n_ > 0) {
      bool grid_ok = true;
      for (const auto& p : vertices_)
        if (!p.x.on_grid(n_) || !p.t.on_grid(n_)) grid_ok = false;
      if (grid_ok) {
        size_t start = 0;
        for (size_t i = 1; i < k; ++i) {
          if (vertices_[i].t < vertices_[start].t ||
              (vertices_[i].t == vertices_[start].t && vertices_[i].x < vertices_[start].x))
            start = i;
        }
        long long acc = 0;
        for (size_t step = 0; step < k; ++step) {
          size_t i = (start + step) % k;
          beta_lattice_[i] = acc;
          const Segment& s = segments_[i];
          if (s.slope == SlopeTag::horizontal)
            acc += s.b.x.lattice(n_) - s.a.x.lattice(n_);
        }
        lower_left_ = start;
      }
    }

    horizontal_times_.clear();
    for (const auto& s : segments_)
      if (s.slope == SlopeTag::horizontal && s.a.t.on_grid(n_))
        horizontal_times_.push_back(s.a.t.lattice(n_));
    std::sort(horizontal_times_.begin(), horizontal_times_.end());
    horizontal_times_.erase(std::unique(horizontal_times_.begin(), horizontal_times_.end()),
                            horizontal_times_.end());
  }

  size_t index_of_vertex(const Vertex& v) const {
    for (size_t i = 0; i < vertices_.size(); ++i)
      if (vertices_[i] == v) return i;
    throw Error(ErrorKind::invalid_argument, "vertex not found");
  }

  long long n_ = 1;
  std::vector<Vertex> vertices_;
  std::vector<Segment> segments_;
  std::vector<long long> beta_lattice_;
  std::vector<long long> horizontal_times_;
  Rational T_;
  Rational x_min_, x_max_;
  size_t lower_left_ = 0;
};

// Piecewise-linear height along a slice, recovered from a configuration:
// beta(a_i) pins to the boundary, each particle box adds 1/n.
struct SliceHeight {
  Slice slice;
  long long n = 1;
  // per interval: lattice beta values at sites a..b (inclusive)
  std::vector<std::vector<long long>> values;

  // Height at lattice position x (must lie in some interval).
  long long at(long long x) const {
    for (size_t i = 0; i < slice.intervals.size(); ++i) {
      const auto& iv = slice.intervals[i];
      if (iv.a <= x && x <= iv.b) return values[i][(size_t)(x - iv.a)];
    }
    throw Error(ErrorKind::invalid_argument, "position outside slice");
  }
};

inline SliceHeight config_height(const ParticleConfig& c, const PolygonalDomain& d) {
  SliceHeight out;
  out.n = d.n();
  out.slice = d.slice_lattice(c.t, SliceSide::lower);
  out.values.resize(out.slice.intervals.size());
  size_t j = 0;
  for (size_t i = 0; i < out.slice.intervals.size(); ++i) {
    const auto& iv = out.slice.intervals[i];
    long long beta = iv.beta_a;
    out.values[i].push_back(beta);
    for (long long x = iv.a; x < iv.b; ++x) {
      if (j < c.sites.size() && c.sites[j] == x) {
        ++beta;
        ++j;
      }
      out.values[i].push_back(beta);
    }
    if (beta != iv.beta_b)
      throw Error(ErrorKind::validation,
                  "mass-mismatch: interval [" + Rational(iv.a, d.n()).str() + "," +
                      Rational(iv.b, d.n()).str() + "] carries " +
                      std::to_string(beta - iv.beta_a) + " particles, needs " +
                      std::to_string(iv.mass()));
  }
  if (j != c.sites.size())
    throw Error(ErrorKind::validation, "configuration has sites outside the slice");
  return out;
}

inline ParticleConfig apply_creation(const ParticleConfig& c, const PolygonalDomain& d,
                                     long long tau) {
  return d.apply_creation(c, tau);
}

}  // namespace lozenge
