#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lozenge/domain.hpp"
#include "lozenge/error.hpp"

namespace lozenge {

using BigInt = boost::multiprecision::cpp_int;

struct TilingCount {
  BigInt value = 0;
  uint64_t domain_hash = 0;
  ParticleConfig start;
};

inline double log_of(const BigInt& v) {
  if (v <= 0) return v == 0 ? -INFINITY : NAN;
  unsigned bits = boost::multiprecision::msb(v);
  if (bits < 900) return std::log(v.convert_to<double>());
  BigInt top = v >> (bits - 64);
  return std::log(top.convert_to<double>()) + (double)(bits - 64) * std::log(2.0);
}

namespace detail {

struct SiteVecHash {
  size_t operator()(const std::vector<int32_t>& v) const {
    uint64_t h = 1469598103934665603ULL;
    for (int32_t x : v) {
      h ^= (uint64_t)(uint32_t)x;
      h *= 1099511628211ULL;
    }
    return (size_t)h;
  }
};

}  // namespace detail

// One backward DP level: configurations at lattice time tau (post-creation,
// members of M_tau) mapped to walk counts N_tau.
using CountTable = std::unordered_map<std::vector<int32_t>, BigInt, detail::SiteVecHash>;

struct CountOptions {
  size_t state_cap = 10'000'000;  // max configurations per level
};

namespace detail {

template <typename F>
void predecessors_rec(const std::vector<int32_t>& y, const Slice& slice, size_t i,
                      std::vector<int32_t>& x, F&& f) {
  if (i == y.size()) {
    f(x);
    return;
  }
  for (int e = 0; e <= 1; ++e) {
    int32_t xi = y[i] - e;
    if (i > 0 && xi <= x[i - 1]) continue;
    if (!slice.contains_site(xi)) continue;
    x[i] = xi;
    predecessors_rec(y, slice, i + 1, x, f);
  }
}

// Enumerate predecessors x = y - e (walkers step 0/+1) of the pre-creation
// configuration y, with x strictly increasing and supported in `slice`.
template <typename F>
void for_each_predecessor(const std::vector<int32_t>& y, const Slice& slice, F&& f) {
  std::vector<int32_t> x(y.size());
  predecessors_rec(y, slice, 0, x, f);
}

// Keep only members of M_tau: per-interval masses matching the boundary
// heights and full packing on the creation edges at tau. Support is already
// guaranteed by the predecessor enumeration.
inline void filter_level(CountTable& cur, const PolygonalDomain& d, long long tau,
                         const Slice& slice) {
  std::vector<long long> must =
      d.is_horizontal_time(tau) ? d.creation_sites(tau) : std::vector<long long>{};
  for (auto it = cur.begin(); it != cur.end();) {
    const auto& sites = it->first;
    bool ok = true;
    size_t k = 0;
    for (const auto& iv : slice.intervals) {
      long long m = 0;
      while (k < sites.size() && sites[k] + 1 <= iv.b) {
        if (sites[k] >= iv.a) ++m;
        ++k;
      }
      if (m != iv.mass()) {
        ok = false;
        break;
      }
    }
    if (ok)
      for (long long s : must)
        if (!std::binary_search(sites.begin(), sites.end(), (int32_t)s)) {
          ok = false;
          break;
        }
    it = ok ? std::next(it) : cur.erase(it);
  }
}

// One backward step: from the level table at tau+1 (post-creation configs)
// to the table at tau.
inline CountTable step_back(const CountTable& next, const PolygonalDomain& d, long long tau,
                            const CountOptions& opt) {
  CountTable cur;
  Slice slice = d.slice_lattice(tau, SliceSide::lower);
  long long T = d.T_lattice();
  bool creation = (tau + 1 < T) && d.is_horizontal_time(tau + 1);
  std::vector<long long> created =
      creation ? d.creation_sites(tau + 1) : std::vector<long long>{};
  for (const auto& [ykey, val] : next) {
    std::vector<int32_t> y;
    if (creation) {
      y.reserve(ykey.size() - created.size());
      size_t j = 0;
      bool ok = true;
      for (int32_t s : ykey) {
        if (j < created.size() && (int32_t)created[j] == s) {
          ++j;
          continue;
        }
        y.push_back(s);
      }
      if (j != created.size()) ok = false;
      if (!ok) continue;
    }
    const std::vector<int32_t>& ypre = creation ? y : ykey;
    for_each_predecessor(ypre, slice, [&](const std::vector<int32_t>& x) { cur[x] += val; });
    if (cur.size() > opt.state_cap)
      throw Error(ErrorKind::capacity,
                  "state cap exceeded at level t=" + Rational(tau, d.n()).str() + " (" +
                      std::to_string(cur.size()) + " states)");
  }
  filter_level(cur, d, tau, slice);
  return cur;
}

}  // namespace detail

// All levels of the backward recursion, kept for the exact sampler.
struct CountTables {
  long long start = 0;
  std::vector<CountTable> levels;  // levels[tau - start]
  const CountTable& at(long long tau) const { return levels.at((size_t)(tau - start)); }
};

// Backward discrete heat recursion: N_{T-} = 1 on the packed terminal
// configuration; N_tau(x) sums N_{(tau+1)-}(x+e) over jump vectors, with
// creation applied at horizontal times. Retains every level down to `start`.
inline CountTables count_tables(const PolygonalDomain& d, long long start,
                                const CountOptions& opt = {}) {
  long long T = d.T_lattice();
  if (start < 0 || start >= T)
    throw Error(ErrorKind::invalid_argument, "start time outside [0,T)");
  CountTables tabs;
  tabs.start = start;
  tabs.levels.resize((size_t)(T - start + 1));
  ParticleConfig term = d.terminal_config();
  tabs.levels.back()[std::vector<int32_t>(term.sites.begin(), term.sites.end())] = 1;
  for (long long tau = T - 1; tau >= start; --tau)
    tabs.levels[(size_t)(tau - start)] =
        detail::step_back(tabs.levels[(size_t)(tau + 1 - start)], d, tau, opt);
  return tabs;
}

// N_t(c) keeping two levels only.
inline TilingCount count_dp(const PolygonalDomain& d, const ParticleConfig& c,
                            const CountOptions& opt = {}) {
  auto viol = d.validate();
  if (!viol.empty())
    throw Error(ErrorKind::validation, "invalid domain: " + viol.front().rule);
  TilingCount out;
  out.domain_hash = d.hash();
  out.start = c;
  if (!d.config_valid(c)) {
    out.value = 0;
    return out;
  }
  long long T = d.T_lattice();
  ParticleConfig term = d.terminal_config();
  CountTable next;
  next[std::vector<int32_t>(term.sites.begin(), term.sites.end())] = 1;
  for (long long tau = T - 1; tau >= c.t; --tau) next = detail::step_back(next, d, tau, opt);
  std::vector<int32_t> key(c.sites.begin(), c.sites.end());
  auto it = next.find(key);
  out.value = it == next.end() ? BigInt(0) : it->second;
  return out;
}

// Initial configuration of the walk: creation applied to the empty
// configuration at t=0 (the packed bottom edges).
inline ParticleConfig initial_config(const PolygonalDomain& d) {
  ParticleConfig empty;
  empty.t = 0;
  empty.n = d.n();
  return d.apply_creation(empty, 0);
}

// Exact m x m determinant via fraction-free Bareiss elimination.
inline BigInt integer_determinant(std::vector<std::vector<BigInt>> a) {
  size_t m = a.size();
  if (m == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (size_t k = 0; k + 1 < m; ++k) {
    if (a[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < m && a[piv][k] == 0) ++piv;
      if (piv == m) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < m; ++i)
      for (size_t j = k + 1; j < m; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[m - 1][m - 1];
}

inline BigInt binomial(long long s, long long k) {
  if (k < 0 || k > s) return 0;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (s - k + i);
    r /= i;
  }
  return r;
}

// Lindstrom-Gessel-Viennot determinant for nonintersecting Bernoulli paths in
// a free strip: entry (i,j) is the single-path count from start_i to end_j.
inline TilingCount count_lgv(const ParticleConfig& start, const ParticleConfig& end,
                             long long steps) {
  if (start.sites.size() != end.sites.size())
    throw Error(ErrorKind::invalid_argument, "mismatched particle counts");
  if (start.n != end.n)
    throw Error(ErrorKind::invalid_argument, "mismatched grid parameters");
  size_t m = start.sites.size();
  std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      a[i][j] = binomial(steps, end.sites[j] - start.sites[i]);
  TilingCount out;
  out.start = start;
  out.value = integer_determinant(std::move(a));
  return out;
}

// MacMahon product for the a x b x c hexagon, evaluated exactly:
// prod_{i<=a} prod_{j<=b} prod_{k<=c} (i+j+k-1)/(i+j+k-2).
inline TilingCount count_hexagon_product(long long a, long long b, long long c) {
  if (a < 1 || b < 1 || c < 1)
    throw Error(ErrorKind::invalid_argument, "hexagon sides must be positive");
  BigInt num = 1, den = 1;
  for (long long i = 1; i <= a; ++i)
    for (long long j = 1; j <= b; ++j)
      for (long long k = 1; k <= c; ++k) {
        num *= (i + j + k - 1);
        den *= (i + j + k - 2);
      }
  TilingCount out;
  BigInt q = num / den;
  if (q * den != num)
    throw Error(ErrorKind::numeric, "hexagon product is not an integer");
  out.value = q;
  return out;
}

// (1/n^2) ln N_0 for the full domain.
inline double log_count_density(const PolygonalDomain& d, const CountOptions& opt = {}) {
  TilingCount c = count_dp(d, initial_config(d), opt);
  if (c.value == 0) throw Error(ErrorKind::infeasible, "domain has no tilings");
  double n = (double)d.n();
  return log_of(c.value) / (n * n);
}

}  // namespace lozenge
