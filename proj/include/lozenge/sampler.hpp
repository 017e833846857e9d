#pragma once

#include <cstdint>
#include <vector>

#include "lozenge/counting.hpp"
#include "lozenge/domain.hpp"
#include "lozenge/error.hpp"
#include "lozenge/rng.hpp"

namespace lozenge {

// A full walk family: one configuration per lattice time 0..T, each
// post-creation and in M_t.
struct WalkTrajectory {
  uint64_t seed = 0;
  std::vector<ParticleConfig> configs;  // index = lattice time

  uint64_t hash() const {
    uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](long long v) {
      h ^= (uint64_t)v;
      h *= 1099511628211ULL;
    };
    for (const auto& c : configs) {
      mix(c.t);
      for (long long s : c.sites) mix(s);
    }
    return h;
  }
};

namespace detail {

// Uniform BigInt in [0, bound), unbiased, deterministic in the stream.
inline BigInt uniform_bigint(CounterRng& rng, const BigInt& bound) {
  if (bound <= 1) return 0;
  unsigned bits = boost::multiprecision::msb(bound) + 1;
  unsigned words = (bits + 63) / 64;
  for (;;) {
    BigInt v = 0;
    for (unsigned w = 0; w < words; ++w) v = (v << 64) | BigInt(rng.next_u64());
    v >>= (words * 64 - bits);
    if (v < bound) return v;
  }
}

}  // namespace detail

// Exact uniform sampler: forward walk through the counting tables, each step
// drawn with probability N_{(t+1/n)-}(x+e/n) / N_t(x). The enumeration order
// of successors is fixed, so a trajectory is a deterministic function of
// (domain, tables, seed, sample index).
class ExactSampler {
 public:
  ExactSampler(const PolygonalDomain& d, const CountOptions& opt = {})
      : d_(d), tables_(count_tables(d, 0, opt)) {
    auto viol = d.validate();
    if (!viol.empty())
      throw Error(ErrorKind::validation, "invalid domain: " + viol.front().rule);
    start_ = initial_config(d);
    std::vector<int32_t> key(start_.sites.begin(), start_.sites.end());
    auto it = tables_.at(0).find(key);
    if (it == tables_.at(0).end() || it->second == 0)
      throw Error(ErrorKind::infeasible, "domain has no tilings");
  }

  const PolygonalDomain& domain() const { return d_; }
  const CountTables& tables() const { return tables_; }
  const BigInt& total_count() const {
    std::vector<int32_t> key(start_.sites.begin(), start_.sites.end());
    return tables_.at(0).at(key);
  }

  WalkTrajectory sample(uint64_t seed, uint64_t index) const {
    WalkTrajectory traj;
    traj.seed = seed;
    long long T = d_.T_lattice();
    ParticleConfig cur = start_;
    traj.configs.push_back(cur);
    for (long long tau = 0; tau < T; ++tau) {
      CounterRng rng(seed, 0x5a5a, index, (uint64_t)tau);
      std::vector<int32_t> key(cur.sites.begin(), cur.sites.end());
      const BigInt& denom = tables_.at(tau).at(key);
      BigInt draw = detail::uniform_bigint(rng, denom);

      // successors in lexicographic jump-vector order
      size_t m = cur.sites.size();
      bool creation = (tau + 1 < T) && d_.is_horizontal_time(tau + 1);
      std::vector<long long> created =
          creation ? d_.creation_sites(tau + 1) : std::vector<long long>{};
      BigInt acc = 0;
      bool done = false;
      ParticleConfig next;
      for (size_t mask = 0; mask < (size_t(1) << m) && !done; ++mask) {
        std::vector<int32_t> y(key);
        bool ok = true;
        for (size_t i = 0; i < m; ++i)
          if (mask & (size_t(1) << i)) y[i] += 1;
        for (size_t i = 0; i + 1 < m; ++i)
          if (y[i] >= y[i + 1]) ok = false;
        if (!ok) continue;
        for (long long cs : created) {
          auto it = std::lower_bound(y.begin(), y.end(), (int32_t)cs);
          if (it != y.end() && *it == (int32_t)cs) {
            ok = false;
            break;
          }
          y.insert(it, (int32_t)cs);
        }
        if (!ok) continue;
        auto it = tables_.at(tau + 1).find(y);
        if (it == tables_.at(tau + 1).end()) continue;
        acc += it->second;
        if (draw < acc) {
          next.t = tau + 1;
          next.n = d_.n();
          next.sites.assign(y.begin(), y.end());
          done = true;
        }
      }
      if (!done) throw Error(ErrorKind::numeric, "recursion identity violated in sampler");
      cur = next;
      traj.configs.push_back(cur);
    }
    return traj;
  }

  // Audit: the successor weights of `c` sum exactly to N_t(c).
  bool step_weights_sum_exactly(const ParticleConfig& cur) const {
    long long tau = cur.t;
    long long T = d_.T_lattice();
    std::vector<int32_t> key(cur.sites.begin(), cur.sites.end());
    const BigInt& denom = tables_.at(tau).at(key);
    size_t m = cur.sites.size();
    bool creation = (tau + 1 < T) && d_.is_horizontal_time(tau + 1);
    std::vector<long long> created =
        creation ? d_.creation_sites(tau + 1) : std::vector<long long>{};
    BigInt acc = 0;
    for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
      std::vector<int32_t> y(key);
      bool ok = true;
      for (size_t i = 0; i < m; ++i)
        if (mask & (size_t(1) << i)) y[i] += 1;
      for (size_t i = 0; i + 1 < m; ++i)
        if (y[i] >= y[i + 1]) ok = false;
      if (!ok) continue;
      for (long long cs : created) {
        auto it = std::lower_bound(y.begin(), y.end(), (int32_t)cs);
        if (it != y.end() && *it == (int32_t)cs) {
          ok = false;
          break;
        }
        y.insert(it, (int32_t)cs);
      }
      if (!ok) continue;
      auto it = tables_.at(tau + 1).find(y);
      if (it != tables_.at(tau + 1).end()) acc += it->second;
    }
    return acc == denom;
  }

 private:
  PolygonalDomain d_;
  CountTables tables_;
  ParticleConfig start_;
};

}  // namespace lozenge
