#pragma once

#include <cstdint>
#include <vector>

#include "lozenge/domain.hpp"
#include "lozenge/error.hpp"
#include "lozenge/rng.hpp"
#include "lozenge/sampler.hpp"

namespace lozenge {

// Static walk-line structure of a domain: per level, the slice intervals,
// which indices are pinned (created at that level), and the index maps
// between consecutive levels. All of this is configuration-independent
// because interval membership of every walk is fixed by the boundary data.
class WalkLattice {
 public:
  explicit WalkLattice(const PolygonalDomain& d) : d_(&d), T_(d.T_lattice()) {
    build_canonical();
    build_static_maps();
  }

  const PolygonalDomain& domain() const { return *d_; }
  long long T() const { return T_; }
  // canonical initial state: the position-maximal tiling (walks hug the
  // right boundary), which exists whenever the domain is tileable
  const std::vector<std::vector<int32_t>>& minimum() const { return min_pos_; }
  int walks_at(long long tau) const { return (int)min_pos_[(size_t)tau].size(); }
  bool pinned(long long tau, int i) const { return pinned_[(size_t)tau][(size_t)i] != 0; }
  int up(long long tau, int i) const { return up_[(size_t)tau][(size_t)i]; }
  int down(long long tau, int i) const { return down_[(size_t)tau][(size_t)i]; }
  long long site_lo(long long tau, int i) const { return lo_[(size_t)tau][(size_t)i]; }
  long long site_hi(long long tau, int i) const { return hi_[(size_t)tau][(size_t)i]; }
  const Slice& slice(long long tau) const { return slices_[(size_t)tau]; }

 private:
  void build_canonical() {
    slices_.resize((size_t)T_ + 1);
    for (long long tau = 0; tau <= T_; ++tau)
      slices_[(size_t)tau] =
          d_->slice_lattice(tau, tau == T_ ? SliceSide::upper : SliceSide::lower);

    min_pos_.assign((size_t)T_ + 1, {});
    auto start = initial_config(*d_);
    min_pos_[0].assign(start.sites.begin(), start.sites.end());
    for (long long tau = 0; tau < T_; ++tau) {
      const auto& cur = min_pos_[(size_t)tau];
      // survivors step right-to-left, each as high as possible inside the
      // pre-creation support at tau+1
      Slice support = (tau + 1 == T_ || d_->is_horizontal_time(tau + 1))
                          ? d_->slice_lattice(tau + 1, SliceSide::upper)
                          : slices_[(size_t)(tau + 1)];
      std::vector<int32_t> nxt(cur.size());
      long long cap = INT64_MAX;
      for (size_t ri = cur.size(); ri-- > 0;) {
        long long c = std::min<long long>((long long)cur[ri] + 1, cap - 1);
        for (;;) {
          if (c < (long long)cur[ri])
            throw Error(ErrorKind::infeasible, "no feasible initial tiling");
          if (support.contains_site(c)) break;
          --c;
        }
        nxt[ri] = (int32_t)c;
        cap = c;
      }
      // insert walks born at tau+1 at their creation sites
      if (tau + 1 < T_ && d_->is_horizontal_time(tau + 1)) {
        for (long long b : d_->creation_sites(tau + 1)) {
          auto it = std::lower_bound(nxt.begin(), nxt.end(), (int32_t)b);
          if (it != nxt.end() && *it == (int32_t)b)
            throw Error(ErrorKind::infeasible, "no feasible initial tiling (creation collision)");
          nxt.insert(it, (int32_t)b);
        }
      }
      min_pos_[(size_t)(tau + 1)] = std::move(nxt);
    }
    // the terminal slice is exactly packed, so validity at T forces the
    // terminal configuration; check every level for good measure
    auto term = d_->terminal_config();
    bool terminal_ok = min_pos_[(size_t)T_].size() == term.sites.size();
    for (size_t i = 0; terminal_ok && i < term.sites.size(); ++i)
      terminal_ok = (long long)min_pos_[(size_t)T_][i] == term.sites[i];
    if (!terminal_ok)
      throw Error(ErrorKind::infeasible, "no feasible initial tiling (terminal mismatch)");
    for (long long tau = 0; tau < T_; ++tau) {
      ParticleConfig c{tau, {min_pos_[(size_t)tau].begin(), min_pos_[(size_t)tau].end()},
                       d_->n()};
      if (!d_->config_valid(c))
        throw Error(ErrorKind::infeasible, "canonical tiling failed validation");
    }
  }

  void build_static_maps() {
    size_t L = (size_t)T_ + 1;
    pinned_.assign(L, {});
    up_.assign(L, {});
    down_.assign(L, {});
    lo_.assign(L, {});
    hi_.assign(L, {});
    for (long long tau = 0; tau <= T_; ++tau) {
      const auto& pos = min_pos_[(size_t)tau];
      size_t m = pos.size();
      pinned_[(size_t)tau].assign(m, 0);
      up_[(size_t)tau].assign(m, -1);
      down_[(size_t)tau].assign(m, -1);
      lo_[(size_t)tau].assign(m, 0);
      hi_[(size_t)tau].assign(m, 0);

      // interval bounds by static interval membership
      const Slice& sl = slices_[(size_t)tau];
      {
        size_t k = 0;
        long long used = 0;
        for (size_t i = 0; i < m; ++i) {
          while (k < sl.intervals.size() && used == (long long)(size_t)sl.intervals[k].mass()) {
            ++k;
            used = 0;
          }
          if (k >= sl.intervals.size())
            throw Error(ErrorKind::numeric, "interval bookkeeping out of sync");
          lo_[(size_t)tau][i] = sl.intervals[k].a;
          hi_[(size_t)tau][i] = sl.intervals[k].b - 1;
          ++used;
        }
      }

      // pinned flags: walks born here (and everything at levels 0 and T)
      if (tau == 0 || tau == T_) {
        for (size_t i = 0; i < m; ++i) pinned_[(size_t)tau][i] = 1;
      } else if (d_->is_horizontal_time(tau)) {
        auto born = d_->creation_sites(tau);
        // born walks occupy exactly their creation sites at their birth level
        for (long long b : born) {
          auto it = std::lower_bound(pos.begin(), pos.end(), (int32_t)b);
          if (it == pos.end() || *it != (int32_t)b)
            throw Error(ErrorKind::numeric, "creation site not occupied in minimum tiling");
          pinned_[(size_t)tau][(size_t)(it - pos.begin())] = 1;
        }
      }
    }
    // index maps between levels: walks never cross, so ranks among survivors
    // are preserved; creation inserts fixed ranks.
    for (long long tau = 0; tau < T_; ++tau) {
      const auto& cur = min_pos_[(size_t)tau];
      const auto& nxt = min_pos_[(size_t)(tau + 1)];
      std::vector<int> surv;  // indices at tau+1 that are not newly created
      for (size_t i = 0; i < nxt.size(); ++i)
        if (!(tau + 1 < T_ && d_->is_horizontal_time(tau + 1) &&
              pinned_[(size_t)(tau + 1)][i]))
          surv.push_back((int)i);
      if (surv.size() != cur.size())
        throw Error(ErrorKind::numeric, "walk bookkeeping out of sync");
      for (size_t i = 0; i < cur.size(); ++i) {
        up_[(size_t)tau][i] = surv[i];
        down_[(size_t)(tau + 1)][(size_t)surv[i]] = (int)i;
      }
    }
  }

  const PolygonalDomain* d_;
  long long T_;
  std::vector<Slice> slices_;
  std::vector<std::vector<int32_t>> min_pos_;
  std::vector<std::vector<uint8_t>> pinned_;
  std::vector<std::vector<int>> up_, down_;
  std::vector<std::vector<long long>> lo_, hi_;
};

// Single-cube flip chain on walk trajectories. A sweep scans sites in fixed
// raster order; at each flippable site the level value is resampled
// uniformly from its two admissible positions (lazy acceptance for the
// uniform target).
class FlipChain {
 public:
  FlipChain(const WalkLattice& lat, uint64_t seed, uint64_t chain_id = 0)
      : lat_(&lat), seed_(seed), chain_(chain_id), pos_(lat.minimum()) {}

  const std::vector<std::vector<int32_t>>& state() const { return pos_; }

  struct SweepStats {
    long long flippable = 0;
    long long changed = 0;
  };

  // Number of currently flippable sites (no state change).
  long long count_flippable() const {
    long long c = 0;
    for (long long tau = 1; tau < lat_->T(); ++tau)
      for (int i = 0; i < lat_->walks_at(tau); ++i)
        if (flippable(tau, i).first) ++c;
    return c;
  }

  SweepStats sweep() {
    SweepStats st;
    CounterRng rng(seed_, 0x6d63, chain_, sweep_counter_++);
    for (long long tau = 1; tau < lat_->T(); ++tau) {
      auto& row = pos_[(size_t)tau];
      for (int i = 0; i < (int)row.size(); ++i) {
        auto [ok, other] = flippable(tau, i);
        if (!ok) continue;
        ++st.flippable;
        int32_t lowv = std::min<int32_t>(row[(size_t)i], other);
        int32_t highv = std::max<int32_t>(row[(size_t)i], other);
        int32_t pick = rng.next_bit() ? highv : lowv;
        if (pick != row[(size_t)i]) {
          row[(size_t)i] = pick;
          ++st.changed;
        }
      }
    }
    return st;
  }

  void run(long long sweeps) {
    for (long long s = 0; s < sweeps; ++s) sweep();
  }

  // Height H(x, tau) = n beta^P(a_k) + #particles in [a_k, x) for the
  // interval containing x; integer, lattice units.
  long long height(long long x, long long tau) const {
    const Slice& sl = lat_->slice(tau);
    const auto& row = pos_[(size_t)tau];
    for (const auto& iv : sl.intervals) {
      if (x < iv.a || x > iv.b) continue;
      long long cnt = 0;
      for (int32_t p : row)
        if (p >= iv.a && p < x) ++cnt;
      return iv.beta_a + cnt;
    }
    throw Error(ErrorKind::invalid_argument, "height query outside the slice");
  }

  ParticleConfig config_at(long long tau) const {
    return ParticleConfig{tau, {pos_[(size_t)tau].begin(), pos_[(size_t)tau].end()},
                          lat_->domain().n()};
  }

  WalkTrajectory trajectory() const {
    WalkTrajectory tr;
    tr.seed = seed_;
    for (long long tau = 0; tau <= lat_->T(); ++tau) tr.configs.push_back(config_at(tau));
    return tr;
  }

 private:
  std::pair<bool, int32_t> flippable(long long tau, int i) const {
    if (lat_->pinned(tau, i)) return {false, 0};
    int j = lat_->down(tau, i);
    int k = lat_->up(tau, i);
    if (j < 0 || k < 0) return {false, 0};
    int32_t prev = pos_[(size_t)(tau - 1)][(size_t)j];
    int32_t next = pos_[(size_t)(tau + 1)][(size_t)k];
    if (next != prev + 1) return {false, 0};
    const auto& row = pos_[(size_t)tau];
    int32_t cur = row[(size_t)i];
    int32_t cand = (int32_t)(prev + (prev + 1) - cur);
    if (cand < lat_->site_lo(tau, i) || cand > lat_->site_hi(tau, i)) return {false, 0};
    if (i > 0 && row[(size_t)(i - 1)] >= cand) return {false, 0};
    if (i + 1 < (int)row.size() && row[(size_t)(i + 1)] <= cand) return {false, 0};
    return {true, cand};
  }

  const WalkLattice* lat_;
  uint64_t seed_;
  uint64_t chain_;
  uint64_t sweep_counter_ = 0;
  std::vector<std::vector<int32_t>> pos_;
};

// Approximate sampler for sizes beyond exact counting: `sweeps` full sweeps
// from the minimal tiling.
inline WalkTrajectory mcmc_sample(const PolygonalDomain& d, long long sweeps, uint64_t seed) {
  WalkLattice lat(d);
  FlipChain chain(lat, seed);
  chain.run(sweeps);
  return chain.trajectory();
}

}  // namespace lozenge
