#include <catch2/catch_amalgamated.hpp>

#include "lozenge/counting.hpp"
#include "lozenge/rng.hpp"
#include "oracles.hpp"

using namespace lozenge;

namespace {

// Strip whose walls never bind in its upper half: hexagon(m, s, s); paths
// from any mid-level configuration to the packed terminal are free.
PolygonalDomain free_strip(long long m, long long s) {
  return PolygonalDomain::hexagon(m, s, s, 1);
}

ParticleConfig random_mid_config(const PolygonalDomain& d, long long s, CounterRng& rng) {
  // slice at lattice time s is [0, m+s]; pick m strictly increasing sites
  Slice sl = d.slice_lattice(s, SliceSide::lower);
  long long a = sl.intervals[0].a, b = sl.intervals[0].b;
  long long m = sl.intervals[0].mass();
  std::vector<long long> sites;
  while ((long long)sites.size() < m) {
    long long x = a + (long long)rng.next_below((uint64_t)(b - a));
    if (!std::binary_search(sites.begin(), sites.end(), x)) {
      sites.insert(std::lower_bound(sites.begin(), sites.end(), x), x);
    }
  }
  return ParticleConfig{s, sites, d.n()};
}

}  // namespace

TEST_CASE("unit hexagon counts", "[counting]") {
  // frozen values from the exhaustive trajectory enumerator
  auto d111 = PolygonalDomain::hexagon(1, 1, 1, 1);
  CHECK(oracle::count_by_enumeration(d111, initial_config(d111)) == 2);
  CHECK(count_dp(d111, initial_config(d111)).value == 2);

  auto d112 = PolygonalDomain::hexagon(1, 1, 2, 1);
  CHECK(oracle::count_by_enumeration(d112, initial_config(d112)) == 3);
  CHECK(count_dp(d112, initial_config(d112)).value == 3);

  auto d122 = PolygonalDomain::hexagon(1, 2, 2, 1);
  CHECK(oracle::count_by_enumeration(d122, initial_config(d122)) == 6);
  CHECK(count_dp(d122, initial_config(d122)).value == 6);

  auto d222 = PolygonalDomain::hexagon(2, 2, 2, 1);
  CHECK(oracle::count_by_enumeration(d222, initial_config(d222)) == 20);
  CHECK(count_dp(d222, initial_config(d222)).value == 20);
}

TEST_CASE("hexagon product formula", "[counting]") {
  CHECK(count_hexagon_product(1, 1, 1).value == 2);
  CHECK(count_hexagon_product(1, 1, 2).value == 3);
  CHECK(count_hexagon_product(1, 2, 2).value == 6);
  CHECK(count_hexagon_product(2, 2, 2).value == 20);
  // MacMahon box formula grows fast; spot check against the DP
  auto d = PolygonalDomain::hexagon(3, 2, 2, 1);
  CHECK(count_dp(d, initial_config(d)).value == count_hexagon_product(3, 2, 2).value);
}

TEST_CASE("staircase count matches enumeration", "[counting]") {
  std::vector<Vertex> v = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)},
                           {Rational(2), Rational(1)}, {Rational(2), Rational(2)},
                           {Rational(4), Rational(2)}, {Rational(5), Rational(3)},
                           {Rational(5), Rational(5)}, {Rational(2), Rational(5)},
                           {Rational(0), Rational(3)}};
  auto d = PolygonalDomain::from_vertices(1, v);
  REQUIRE(d.validate().empty());
  auto byenum = oracle::count_by_enumeration(d, initial_config(d));
  auto bydp = count_dp(d, initial_config(d));
  CHECK(byenum > 0);
  CHECK(bydp.value == byenum);
}

TEST_CASE("frozen parallelogram has a unique tiling", "[counting]") {
  // hexagon with b=1: the a x 1 x c case still has choices; a true frozen
  // shape needs a zero-length bottom degenerate cycle, so use the trapezoid
  // with matching packed masses: a=2,b=1,c=1 sanity plus the hard-frozen
  // case below.
  // Hard-frozen: walks packed against the right diagonal wall the whole way:
  // hexagon(a, b, c) with a = 1, c = 1, b = 1 has two tilings, but the
  // trapezoid (zero-length top-left diagonal) forces uniqueness when the
  // slice width equals the particle count at every level.
  std::vector<Vertex> v = {{Rational(0), Rational(0)},
                           {Rational(2), Rational(0)},
                           {Rational(3), Rational(1)},
                           {Rational(3), Rational(1)},  // degenerate vertical
                           {Rational(1), Rational(1)},
                           {Rational(0), Rational(0)},  // diagonal down to origin
                           {Rational(0), Rational(0)}};  // degenerate vertical
  auto d = PolygonalDomain::from_vertices(1, v);
  INFO("violations: " << (d.validate().empty() ? "none" : d.validate().front().rule));
  REQUIRE(d.validate().empty());
  auto c = count_dp(d, initial_config(d));
  CHECK(c.value == 1);
}

TEST_CASE("lgv binomial basics", "[counting]") {
  ParticleConfig s0{0, {0}, 1}, e0{0, {2}, 1};
  CHECK(count_lgv(s0, e0, 5).value == 10);  // C(5,2)
  ParticleConfig e1{0, {7}, 1};
  CHECK(count_lgv(s0, e1, 5).value == 0);  // unreachable
  ParticleConfig s2{0, {0, 1}, 1}, e2{0, {1, 3}, 1};
  CHECK_THROWS_AS(count_lgv(s0, e2, 3), Error);
}

TEST_CASE("count_dp equals LGV on constraint-free strips", "[counting]") {
  CounterRng rng(11, 2);
  int instances = 0;
  while (instances < 60) {
    long long m = 1 + (long long)rng.next_below(4);
    long long s = 1 + (long long)rng.next_below(8);
    auto d = free_strip(m, s);
    auto start = random_mid_config(d, s, rng);
    auto end = d.terminal_config();
    auto lgv = count_lgv(start, ParticleConfig{end.t, end.sites, end.n}, s);
    auto dp = count_dp(d, start);
    CHECK(dp.value == lgv.value);
    ++instances;
  }
}

TEST_CASE("dp is invariant under hexagon symmetry", "[counting]") {
  for (auto [a, b, c] : std::vector<std::array<long long, 3>>{
           {1, 2, 3}, {2, 2, 3}, {3, 1, 2}}) {
    auto v1 = count_dp(PolygonalDomain::hexagon(a, b, c, 1),
                       initial_config(PolygonalDomain::hexagon(a, b, c, 1)))
                  .value;
    auto v2 = count_dp(PolygonalDomain::hexagon(b, c, a, 1),
                       initial_config(PolygonalDomain::hexagon(b, c, a, 1)))
                  .value;
    auto v3 = count_dp(PolygonalDomain::hexagon(c, a, b, 1),
                       initial_config(PolygonalDomain::hexagon(c, a, b, 1)))
                  .value;
    CHECK(v1 == v2);
    CHECK(v2 == v3);
    CHECK(v1 == count_hexagon_product(a, b, c).value);
  }
}

TEST_CASE("recursion self-consistency audit", "[counting]") {
  auto d = PolygonalDomain::hexagon(2, 2, 2, 1);
  auto tabs = count_tables(d, 0);
  long long T = d.T_lattice();
  for (long long tau = 0; tau < T; ++tau) {
    const CountTable& cur = tabs.at(tau);
    const CountTable& next = tabs.at(tau + 1);
    for (const auto& [key, val] : cur) {
      // N_tau(x) must equal the sum over successors
      BigInt sum = 0;
      size_t m = key.size();
      std::vector<long long> created =
          (tau + 1 < T && d.is_horizontal_time(tau + 1))
              ? d.creation_sites(tau + 1)
              : std::vector<long long>{};
      for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
        std::vector<int32_t> y(key);
        for (size_t i = 0; i < m; ++i)
          if (mask & (size_t(1) << i)) y[i] += 1;
        bool ok = true;
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
        auto it = next.find(y);
        if (it != next.end()) sum += it->second;
      }
      CHECK(sum == val);
    }
  }
}

TEST_CASE("state cap raises capacity error", "[counting]") {
  auto d = PolygonalDomain::hexagon(3, 3, 3, 1);
  CountOptions opt;
  opt.state_cap = 2;
  CHECK_THROWS_AS(count_dp(d, initial_config(d), opt), Error);
}

TEST_CASE("log count density", "[counting]") {
  auto d = PolygonalDomain::hexagon(2, 2, 2, 1);
  double v = log_count_density(d);
  CHECK(v == Catch::Approx(std::log(20.0) / 1.0).epsilon(1e-12));

  // density-1 frozen strip has exactly one tiling: log density 0
  std::vector<Vertex> v2 = {{Rational(0), Rational(0)},
                            {Rational(2), Rational(0)},
                            {Rational(3), Rational(1)},
                            {Rational(3), Rational(1)},
                            {Rational(1), Rational(1)},
                            {Rational(0), Rational(0)},
                            {Rational(0), Rational(0)}};
  auto frozen = PolygonalDomain::from_vertices(1, v2);
  CHECK(log_count_density(frozen) == 0.0);
}
